"""Seeded, replica-parallel Monte-Carlo experiments.

A grid is a list of :class:`Cell` objects (one :class:`ModelSpec` plus the
methods to run on it). Every replica draws one data matrix that all methods
of the cell share. Results are keyed by ``(cell, replica)`` and aggregated in
that order, so reports do not depend on worker count or scheduling.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ..errors import InvalidArgumentError
from ..methods import MethodConfig, run_method
from ..pvd import PvdResult
from .metrics import eu_metric, re_metric, screening_metrics
from .models import ModelSpec, build_sigma, sample

__all__ = [
    "Cell",
    "ExperimentReport",
    "run_experiment",
    "run_replica",
    "reports_to_csv",
    "reports_to_json",
    "TIMING_METRICS",
]

TIMING_METRICS = ("time_mean",)


@dataclass(frozen=True)
class Cell:
    spec: ModelSpec
    methods: tuple[MethodConfig, ...]
    label: str = ""

    def __post_init__(self):
        if not self.methods:
            raise InvalidArgumentError("a cell needs at least one method")
        names = [m.name for m in self.methods]
        if len(set(names)) != len(names):
            raise InvalidArgumentError(f"duplicate methods in cell: {names}")


@dataclass
class ExperimentReport:
    """Aggregated results of one method on one cell.

    ``raw`` holds per-replica values (``None`` for failed replicas);
    ``metrics`` the summaries computed over successful replicas.
    """

    label: str
    spec: ModelSpec
    method: str
    replicas: int
    metrics: dict[str, float]
    raw: dict[str, list[Any]]
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.failures)


def run_replica(cell: Cell, replica: int) -> dict[str, dict[str, Any]]:
    """Run every method of ``cell`` on replica ``replica``."""
    spec = cell.spec
    model = build_sigma(spec)
    x = sample(spec, replica, model)
    out = {}
    for cfg in cell.methods:
        start = time.perf_counter()
        try:
            res = run_method(x, cfg)
        except Exception as exc:  # recorded per replica, the cell is marked partial
            out[cfg.name] = {"error": f"{type(exc).__name__}: {exc}"}
            continue
        seconds = time.perf_counter() - start
        if isinstance(res, PvdResult):
            out[cfg.name] = {"j_hat": res.j_hat.tolist(), "s0_hat": res.s0_hat, "seconds": seconds}
            continue
        entry = {
            "RE": re_metric(res.sigma, model.sigma),
            "EU": eu_metric(res.sparse, model.sigma_u) if model.sigma_u is not None else math.nan,
            "k_hat": res.k_hat,
            "seconds": seconds,
        }
        if res.j_hat is not None:
            entry["j_hat"] = res.j_hat.tolist()
            entry["s0_hat"] = int(res.j_hat.size)
        out[cfg.name] = entry
    return out


def _task(args):
    cell, replica = args
    return run_replica(cell, replica)


def _mean_sd(values: list[float]) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return math.nan, math.nan
    return float(a.mean()), float(a.std())


def _aggregate(label: str, cell: Cell, cfg: MethodConfig, results: list[dict]) -> ExperimentReport:
    name = cfg.name
    keys = ("j_hat", "s0_hat", "RE", "EU", "k_hat", "seconds")
    raw: dict[str, list[Any]] = {k: [] for k in keys}
    failures = []
    for replica, res in enumerate(results):
        entry = res[name]
        if "error" in entry:
            failures.append((replica, entry["error"]))
        for k in keys:
            raw[k].append(entry.get(k))
    raw = {k: v for k, v in raw.items() if any(x is not None for x in v)}
    ok = [i for i in range(len(results)) if "error" not in results[i][name]]
    metrics: dict[str, float] = {}
    if "j_hat" in raw and ok:
        summary = screening_metrics([raw["j_hat"][i] for i in ok], cell.spec.true_j, cell.spec.p)
        metrics.update(summary.as_dict())
    for key in ("RE", "EU"):
        if key in raw:
            m, s = _mean_sd([raw[key][i] for i in ok])
            metrics[f"{key}_mean"], metrics[f"{key}_sd"] = m, s
    if "seconds" in raw:
        metrics["time_mean"] = _mean_sd([raw["seconds"][i] for i in ok])[0]
    return ExperimentReport(
        label=label, spec=cell.spec, method=name, replicas=len(results),
        metrics=metrics, raw=raw, failures=failures,
    )


def default_workers() -> int:
    """Worker count from ``PVDCOV_WORKERS`` (default 1)."""
    value = os.environ.get("PVDCOV_WORKERS", "1")
    try:
        workers = int(value)
    except ValueError:
        raise InvalidArgumentError(f"PVDCOV_WORKERS must be an integer, got {value!r}") from None
    return max(1, workers)


def run_experiment(
    grid: Sequence[Cell],
    replicas: int,
    workers: int | None = None,
    shuffle_seed: int | None = None,
) -> list[ExperimentReport]:
    """Run ``replicas`` Monte-Carlo replicas of every cell.

    Parameters
    ----------
    grid : sequence of Cell
    replicas : int
        Number of replicas ``T`` per cell.
    workers : int, optional
        Process count; defaults to :func:`default_workers`.
    shuffle_seed : int, optional
        Randomize task submission order (results are identical either way).

    Returns
    -------
    list of ExperimentReport
        One per (cell, method), in grid order.
    """
    if replicas < 1:
        raise InvalidArgumentError(f"replicas must be >= 1, got {replicas}")
    workers = default_workers() if workers is None else max(1, int(workers))
    tasks = [(c, r) for c in range(len(grid)) for r in range(replicas)]
    if shuffle_seed is not None:
        perm = np.random.default_rng(shuffle_seed).permutation(len(tasks))
        tasks = [tasks[i] for i in perm]
    payload = [(grid[c], r) for c, r in tasks]
    if workers == 1:
        outputs = [_task(t) for t in payload]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_task, payload, chunksize=max(1, len(payload) // (4 * workers))))
    by_key = {key: out for key, out in zip(tasks, outputs)}

    reports = []
    for c, cell in enumerate(grid):
        results = [by_key[(c, r)] for r in range(replicas)]
        label = cell.label or f"cell{c}"
        for cfg in cell.methods:
            reports.append(_aggregate(label, cell, cfg, results))
    return reports


_CELL_FIELDS = ("label", "family", "p", "p1", "n", "strength", "seed")


def _cell_values(rep: ExperimentReport) -> list[Any]:
    s = rep.spec
    return [rep.label, s.family, s.p, s.p1, s.n, s.strength, s.seed]


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def reports_to_csv(reports: Sequence[ExperimentReport], include_timing: bool = False) -> str:
    """Long format: one row per (cell, method, metric)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*_CELL_FIELDS, "method", "replicas", "partial", "metric", "value"])
    for rep in reports:
        for metric, value in rep.metrics.items():
            if metric in TIMING_METRICS and not include_timing:
                continue
            w.writerow([*map(_fmt, _cell_values(rep)), rep.method, rep.replicas, rep.partial, metric, _fmt(value)])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def reports_to_json(reports: Sequence[ExperimentReport], include_timing: bool = False) -> str:
    """Full report including per-replica raw values."""
    items = []
    for rep in reports:
        raw = {k: v for k, v in rep.raw.items() if include_timing or k != "seconds"}
        metrics = {k: _json_safe(v) for k, v in rep.metrics.items() if include_timing or k not in TIMING_METRICS}
        items.append(
            {
                "label": rep.label,
                "spec": rep.spec.to_dict(),
                "method": rep.method,
                "replicas": rep.replicas,
                "partial": rep.partial,
                "metrics": metrics,
                "raw": {k: [_json_safe(x) for x in v] for k, v in raw.items()},
                "failures": [list(f) for f in rep.failures],
            }
        )
    return json.dumps(items, indent=1, sort_keys=True)
