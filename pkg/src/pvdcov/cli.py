"""Command-line entry point ``pvdcov``.

Exit codes
----------
0  success
1  unexpected internal error
2  usage or configuration error
3  input data error (unreadable, malformed or degenerate data)
4  solver or screening failure (for example a pivotal set too small to fit)
5  acceptance criteria failed (``selftest``)
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, acceptance
from .config import describe, load_config, resolve
from .dataio import read_data_csv, write_matrix_csv, write_rows_csv
from .errors import (
    ConfigError,
    DegenerateScreeningError,
    GeneratorError,
    InvalidArgumentError,
    InvalidInputError,
)
from .methods import METHODS, MethodConfig, run_method
from .pvd import PvdConfig, PvdResult, detect
from .simlab import Cell, ModelSpec, reports_to_json, run_experiment, sample
from .simlab.models import replica_rng

logger = logging.getLogger("pvdcov")

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_INPUT, EXIT_SOLVER, EXIT_ACCEPTANCE = 0, 1, 2, 3, 4, 5


def _methodcfg(name: str, v: dict) -> MethodConfig:
    fields = ("c", "c_universal", "k", "lam", "rho", "ridge", "max_iter", "tol", "theta_variant", "rule")
    return MethodConfig(name, **{f: v[f] for f in fields if f in v})


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _settings(args, command: str, **overrides) -> dict:
    raw = load_config(args.config) if args.config else None
    return resolve(command, raw, full=getattr(args, "full", False), seed=getattr(args, "seed", None), **overrides)


def _model_label(family: str) -> str:
    return {"model1": "1", "model2": "2"}.get(family, family)


def cmd_table1(args) -> int:
    v = _settings(args, "table1", replicas=args.replicas)
    pvd = MethodConfig("pvd", ridge=v["ridge"])
    grid = [
        Cell(ModelSpec(fam, v["p"], p1, v["n"], rho=rho, seed=v["seed"], loading_sd=v["loading_sd"]), (pvd,), f"{fam}:{p1}:{rho}")
        for fam in v["models"]
        for p1 in v["p1_values"]
        for rho in v["rho_values"]
    ]
    reports = run_experiment(grid, v["replicas"], args.workers)
    out = _outdir(args)
    rows, timing = [], []
    for rep in reports:
        key = [_model_label(rep.spec.family), rep.spec.p1, rep.spec.rho]
        m = rep.metrics
        rows.append(key + [m["Mean"], m["SD"], m["FP"], m["FN"], m["EQ"]])
        timing.append(key + [m["time_mean"]])
    write_rows_csv(out / "table1.csv", ["model", "p1", "rho", "Mean", "SD", "FP", "FN", "EQ"], rows)
    write_rows_csv(out / "table1_timing.csv", ["model", "p1", "rho", "time_mean"], timing)
    _write_text(out / "table1.json", reports_to_json(reports) + "\n")
    logger.info("wrote %d rows to %s", len(rows), out / "table1.csv")
    return EXIT_OK


def cmd_table2(args) -> int:
    v = _settings(args, "table2", replicas=args.replicas)
    methods = (_methodcfg("lorec", v), _methodcfg("pvd-lorec", v))
    grid = [
        Cell(ModelSpec("factor62", p, p1, v["n"], r=r, seed=v["seed"], band_literal=v["band_literal"]), methods, f"{p}:{p1}:{r}")
        for p, p1 in v["cells"]
        for r in v["r_values"]
    ]
    reports = run_experiment(grid, v["replicas"], args.workers)
    out = _outdir(args)
    rows, timing = [], []
    for rep in reports:
        key = [rep.spec.p, rep.spec.p1, rep.spec.r, rep.method]
        m = rep.metrics
        rows.append(key + [m.get("EU_mean", math.nan), m.get("RE_mean", math.nan), len(rep.failures)])
        timing.append(key + [m.get("time_mean", math.nan)])
    write_rows_csv(out / "table2.csv", ["p", "p1", "r", "method", "EU", "RE", "failures"], rows)
    write_rows_csv(out / "table2_timing.csv", ["p", "p1", "r", "method", "TM"], timing)
    _write_text(out / "table2.json", reports_to_json(reports) + "\n")
    return EXIT_OK


def cmd_figure1(args) -> int:
    v = _settings(args, "figure1", replicas=args.replicas)
    methods = (_methodcfg("poet", v), _methodcfg("pvd-poet", v))
    grid = [
        Cell(ModelSpec("factor62", p, v["p1"], v["n"], r=r, seed=v["seed"], band_literal=v["band_literal"]), methods, f"{p}:{r}")
        for r in v["r_values"]
        for p in v["p_values"]
    ]
    reports = run_experiment(grid, v["replicas"], args.workers)
    out = _outdir(args)
    rows, timing = [], []
    for rep in reports:
        m = rep.metrics
        rows.append([rep.spec.p, rep.method, rep.spec.r, m.get("RE_mean", math.nan), m.get("EU_mean", math.nan)])
        timing.append([rep.spec.p, rep.method, rep.spec.r, m.get("time_mean", math.nan)])
    write_rows_csv(out / "figure1.csv", ["p", "method", "r", "RE_mean", "EU_mean"], rows)
    write_rows_csv(out / "figure1_timing.csv", ["p", "method", "r", "time_mean"], timing)
    _write_text(out / "figure1.json", reports_to_json(reports) + "\n")
    return EXIT_OK


def _json_default(o):
    if isinstance(o, (np.integer, np.floating, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _dump_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=1, sort_keys=True, default=_json_default) + "\n")


def _names(names, p):
    return list(names) if names is not None else [f"x{i}" for i in range(p)]


def _write_j_hat(path: Path, j_hat, names) -> None:
    write_rows_csv(path, ["index", "name"], [[int(i), names[int(i)]] for i in j_hat])


def cmd_estimate(args) -> int:
    v = _settings(args, "estimate", method=args.method)
    if v["method"] not in METHODS:
        raise ConfigError(f"unknown method {v['method']!r}; choose from {METHODS}")
    x, names = read_data_csv(args.data, header=v["header"])
    names = _names(names, x.shape[1])
    res = run_method(x, _methodcfg(v["method"], v))
    out = _outdir(args)
    if isinstance(res, PvdResult):
        _write_j_hat(out / "j_hat.csv", res.j_hat, names)
        _dump_json(out / "summary.json", {
            "method": "pvd", "n": x.shape[0], "p": x.shape[1], "s0_hat": res.s0_hat,
            "ridge": res.ridge, "j_hat": res.j_hat.tolist(),
        })
        return EXIT_OK
    write_matrix_csv(out / "sigma.csv", res.sigma, names)
    write_matrix_csv(out / "sigma_u.csv", res.sparse, names)
    if res.j_hat is not None:
        _write_j_hat(out / "j_hat.csv", res.j_hat, names)
    diag = {k: val for k, val in res.diagnostics.items() if k != "seconds"}
    _dump_json(out / "summary.json", {
        "method": res.method, "n": x.shape[0], "p": x.shape[1], "k_hat": res.k_hat,
        "s0_hat": None if res.j_hat is None else int(res.j_hat.size),
        "j_hat": None if res.j_hat is None else res.j_hat.tolist(),
        "diagnostics": diag,
    })
    _dump_json(out / "timing.json", {"seconds": res.diagnostics.get("seconds")})
    return EXIT_OK


def sd_filter(x: np.ndarray, sd_min=None, sd_max=None, top_m: int = 0) -> np.ndarray:
    """Column indices kept by the SD interval, then the ``top_m`` largest SDs, ascending."""
    sd = x.std(axis=0, ddof=1)
    keep = np.ones(x.shape[1], dtype=bool)
    if sd_min is not None:
        keep &= sd >= sd_min
    if sd_max is not None:
        keep &= sd <= sd_max
    idx = np.flatnonzero(keep)
    if top_m and idx.size > top_m:
        idx = idx[np.argsort(-sd[idx], kind="stable")[:top_m]]
    return np.sort(idx)


def cmd_stability(args) -> int:
    v = _settings(args, "stability", subsample_n=args.subsample_n, replicas=args.replicas)
    x, names = read_data_csv(args.data, header=v["header"])
    names = _names(names, x.shape[1])
    n = x.shape[0]
    if v["subsample_n"] > n:
        raise InvalidInputError(f"subsample_n={v['subsample_n']} exceeds the {n} rows of the data")
    if v["replicas"] < 1:
        raise ConfigError("replicas must be >= 1")
    kept = sd_filter(x, v["sd_min"], v["sd_max"], v["top_m"])
    if kept.size < 2:
        raise InvalidInputError(f"SD filter keeps {kept.size} variable(s); need at least 2")
    xk = x[:, kept]
    cfg = PvdConfig(ridge=v["ridge"])
    sizes, sets = [], []
    freq = np.zeros(kept.size, dtype=int)
    for t in range(v["replicas"]):
        rows = np.sort(replica_rng(v["seed"], t).choice(n, size=v["subsample_n"], replace=False))
        res = detect(xk[rows], cfg)
        freq[res.j_hat] += 1
        j = kept[res.j_hat]
        sizes.append(int(j.size))
        sets.append(j.tolist())
    out = _outdir(args)
    write_rows_csv(out / "stability_replicas.csv", ["replica", "s0_hat"], list(enumerate(sizes)))
    write_rows_csv(
        out / "stability_frequency.csv", ["index", "name", "frequency"],
        [[int(i), names[int(i)], int(f)] for i, f in zip(kept, freq)],
    )
    a = np.asarray(sizes, dtype=float)
    _dump_json(out / "stability_summary.json", {
        "replicas": v["replicas"], "subsample_n": v["subsample_n"], "seed": v["seed"],
        "kept_variables": kept.tolist(), "mean": float(a.mean()), "sd": float(a.std()),
        "j_hat": sets,
    })
    logger.info("|J_hat| mean %.3f, sd %.3f over %d subsamples", a.mean(), a.std(), len(sizes))
    return EXIT_OK


def cmd_selftest(args) -> int:
    v = _settings(args, "selftest", scale=args.scale, criteria=args.criteria)
    results = acceptance.run_criteria(v["criteria"], scale=v["scale"], seed=v["seed"], workers=args.workers)
    out = _outdir(args)
    _write_text(out / "selftest_report.json", acceptance.report_json(results, v["scale"], v["seed"]))
    _write_text(out / "selftest_timing.json", acceptance.timing_json(results))
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_ACCEPTANCE


def cmd_generate(args) -> int:
    v = _settings(args, "generate", family=args.family, p=args.p, p1=args.p1, n=args.n,
                  strength=args.strength, replica=args.replica)
    strength = {"r": v["strength"]} if v["family"] == "factor62" else {"rho": v["strength"]}
    try:
        spec = ModelSpec(v["family"], v["p"], v["p1"], v["n"], seed=v["seed"],
                         band_literal=v["band_literal"], loading_sd=v["loading_sd"], **strength)
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from None
    x = sample(spec, v["replica"])
    out = _outdir(args)
    write_matrix_csv(out / "data.csv", x, [f"x{i}" for i in range(spec.p)])
    return EXIT_OK


def _add_common(sp, experiment: bool = True):
    sp.add_argument("--config", help="INI config file with a section per command")
    sp.add_argument("--out", default=".", help="output directory (default: current directory)")
    sp.add_argument("--workers", type=int, default=None, help="worker processes (default: $PVDCOV_WORKERS or 1)")
    if experiment:
        sp.add_argument("--seed", type=int, default=None, help="master seed (default 2024)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvdcov",
        description="Pivotal-variable detection and PVD-based covariance estimation.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="exit codes: 0 ok, 1 internal error, 2 config/usage, 3 input data, 4 solver/screening, 5 acceptance failed",
    )
    parser.add_argument("--version", action="version", version=f"pvdcov {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text, epilog=describe(name),
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    for name, func, text in (
        ("table1", cmd_table1, "PVD screening grid over models 1 and 2"),
        ("table2", cmd_table2, "LOREC versus PVD-LOREC on the two-factor model"),
        ("figure1", cmd_figure1, "POET versus PVD-POET across dimensions"),
    ):
        sp = add(name, func, text)
        _add_common(sp)
        sp.add_argument("--full", action="store_true", help="full-size grid instead of desk scale")
        sp.add_argument("--replicas", type=int, default=None, help="replicas per cell")

    sp = add("estimate", cmd_estimate, "estimate a covariance matrix from a data CSV")
    _add_common(sp, experiment=False)
    sp.add_argument("data", help="CSV with one observation per row")
    sp.add_argument("--method", choices=METHODS, default=None)

    sp = add("stability", cmd_stability, "repeat PVD on random subsamples of a data CSV")
    _add_common(sp)
    sp.add_argument("data", help="CSV with one observation per row")
    sp.add_argument("--subsample-n", type=int, default=None)
    sp.add_argument("--replicas", type=int, default=None)

    sp = add("selftest", cmd_selftest, "run the acceptance criteria")
    _add_common(sp)
    sp.add_argument("--scale", choices=acceptance.SCALES, default=None)
    sp.add_argument("--criteria", type=lambda s: tuple(int(v) for v in s.split(",")), default=None,
                    help="comma-separated criterion numbers")

    sp = add("generate", cmd_generate, "write one simulated data matrix as CSV")
    _add_common(sp)
    sp.add_argument("--family", choices=("model1", "model2", "factor62"), default=None)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--p1", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--strength", type=float, default=None)
    sp.add_argument("--replica", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "workers", None) is not None and args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateScreeningError, GeneratorError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except Exception:
        logger.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
