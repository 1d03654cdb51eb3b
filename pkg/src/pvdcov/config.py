"""Run configuration for the command-line interface.

A config file is INI-style, one section per command::

    [table2]
    replicas = 50
    cells = 100:20, 100:90
    c_universal = 1.0

Every key has a typed desk-scale default and, for the experiment commands,
a full-size default selected by ``--full``. Unknown sections or keys are
rejected before anything runs.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from typing import Any, Callable

from .errors import ConfigError

__all__ = ["Key", "COMMANDS", "defaults", "load_config", "resolve", "describe"]


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _words(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _cells(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in _words(text):
        p, sep, p1 = item.partition(":")
        if not sep:
            raise ValueError(f"cell {item!r} is not of the form p:p1")
        out.append((int(p), int(p1)))
    return tuple(out)


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "auto", "none") else float(text)


def _k(text: str) -> int | str:
    return "auto" if text.strip().lower() == "auto" else int(text)


def _ridge(text: str) -> float | str:
    return "auto" if text.strip().lower() == "auto" else float(text)


@dataclass(frozen=True)
class Key:
    parse: Callable[[str], Any]
    desk: Any
    full: Any = None
    help: str = ""

    def default(self, full: bool) -> Any:
        return self.full if full and self.full is not None else self.desk


_TUNING = {
    "c": Key(float, 0.5, help="adaptive threshold constant (POET variants)"),
    "c_universal": Key(float, 1.0, help="universal threshold constant (PVD-LOREC off-blocks, threshold)"),
    "k": Key(_k, "auto", help="number of factors for POET variants, or auto"),
    "lam": Key(_opt_float, None, help="LOREC nuclear-norm weight; auto = sqrt(dim/n)"),
    "rho": Key(_opt_float, None, help="LOREC l1 weight; auto = 0.5 sqrt(log(dim)/n)"),
    "ridge": Key(_ridge, "auto", help="PVD ridge l_n; auto = ((log p)^5/n)^(3/8)"),
    "max_iter": Key(int, 500, help="LOREC iteration cap"),
    "tol": Key(float, 1e-6, help="LOREC relative-change tolerance"),
    "theta_variant": Key(str, "paper", help="theta_hat variant: paper or centered"),
    "rule": Key(str, "soft", help="threshold rule: soft or hard"),
}

_COMMON = {"seed": Key(int, 2024, help="master seed")}

COMMANDS: dict[str, dict[str, Key]] = {
    "table1": {
        **_COMMON,
        "models": Key(_words, ("model1", "model2"), help="families to run"),
        "p": Key(int, 400, 1000, help="dimension"),
        "n": Key(int, 100, help="sample size"),
        "p1_values": Key(_ints, (50, 100, 200), help="pivotal set sizes"),
        "rho_values": Key(_floats, (0.1, 0.3, 0.5, 0.7, 0.9), help="model strengths"),
        "replicas": Key(int, 30, 100, help="replicas per cell"),
        "ridge": _TUNING["ridge"],
        "loading_sd": Key(_bool, False, help="read model 2's loading 0.5 as an SD"),
    },
    "table2": {
        **_COMMON,
        "cells": Key(_cells, ((100, 20), (100, 90), (200, 20), (200, 120)),
                     ((100, 20), (100, 90), (200, 20), (200, 120), (300, 20), (300, 120)),
                     help="comma-separated p:p1 pairs"),
        "n": Key(int, 150, help="sample size"),
        "r_values": Key(_floats, (0.1, 0.5, 1.0), help="strength of the pivotal block of Sigma_u"),
        "replicas": Key(int, 20, 100, help="replicas per cell"),
        "band_literal": Key(_bool, False, help="use the indicator |i-j|>5 literally"),
        **{k: _TUNING[k] for k in ("c_universal", "lam", "rho", "ridge", "max_iter", "tol", "rule")},
    },
    "figure1": {
        **_COMMON,
        "p_values": Key(_ints, (300, 600, 1000), tuple(range(300, 1001, 100)), help="dimensions"),
        "p1": Key(int, 120, help="pivotal set size"),
        "n": Key(int, 150, help="sample size"),
        "r_values": Key(_floats, (0.1, 0.5, 1.0), help="strength of the pivotal block of Sigma_u"),
        "replicas": Key(int, 20, 100, help="replicas per cell"),
        "band_literal": Key(_bool, False, help="use the indicator |i-j|>5 literally"),
        **{k: _TUNING[k] for k in ("c", "k", "ridge", "theta_variant", "rule")},
    },
    "estimate": {
        "method": Key(str, "pvd-poet", help="pvd, lorec, pvd-lorec, poet, pvd-poet or threshold"),
        "header": Key(str, "auto", help="auto, yes or no"),
        **_TUNING,
    },
    "stability": {
        **_COMMON,
        "subsample_n": Key(int, 250, help="rows per subsample"),
        "replicas": Key(int, 50, help="number of subsamples T"),
        "sd_min": Key(_opt_float, None, help="keep variables with sample SD >= sd_min"),
        "sd_max": Key(_opt_float, None, help="keep variables with sample SD <= sd_max"),
        "top_m": Key(int, 0, help="then keep the top_m by SD (0 keeps all)"),
        "header": Key(str, "auto", help="auto, yes or no"),
        "ridge": _TUNING["ridge"],
    },
    "selftest": {
        **_COMMON,
        "scale": Key(str, "quick", help="quick or desk"),
        "criteria": Key(_ints, (1, 2, 3, 4, 5, 6, 7, 8), help="criterion numbers to run"),
    },
    "generate": {
        **_COMMON,
        "family": Key(str, "model2", help="model1, model2 or factor62"),
        "p": Key(int, 200),
        "p1": Key(int, 20),
        "n": Key(int, 100),
        "strength": Key(float, 0.5, help="rho for model1/model2, r for factor62"),
        "replica": Key(int, 0),
        "band_literal": Key(_bool, False),
        "loading_sd": Key(_bool, False),
    },
}


def defaults(command: str, full: bool = False) -> dict[str, Any]:
    return {k: key.default(full) for k, key in COMMANDS[command].items()}


def load_config(path) -> dict[str, dict[str, str]]:
    """Read an INI file into raw strings, rejecting unknown sections and keys."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__unused__")
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    raw = {}
    for section in parser.sections():
        if section not in COMMANDS:
            raise ConfigError(f"unknown config section [{section}]; expected one of {sorted(COMMANDS)}")
        unknown = sorted(set(parser[section]) - set(COMMANDS[section]))
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
        raw[section] = dict(parser[section])
    return raw


def resolve(command: str, raw: dict[str, dict[str, str]] | None = None, full: bool = False, **overrides) -> dict[str, Any]:
    """Defaults, then config-file values, then non-None ``overrides``."""
    keys = COMMANDS[command]
    values = defaults(command, full)
    for name, text in (raw or {}).get(command, {}).items():
        try:
            values[name] = keys[name].parse(text)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{command}] {name} = {text!r}: {exc}") from None
    for name, value in overrides.items():
        if value is None:
            continue
        if name not in keys:
            raise ConfigError(f"unknown option {name!r} for {command}")
        values[name] = value
    return values


def _show(v) -> str:
    if isinstance(v, tuple):
        return ",".join(":".join(map(str, x)) if isinstance(x, tuple) else str(x) for x in v)
    return "auto" if v is None else str(v)


def describe(command: str) -> str:
    """Defaults table for ``--help``."""
    lines = [f"config keys for [{command}] (desk default / --full default):"]
    for name, key in COMMANDS[command].items():
        full = "" if key.full is None else f" / {_show(key.full)}"
        lines.append(f"  {name} = {_show(key.desk)}{full}  {key.help}".rstrip())
    return "\n".join(lines)
