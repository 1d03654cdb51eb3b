"""Name-based dispatch over the estimators, shared by the experiment runner and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgumentError
from .estimate import CovEstimate
from .lorec import LorecConfig, lorec_estimate
from .moments import as_data
from .pipeline import pvd_lorec, pvd_poet, universal_threshold_estimate
from .poet import poet_estimate
from .pvd import PvdConfig, PvdResult, detect
from .thresholding import ADAPTIVE_C, UNIVERSAL_C, ThresholdSpec

__all__ = ["METHODS", "MethodConfig", "run_method"]

METHODS = ("pvd", "lorec", "pvd-lorec", "poet", "pvd-poet", "threshold")


@dataclass(frozen=True)
class MethodConfig:
    """Tuning for one method.

    ``lam``/``rho`` left as None select LOREC auto tuning on the working
    dimension; ``c`` is the adaptive threshold constant (POET variants) and
    ``c_universal`` the universal one (PVD-LOREC off-blocks, plain thresholding).
    """

    name: str
    c: float = ADAPTIVE_C
    c_universal: float = UNIVERSAL_C
    k: int | str = "auto"
    lam: float | None = None
    rho: float | None = None
    ridge: float | str = "auto"
    max_iter: int = 500
    tol: float = 1e-6
    theta_variant: str = "paper"
    rule: str = "soft"

    def __post_init__(self):
        if self.name not in METHODS:
            raise InvalidArgumentError(f"unknown method {self.name!r}; choose from {METHODS}")
        if (self.lam is None) != (self.rho is None):
            raise InvalidArgumentError("set both lam and rho, or neither for auto tuning")
        PvdConfig(ridge=self.ridge)

    @property
    def pvd(self) -> PvdConfig:
        return PvdConfig(ridge=self.ridge)

    def lorec(self, n: int, dim: int) -> LorecConfig:
        if self.lam is None:
            return LorecConfig.auto(n, dim, max_iter=self.max_iter, tol=self.tol)
        return LorecConfig(lam=self.lam, rho=self.rho, max_iter=self.max_iter, tol=self.tol)


def run_method(x, cfg: MethodConfig) -> PvdResult | CovEstimate:
    """Run ``cfg.name`` on data ``x``; ``pvd`` returns a :class:`PvdResult`."""
    a = as_data(x)
    n, p = a.shape
    name = cfg.name
    if name == "pvd":
        return detect(a, cfg.pvd)
    if name == "lorec":
        return lorec_estimate(a, cfg.lorec(n, p))
    if name == "pvd-lorec":
        lorec_cfg = None if cfg.lam is None else cfg.lorec(n, p)
        thr = ThresholdSpec.universal(n, p, constant=cfg.c_universal, rule=cfg.rule)
        return pvd_lorec(a, cfg.pvd, lorec_cfg, thr, max_iter=cfg.max_iter, tol=cfg.tol)
    if name == "poet":
        return poet_estimate(a, k=cfg.k, c=cfg.c, theta_variant=cfg.theta_variant, rule=cfg.rule)
    if name == "pvd-poet":
        return pvd_poet(a, cfg.pvd, k=cfg.k, c=cfg.c, theta_variant=cfg.theta_variant, rule=cfg.rule)
    thr = ThresholdSpec.universal(n, p, constant=cfg.c_universal, rule=cfg.rule)
    return universal_threshold_estimate(a, thr)

