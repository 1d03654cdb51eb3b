"""Generative covariance models used in the simulation studies.

Three families are available:

``model1``
    ``Sigma = Sigma0 @ Sigma0`` with the three-case entry formula for
    ``Sigma0`` and a random 30-element subset ``Jt`` of the non-pivotal
    indices.
``model2``
    Four-factor model with loadings on the first ``p1`` coordinates drawn
    from ``N(1 + rho, 0.5)`` and a banded ``Sigma_u`` with entries
    ``rho^(|i-j|/9) 1(|i-j| < 9)``.
``factor62``
    Two-factor model with loading rows uniform on the unit circle for the
    first ``p1`` coordinates and a block-banded ``Sigma_u``
    (``r * 0.3^|i-j|`` on the pivotal block, ``0.3^|i-j|`` elsewhere,
    bandwidth 5, zero cross blocks).

The structural randomness (loadings, ``Jt``) is drawn once per model from
``seed``; data replicas use independent streams derived from
``(seed, replica)``, so adding replicas never changes earlier ones.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import GeneratorError, InvalidArgumentError
from ..linalg import eigenvalue_floor, psd_sqrt

logger = logging.getLogger(__name__)

__all__ = ["ModelSpec", "TrueModel", "build_sigma", "sample", "replica_rng", "FAMILIES"]

FAMILIES = ("model1", "model2", "factor62")
REPAIR_FLOOR = 1e-8
PSD_TOL = 1e-8
_STRUCTURE_STREAM = 0
_REPLICA_STREAM = 1


@dataclass(frozen=True)
class ModelSpec:
    """One simulation cell.

    ``rho`` parametrizes ``model1``/``model2`` and ``r`` parametrizes
    ``factor62``. ``band_literal`` switches ``factor62`` to the indicator
    ``1(|i-j| > 5)``; ``loading_sd`` reads the 0.5 of ``model2`` as a standard
    deviation instead of a variance.
    """

    family: str
    p: int
    p1: int
    n: int
    rho: float | None = None
    r: float | None = None
    seed: int = 0
    band_literal: bool = False
    loading_sd: bool = False
    n_tilde: int = 30

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not 1 <= self.p1 < self.p:
            raise InvalidArgumentError(f"need 1 <= p1 < p, got p1={self.p1}, p={self.p}")
        if self.n < 2:
            raise InvalidArgumentError(f"n must be >= 2, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit nonnegative integer")
        if self.family == "factor62":
            if self.r is None or not self.r > 0:
                raise InvalidArgumentError("factor62 needs r > 0")
        else:
            if self.rho is None or not 0 < self.rho <= 1:
                raise InvalidArgumentError(f"{self.family} needs 0 < rho <= 1")
        if self.family == "model1" and self.p - self.p1 < self.n_tilde:
            raise InvalidArgumentError(f"model1 needs p - p1 >= {self.n_tilde}")

    @property
    def strength(self) -> float:
        return self.r if self.family == "factor62" else self.rho

    @property
    def true_j(self) -> np.ndarray:
        return np.arange(self.p1)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrueModel:
    """Population quantities of a :class:`ModelSpec`.

    ``root`` is the matrix ``R`` used for sampling ``X = Z @ R`` (so that
    ``cov(X) = R.T @ R = sigma``). ``sigma_u`` is None for ``model1``, which
    has no factor decomposition.
    """

    sigma: np.ndarray
    sigma_u: np.ndarray | None
    loadings: np.ndarray | None
    root: np.ndarray
    raw_min_eigenvalue: float
    repaired: bool


def replica_rng(seed: int, replica: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, _REPLICA_STREAM, replica]))


def _structure_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, _STRUCTURE_STREAM]))


def _lag(p: int) -> np.ndarray:
    i = np.arange(p)
    return np.abs(i[:, None] - i[None, :])


def _model1(spec: ModelSpec, rng: np.random.Generator):
    p, p1, rho = spec.p, spec.p1, spec.rho
    jt = p1 + np.sort(rng.choice(p - p1, size=spec.n_tilde, replace=False))
    idx = np.arange(1, p + 1)
    lo = np.minimum(idx[:, None], idx[None, :])
    hi = np.maximum(idx[:, None], idx[None, :])
    in_j = idx <= p1
    both = in_j[:, None] & in_j[None, :]
    neither = ~in_j[:, None] & ~in_j[None, :]
    s0 = rho ** (lo / p1) * 0.1 ** (2.0 * hi / p)
    s0 = np.where(both, rho ** (2.0 * lo / p1), s0)
    in_jt = np.zeros(p, dtype=bool)
    in_jt[jt] = True
    s0 = np.where(neither, rho * (in_jt[:, None] & in_jt[None, :]), s0)
    sigma = s0 @ s0
    sigma = (sigma + sigma.T) / 2.0
    lam_min = float(np.linalg.eigvalsh(sigma)[0])
    return TrueModel(sigma=sigma, sigma_u=None, loadings=None, root=s0, raw_min_eigenvalue=lam_min, repaired=False)


def _finish_factor(spec: ModelSpec, loadings: np.ndarray, sigma_u: np.ndarray) -> TrueModel:
    common = loadings @ loadings.T
    sigma = common + sigma_u
    sigma = (sigma + sigma.T) / 2.0
    repaired_sigma, lam_min = eigenvalue_floor(sigma, REPAIR_FLOOR)
    repaired = lam_min < REPAIR_FLOOR
    if lam_min < -PSD_TOL:
        logger.warning(
            "%s(p=%d, p1=%d, strength=%g): covariance has min eigenvalue %.4g, flooring at %g",
            spec.family, spec.p, spec.p1, spec.strength, lam_min, REPAIR_FLOOR,
        )
    if repaired:
        sigma = repaired_sigma
        sigma_u = sigma - common
        if np.linalg.eigvalsh(sigma)[0] < -PSD_TOL:
            raise GeneratorError(f"could not repair covariance for {spec}")
    return TrueModel(
        sigma=sigma, sigma_u=sigma_u, loadings=loadings, root=psd_sqrt(sigma),
        raw_min_eigenvalue=lam_min, repaired=repaired,
    )


def _model2(spec: ModelSpec, rng: np.random.Generator):
    p, p1, rho = spec.p, spec.p1, spec.rho
    sd = 0.5 if spec.loading_sd else np.sqrt(0.5)
    loadings = np.zeros((p, 4))
    loadings[:p1] = rng.normal(1.0 + rho, sd, size=(p1, 4))
    lag = _lag(p)
    sigma_u = np.where(lag < 9, rho ** (lag / 9.0), 0.0)
    return _finish_factor(spec, loadings, sigma_u)


def _factor62(spec: ModelSpec, rng: np.random.Generator):
    p, p1, r = spec.p, spec.p1, spec.r
    angle = rng.uniform(0.0, 2.0 * np.pi, size=p1)
    loadings = np.zeros((p, 2))
    loadings[:p1, 0] = np.cos(angle)
    loadings[:p1, 1] = np.sin(angle)
    lag = _lag(p)
    band = (lag > 5) if spec.band_literal else (lag <= 5)
    base = np.where(band, 0.3**lag, 0.0)
    in_j = np.arange(p) < p1
    scale = np.where(in_j[:, None] & in_j[None, :], r, 0.0)
    scale = np.where(~in_j[:, None] & ~in_j[None, :], 1.0, scale)
    return _finish_factor(spec, loadings, base * scale)


_BUILDERS = {"model1": _model1, "model2": _model2, "factor62": _factor62}


def _freeze(model: TrueModel) -> TrueModel:
    for a in (model.sigma, model.sigma_u, model.loadings, model.root):
        if a is not None:
            a.setflags(write=False)
    return model


@functools.lru_cache(maxsize=16)
def build_sigma(spec: ModelSpec) -> TrueModel:
    """Construct the population covariance of ``spec`` (cached, read-only arrays).

    Factor families whose formula gives an indefinite matrix are repaired by
    flooring the spectrum at 1e-8, with a logged warning.
    """
    return _freeze(_BUILDERS[spec.family](spec, _structure_rng(spec.seed)))


def sample(spec: ModelSpec, replica: int, model: TrueModel | None = None) -> np.ndarray:
    """Draw the ``n x p`` data matrix of one replica, ``X = Z @ root``."""
    model = model or build_sigma(spec)
    z = replica_rng(spec.seed, replica).standard_normal((spec.n, spec.p))
    return z @ model.root
