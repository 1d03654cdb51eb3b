"""Pivotal-variable detection and two-stage covariance estimation for sparse factor models.

Typical use::

    from pvdcov import detect, pvd_poet
    screen = detect(x)            # x: n x p data, rows are observations
    est = pvd_poet(x, k=2)
    est.sigma, est.sparse, est.j_hat
"""

from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateScreeningError,
    GeneratorError,
    InvalidArgumentError,
    InvalidInputError,
    PvdCovError,
)
from .estimate import CovEstimate
from .kernels import BACKEND
from .linalg import EigenDecomposition, inv_sqrt, operator_norm, svt, sym_eigen
from .lorec import LorecConfig, LowRankSparseSplit, lorec_estimate, solve
from .methods import METHODS, MethodConfig, run_method
from .moments import sample_covariance, theta_hat
from .pipeline import pvd_lorec, pvd_poet, universal_threshold_estimate
from .poet import FactorDecomposition, estimate_k, poet_decompose, poet_estimate
from .pvd import PvdConfig, PvdResult, detect, ridge_ratios, row_energy
from .thresholding import ThresholdSpec, apply_threshold, threshold_blocks

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "CovEstimate",
    "DataFormatError",
    "DegenerateScreeningError",
    "EigenDecomposition",
    "FactorDecomposition",
    "GeneratorError",
    "InvalidArgumentError",
    "InvalidInputError",
    "LorecConfig",
    "LowRankSparseSplit",
    "METHODS",
    "MethodConfig",
    "PvdConfig",
    "PvdCovError",
    "PvdResult",
    "ThresholdSpec",
    "apply_threshold",
    "detect",
    "estimate_k",
    "inv_sqrt",
    "lorec_estimate",
    "operator_norm",
    "poet_decompose",
    "poet_estimate",
    "pvd_lorec",
    "pvd_poet",
    "ridge_ratios",
    "row_energy",
    "run_method",
    "sample_covariance",
    "solve",
    "svt",
    "sym_eigen",
    "theta_hat",
    "threshold_blocks",
    "universal_threshold_estimate",
]
