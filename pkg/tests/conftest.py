import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_sym(rng, p):
    a = rng.standard_normal((p, p))
    return (a + a.T) / 2.0


def factor_data(rng, n=80, p=12, k=2, s0=5, noise=1.0):
    """Data whose first ``s0`` columns load on ``k`` strong factors."""
    b = np.zeros((p, k))
    # balanced loadings keep the row energies of the pivotal block comparable
    b[:s0] = rng.choice([-1.0, 1.0], size=(s0, k)) * rng.uniform(1.5, 2.5, size=(s0, k))
    return rng.standard_normal((n, k)) @ b.T + noise * rng.standard_normal((n, p))
