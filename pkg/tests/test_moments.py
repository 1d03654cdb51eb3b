import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from pvdcov.errors import InvalidArgumentError, InvalidInputError
from pvdcov.moments import THETA_VARIANTS, as_data, sample_covariance, theta_hat
from pvdcov.oracles import covariance_loop, theta_loop

data = st.tuples(st.integers(2, 9), st.integers(2, 5)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(-100, 100, allow_nan=False))
)


def test_two_observation_hand_case():
    np.testing.assert_array_equal(sample_covariance([[0.0, 0.0], [2.0, 2.0]]), np.ones((2, 2)))


def test_constant_column_has_zero_row(rng):
    x = rng.standard_normal((20, 4))
    x[:, 2] = 7.0
    s = sample_covariance(x)
    assert np.all(s[2] == 0) and np.all(s[:, 2] == 0)


def test_covariance_matches_loop_oracle(rng):
    x = rng.standard_normal((50, 5)) + 3.0
    np.testing.assert_allclose(sample_covariance(x), covariance_loop(x), atol=1e-12, rtol=0)


@pytest.mark.parametrize("variant", THETA_VARIANTS)
def test_theta_matches_loop_oracle(rng, variant):
    x = rng.standard_normal((100, 4)) + rng.normal(size=4)
    np.testing.assert_allclose(theta_hat(x, variant), theta_loop(x, variant), atol=1e-12, rtol=0)


def test_theta_hand_case_with_zero_means():
    x = np.array([[1.0, 2.0], [-1.0, 0.0], [0.0, -2.0]])
    s = sample_covariance(x)
    # zero column means: theta_ij = mean_k (x_ki x_kj - s_ij)^2
    expected = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            expected[i, j] = np.mean((x[:, i] * x[:, j] - s[i, j]) ** 2)
    np.testing.assert_allclose(theta_hat(x), expected, atol=1e-14)
    assert s[0, 1] == pytest.approx(2.0 / 3.0)
    assert theta_hat(x)[0, 0] == pytest.approx(((1 - 2 / 3) ** 2 * 2 + (2 / 3) ** 2) / 3)


def test_theta_of_constant_data_is_zero():
    assert np.all(theta_hat(np.full((6, 3), 2.5)) == 0.0)


def test_paper_and_centered_variants_differ_only_through_means(rng):
    x = rng.standard_normal((30, 3))
    x0 = x - x.mean(axis=0)
    np.testing.assert_allclose(theta_hat(x0, "paper"), theta_hat(x0, "centered"), atol=1e-12)
    assert not np.allclose(theta_hat(x + 5.0, "paper"), theta_hat(x + 5.0, "centered"))


@given(data)
def test_covariance_invariances(x):
    s = sample_covariance(x)
    np.testing.assert_allclose(sample_covariance(x[::-1]), s, atol=1e-9)
    shifted = x.copy()
    shifted[:, 0] += 17.0
    np.testing.assert_allclose(sample_covariance(shifted), s, atol=1e-8)
    assert np.array_equal(s, s.T)


@given(data)
def test_theta_is_nonnegative(x):
    for v in THETA_VARIANTS:
        assert np.all(theta_hat(x, v) >= 0)


def test_input_validation():
    with pytest.raises(InvalidInputError):
        as_data(np.ones((1, 3)))
    with pytest.raises(InvalidInputError):
        as_data(np.array([[1.0, np.inf], [0.0, 1.0]]))
    with pytest.raises(InvalidArgumentError):
        theta_hat(np.ones((3, 2)), variant="cai")
