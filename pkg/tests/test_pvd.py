import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pvdcov.errors import InvalidArgumentError, InvalidInputError
from pvdcov.moments import sample_covariance
from pvdcov.oracles import row_energy_loop
from pvdcov.pvd import PvdConfig, auto_ridge, detect, ridge_ratios, row_energy, select_from_energy
from pvdcov.simlab import ModelSpec, sample

from conftest import factor_data, random_sym

HAND_R = np.array([5.0, 4.0, 0.001, 0.0008, 0.0005])


def test_row_energy_hand_cases(rng):
    np.testing.assert_allclose(row_energy(np.eye(4)), [0.25] * 4)
    np.testing.assert_allclose(row_energy([[2.0, 1.0], [1.0, 3.0]]), [2.5, 5.0])
    m = random_sym(rng, 10)
    np.testing.assert_allclose(row_energy(m), row_energy_loop(m), atol=1e-12, rtol=0)


def test_ridge_ratios_hand_cases():
    np.testing.assert_allclose(ridge_ratios(HAND_R, 0.01), [4.01 / 5.01, 0.011 / 4.01, 0.0108 / 0.011, 0.0105 / 0.0108])
    np.testing.assert_allclose(ridge_ratios(HAND_R, 0.01), [0.8004, 0.00274, 0.9818, 0.9722], atol=5e-5)
    np.testing.assert_array_equal(ridge_ratios(np.full(6, 0.3), 0.1), np.ones(5))
    assert ridge_ratios([1.0, 0.0], 1.0)[0] == 0.5


@given(st.lists(st.floats(0, 1e3), min_size=2, max_size=30), st.floats(1e-6, 10))
def test_ridge_ratios_lie_in_unit_interval(values, ridge):
    r = np.sort(np.asarray(values))[::-1]
    ratios = ridge_ratios(r, ridge)
    assert ratios.shape == (r.size - 1,)
    assert np.all(ratios > 0) and np.all(ratios <= 1)


def test_ridge_ratios_validation():
    with pytest.raises(InvalidArgumentError):
        ridge_ratios([1.0, 2.0], 0.1)
    with pytest.raises(InvalidArgumentError):
        ridge_ratios([1.0, -0.5], 0.1)
    with pytest.raises(InvalidArgumentError):
        ridge_ratios([1.0, 0.5], 0.0)


def test_selection_on_hand_sequence():
    shuffled = HAND_R[[3, 0, 4, 1, 2]]
    res = select_from_energy(shuffled, 0.01)
    assert res.s0_hat == 2
    np.testing.assert_array_equal(res.j_hat, [1, 3])


def test_all_equal_energies_tie_break_to_one():
    res = select_from_energy(np.full(5, 0.2), 0.1)
    assert res.s0_hat == 1
    np.testing.assert_array_equal(res.j_hat, [0])


def test_auto_ridge_uses_natural_log():
    assert auto_ridge(100, 400) == pytest.approx((math.log(400) ** 5 / 100) ** 0.375)


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        PvdConfig(ridge=-1.0)
    with pytest.raises(InvalidArgumentError):
        PvdConfig(ridge="small")
    with pytest.raises(InvalidArgumentError):
        PvdConfig(tie_break="largest")
    assert PvdConfig(ridge=0.3).resolve_ridge(10, 10) == 0.3


def test_result_invariants(rng):
    x = factor_data(rng, n=60, p=20, s0=6)
    res = detect(x)
    assert np.all(np.diff(res.r_hat[res.order]) <= 0)
    assert 1 <= res.s0_hat <= x.shape[1] - 1
    assert res.j_hat.size == res.s0_hat
    cut = res.r_hat[res.order[res.s0_hat - 1]]
    np.testing.assert_array_equal(res.j_hat, np.flatnonzero(res.r_hat >= cut))
    np.testing.assert_array_equal(res.j_hat, np.arange(6))


def test_permutation_equivariance(rng):
    x = factor_data(rng, n=60, p=20, s0=6)
    perm = rng.permutation(20)
    a = detect(x).j_hat
    b = detect(x[:, perm]).j_hat
    np.testing.assert_array_equal(np.sort(perm[b]), a)


def test_scale_invariance_with_rescaled_ridge(rng):
    x = factor_data(rng, n=60, p=20, s0=6)
    base = detect(x, PvdConfig(ridge=0.05))
    for c in (0.5, 3.0):
        scaled = detect(c * x, PvdConfig(ridge=0.05 * c**4))
        np.testing.assert_allclose(scaled.r_hat, c**4 * base.r_hat, rtol=1e-10)
        assert scaled.s0_hat == base.s0_hat


def test_model2_single_replica_recovers_pivotal_set():
    spec = ModelSpec("model2", 1000, 50, 100, rho=0.9, seed=3)
    np.testing.assert_array_equal(detect(sample(spec, 0)).j_hat, np.arange(50))


@pytest.mark.parametrize("rho", [0.5, 0.9])
def test_separation_of_row_energies(rho):
    spec = ModelSpec("model2", 400, 50, 100, rho=rho, seed=5)
    hits = 0
    for t in range(30):
        r = row_energy(sample_covariance(sample(spec, t)))
        hits += r[50:].max() / r[:50].min() < 0.1
    assert hits / 30 >= 0.95


def test_consistency_trend_in_n():
    probs = []
    for n in (50, 100, 200):
        spec = ModelSpec("model2", 400, 50, n, rho=0.5, seed=2024)
        probs.append(np.mean([detect(sample(spec, t)).s0_hat == 50 for t in range(30)]))
    drops = [a - b for a, b in zip(probs, probs[1:]) if b < a]
    assert len(drops) == 0 or (len(drops) == 1 and drops[0] <= 0.05)


def test_detect_rejects_tiny_input():
    with pytest.raises(InvalidInputError):
        detect(np.ones((1, 4)))
