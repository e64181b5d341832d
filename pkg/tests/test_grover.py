import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwgo.grover import (ThresholdOracle, apply_diffusion, apply_oracle, count_solutions, grover_rotations,
                         theoretical_success)
from qwgo.errors import DomainError
from qwgo.objectives import get_objective, grid_values
from qwgo.statevector import GridDomain, QuantumState, init_basis, init_uniform, probabilities

D512 = GridDomain(0.0, 1.0, 9)


def oracle_with(m, n=512):
    return ThresholdOracle(np.where(np.arange(n) < m, 0.0, 1.0), 0.5)


def test_count_solutions():
    v = np.array([3.0, 1.0, 2.0, 5.0])
    assert count_solutions(ThresholdOracle(v, 0.5)) == 0
    assert count_solutions(ThresholdOracle(v, 10.0)) == 4
    assert count_solutions(ThresholdOracle(v, 2.0)) == 1  # strict


def test_rastrigin_count_is_brute_force():
    d = GridDomain(-5, 5, 9)
    v = grid_values(get_objective("rastrigin"), d)
    assert count_solutions(ThresholdOracle(v, 1.0)) == sum(1 for x in v if x < 1.0) == 9


def test_oracle_examples():
    u = init_uniform(D512)
    np.testing.assert_array_equal(apply_oracle(u, oracle_with(0)).amplitudes, u.amplitudes)
    flipped = apply_oracle(u, oracle_with(512))
    np.testing.assert_array_equal(flipped.amplitudes, -u.amplitudes)
    np.testing.assert_array_equal(probabilities(flipped), probabilities(u))
    m = 40
    overlap = np.vdot(u.amplitudes, apply_oracle(u, oracle_with(m)).amplitudes)
    assert overlap.real == pytest.approx((512 - 2 * m) / 512, abs=1e-14)


def test_diffusion_examples():
    u = init_uniform(D512)
    np.testing.assert_allclose(apply_diffusion(u).amplitudes, u.amplitudes, atol=1e-16)
    d4 = GridDomain(0, 1, 2)
    np.testing.assert_allclose(apply_diffusion(init_basis(d4, 2)).amplitudes, [0.5, 0.5, -0.5, 0.5])
    rng = np.random.default_rng(0)
    s = QuantumState(rng.normal(size=512) + 1j * rng.normal(size=512), D512)
    np.testing.assert_allclose(apply_diffusion(apply_diffusion(s)).amplitudes, s.amplitudes, atol=1e-14)


def test_zero_rotations_is_identity():
    u = init_uniform(D512)
    np.testing.assert_array_equal(grover_rotations(u, oracle_with(5), 0).amplitudes, u.amplitudes)


def test_quarter_marked_one_rotation_is_certain():
    p = probabilities(grover_rotations(init_uniform(D512), oracle_with(128), 1))
    assert p[:128].sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("m", [1, 2, 64, 128, 256])
def test_rotation_law(m):
    oracle = oracle_with(m)
    for r in range(26):
        p = probabilities(grover_rotations(init_uniform(D512), oracle, r))
        assert abs(p[:m].sum() - theoretical_success(m, 512, r)) <= 1e-9
        assert np.ptp(p[:m]) <= 1e-12


def test_rotations_match_manual_composition():
    oracle = oracle_with(7)
    s = init_uniform(D512)
    manual = s
    for _ in range(5):
        manual = apply_diffusion(apply_oracle(manual, oracle))
    np.testing.assert_allclose(grover_rotations(s, oracle, 5).amplitudes, manual.amplitudes, atol=1e-14)


@given(m=st.integers(0, 512), r=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_rotations_preserve_norm(m, r):
    out = grover_rotations(init_uniform(D512), oracle_with(m), r)
    assert (np.abs(out.amplitudes) ** 2).sum() == pytest.approx(1.0, abs=1e-12)


def test_threshold_equal_to_grid_value_is_unmarked():
    v = np.linspace(0, 1, 512)
    oracle = ThresholdOracle(v, v[10])
    assert not oracle.marked[10] and oracle.marked[9]


def test_theoretical_success_examples():
    assert theoretical_success(5, 512, 0) == pytest.approx(5 / 512, abs=1e-15)
    assert theoretical_success(128, 512, 1) == pytest.approx(1.0, abs=1e-15)
    assert theoretical_success(1, 512, 18) == pytest.approx(0.9958, abs=5e-5)
    with pytest.raises(DomainError):
        theoretical_success(0, 512, 1)
    with pytest.raises(DomainError):
        grover_rotations(init_uniform(D512), oracle_with(1), -1)
