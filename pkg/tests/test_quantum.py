import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from aspectlab.quantum import (
    DensityMatrix,
    bell_state,
    canonical_angle,
    correlation,
    maximally_mixed,
    polarization_projectors,
    product_state,
    projective_bivariate,
    random_density_matrix,
)

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def test_projectors_at_zero():
    P = polarization_projectors(0.0)
    np.testing.assert_array_equal(P.plus, np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(P.minus, np.diag([0.0, 1.0]))


def test_projector_at_quarter_pi_matches_rotation_oracle():
    P = polarization_projectors(math.pi / 4)
    np.testing.assert_allclose(P.plus, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(P.plus, oracles.projector_plus(math.pi / 4), atol=1e-15)


@given(angles)
def test_projectors_complete_and_idempotent(theta):
    P = polarization_projectors(theta)
    np.testing.assert_allclose(P.plus + P.minus, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(P.plus @ P.plus, P.plus, atol=1e-14)
    np.testing.assert_allclose(P.plus @ P.minus, np.zeros((2, 2)), atol=1e-14)


def test_phi_plus_basics():
    rho = bell_state()
    assert rho.dim == 4
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-15)
    assert rho.purity() == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(rho.matrix, oracles.phi_plus(), atol=1e-15)


@pytest.mark.parametrize("kind", ["phi_plus", "phi_minus", "psi_plus", "psi_minus"])
def test_bell_states_pure_with_mixed_reductions(kind):
    rho = bell_state(kind)
    assert rho.purity() == pytest.approx(1.0, abs=1e-14)
    for side in (1, 2):
        np.testing.assert_allclose(rho.reduced(side).matrix, np.eye(2) / 2, atol=1e-15)


def test_unknown_bell_state():
    with pytest.raises(ValueError):
        bell_state("chi")


@pytest.mark.parametrize(
    "t2, expected", [(0.0, 1.0), (math.pi / 4, 0.0), (math.pi / 2, -1.0), (math.pi / 8, math.sqrt(0.5))]
)
def test_phi_plus_correlation_values(t2, expected):
    rho = bell_state()
    assert correlation(rho, 0.0, t2) == pytest.approx(expected, abs=1e-12)
    assert correlation(rho, 0.0, t2) == pytest.approx(oracles.correlation(oracles.phi_plus(), 0.0, t2), abs=1e-14)


@given(angles, angles)
def test_phi_plus_correlation_law(t1, t2):
    assert correlation(bell_state(), t1, t2) == pytest.approx(math.cos(2 * (t1 - t2)), abs=1e-12)


def test_projective_bivariate_phi_plus_aligned():
    t = projective_bivariate(bell_state(), 0.0, 0.0).table
    np.testing.assert_allclose(t, [[0.5, 0.0], [0.0, 0.5]], atol=1e-15)


@given(angles, angles)
def test_maximally_mixed_bivariate_uniform(t1, t2):
    np.testing.assert_allclose(projective_bivariate(maximally_mixed(), t1, t2).table, np.full((2, 2), 0.25), atol=1e-15)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), angles, angles)
def test_bivariate_matches_trace_oracle_and_sums_to_one(seed, t1, t2):
    rho = random_density_matrix(4, np.random.default_rng(seed))
    t = projective_bivariate(rho, t1, t2).table
    np.testing.assert_allclose(t, oracles.bivariate(rho.matrix, t1, t2), atol=1e-12)
    assert t.sum() == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), angles, angles)
def test_product_state_correlation_factorizes(seed, t1, t2):
    rng = np.random.default_rng(seed)
    r1, r2 = random_density_matrix(2, rng), random_density_matrix(2, rng)
    rho = product_state(r1, r2)
    e1 = oracles.trace_expect(r1.matrix, oracles.observable(t1))
    e2 = oracles.trace_expect(r2.matrix, oracles.observable(t2))
    assert correlation(rho, t1, t2) == pytest.approx(e1 * e2, abs=1e-12)


def test_product_of_mixed_and_pure_states():
    half = DensityMatrix(np.eye(2) / 2)
    np.testing.assert_allclose(product_state(half, half).matrix, np.eye(4) / 4, atol=1e-16)
    up = DensityMatrix(np.diag([1.0, 0.0]))
    assert product_state(up, up).purity() == pytest.approx(1.0)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4]))
def test_random_density_matrix_is_valid(seed, dim):
    rho = random_density_matrix(dim, np.random.default_rng(seed))
    m = rho.matrix
    np.testing.assert_allclose(m, m.conj().T, atol=1e-14)
    assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(m).min() >= -1e-12


@pytest.mark.parametrize(
    "matrix",
    [
        np.diag([1.0, 0.5]),  # trace 1.5
        np.array([[0.5, 1.0], [0.0, 0.5]]),  # not Hermitian
        np.diag([1.5, -0.5]),  # not positive
        np.eye(3) / 3,  # unsupported dimension
    ],
)
def test_density_matrix_validation(matrix):
    with pytest.raises(ValueError):
        DensityMatrix(matrix)


def test_density_matrix_is_immutable():
    rho = bell_state()
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 0.0


def test_correlation_requires_two_photons():
    with pytest.raises(ValueError):
        correlation(DensityMatrix(np.eye(2) / 2), 0.0, 0.0)


@given(angles)
def test_canonical_angle_range_and_period(theta):
    c = canonical_angle(theta)
    assert 0.0 <= c < math.pi
    d = abs(canonical_angle(theta + math.pi) - c)
    assert min(d, math.pi - d) < 1e-9
