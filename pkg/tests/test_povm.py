import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from aspectlab.distributions import CHSH_SETTINGS, PAIRS
from aspectlab.povm import (
    ArmConfig,
    ExperimentConfig,
    arm_povm,
    arm_probabilities,
    pair_povm,
    quad_probabilities,
    standard_aspect_configs,
    standard_aspect_quartet,
)
from aspectlab.quantum import DensityMatrix, bell_state, maximally_mixed, projective_bivariate, random_density_matrix

gammas = st.floats(0, 1)
angles = st.floats(-math.pi, math.pi)


def test_gamma_one_is_ideal_theta_measurement():
    R = arm_povm(ArmConfig(1.0, 0.3, 1.1)).elements
    P = oracles.projector_plus(0.3)
    np.testing.assert_allclose(R[0, 0], 0, atol=0)
    np.testing.assert_allclose(R[0, 1], P, atol=1e-15)
    np.testing.assert_allclose(R[1, 0], 0, atol=0)
    np.testing.assert_allclose(R[1, 1], np.eye(2) - P, atol=1e-15)


def test_gamma_zero_is_ideal_theta_prime_measurement():
    R = arm_povm(ArmConfig(0.0, 0.3, 1.1)).elements
    P = oracles.projector_plus(1.1)
    np.testing.assert_allclose(R[0, 1], 0, atol=0)
    np.testing.assert_allclose(R[1, 0], P, atol=1e-15)
    np.testing.assert_allclose(R[1, 1], np.eye(2) - P, atol=1e-15)


def test_half_gamma_elements_psd_and_complete():
    povm = arm_povm(ArmConfig(0.5, 0.0, math.pi / 4))
    assert povm.min_eigenvalue() >= -1e-12
    np.testing.assert_allclose(povm.total(), np.eye(2), atol=1e-15)


@pytest.mark.parametrize("gamma", [-0.1, 1.01, float("nan")])
def test_gamma_out_of_range(gamma):
    with pytest.raises(ValueError):
        ArmConfig(gamma, 0.0, 0.0)


@settings(max_examples=60)
@given(gammas, angles, angles, st.integers(0, 2**32 - 1))
def test_arm_probabilities_structure(g, t, tp, seed):
    rho1 = random_density_matrix(2, np.random.default_rng(seed))
    p = arm_probabilities(rho1, ArmConfig(g, t, tp))
    assert p[0, 0] == 0.0
    np.testing.assert_allclose(p, oracles.arm_table(rho1.matrix, g, t, tp), atol=1e-12)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


def test_arm_probabilities_maximally_mixed_half():
    p = arm_probabilities(DensityMatrix(np.eye(2) / 2), ArmConfig(0.5, 0.0, math.pi / 4))
    np.testing.assert_allclose(p, [[0, 0.25], [0.25, 0.5]], atol=1e-15)


def test_arm_probabilities_eigenstate():
    up = DensityMatrix(oracles.projector_plus(0.7))
    p = arm_probabilities(up, ArmConfig(1.0, 0.7, 0.1))
    np.testing.assert_allclose(p, [[0, 1], [0, 0]], atol=1e-14)


def test_arm_probabilities_rejects_pair_state():
    with pytest.raises(ValueError):
        arm_probabilities(bell_state(), ArmConfig(0.5, 0, 0))


def test_both_gamma_one_pins_b_outcomes():
    cfg = ExperimentConfig.from_angles(1.0, 1.0)
    R = pair_povm(cfg).elements
    nonzero = [idx for idx in np.ndindex(2, 2, 2, 2) if np.abs(R[idx]).max() > 0]
    assert nonzero == [(0, 1, 0, 1), (0, 1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)]


@settings(max_examples=40)
@given(gammas, gammas, angles, angles, angles, angles)
def test_pair_povm_factorizes_and_is_complete(g1, g2, a1, b1, a2, b2):
    cfg = ExperimentConfig(ArmConfig(g1, a1, b1), ArmConfig(g2, a2, b2))
    R = pair_povm(cfg)
    R1 = oracles.arm_elements(g1, a1, b1)
    R2 = oracles.arm_elements(g2, a2, b2)
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        np.testing.assert_allclose(R[i, j, k, l], np.kron(R1[i, j], R2[k, l]), atol=1e-12)
    np.testing.assert_allclose(R.total(), np.eye(4), atol=1e-12)
    assert R.min_eigenvalue() >= -1e-10


@settings(max_examples=40)
@given(gammas, gammas, st.integers(0, 2**32 - 1))
def test_quad_forbids_double_detection_on_each_arm(g1, g2, seed):
    rho = random_density_matrix(4, np.random.default_rng(seed))
    quad = quad_probabilities(ExperimentConfig.from_angles(g1, g2, CHSH_SETTINGS, rho))
    np.testing.assert_array_equal(quad.atoms[0, 0], 0.0)
    np.testing.assert_array_equal(quad.atoms[:, :, 0, 0], 0.0)
    np.testing.assert_allclose(quad.atoms, oracles.quad_from_povm(rho.matrix, g1, g2), atol=1e-12)


def test_ideal_aligned_marginal_is_projective():
    cfg = ExperimentConfig.from_angles(1.0, 1.0, (0.0, 0.5, 0.0, 1.0), bell_state())
    got = quad_probabilities(cfg).marginal("A1A2").table
    np.testing.assert_allclose(got, projective_bivariate(bell_state(), 0.0, 0.0).table, atol=1e-14)
    np.testing.assert_allclose(got, [[0.5, 0], [0, 0.5]], atol=1e-14)


def test_maximally_mixed_half_gamma_is_product_of_arm_tables():
    cfg = ExperimentConfig.from_angles(0.5, 0.5, (0.0, math.pi / 4, 0.0, math.pi / 4), maximally_mixed())
    arm = np.array([[0, 0.25], [0.25, 0.5]])
    np.testing.assert_allclose(quad_probabilities(cfg).atoms, np.einsum("ij,kl->ijkl", arm, arm), atol=1e-15)


def test_standard_aspect_quartet_is_quantum():
    q = standard_aspect_quartet()
    rho = oracles.phi_plus()
    for pair in PAIRS:
        t1, t2 = CHSH_SETTINGS.for_pair(pair)
        np.testing.assert_allclose(q[pair].table, oracles.bivariate(rho, t1, t2), atol=1e-14)
    # frozen: cos^2(pi/8)/2 and sin^2(pi/8)/2
    np.testing.assert_allclose(q["A1A2"].table[0, 0], 0.42677669529663687, atol=1e-15)
    np.testing.assert_allclose(q["A1B2"].table[0, 0], 0.07322330470336313, atol=1e-15)


def test_standard_configs_gammas():
    cfgs = standard_aspect_configs()
    assert {p: (c.arm1.gamma, c.arm2.gamma) for p, c in cfgs.items()} == {
        "A1A2": (1.0, 1.0),
        "A1B2": (1.0, 0.0),
        "B1A2": (0.0, 1.0),
        "B1B2": (0.0, 0.0),
    }


def test_experiment_rejects_single_photon_state():
    with pytest.raises(ValueError):
        ExperimentConfig.from_angles(0.5, 0.5, CHSH_SETTINGS, DensityMatrix(np.eye(2) / 2))
