"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n>: PASS|FAIL ...`` line, also
collected into a terminal summary section by conftest.
"""

import itertools
import math

import numpy as np
import pytest

import oracles
from conftest import record_acceptance
from aspectlab.cli import main
from aspectlab.distributions import CHSH_SETTINGS, PAIRS, Settings
from aspectlab.ensembles import noisy_pr_quartet, random_quad_quartet
from aspectlab.hidden import hv_chsh, hv_product_joint, hv_quartet, random_finite_model, sawtooth_model
from aspectlab.inequalities import bchs_all_variants, bchs_variants, finite_ensemble_chsh, quartet_bell_lhs
from aspectlab.joint import joint_exists
from aspectlab.macro import attempt_quad_construction, context_independent_model, macro_quartet, quantum_target_model
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
from aspectlab.quantum import bell_state, random_density_matrix
from aspectlab.relax import RelaxationParams, crossing_window, relaxation_sweep

GAMMAS = np.round(np.linspace(0, 1, 11), 10)
INTERIOR = GAMMAS[1:-1]


def verdict(n: int, ok: bool, detail: str) -> None:
    record_acceptance(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_criterion_1_chsh_maximum():
    value = quartet_bell_lhs(standard_aspect_quartet(CHSH_SETTINGS, bell_state("phi_plus")))
    oracle = oracles.quantum_chsh(oracles.phi_plus(), oracles.CHSH_ANGLES)
    err = max(abs(value - oracle), abs(value - 2 * math.sqrt(2)))
    verdict(1, err <= 1e-9, f"CHSH maximum {value:.15f}, |err| = {err:.2e} (tol 1e-9)")


def test_criterion_2_arm_probability_structure():
    rng = np.random.default_rng(20)
    worst_marg = worst_sum = 0.0
    zero_ok = True
    for k in range(200):
        rho = random_density_matrix(2, rng, rank=1 if k % 2 else None)
        theta, theta_p = rng.uniform(-math.pi, math.pi, 2)
        for g in GAMMAS:
            t = arm_probabilities(rho, ArmConfig(float(g), theta, theta_p))
            zero_ok &= t[0, 0] == 0.0
            e = oracles.trace_expect(rho.matrix, oracles.projector_plus(theta))
            f = oracles.trace_expect(rho.matrix, oracles.projector_plus(theta_p))
            worst_marg = max(worst_marg, abs(t[0].sum() - g * e), abs(t[:, 0].sum() - (1 - g) * f))
            worst_sum = max(worst_sum, abs(t.sum() - 1.0))
    ok = zero_ok and worst_marg <= 1e-12 and worst_sum <= 1e-12
    verdict(
        2,
        ok,
        f"2200 arm tables: p(+,+)==0 exactly {zero_ok}, marginal err {worst_marg:.1e}, sum err {worst_sum:.1e} (tol 1e-12)",
    )


def test_criterion_3_povm_laws():
    rng = np.random.default_rng(30)
    complete = fact = 0.0
    min_eig = np.inf
    for _ in range(20):
        a1, b1, a2, b2 = rng.uniform(-math.pi, math.pi, 4)
        for g1, g2 in itertools.product(GAMMAS, repeat=2):
            arm1, arm2 = ArmConfig(float(g1), a1, b1), ArmConfig(float(g2), a2, b2)
            R1, R2 = arm_povm(arm1), arm_povm(arm2)
            P = pair_povm(ExperimentConfig(arm1, arm2))
            complete = max(
                complete,
                np.abs(R1.total() - np.eye(2)).max(),
                np.abs(R2.total() - np.eye(2)).max(),
                np.abs(P.total() - np.eye(4)).max(),
            )
            min_eig = min(min_eig, R1.min_eigenvalue(), R2.min_eigenvalue(), P.min_eigenvalue())
            ref1 = oracles.arm_elements(float(g1), a1, b1)
            ref2 = oracles.arm_elements(float(g2), a2, b2)
            for i, j, k, l in itertools.product(range(2), repeat=4):
                fact = max(
                    fact,
                    np.abs(P[i, j, k, l] - np.kron(R1[i, j], R2[k, l])).max(),
                    np.abs(P[i, j, k, l] - np.kron(ref1[i, j], ref2[k, l])).max(),
                )
    ok = complete <= 1e-12 and min_eig >= -1e-10 and fact <= 1e-12
    verdict(
        3,
        ok,
        f"2420 configs: completeness {complete:.1e}, min eigenvalue {min_eig:.1e}, factorization {fact:.1e}",
    )


def test_criterion_4_fine_equivalence():
    rng = np.random.default_rng(40)
    agree = 0
    feasible_pr = infeasible_pr = 0
    n = 0
    for family in ("random_quad", "noisy_pr"):
        for _ in range(1000):
            q = random_quad_quartet(rng) if family == "random_quad" else noisy_pr_quartet(rng)
            lp = joint_exists(q).feasible
            bchs = bchs_all_variants(q, tol=1e-9).satisfied
            agree += lp == bchs
            n += 1
            if family == "noisy_pr":
                feasible_pr += lp
                infeasible_pr += not lp
    spans = feasible_pr > 0 and infeasible_pr > 0
    ok = agree == n and spans
    verdict(
        4,
        ok,
        f"{agree}/{n} quartets agree; noisy PR feasible {feasible_pr}, infeasible {infeasible_pr}",
    )


def test_criterion_5_possessed_values_bound():
    types = np.array(list(itertools.product((1, -1), repeat=4)))
    exhaustive = max(finite_ensemble_chsh(t) for t in types)
    rng = np.random.default_rng(50)
    worst = -np.inf
    for _ in range(100_000):
        size = int(rng.integers(1, 40))
        worst = max(worst, finite_ensemble_chsh(types[rng.integers(0, 16, size)]))
    ok = exhaustive <= 2 + 1e-12 and worst <= 2 + 1e-12
    verdict(5, ok, f"16 types max {exhaustive:.15f}, 1e5 ensembles max {worst:.15f} (bound 2 + 1e-12)")


def test_criterion_6_quasi_objectivistic_models():
    rng = np.random.default_rng(60)
    worst_chsh = -np.inf
    worst_match = 0.0
    infeasible = 0
    for k in range(10_000):
        angles = Settings(*rng.uniform(-math.pi, math.pi, 4)) if k % 4 == 3 else CHSH_SETTINGS
        model = random_finite_model(rng, angles, deterministic=k % 2 == 0)
        q = hv_quartet(model, angles)
        worst_chsh = max(worst_chsh, hv_chsh(model, angles))
        res = joint_exists(q)
        infeasible += not res.feasible
        witness = hv_product_joint(model, angles)
        worst_match = max(worst_match, np.abs(witness.quartet().as_array() - q.as_array()).max())
    ok = worst_chsh <= 2 + 1e-9 and infeasible == 0 and worst_match <= 1e-8
    verdict(
        6,
        ok,
        f"1e4 models: max CHSH {worst_chsh:.12f}, infeasible {infeasible}, product-joint marginal err {worst_match:.1e}",
    )


def test_criterion_7_generalized_experiment():
    worst_low = np.inf
    worst_high = -np.inf
    all_ok = True
    for g1, g2 in itertools.product(INTERIOR, repeat=2):
        quad = quad_probabilities(ExperimentConfig.from_angles(float(g1), float(g2)))
        r = bchs_all_variants(quad.quartet())
        all_ok &= r.satisfied
        worst_low, worst_high = min(worst_low, r.worst_low), max(worst_high, r.worst_high)
    quads = {p: quad_probabilities(c).atoms for p, c in standard_aspect_configs().items()}
    distinct = min(np.abs(quads[p] - quads[r]).max() for p, r in itertools.combinations(PAIRS, 2))
    own = {p: quad_probabilities(c).marginal(p).table for p, c in standard_aspect_configs().items()}
    mismatch = max(
        np.abs(quad_probabilities(c).marginal(p).table - own[p]).max()
        for _, c in standard_aspect_configs().items()
        for p in PAIRS
    )
    ok = all_ok and distinct > 1e-6 and mismatch > 1e-3
    verdict(
        7,
        ok,
        f"81 interior (g1,g2): BCHS values in [{worst_low:.4f}, {worst_high:.4f}], satisfied {all_ok}; "
        f"standard quads min L-inf {distinct:.3f}, max cross-marginal mismatch {mismatch:.3f}",
    )


def test_criterion_8_contextual_reproduction():
    rho = oracles.phi_plus()
    q = macro_quartet(quantum_target_model(bell_state()))
    repro = max(
        np.abs(q[p].table - oracles.bivariate(rho, *CHSH_SETTINGS.for_pair(p))).max() for p in PAIRS
    )
    res = attempt_quad_construction(quantum_target_model(bell_state()))
    cert = res.certificate
    cert_ok = (
        not res.feasible
        and cert is not None
        and bchs_variants()[cert.variant_index].evaluate(q) == pytest.approx(cert.value, abs=1e-12)
        and (cert.value < -1 - 1e-9 or cert.value > 1e-9)
    )
    indep = attempt_quad_construction(context_independent_model(sawtooth_model(360))).feasible
    ok = repro <= 1e-9 and cert_ok and indep
    cert_text = f"{cert.value:.6f}" if cert else "none"
    verdict(
        8,
        ok,
        f"reproduction err {repro:.1e}; quantum target infeasible with certificate {cert_text}; "
        f"context-independent feasible {indep}",
    )


def test_criterion_9_relaxation_endpoints():
    params = RelaxationParams()
    curve = relaxation_sweep(params)
    first, last = curve.points[0], curve.points[-1]
    cross = crossing_window(curve)
    low_ok = first.window == 0 and first.chsh <= 2 + 3 * first.sigma
    high_ok = last.ratio == pytest.approx(100) and abs(last.chsh - 2 * math.sqrt(2)) <= 3 * last.sigma
    cross_ok = cross is not None and first.window < cross < last.window
    verdict(
        9,
        low_ok and high_ok and cross_ok,
        f"n={params.n_samples}/window: window 0 CHSH {first.chsh:.4f} +- {first.sigma:.4f}, "
        f"100 tau CHSH {last.chsh:.4f} +- {last.sigma:.4f} (target {curve.equilibrium_chsh:.6f}), crosses 2 at {cross}",
    )


STOCHASTIC_RUNS = [
    ["hv-run", "--samples", "200000", "--seed", "7"],
    ["macro-run", "--rounds", "20000", "--seed", "7"],
    ["relax-sweep", "--samples", "100000", "--seed", "7"],
    ["fine-check", "--n-quads", "200", "--n-pr", "200", "--seed", "7"],
]


def test_criterion_10_reproducibility(tmp_path):
    differing = []
    for argv in STOCHASTIC_RUNS:
        outputs = []
        for workers in (1, 1, 4, 8):
            path = tmp_path / f"{argv[0]}-{len(outputs)}.csv"
            code = main([*argv, "--workers", str(workers), "-o", str(path)])
            assert code == 0
            outputs.append(path.read_bytes())
        if any(o != outputs[0] for o in outputs[1:]):
            differing.append(argv[0])
    ok = not differing
    verdict(
        10,
        ok,
        f"{len(STOCHASTIC_RUNS)} stochastic subcommands x runs at 1,1,4,8 workers: "
        f"{'all byte-identical' if ok else 'differ: ' + ', '.join(differing)}",
    )
