"""Existence of a joint distribution for the four Bell experiments.

A quartet of bivariate distributions admits a quadrivariate joint with
those marginals exactly when every BCHS variant holds.  :func:`joint_exists`
decides the question as a linear program over the 16 atoms and
:func:`fine_equivalence` checks that both routes agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .distributions import (
    OBSERVABLES,
    OUTCOME_SIGNS,
    PAIRS,
    ExperimentQuartet,
    QuadrivariateDistribution,
)
from .inequalities import (
    SATISFACTION_TOL,
    InconsistentQuartetError,
    bchs_all_variants,
    bchs_variants,
    max_single_discrepancy,
)
from .simplex import phase_one

__all__ = [
    "Certificate",
    "ConsistencyReport",
    "FeasibilityResult",
    "check_consistency",
    "fine_equivalence",
    "joint_exists",
    "marginal_constraints",
    "product_joint",
]

CONSISTENCY_TOL = 1e-9
WITNESS_TOL = 1e-8


@dataclass(frozen=True)
class ConsistencyReport:
    passed: bool
    max_discrepancy: float
    per_observable: dict[str, float]


def check_consistency(quartet: ExperimentQuartet, tol: float = CONSISTENCY_TOL) -> ConsistencyReport:
    """Compare each observable's marginal across the two experiments measuring it."""
    disc, per_obs = max_single_discrepancy(quartet)
    return ConsistencyReport(passed=disc <= tol, max_discrepancy=disc, per_observable=per_obs)


@dataclass(frozen=True)
class Certificate:
    """A BCHS variant whose value leaves [-1, 0]."""

    variant_index: int
    value: float
    label: str


@dataclass(frozen=True)
class FeasibilityResult:
    status: Literal["feasible", "infeasible"]
    witness: QuadrivariateDistribution | None = None
    certificate: Certificate | None = None
    infeasibility: float = 0.0
    method: Literal["lp", "product"] = "lp"

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def marginal_constraints() -> np.ndarray:
    """Rows mapping the 16 atoms to the 16 pair probabilities, in PAIRS order.

    Row ``4 * k + 2 * i + j`` sums the atoms with outcome index ``i`` on the
    side-1 observable and ``j`` on the side-2 observable of ``PAIRS[k]``.
    """
    M = np.zeros((16, 16))
    for col, idx in enumerate(itertools.product(range(2), repeat=4)):
        val = dict(zip(OBSERVABLES, idx))
        for k, pair in enumerate(PAIRS):
            M[4 * k + 2 * val[pair[:2]] + val[pair[2:]], col] = 1.0
    return M


def _certificate(quartet: ExperimentQuartet) -> Certificate:
    report = bchs_all_variants(quartet)
    v = bchs_variants()[report.worst_index]
    return Certificate(v.index, float(report.values[report.worst_index]), v.label())


def joint_exists(quartet: ExperimentQuartet) -> FeasibilityResult:
    """Decide by phase-1 simplex whether a joint with these marginals exists.

    Raises
    ------
    InconsistentQuartetError
        If an observable's marginal differs between its two experiments by
        more than 1e-9.
    """
    quartet = quartet.normalized()
    report = check_consistency(quartet)
    if not report.passed:
        raise InconsistentQuartetError(
            f"quartet violates local commutativity (discrepancy {report.max_discrepancy:.3g})"
        )
    M = marginal_constraints()
    A = np.vstack([M, np.ones((1, 16))])
    b = np.append(quartet.as_array().ravel(), 1.0)
    sol = phase_one(A, b)
    if not sol.feasible:
        return FeasibilityResult(
            "infeasible", certificate=_certificate(quartet), infeasibility=sol.infeasibility
        )
    witness = QuadrivariateDistribution.from_atoms(sol.x / sol.x.sum())
    err = np.max(np.abs(M @ witness.atoms.ravel() - b[:16]))
    if err > WITNESS_TOL:
        raise RuntimeError(f"simplex witness misses the marginals by {err:.3g}")
    return FeasibilityResult("feasible", witness=witness, infeasibility=sol.infeasibility)


def fine_equivalence(quartet: ExperimentQuartet) -> bool:
    """True when LP feasibility and all-variant BCHS satisfaction agree."""
    lp = joint_exists(quartet)
    return lp.feasible == bchs_all_variants(quartet.normalized(), tol=SATISFACTION_TOL).satisfied


def product_joint(weights, p_a1, p_b1, p_a2, p_b2) -> QuadrivariateDistribution:
    """Joint built from single-observable response probabilities.

    Each ``p_*`` is an array of ``p(+ | lambda)`` over a finite hidden-variable
    space carrying ``weights``; the atoms are
    ``sum_lambda w(lambda) p(a1|lambda) p(b1|lambda) p(a2|lambda) p(b2|lambda)``.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.min() < 0 or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a nonnegative vector summing to 1")
    tables = []
    for p in (p_a1, p_b1, p_a2, p_b2):
        p = np.broadcast_to(np.asarray(p, dtype=float), w.shape)
        if p.min() < 0 or p.max() > 1:
            raise ValueError("response probabilities must lie in [0, 1]")
        tables.append(np.stack([p, 1.0 - p], axis=1))
    atoms = np.einsum("l,li,lj,lk,lm->ijkm", w, *tables)
    return QuadrivariateDistribution.from_atoms(atoms)


def quad_from_signs(values) -> QuadrivariateDistribution:
    """Empirical joint of ``(N, 4)`` +-1 quadruples."""
    v = np.atleast_2d(np.asarray(values))
    if v.shape[0] == 0 or v.shape[1] != 4 or not np.all(np.abs(v) == 1):
        raise ValueError("quadruples must be rows of four +-1 values")
    idx = (v == OUTCOME_SIGNS[1]).astype(int)
    flat = idx @ np.array([8, 4, 2, 1])
    counts = np.bincount(flat, minlength=16).astype(float)
    return QuadrivariateDistribution.from_atoms(counts / counts.sum())
