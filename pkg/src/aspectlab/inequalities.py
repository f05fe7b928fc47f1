"""Bell's correlation inequality and the BCHS probability inequality.

The probability symbols of the BCHS expression are read at outcome ``+``
for every observable::

    p(b1,a2) + p(b1,b2) + p(a1,b2) - p(a1,a2) - p(b1) - p(b2)  in  [-1, 0]

Its orbit under outcome flips and A/B and side swaps is generated
programmatically in :func:`bchs_variants`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .distributions import (
    OBSERVABLES,
    OUTCOME_SIGNS,
    PAIRS,
    ExperimentQuartet,
    QuadrivariateDistribution,
)

__all__ = [
    "BCHSReport",
    "BCHSVariant",
    "CorrelationQuad",
    "InconsistentQuartetError",
    "SATISFACTION_TOL",
    "bchs_all_variants",
    "bchs_value",
    "bchs_variants",
    "bell_lhs",
    "correlation_of",
    "finite_ensemble_chsh",
    "quartet_bell_lhs",
]

SATISFACTION_TOL = 1e-9
CONSISTENCY_TOL = 1e-9


class InconsistentQuartetError(ValueError):
    """Single-observable marginals disagree between two experiments."""


@dataclass(frozen=True)
class CorrelationQuad:
    e_a1a2: float
    e_a1b2: float
    e_b1a2: float
    e_b1b2: float

    def __post_init__(self) -> None:
        for name in ("e_a1a2", "e_a1b2", "e_b1a2", "e_b1b2"):
            v = getattr(self, name)
            if not -1.0 - 1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"{name}={v} outside [-1, 1]")

    @classmethod
    def from_quartet(cls, quartet: ExperimentQuartet) -> "CorrelationQuad":
        return cls(*quartet.correlations())


def correlation_of(biv) -> float:
    """Correlation sum_{x,y} x y p(x, y) of a dichotomic bivariate."""
    return biv.correlation()


def bell_lhs(corrs: CorrelationQuad) -> float:
    """``|<A1A2> - <A1B2>| - <B1B2> - <B1A2>``; local models keep it <= 2."""
    return abs(corrs.e_a1a2 - corrs.e_a1b2) - corrs.e_b1b2 - corrs.e_b1a2


def quartet_bell_lhs(quartet: ExperimentQuartet) -> float:
    return bell_lhs(CorrelationQuad.from_quartet(quartet))


def bchs_value(quartet: ExperimentQuartet, singles_b1: float, singles_b2: float) -> float:
    """BCHS combination with caller-supplied single probabilities p(B1=+), p(B2=+)."""
    for name, v in (("singles_b1", singles_b1), ("singles_b2", singles_b2)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    return (
        quartet.b1a2.p(1, 1)
        + quartet.b1b2.p(1, 1)
        + quartet.a1b2.p(1, 1)
        - quartet.a1a2.p(1, 1)
        - singles_b1
        - singles_b2
    )


def finite_ensemble_chsh(quadruples) -> float:
    """Bell's combination of the empirical correlations of value quadruples.

    ``quadruples`` is an ``(N, 4)`` array of +-1 values in column order
    ``(a1, b1, a2, b2)``, one row per particle pair.
    """
    q = np.asarray(quadruples)
    if q.ndim == 1:
        q = q.reshape(1, -1)
    if q.shape[0] == 0:
        raise ValueError("finite_ensemble_chsh needs at least one quadruple")
    if q.shape[1] != 4 or not np.all(np.abs(q) == 1):
        raise ValueError("quadruples must be rows of four +-1 values")
    a1, b1, a2, b2 = (q[:, i].astype(float) for i in range(4))
    corrs = CorrelationQuad(
        e_a1a2=float(np.mean(a1 * a2)),
        e_a1b2=float(np.mean(a1 * b2)),
        e_b1a2=float(np.mean(b1 * a2)),
        e_b1b2=float(np.mean(b1 * b2)),
    )
    return bell_lhs(corrs)


# --- variant orbit -------------------------------------------------------

# base expression: pair terms (coef, X, Y) and single terms (coef, X), all at "+"
_BASE_PAIRS = ((1, "B1", "A2"), (1, "B1", "B2"), (1, "A1", "B2"), (-1, "A1", "A2"))
_BASE_SINGLES = ((-1, "B1"), (-1, "B2"))

_SYMMETRIES = (
    {"A1": "A1", "B1": "B1", "A2": "A2", "B2": "B2"},
    {"A1": "B1", "B1": "A1", "A2": "A2", "B2": "B2"},
    {"A1": "A1", "B1": "B1", "A2": "B2", "B2": "A2"},
    {"A1": "B1", "B1": "A1", "A2": "B2", "B2": "A2"},
)
_SIDE_SWAP = {"A1": "A2", "B1": "B2", "A2": "A1", "B2": "B1"}


@dataclass(frozen=True)
class BCHSVariant:
    """One member of the BCHS orbit, stored as signed probability terms.

    ``pair_terms`` holds ``(coef, pair, x, y)`` meaning ``coef * p(pair; x, y)``
    with ``x`` the side-1 and ``y`` the side-2 outcome sign; ``single_terms``
    holds ``(coef, observable, x)``.
    """

    index: int
    pair_terms: tuple[tuple[int, str, int, int], ...]
    single_terms: tuple[tuple[int, str, int], ...]

    def label(self) -> str:
        def sgn(v: int) -> str:
            return "+" if v > 0 else "-"

        parts = []
        for c, pair, x, y in self.pair_terms:
            parts.append(f"{sgn(c)} p({pair[:2]}{sgn(x)},{pair[2:]}{sgn(y)})")
        for c, obs, x in self.single_terms:
            parts.append(f"{sgn(c)} p({obs}{sgn(x)})")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s

    def atom_vector(self) -> np.ndarray:
        """Coefficients of this variant as a linear functional on the 16 atoms."""
        v = np.zeros((2, 2, 2, 2))
        for signs in itertools.product(OUTCOME_SIGNS, repeat=4):
            val = dict(zip(OBSERVABLES, signs))
            idx = tuple(OUTCOME_SIGNS.index(s) for s in signs)
            for c, pair, x, y in self.pair_terms:
                if val[pair[:2]] == x and val[pair[2:]] == y:
                    v[idx] += c
            for c, obs, x in self.single_terms:
                if val[obs] == x:
                    v[idx] += c
        return v

    def evaluate(self, quartet: ExperimentQuartet) -> float:
        total = 0.0
        for c, pair, x, y in self.pair_terms:
            total += c * quartet[pair].p(x, y)
        for c, obs, x in self.single_terms:
            total += c * float(quartet.single(obs)[OUTCOME_SIGNS.index(x)])
        return total

    def evaluate_quad(self, quad: QuadrivariateDistribution) -> float:
        return float(np.sum(self.atom_vector() * quad.atoms))


def _transform(perm: dict[str, str], flips: dict[str, int]):
    pair_terms = []
    for c, x, y in _BASE_PAIRS:
        px, py = perm[x], perm[y]
        sx, sy = flips[x], flips[y]
        if px.endswith("2"):
            px, py, sx, sy = py, px, sy, sx
        pair_terms.append((c, px + py, sx, sy))
    single_terms = tuple((c, perm[x], flips[x]) for c, x in _BASE_SINGLES)
    return tuple(pair_terms), single_terms


@lru_cache(maxsize=None)
def bchs_variants() -> tuple[BCHSVariant, ...]:
    """The deduplicated orbit of the BCHS expression.

    Two variants are identified when they define the same functional on
    joint distributions.  The orbit has eight members that pair up as
    ``f`` and ``-1 - f``, so each facet pair of the correlation polytope
    is covered twice over.
    """
    perms = []
    for sym in _SYMMETRIES:
        perms.append(sym)
        perms.append({k: sym[_SIDE_SWAP[k]] for k in OBSERVABLES})
    seen: set[tuple] = set()
    out: list[BCHSVariant] = []
    for perm in perms:
        for signs in itertools.product(OUTCOME_SIGNS, repeat=4):
            flips = dict(zip(OBSERVABLES, signs))
            pair_terms, single_terms = _transform(perm, flips)
            cand = BCHSVariant(len(out), pair_terms, single_terms)
            v = cand.atom_vector().ravel()
            key = tuple(np.round(v).astype(int))
            if key in seen:
                continue
            seen.add(key)
            out.append(cand)
    return tuple(out)


def max_single_discrepancy(quartet: ExperimentQuartet) -> tuple[float, dict[str, float]]:
    per_obs = {}
    for obs in OBSERVABLES:
        pairs = [p for p in PAIRS if obs in (p[:2], p[2:])]
        m0 = quartet.single(obs, pairs[0])
        m1 = quartet.single(obs, pairs[1])
        per_obs[obs] = float(np.max(np.abs(m0 - m1)))
    return max(per_obs.values()), per_obs


@dataclass(frozen=True)
class BCHSReport:
    values: np.ndarray
    worst_low: float
    worst_high: float
    satisfied: bool
    worst_index: int
    worst_violation: float

    @property
    def worst_variant(self) -> BCHSVariant:
        return bchs_variants()[self.worst_index]


def bchs_all_variants(quartet: ExperimentQuartet, tol: float = SATISFACTION_TOL) -> BCHSReport:
    """Evaluate every BCHS variant; satisfied iff all lie in [-1 - tol, tol]."""
    disc, _ = max_single_discrepancy(quartet)
    if disc > CONSISTENCY_TOL:
        raise InconsistentQuartetError(
            f"single-observable marginals disagree by {disc:.3g} between experiments"
        )
    values = np.array([v.evaluate(quartet) for v in bchs_variants()])
    violation = np.maximum(values, -1.0 - values)
    worst = int(np.argmax(violation))
    return BCHSReport(
        values=values,
        worst_low=float(values.min()),
        worst_high=float(values.max()),
        satisfied=bool(values.min() >= -1.0 - tol and values.max() <= tol),
        worst_index=worst,
        worst_violation=float(violation[worst]),
    )
