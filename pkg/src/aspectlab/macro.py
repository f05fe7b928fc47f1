"""Macrostate-conditioned hidden-variables models.

Outcomes are conditioned on a macrostate instead of the instantaneous
hidden variable.  A macrostate is an occupation measure (weight vector) on
the same finite lambda-grid the hidden-variables models use, and which
macrostates occur may depend on the measurement context.  Within one
context the two sides still answer independently given the macrostate.

``conditioning="pair"`` lets the macrostate distribution depend on both
settings of a context.  ``conditioning="local"`` models are assembled from
per-side, per-setting kernels acting on a context-free source distribution
(see :func:`local_contextual_model`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

import numpy as np

from .distributions import (
    CHSH_SETTINGS,
    OBSERVABLES,
    OUTCOME_SIGNS,
    PAIRS,
    BivariateDistribution,
    ExperimentQuartet,
    QuadrivariateDistribution,
    Settings,
)
from .inequalities import finite_ensemble_chsh
from .hidden import DEFAULT_GRID, QuasiObjectivisticModel, SawtoothResponse, circle_grid
from .joint import FeasibilityResult, joint_exists, product_joint
from .quantum import DensityMatrix, projective_bivariate
from .sampling import chunk_generator

__all__ = [
    "ContextEntry",
    "ContextualValuesReport",
    "MacrostateModel",
    "MeasurementContext",
    "attempt_quad_construction",
    "context_independent_model",
    "contextual_values_demo",
    "local_contextual_model",
    "macro_bivariate",
    "macro_quartet",
    "quantum_target_model",
]

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementContext:
    side1: Literal["A1", "B1"]
    side2: Literal["A2", "B2"]
    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        if self.side1 not in ("A1", "B1") or self.side2 not in ("A2", "B2"):
            raise ValueError(f"malformed context ({self.side1}, {self.side2})")

    @property
    def pair(self) -> str:
        return self.side1 + self.side2

    @classmethod
    def from_pair(cls, pair: str, settings: Settings) -> "MeasurementContext":
        t1, t2 = Settings(*settings).for_pair(pair)
        return cls(pair[:2], pair[2:], t1, t2)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class ContextEntry:
    """Macrostates of one context.

    ``weights[k]`` is the probability of macrostate ``k``; ``response1[k]``
    and ``response2[k]`` are ``p(+ | k)`` on each side; ``occupations[k]``
    (optional) is the macrostate's occupation measure on the lambda-grid.
    """

    weights: np.ndarray
    response1: np.ndarray
    response2: np.ndarray
    occupations: np.ndarray | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        r1 = np.asarray(self.response1, dtype=float)
        r2 = np.asarray(self.response2, dtype=float)
        if w.ndim != 1 or r1.shape != w.shape or r2.shape != w.shape:
            raise ValueError("weights and responses must be 1-d arrays of equal length")
        if w.min() < 0 or abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError("macrostate weights must be nonnegative and sum to 1")
        if min(r1.min(), r2.min()) < 0 or max(r1.max(), r2.max()) > 1:
            raise ValueError("macrostate responses must lie in [0, 1]")
        arrays = [w, r1, r2]
        if self.occupations is not None:
            occ = np.asarray(self.occupations, dtype=float)
            if occ.ndim != 2 or occ.shape[0] != w.size:
                raise ValueError("occupations must have one row per macrostate")
            if occ.min() < 0 or np.max(np.abs(occ.sum(axis=1) - 1.0)) > WEIGHT_TOL:
                raise ValueError("each occupation measure must be normalized")
            arrays.append(occ)
            object.__setattr__(self, "occupations", occ)
        for a in arrays:
            a.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "response1", r1)
        object.__setattr__(self, "response2", r2)

    def bivariate(self) -> BivariateDistribution:
        t1 = np.stack([self.response1, 1 - self.response1], axis=1)
        t2 = np.stack([self.response2, 1 - self.response2], axis=1)
        return BivariateDistribution.normalized(np.einsum("k,ki,kj->ij", self.weights, t1, t2))

    def equilibrium(self) -> np.ndarray:
        """Occupation of the lambda-grid averaged over macrostates."""
        if self.occupations is None:
            raise ValueError("context carries no occupation measures")
        return self.weights @ self.occupations

    def same_as(self, other: "ContextEntry") -> bool:
        return self.weights.shape == other.weights.shape and bool(
            np.max(np.abs(self.weights - other.weights)) <= WEIGHT_TOL
        )


@dataclass(frozen=True, eq=False)
class MacrostateModel:
    settings: Settings
    contexts: Mapping[str, ContextEntry]
    grid: np.ndarray | None = None
    conditioning: Literal["pair", "local"] = "pair"
    description: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "settings", Settings(*self.settings))
        for pair in self.contexts:
            if pair not in PAIRS:
                raise ValueError(f"unknown context {pair!r}")
        if self.conditioning not in ("pair", "local"):
            raise ValueError("conditioning must be 'pair' or 'local'")

    def entry(self, context: MeasurementContext | str) -> ContextEntry:
        pair = context.pair if isinstance(context, MeasurementContext) else context
        if isinstance(context, MeasurementContext):
            expected = self.settings.for_pair(pair)
            if not np.allclose((context.theta1, context.theta2), expected, atol=1e-12):
                raise ValueError(f"context settings {context} do not match the model's settings")
        try:
            return self.contexts[pair]
        except KeyError:
            raise ValueError(f"context {pair!r} is not covered by this model") from None

    def measurement_contexts(self) -> list[MeasurementContext]:
        return [MeasurementContext.from_pair(p, self.settings) for p in PAIRS if p in self.contexts]


def macro_bivariate(model: MacrostateModel, context: MeasurementContext | str) -> BivariateDistribution:
    return model.entry(context).bivariate()


def macro_quartet(model: MacrostateModel) -> ExperimentQuartet:
    return ExperimentQuartet.from_mapping({p: macro_bivariate(model, p) for p in PAIRS})


def context_independent_model(
    hv: QuasiObjectivisticModel, settings: Settings = CHSH_SETTINGS
) -> MacrostateModel:
    """Every context shares one macrostate family: the grid points of ``hv``.

    Each macrostate is a point mass on one grid point (occupations are left
    implicit), so this is the hidden-variables model in macrostate form.
    """
    s = Settings(*settings)
    pts, w = hv.space.grid()
    entries = {}
    for pair in PAIRS:
        t1, t2 = s.for_pair(pair)
        entries[pair] = ContextEntry(w, hv.response1(pts, t1), hv.response2(pts, t2))
    return MacrostateModel(s, entries, grid=pts, description="context-independent")


_OUTCOME_PAIRS = tuple(itertools.product(range(2), repeat=2))


def quantum_target_model(
    state: DensityMatrix, settings: Settings = CHSH_SETTINGS, grid_size: int = DEFAULT_GRID
) -> MacrostateModel:
    """Contextual model whose bivariates are the quantum projective ones.

    Each context has four macrostates, one per outcome pair ``(x, y)``,
    weighted by the quantum probability and answering ``x`` and ``y``
    deterministically.  The occupation measure of macrostate ``(x, y)`` is
    uniform on the grid points where the saw-tooth answers at the context's
    settings are ``(x, y)``, so the equilibrium of a context pushed through
    the saw-tooth responses reproduces the same bivariate.
    """
    s = Settings(*settings)
    grid = circle_grid(grid_size)
    saw = SawtoothResponse()
    entries = {}
    for pair in PAIRS:
        t1, t2 = s.for_pair(pair)
        target = projective_bivariate(state, t1, t2).table
        cell1 = (1 - saw(grid, t1)).astype(int)
        cell2 = (1 - saw(grid, t2)).astype(int)
        occ = np.zeros((4, grid_size))
        for k, (x, y) in enumerate(_OUTCOME_PAIRS):
            mask = (cell1 == x) & (cell2 == y)
            occ[k] = mask / mask.sum() if mask.any() else np.full(grid_size, 1 / grid_size)
        weights = np.array([target[x, y] for x, y in _OUTCOME_PAIRS])
        r1 = np.array([1.0 - x for x, _ in _OUTCOME_PAIRS])
        r2 = np.array([1.0 - y for _, y in _OUTCOME_PAIRS])
        labels = tuple(f"{pair}:{'+-'[x]}{'+-'[y]}" for x, y in _OUTCOME_PAIRS)
        entries[pair] = ContextEntry(weights / weights.sum(), r1, r2, occ, labels)
    return MacrostateModel(s, entries, grid=grid, description="quantum-target")


def local_contextual_model(
    source: np.ndarray,
    kernels1: Mapping[str, np.ndarray],
    kernels2: Mapping[str, np.ndarray],
    responses1: Mapping[str, np.ndarray],
    responses2: Mapping[str, np.ndarray],
    settings: Settings = CHSH_SETTINGS,
) -> MacrostateModel:
    """Macrostates that depend on each side's own setting only.

    ``source`` is the context-free distribution of the prepared microstate.
    ``kernels1["A1"]`` is a row-stochastic matrix from microstates to side-1
    macrostates when ``A1`` is measured, and ``responses1["A1"]`` gives
    ``p(+ | macrostate)``; likewise for side 2.  The pair macrostate of a
    context is the product-indexed couple of the two side macrostates.
    """
    src = np.asarray(source, dtype=float)
    entries = {}
    for pair in PAIRS:
        s1, s2 = pair[:2], pair[2:]
        K1, K2 = np.asarray(kernels1[s1], float), np.asarray(kernels2[s2], float)
        joint = np.einsum("l,la,lb->ab", src, K1, K2)
        r1 = np.repeat(np.asarray(responses1[s1], float), K2.shape[1])
        r2 = np.tile(np.asarray(responses2[s2], float), K1.shape[1])
        w = joint.ravel()
        entries[pair] = ContextEntry(w / w.sum(), r1, r2)
    return MacrostateModel(Settings(*settings), entries, conditioning="local", description="local-contextual")


def _shared_single_responses(model: MacrostateModel) -> dict[str, np.ndarray] | None:
    """Per-observable responses when every context shares one macrostate family."""
    entries = [model.contexts[p] for p in PAIRS]
    first = entries[0]
    if not all(first.same_as(e) for e in entries[1:]):
        return None
    singles: dict[str, np.ndarray] = {}
    for pair, e in zip(PAIRS, entries):
        for obs, r in ((pair[:2], e.response1), (pair[2:], e.response2)):
            if obs in singles and np.max(np.abs(singles[obs] - r)) > WEIGHT_TOL:
                return None
            singles[obs] = r
    return singles


def attempt_quad_construction(model: MacrostateModel) -> FeasibilityResult:
    """Try to build a joint for the four contexts of ``model``.

    When all contexts share the same macrostate weights and each observable
    has the same response wherever it is measured, the joint is the product
    construction over macrostates.  Otherwise the question is handed to the
    linear program on the model's quartet.
    """
    missing = [p for p in PAIRS if p not in model.contexts]
    if missing:
        raise ValueError(f"model does not cover contexts {missing}")
    singles = _shared_single_responses(model)
    if singles is not None:
        w = model.contexts[PAIRS[0]].weights
        quad = product_joint(w, *(singles[o] for o in OBSERVABLES))
        return FeasibilityResult("feasible", witness=quad, method="product")
    return joint_exists(macro_quartet(model))


@dataclass(frozen=True)
class ContextualValuesReport:
    rounds: int
    consistent_fraction: float
    inconsistent_fraction: float
    remote_dependence_fraction: float
    local_dependence_fraction: float
    measured_chsh: float
    consistent_chsh: float | None
    seed: int
    per_round_consistent: np.ndarray = field(repr=False)


_ALL_ASSIGNMENTS = np.array(list(itertools.product(OUTCOME_SIGNS, repeat=4)))


def _exists_assignment(measured: np.ndarray) -> np.ndarray:
    """Exhaustive search over the 16 value assignments, one round per row.

    ``measured[r]`` holds the eight measured values: for each pair in PAIRS
    order, the side-1 then the side-2 value.
    """
    # positions of each observable among the eight measured slots
    cols = {"A1": (0, 2), "A2": (1, 5), "B2": (3, 7), "B1": (4, 6)}
    ok = np.zeros(measured.shape[0], dtype=bool)
    for assign in _ALL_ASSIGNMENTS:
        val = dict(zip(OBSERVABLES, assign))
        match = np.ones(measured.shape[0], dtype=bool)
        for obs, slots in cols.items():
            for sl in slots:
                match &= measured[:, sl] == val[obs]
        ok |= match
    return ok


def contextual_values_demo(
    quad_per_context: Sequence[QuadrivariateDistribution] | Mapping[str, QuadrivariateDistribution],
    rounds: int = 10_000,
    seed: int = 0,
) -> ContextualValuesReport:
    """Look for one context-independent value assignment per sampled round.

    Every round draws one shared uniform number (the source preparation) and
    turns it into a value quadruple in each context by inverse-CDF sampling
    from that context's joint; identical context joints therefore yield
    identical quadruples.  The measured pair of each context is read off
    its quadruple, and the round is consistent when a single assignment of
    ``(a1, b1, a2, b2)`` reproduces all eight measured values.

    Also reported: how often an observable's measured value differs between
    the two contexts measuring it (dependence on the remote setting), and
    how often its value in a context where its incompatible partner is
    measured differs from the value where it is measured itself (dependence
    on the local setting).
    """
    if isinstance(quad_per_context, Mapping):
        quads = [quad_per_context[p] for p in PAIRS]
    else:
        quads = list(quad_per_context)
    if len(quads) != 4:
        raise ValueError("need one quadrivariate distribution per context")
    rng = chunk_generator(seed, (0,), 0)
    u = rng.random(rounds)
    quadruples = []
    for q in quads:
        cdf = np.cumsum(q.atoms.ravel())
        idx = np.minimum(np.searchsorted(cdf, u * cdf[-1], side="right"), 15)
        quadruples.append(_ALL_ASSIGNMENTS[idx])
    ax = {o: i for i, o in enumerate(OBSERVABLES)}
    measured = np.empty((rounds, 8), dtype=int)
    for k, pair in enumerate(PAIRS):
        measured[:, 2 * k] = quadruples[k][:, ax[pair[:2]]]
        measured[:, 2 * k + 1] = quadruples[k][:, ax[pair[2:]]]
    consistent = _exists_assignment(measured)

    by_pair = dict(zip(PAIRS, quadruples))
    remote = np.zeros(rounds, dtype=bool)
    local = np.zeros(rounds, dtype=bool)
    for obs in OBSERVABLES:
        i = ax[obs]
        measuring = [p for p in PAIRS if obs in (p[:2], p[2:])]
        others = [p for p in PAIRS if p not in measuring]
        remote |= by_pair[measuring[0]][:, i] != by_pair[measuring[1]][:, i]
        for mp in measuring:
            for op in others:
                local |= by_pair[mp][:, i] != by_pair[op][:, i]

    e = [float(np.mean(measured[:, 2 * k] * measured[:, 2 * k + 1])) for k in range(4)]
    measured_chsh = abs(e[0] - e[1]) - e[3] - e[2]
    consistent_chsh = None
    if consistent.any():
        m = measured[consistent]
        # a consistent round defines the quadruple (a1, b1, a2, b2)
        q = np.stack([m[:, 0], m[:, 4], m[:, 1], m[:, 3]], axis=1)
        consistent_chsh = finite_ensemble_chsh(q)
    frac = float(consistent.mean())
    return ContextualValuesReport(
        rounds=rounds,
        consistent_fraction=frac,
        inconsistent_fraction=1.0 - frac,
        remote_dependence_fraction=float(remote.mean()),
        local_dependence_fraction=float(local.mean()),
        measured_chsh=float(measured_chsh),
        consistent_chsh=consistent_chsh,
        seed=seed,
        per_round_consistent=consistent,
    )
