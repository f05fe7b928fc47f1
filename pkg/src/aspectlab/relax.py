"""Relaxation of a microstate towards a context-dependent equilibrium.

The pair source prepares a microstate ``lambda_0`` uniformly on the
lambda-grid, independently of the settings.  Once the instruments of a
context are in place the microstate evolves under a continuous-time Markov
process whose stationary law is that context's equilibrium occupation:

* relaxation events (rate ``1/tau``) redraw ``lambda`` from the equilibrium;
* diffusion events (rate ``diffusion/tau``) propose a move of ``step`` grid
  points left or right, accepted by the Metropolis rule for the
  equilibrium.

Both kinds of event leave the equilibrium invariant.  A measurement lasting
``window`` reads out the saw-tooth answers at a time drawn uniformly from
the window, i.e. it samples the time-averaged occupation.  For
``window << tau`` this is the quasi-objectivistic saw-tooth model and for
``window >> tau`` it is the context's equilibrium statistics.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .distributions import PAIRS, BivariateDistribution, ExperimentQuartet
from .hidden import SawtoothResponse, chsh_sigma
from .inequalities import quartet_bell_lhs
from .macro import MacrostateModel, quantum_target_model
from .quantum import bell_state
from .sampling import DEFAULT_CHUNK, chunk_sizes, chunk_generator

__all__ = [
    "DEFAULT_WINDOWS",
    "RelaxationCurve",
    "RelaxationParams",
    "RelaxationPoint",
    "crossing_window",
    "equilibrium_quartet",
    "relaxation_sweep",
]

# windows in units of tau
DEFAULT_WINDOWS = (0.0, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0)

# RNG stream purposes within one context
_STREAM_STATE, _STREAM_MOVES = 0, 1


@dataclass(frozen=True)
class RelaxationParams:
    """Relaxation time and mixing parameters of the microstate process.

    ``n_samples`` is the number of measured pairs per window, shared evenly
    between the four contexts.
    """

    tau: float = 1.0
    window: float = 0.0
    diffusion: float = 1.0
    step: int = 10
    seed: int = 0
    n_samples: int = 100_000

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError("relaxation time tau must be positive")
        if self.window < 0:
            raise ValueError("window must be nonnegative")
        if self.diffusion < 0 or self.step < 0:
            raise ValueError("diffusion rate and step must be nonnegative")
        if self.n_samples < 4:
            raise ValueError("need at least one sample per context")

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(self.tau):
            d["tau"] = "inf"
        return d


@dataclass(frozen=True)
class RelaxationPoint:
    window: float
    ratio: float
    chsh: float
    sigma: float
    quartet: ExperimentQuartet = field(repr=False)


@dataclass(frozen=True)
class RelaxationCurve:
    params: RelaxationParams
    points: tuple[RelaxationPoint, ...]
    equilibrium_chsh: float
    n_per_context: int

    def rows(self) -> list[tuple[float, float, float]]:
        return [(p.ratio, p.chsh, p.sigma) for p in self.points]


def equilibrium_quartet(model: MacrostateModel) -> ExperimentQuartet:
    """Saw-tooth answers averaged over each context's equilibrium occupation."""
    if model.grid is None:
        raise ValueError("model has no lambda-grid")
    saw = SawtoothResponse()
    out = {}
    for pair in PAIRS:
        t1, t2 = model.settings.for_pair(pair)
        pi = model.contexts[pair].equilibrium()
        p1, p2 = saw(model.grid, t1), saw(model.grid, t2)
        table = np.einsum("l,li,lj->ij", pi, np.stack([p1, 1 - p1], 1), np.stack([p2, 1 - p2], 1))
        out[pair] = BivariateDistribution.normalized(table)
    return ExperimentQuartet.from_mapping(out)


def _sample_context(
    rng_state: np.random.Generator,
    rng_moves: np.random.Generator,
    m: int,
    *,
    window: float,
    params: RelaxationParams,
    pi: np.ndarray,
    answers1: np.ndarray,
    answers2: np.ndarray,
) -> np.ndarray:
    n_grid = pi.size
    lam0 = rng_state.integers(0, n_grid, m)
    u = rng_state.random(m) * window
    e = rng_state.standard_exponential(m)
    v = rng_state.random(m)

    tau = params.tau
    if math.isinf(tau):
        redraw = np.zeros(m, dtype=bool)
        moves = np.zeros(m, dtype=int)
    else:
        redraw = e * tau <= u
        moves = rng_moves.poisson(params.diffusion * u / tau)
        moves[redraw] = 0

    cdf = np.cumsum(pi)
    eq_idx = np.minimum(np.searchsorted(cdf, v * cdf[-1], side="right"), n_grid - 1)

    cur = lam0.copy()
    if params.step > 0:
        for k in range(int(moves.max(initial=0))):
            active = np.flatnonzero(moves > k)
            direction = np.where(rng_moves.random(active.size) < 0.5, -1, 1)
            prop = (cur[active] + direction * params.step) % n_grid
            p_cur, p_new = pi[cur[active]], pi[prop]
            ratio = np.where(p_cur > 0, p_new / np.where(p_cur > 0, p_cur, 1.0), 1.0)
            accept = rng_moves.random(active.size) < ratio
            cur[active[accept]] = prop[accept]
    lam = np.where(redraw, eq_idx, cur)
    o1 = answers1[lam]
    o2 = answers2[lam]
    return np.bincount(2 * o1 + o2, minlength=4).reshape(2, 2)


def _window_quartet(
    model: MacrostateModel, params: RelaxationParams, window: float, n_per_context: int, workers: int
) -> ExperimentQuartet:
    saw = SawtoothResponse()
    sizes = chunk_sizes(n_per_context, DEFAULT_CHUNK)
    jobs = []
    for k, pair in enumerate(PAIRS):
        t1, t2 = model.settings.for_pair(pair)
        kwargs = dict(
            window=window,
            params=params,
            pi=model.contexts[pair].equilibrium(),
            # outcome index 0 is "+"
            answers1=(1 - saw(model.grid, t1)).astype(int),
            answers2=(1 - saw(model.grid, t2)).astype(int),
        )
        for i, m in enumerate(sizes):
            rs = chunk_generator(params.seed, (k, _STREAM_STATE), i)
            rm = chunk_generator(params.seed, (k, _STREAM_MOVES), i)
            jobs.append((k, rs, rm, m, kwargs))

    def run(job):
        k, rs, rm, m, kwargs = job
        return k, _sample_context(rs, rm, m, **kwargs)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    counts = np.zeros((4, 2, 2), dtype=np.int64)
    for k, c in results:
        counts[k] += c
    return ExperimentQuartet.from_mapping(
        {pair: BivariateDistribution.from_counts(counts[k]) for k, pair in enumerate(PAIRS)}
    )


def relaxation_sweep(
    params: RelaxationParams,
    windows: Sequence[float] | None = None,
    model: MacrostateModel | None = None,
    workers: int = 1,
) -> RelaxationCurve:
    """Estimate Bell's combination as a function of the measurement window.

    ``windows`` are absolute durations in the units of ``tau``; by default
    ``DEFAULT_WINDOWS`` times ``tau`` (or the raw values when tau is
    infinite).  ``model`` supplies each context's equilibrium occupation and
    defaults to the quantum-target model of phi_plus at the CHSH settings.
    Sampling uses common random numbers across windows.
    """
    if model is None:
        model = quantum_target_model(bell_state())
    if model.grid is None or any(model.contexts[p].occupations is None for p in PAIRS):
        raise ValueError("relaxation needs a model with occupation measures on a lambda-grid")
    if windows is None:
        scale = 1.0 if math.isinf(params.tau) else params.tau
        windows = [w * scale for w in DEFAULT_WINDOWS]
    if any(w < 0 for w in windows):
        raise ValueError("windows must be nonnegative")
    n_per_context = params.n_samples // 4
    points = []
    for w in windows:
        q = _window_quartet(model, params, float(w), n_per_context, workers)
        ratio = 0.0 if math.isinf(params.tau) else w / params.tau
        points.append(RelaxationPoint(float(w), ratio, quartet_bell_lhs(q), chsh_sigma(q, n_per_context), q))
    eq = quartet_bell_lhs(equilibrium_quartet(model))
    return RelaxationCurve(params, tuple(points), eq, n_per_context)


def crossing_window(curve: RelaxationCurve, bound: float = 2.0, n_sigma: float = 3.0) -> float | None:
    """First window whose estimate exceeds ``bound`` by more than ``n_sigma`` errors.

    Returns ``None`` when no window does, or when the first window already
    does (then nothing is crossed).
    """
    pts = curve.points
    for i, p in enumerate(pts):
        if p.chsh - n_sigma * p.sigma > bound:
            return p.window if i > 0 and pts[i - 1].chsh <= bound + n_sigma * pts[i - 1].sigma else None
    return None
