"""Quasi-objectivistic local hidden-variables models.

A hidden variable ``lambda`` is prepared at the source independently of
the later measurements.  Each side answers with ``p(+ | lambda, theta)``
for its own setting only, and the two sides are conditionally independent
given ``lambda``.  The default space is the polarization circle [0, pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Protocol, Union

import numpy as np

from .distributions import (
    CHSH_SETTINGS,
    PAIRS,
    BivariateDistribution,
    ExperimentQuartet,
    QuadrivariateDistribution,
    Settings,
)
from .inequalities import quartet_bell_lhs
from .joint import product_joint
from .quantum import canonical_angle
from .sampling import DEFAULT_CHUNK, run_chunked

__all__ = [
    "DEFAULT_GRID",
    "ConstantResponse",
    "FitReport",
    "HiddenVariableSpace",
    "MonteCarlo",
    "QuasiObjectivisticModel",
    "ResponseFunction",
    "SawtoothResponse",
    "TabulatedResponse",
    "VisibilityResponse",
    "best_lhv_fit",
    "chsh_sigma",
    "hv_bivariate",
    "hv_chsh",
    "hv_product_joint",
    "hv_quartet",
    "random_finite_model",
    "sawtooth_correlation",
    "sawtooth_model",
]

DEFAULT_GRID = 3600


def circle_grid(n: int = DEFAULT_GRID) -> np.ndarray:
    """Cell midpoints of a uniform ``n``-point grid on [0, pi)."""
    return (np.arange(n) + 0.5) * np.pi / n


@dataclass(frozen=True, eq=False)
class HiddenVariableSpace:
    """Either a weighted finite set of points or the continuous circle [0, pi)."""

    kind: Literal["finite_grid", "continuous_circle"]
    points: np.ndarray | None = None
    weights: np.ndarray | None = None
    grid_size: int = DEFAULT_GRID

    def __post_init__(self) -> None:
        if self.kind == "finite_grid":
            if self.points is None:
                raise ValueError("finite_grid needs points")
            pts = np.asarray(self.points, dtype=float)
            w = np.full(pts.shape, 1 / pts.size) if self.weights is None else np.asarray(self.weights, float)
            if pts.ndim != 1 or w.shape != pts.shape:
                raise ValueError("points and weights must be 1-d arrays of equal length")
            if w.min() < 0 or abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("hidden-variable weights must be nonnegative and sum to 1")
            pts.setflags(write=False)
            w.setflags(write=False)
            object.__setattr__(self, "points", pts)
            object.__setattr__(self, "weights", w)
        elif self.kind != "continuous_circle":
            raise ValueError(f"unknown hidden-variable space kind {self.kind!r}")

    @classmethod
    def uniform_grid(cls, n: int = DEFAULT_GRID) -> "HiddenVariableSpace":
        return cls("finite_grid", circle_grid(n))

    @classmethod
    def circle(cls, grid_size: int = DEFAULT_GRID) -> "HiddenVariableSpace":
        return cls("continuous_circle", grid_size=grid_size)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Points and weights used for exact summation."""
        if self.kind == "finite_grid":
            return self.points, self.weights
        pts = circle_grid(self.grid_size)
        return pts, np.full(pts.size, 1 / pts.size)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "finite_grid":
            idx = rng.choice(self.points.size, size=n, p=self.weights)
            return self.points[idx]
        return rng.uniform(0.0, np.pi, size=n)


class ResponseFunction(Protocol):
    deterministic: bool

    def __call__(self, lam: np.ndarray, theta: float) -> np.ndarray:
        """Probability of outcome +1 at setting ``theta`` for each ``lam``."""
        ...


@dataclass(frozen=True)
class SawtoothResponse:
    """Deterministic ``+1`` iff ``cos 2(theta - lambda) >= 0``."""

    deterministic: bool = field(default=True, init=False)

    def __call__(self, lam, theta):
        return (np.cos(2 * (theta - np.asarray(lam, dtype=float))) >= 0).astype(float)


@dataclass(frozen=True)
class VisibilityResponse:
    """Saw-tooth answer kept with probability ``(1 + visibility) / 2``."""

    visibility: float = 1.0
    deterministic: bool = field(default=False, init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError("visibility must lie in [0, 1]")

    def __call__(self, lam, theta):
        s = np.where(np.cos(2 * (theta - np.asarray(lam, dtype=float))) >= 0, 1.0, -1.0)
        return 0.5 * (1.0 + self.visibility * s)


@dataclass(frozen=True)
class ConstantResponse:
    p: float = 0.5
    deterministic: bool = field(default=False, init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("response probability must lie in [0, 1]")
        object.__setattr__(self, "deterministic", self.p in (0.0, 1.0))

    def __call__(self, lam, theta):
        return np.full(np.shape(lam), self.p, dtype=float)


@dataclass(frozen=True, eq=False)
class TabulatedResponse:
    """Response tables over the points of a finite space, one per setting."""

    points: np.ndarray
    table: dict[float, np.ndarray]
    deterministic: bool = field(default=False, init=False)

    def __post_init__(self) -> None:
        tab = {}
        for theta, p in self.table.items():
            p = np.asarray(p, dtype=float)
            if p.shape != np.shape(self.points):
                raise ValueError("response table does not match the space points")
            if p.min() < 0 or p.max() > 1:
                raise ValueError("response probabilities must lie in [0, 1]")
            tab[canonical_angle(theta)] = p
        det = all(np.all((p == 0) | (p == 1)) for p in tab.values())
        object.__setattr__(self, "table", tab)
        object.__setattr__(self, "deterministic", bool(det))

    def __call__(self, lam, theta):
        key = canonical_angle(theta)
        if key not in self.table:
            raise KeyError(f"no response tabulated for setting {theta}")
        order = np.argsort(self.points)
        pos = order[np.searchsorted(self.points, lam, sorter=order)]
        if not np.array_equal(self.points[pos], np.asarray(lam)):
            raise ValueError("tabulated response evaluated off its points")
        return self.table[key][pos]


@dataclass(frozen=True)
class QuasiObjectivisticModel:
    space: HiddenVariableSpace
    response1: ResponseFunction
    response2: ResponseFunction

    @property
    def deterministic(self) -> bool:
        return bool(self.response1.deterministic and self.response2.deterministic)


def sawtooth_model(grid_size: int = DEFAULT_GRID, continuous: bool = False) -> QuasiObjectivisticModel:
    """Identical saw-tooth answers on both sides, lambda uniform on [0, pi)."""
    space = HiddenVariableSpace.circle(grid_size) if continuous else HiddenVariableSpace.uniform_grid(grid_size)
    return QuasiObjectivisticModel(space, SawtoothResponse(), SawtoothResponse())


def sawtooth_correlation(delta) -> np.ndarray:
    """Closed-form correlation of the saw-tooth model, ``1 - 4|delta|/pi`` folded mod pi."""
    d = np.mod(np.asarray(delta, dtype=float), np.pi)
    d = np.minimum(d, np.pi - d)
    return 1.0 - 4.0 * d / np.pi


@dataclass(frozen=True)
class MonteCarlo:
    n: int
    seed: int
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK
    stream: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("Monte Carlo sample count must be at least 1")


Method = Union[Literal["exact"], MonteCarlo]


def _exact_table(model: QuasiObjectivisticModel, theta1: float, theta2: float) -> np.ndarray:
    pts, w = model.space.grid()
    p1 = np.asarray(model.response1(pts, theta1), dtype=float)
    p2 = np.asarray(model.response2(pts, theta2), dtype=float)
    t1 = np.stack([p1, 1 - p1], axis=1)
    t2 = np.stack([p2, 1 - p2], axis=1)
    return np.einsum("l,li,lj->ij", w, t1, t2)


def _mc_counts(model: QuasiObjectivisticModel, theta1: float, theta2: float, mc: MonteCarlo) -> np.ndarray:
    def chunk(rng: np.random.Generator, m: int) -> np.ndarray:
        lam = model.space.sample(rng, m)
        o1 = rng.random(m) >= model.response1(lam, theta1)
        o2 = rng.random(m) >= model.response2(lam, theta2)
        # index 0 is "+": rng < p(+)
        return np.bincount(2 * o1.astype(int) + o2.astype(int), minlength=4).reshape(2, 2)

    parts = run_chunked(
        chunk, mc.n, seed=mc.seed, key=(mc.stream,), chunk_size=mc.chunk_size, workers=mc.workers
    )
    return np.sum(parts, axis=0)


def hv_bivariate(
    model: QuasiObjectivisticModel, theta1: float, theta2: float, method: Method = "exact"
) -> BivariateDistribution:
    if method == "exact":
        return BivariateDistribution.normalized(_exact_table(model, theta1, theta2))
    if isinstance(method, MonteCarlo):
        return BivariateDistribution.from_counts(_mc_counts(model, theta1, theta2, method))
    raise ValueError(f"unknown method {method!r}")


def hv_quartet(
    model: QuasiObjectivisticModel, settings: Settings = CHSH_SETTINGS, method: Method = "exact"
) -> ExperimentQuartet:
    settings = Settings(*settings)
    out = {}
    for k, pair in enumerate(PAIRS):
        m = method
        if isinstance(method, MonteCarlo):
            m = MonteCarlo(method.n, method.seed, method.workers, method.chunk_size, stream=k)
        out[pair] = hv_bivariate(model, *settings.for_pair(pair), method=m)
    return ExperimentQuartet.from_mapping(out)


def hv_chsh(model: QuasiObjectivisticModel, settings: Settings = CHSH_SETTINGS, method: Method = "exact") -> float:
    return quartet_bell_lhs(hv_quartet(model, settings, method))


def chsh_sigma(quartet: ExperimentQuartet, n_per_pair: int) -> float:
    """Standard error of Bell's combination estimated from ``n_per_pair`` samples per experiment."""
    var = sum((1.0 - quartet[p].correlation() ** 2) / n_per_pair for p in PAIRS)
    return float(np.sqrt(var))


def hv_product_joint(model: QuasiObjectivisticModel, settings: Settings = CHSH_SETTINGS) -> QuadrivariateDistribution:
    """Joint of all four observables from the single-side responses (finite spaces)."""
    if model.space.kind != "finite_grid":
        raise ValueError("product joint needs a finite hidden-variable space")
    pts, w = model.space.grid()
    s = Settings(*settings)
    return product_joint(
        w, model.response1(pts, s.a1), model.response1(pts, s.b1), model.response2(pts, s.a2), model.response2(pts, s.b2)
    )


def random_finite_model(
    rng: np.random.Generator,
    settings: Settings = CHSH_SETTINGS,
    n_points: int = 8,
    deterministic: bool = False,
) -> QuasiObjectivisticModel:
    """Random weights and random per-setting response tables on ``n_points`` points."""
    pts = np.sort(rng.uniform(0, np.pi, n_points))
    w = rng.dirichlet(np.ones(n_points))
    w = w / w.sum()
    s = Settings(*settings)

    def table(thetas):
        draw = (lambda: rng.integers(0, 2, n_points).astype(float)) if deterministic else (lambda: rng.random(n_points))
        return {t: draw() for t in thetas}

    space = HiddenVariableSpace("finite_grid", pts, w)
    return QuasiObjectivisticModel(
        space, TabulatedResponse(pts, table((s.a1, s.b1))), TabulatedResponse(pts, table((s.a2, s.b2)))
    )


@dataclass(frozen=True)
class FitReport:
    deviation: float
    worst_delta: float
    orientation: int
    deltas: np.ndarray
    model_values: np.ndarray
    target_values: np.ndarray


def best_lhv_fit(
    target: Callable[[np.ndarray], np.ndarray] | np.ndarray,
    n_grid: int = 100,
) -> FitReport:
    """Closest saw-tooth correlation curve to ``target`` in max-deviation.

    The family is the continuum saw-tooth model and its anti-correlated
    mirror (side 2 answers flipped).  ``target`` is a function of the
    setting difference or an array of values on ``linspace(0, pi/2, n_grid)``.
    """
    deltas = np.linspace(0.0, np.pi / 2, n_grid)
    tv = np.asarray(target(deltas) if callable(target) else target, dtype=float)
    if tv.shape != deltas.shape:
        raise ValueError("target values do not match the angle grid")
    base = sawtooth_correlation(deltas)
    best = None
    for sign in (1, -1):
        dev = np.abs(sign * base - tv)
        k = int(np.argmax(dev))
        if best is None or dev[k] < best.deviation:
            best = FitReport(float(dev[k]), float(deltas[k]), sign, deltas, sign * base, tv)
    return best
