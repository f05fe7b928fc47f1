"""Outcome tables over {+,-}^2 and {+,-}^4 and the four-experiment quartet.

Outcome index 0 is ``+`` and index 1 is ``-`` on every axis.  Quadrivariate
atoms are indexed ``(a1, b1, a2, b2)``; a pair name such as ``"A1B2"``
selects the observable of side 1 (``A1`` or ``B1``) and of side 2 (``A2``
or ``B2``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "OBSERVABLES",
    "OUTCOME_SIGNS",
    "PAIRS",
    "CHSH_SETTINGS",
    "BivariateDistribution",
    "ExperimentQuartet",
    "QuadrivariateDistribution",
    "Settings",
    "atom_index",
]

OUTCOME_SIGNS = (1, -1)
OBSERVABLES = ("A1", "B1", "A2", "B2")
PAIRS = ("A1A2", "A1B2", "B1A2", "B1B2")

BIV_SUM_TOL = 1e-12
QUAD_SUM_TOL = 1e-9
NEG_TOL = 1e-12


class Settings(NamedTuple):
    """Polarizer directions (radians) of the four observables."""

    a1: float
    b1: float
    a2: float
    b2: float

    def for_observable(self, observable: str) -> float:
        return getattr(self, observable.lower())

    def for_pair(self, pair: str) -> tuple[float, float]:
        s1, s2 = _split_pair(pair)
        return self.for_observable(s1), self.for_observable(s2)


# maximal violation of Bell's combination for phi_plus: 0, 45, -22.5, -67.5 degrees
CHSH_SETTINGS = Settings(0.0, np.pi / 4, -np.pi / 8, -3 * np.pi / 8)


def _split_pair(pair: str) -> tuple[str, str]:
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}; expected one of {PAIRS}")
    return pair[:2], pair[2:]


def _clean(table: np.ndarray, sum_tol: float, what: str) -> np.ndarray:
    t = np.array(table, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError(f"{what} has non-finite entries")
    if t.min() < -NEG_TOL:
        raise ValueError(f"{what} has a negative entry {t.min():.3g}")
    t[t < 0] = 0.0
    if abs(t.sum() - 1.0) > sum_tol:
        raise ValueError(f"{what} sums to {t.sum():.15g}, expected 1")
    t.setflags(write=False)
    return t


@dataclass(frozen=True, eq=False)
class BivariateDistribution:
    """Joint outcome probabilities of one side-1 and one side-2 observable."""

    table: np.ndarray

    @classmethod
    def from_table(cls, table) -> "BivariateDistribution":
        t = np.asarray(table, dtype=float)
        if t.shape != (2, 2):
            raise ValueError(f"bivariate table must be 2x2, got {t.shape}")
        return cls(_clean(t, BIV_SUM_TOL, "bivariate distribution"))

    @classmethod
    def normalized(cls, table) -> "BivariateDistribution":
        """Clamp tiny negatives and renormalize before validating."""
        t = np.array(table, dtype=float)
        if t.shape != (2, 2):
            raise ValueError(f"bivariate table must be 2x2, got {t.shape}")
        if t.min() < -NEG_TOL:
            raise ValueError(f"bivariate distribution has a negative entry {t.min():.3g}")
        t[t < 0] = 0.0
        s = t.sum()
        if s <= 0:
            raise ValueError("bivariate distribution has zero mass")
        return cls.from_table(t / s)

    @classmethod
    def from_counts(cls, counts) -> "BivariateDistribution":
        c = np.asarray(counts, dtype=float)
        return cls.from_table(c / c.sum())

    @classmethod
    def uniform(cls) -> "BivariateDistribution":
        return cls.from_table(np.full((2, 2), 0.25))

    def p(self, x: int, y: int) -> float:
        """Probability of outcome signs ``x``, ``y`` (each +1 or -1)."""
        return float(self.table[OUTCOME_SIGNS.index(x), OUTCOME_SIGNS.index(y)])

    @property
    def marginal1(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def marginal2(self) -> np.ndarray:
        return self.table.sum(axis=0)

    def correlation(self) -> float:
        t = self.table
        return float(t[0, 0] + t[1, 1] - t[0, 1] - t[1, 0])

    def __repr__(self) -> str:
        t = self.table
        return (
            f"BivariateDistribution(++={t[0, 0]:.6g}, +-={t[0, 1]:.6g}, "
            f"-+={t[1, 0]:.6g}, --={t[1, 1]:.6g})"
        )


def atom_index(a1: int, b1: int, a2: int, b2: int) -> tuple[int, int, int, int]:
    """Array index of the atom with outcome signs ``(a1, b1, a2, b2)``."""
    return tuple(OUTCOME_SIGNS.index(v) for v in (a1, b1, a2, b2))  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class QuadrivariateDistribution:
    """Joint distribution of ``(a1, b1, a2, b2)`` as a 2x2x2x2 array."""

    atoms: np.ndarray

    @classmethod
    def from_atoms(cls, atoms) -> "QuadrivariateDistribution":
        a = np.asarray(atoms, dtype=float)
        if a.size != 16:
            raise ValueError(f"quadrivariate distribution needs 16 atoms, got {a.size}")
        return cls(_clean(a.reshape(2, 2, 2, 2), QUAD_SUM_TOL, "quadrivariate distribution"))

    @classmethod
    def uniform(cls) -> "QuadrivariateDistribution":
        return cls.from_atoms(np.full(16, 1 / 16))

    @classmethod
    def point_mass(cls, a1: int, b1: int, a2: int, b2: int) -> "QuadrivariateDistribution":
        a = np.zeros((2, 2, 2, 2))
        a[atom_index(a1, b1, a2, b2)] = 1.0
        return cls.from_atoms(a)

    def p(self, a1: int, b1: int, a2: int, b2: int) -> float:
        return float(self.atoms[atom_index(a1, b1, a2, b2)])

    def items(self) -> Iterator[tuple[tuple[int, int, int, int], float]]:
        """Yield ``((a1, b1, a2, b2), probability)`` in row-major atom order."""
        for signs in itertools.product(OUTCOME_SIGNS, repeat=4):
            yield signs, self.p(*signs)

    def marginal(self, pair: str) -> BivariateDistribution:
        s1, s2 = _split_pair(pair)
        keep = (OBSERVABLES.index(s1), OBSERVABLES.index(s2))
        drop = tuple(ax for ax in range(4) if ax not in keep)
        t = self.atoms.sum(axis=drop)
        return BivariateDistribution.from_table(t / t.sum())

    def single(self, observable: str) -> np.ndarray:
        ax = OBSERVABLES.index(observable)
        drop = tuple(i for i in range(4) if i != ax)
        s = self.atoms.sum(axis=drop)
        return s / s.sum()

    def quartet(self) -> "ExperimentQuartet":
        return ExperimentQuartet(*(self.marginal(p) for p in PAIRS))

    def distance(self, other: "QuadrivariateDistribution") -> float:
        """L-infinity distance between atom tables."""
        return float(np.max(np.abs(self.atoms - other.atoms)))


@dataclass(frozen=True)
class ExperimentQuartet:
    """Bivariate statistics of the four Bell experiments.

    Field order follows :data:`PAIRS`.
    """

    a1a2: BivariateDistribution
    a1b2: BivariateDistribution
    b1a2: BivariateDistribution
    b1b2: BivariateDistribution

    @classmethod
    def from_mapping(cls, pairs: dict) -> "ExperimentQuartet":
        missing = [p for p in PAIRS if p not in pairs]
        if missing:
            raise ValueError(f"quartet is missing pairs {missing}")
        return cls(*(pairs[p] for p in PAIRS))

    def __getitem__(self, pair: str) -> BivariateDistribution:
        _split_pair(pair)
        return getattr(self, pair.lower())

    def items(self) -> Iterator[tuple[str, BivariateDistribution]]:
        for p in PAIRS:
            yield p, self[p]

    def normalized(self) -> "ExperimentQuartet":
        return ExperimentQuartet(*(BivariateDistribution.normalized(self[p].table) for p in PAIRS))

    def single(self, observable: str, pair: str | None = None) -> np.ndarray:
        """Single-observable marginal read off one experiment containing it.

        Without ``pair`` the first experiment in :data:`PAIRS` order that
        contains ``observable`` is used.
        """
        if pair is None:
            pair = next(p for p in PAIRS if observable in (p[:2], p[2:]))
        s1, s2 = _split_pair(pair)
        if observable == s1:
            return self[pair].marginal1
        if observable == s2:
            return self[pair].marginal2
        raise ValueError(f"{observable} is not measured in {pair}")

    def correlations(self) -> tuple[float, float, float, float]:
        return tuple(self[p].correlation() for p in PAIRS)  # type: ignore[return-value]

    def as_array(self) -> np.ndarray:
        """Shape (4, 2, 2) stack in :data:`PAIRS` order."""
        return np.stack([self[p].table for p in PAIRS])
