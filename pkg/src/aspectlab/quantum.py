"""Two-photon polarization states, projectors and projective statistics.

Basis ordering of the two-photon space is |HH>, |HV>, |VH>, |VV>, with
|H> = (1, 0) the polarization direction at angle 0.  A dichotomic
polarization observable at angle ``theta`` takes the value +1 on
transmission (projector onto direction ``theta``) and -1 otherwise, so
``A = E_plus - E_minus``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .distributions import BivariateDistribution

__all__ = [
    "BellKind",
    "DensityMatrix",
    "ProjectorPair",
    "bell_state",
    "canonical_angle",
    "correlation",
    "maximally_mixed",
    "polarization_projectors",
    "polarization_state",
    "product_state",
    "projective_bivariate",
    "random_density_matrix",
]

BellKind = Literal["phi_plus", "phi_minus", "psi_plus", "psi_minus"]

# Construction tolerances for Hermiticity, trace and positivity.
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10


def canonical_angle(theta: float) -> float:
    """Reduce a polarization direction to its representative in [0, pi)."""
    t = float(theta) % np.pi
    # float modulo can round up to exactly pi
    return 0.0 if t >= np.pi else t


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class DensityMatrix:
    """Validated, immutable density operator of dimension 2 or 4.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix.  Must be Hermitian, unit trace and positive
        semidefinite within the module tolerances.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix) -> None:
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise ValueError(f"density matrix must be 2x2 or 4x4, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr.real:.15g}, expected 1")
        m = 0.5 * (m + m.conj().T)
        if np.linalg.eigvalsh(m).min() < -POSITIVITY_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        self._matrix = _freeze(m)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self._matrix @ self._matrix)))

    def expect(self, op: np.ndarray) -> float:
        """Real part of ``Tr(rho op)`` for a Hermitian ``op``."""
        return float(np.real(np.trace(self._matrix @ op)))

    def reduced(self, keep: int) -> "DensityMatrix":
        """Partial trace of a two-photon state, keeping photon ``keep`` (1 or 2)."""
        if self.dim != 4:
            raise ValueError("partial trace needs a two-photon (dim 4) state")
        r = self._matrix.reshape(2, 2, 2, 2)
        if keep == 1:
            red = np.einsum("ajbj->ab", r)
        elif keep == 2:
            red = np.einsum("jajb->ab", r)
        else:
            raise ValueError("keep must be 1 or 2")
        return DensityMatrix(red / np.trace(red).real)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._matrix, other._matrix))

    def __hash__(self) -> int:
        return hash(self._matrix.tobytes())

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, purity={self.purity():.6g})"


@dataclass(frozen=True, eq=False)
class ProjectorPair:
    """Spectral projectors of the polarization observable at ``angle``."""

    plus: np.ndarray
    minus: np.ndarray
    angle: float

    @property
    def observable(self) -> np.ndarray:
        return self.plus - self.minus

    def __getitem__(self, outcome: int) -> np.ndarray:
        # outcome index 0 <-> +, 1 <-> -
        return (self.plus, self.minus)[outcome]


def polarization_state(theta: float) -> np.ndarray:
    """Unit vector for linear polarization along ``theta``."""
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def polarization_projectors(theta: float) -> ProjectorPair:
    theta = canonical_angle(theta)
    c, s = np.cos(theta), np.sin(theta)
    # closed form keeps the basis directions exact
    return ProjectorPair(
        plus=_freeze([[c * c, c * s], [c * s, s * s]]),
        minus=_freeze([[s * s, -c * s], [-c * s, c * c]]),
        angle=theta,
    )


_BELL_VECTORS = {
    "phi_plus": np.array([1, 0, 0, 1]) / np.sqrt(2),
    "phi_minus": np.array([1, 0, 0, -1]) / np.sqrt(2),
    "psi_plus": np.array([0, 1, 1, 0]) / np.sqrt(2),
    "psi_minus": np.array([0, 1, -1, 0]) / np.sqrt(2),
}


def bell_state(kind: BellKind = "phi_plus") -> DensityMatrix:
    try:
        psi = _BELL_VECTORS[kind].astype(complex)
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}") from None
    return DensityMatrix(np.outer(psi, psi.conj()))


def maximally_mixed(dim: int = 4) -> DensityMatrix:
    return DensityMatrix(np.eye(dim) / dim)


def product_state(rho1: DensityMatrix, rho2: DensityMatrix) -> DensityMatrix:
    if not (isinstance(rho1, DensityMatrix) and isinstance(rho2, DensityMatrix)):
        raise TypeError("product_state expects DensityMatrix inputs")
    if rho1.dim != 2 or rho2.dim != 2:
        raise ValueError("product_state expects two single-photon (dim 2) states")
    return DensityMatrix(np.kron(rho1.matrix, rho2.matrix))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random state from the induced (Ginibre) measure."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def _check_pair_state(rho: DensityMatrix) -> None:
    if not isinstance(rho, DensityMatrix) or rho.dim != 4:
        raise ValueError("expected a two-photon (dim 4) DensityMatrix")


def correlation(rho: DensityMatrix, theta1: float, theta2: float) -> float:
    """Quantum correlation ``Tr rho (A1 (x) A2)`` of two polarization observables."""
    _check_pair_state(rho)
    a1 = polarization_projectors(theta1).observable
    a2 = polarization_projectors(theta2).observable
    value = rho.expect(np.kron(a1, a2))
    return float(np.clip(value, -1.0, 1.0))


def projective_bivariate(rho: DensityMatrix, theta1: float, theta2: float) -> BivariateDistribution:
    _check_pair_state(rho)
    e1 = polarization_projectors(theta1)
    e2 = polarization_projectors(theta2)
    table = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            table[i, j] = rho.expect(np.kron(e1[i], e2[j]))
    return BivariateDistribution.from_table(table)
