"""The generalized Aspect experiment.

Each arm has a semi-transparent mirror of transmissivity ``gamma`` sending
the photon coherently towards a polarizer at ``theta`` (detector ``a``)
and one at ``theta_prime`` (detector ``b``).  Outcome ``+`` is a detector
click and ``-`` no click, so at most one of ``a``, ``b`` fires per photon.
``gamma = 1`` is the standard experiment measuring the ``theta`` observable
and ``gamma = 0`` the one measuring ``theta_prime``.

Arm POVM, outcome order ``(a, b)``::

    [[O,                gamma E+                        ],
     [(1 - gamma) F+,   gamma E- + (1 - gamma) F-       ]]
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distributions import CHSH_SETTINGS, BivariateDistribution, ExperimentQuartet, QuadrivariateDistribution
from .quantum import DensityMatrix, bell_state, polarization_projectors

__all__ = [
    "CHSH_ANGLES",
    "ArmConfig",
    "ArmPOVM",
    "ExperimentConfig",
    "PairPOVM",
    "arm_povm",
    "arm_probabilities",
    "marginal_pair",
    "pair_povm",
    "quad_probabilities",
    "standard_aspect_configs",
    "standard_aspect_quartet",
]

CHSH_ANGLES = CHSH_SETTINGS


@dataclass(frozen=True)
class ArmConfig:
    gamma: float
    theta: float
    theta_prime: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"transmissivity gamma={self.gamma} outside [0, 1]")


@dataclass(frozen=True)
class ExperimentConfig:
    arm1: ArmConfig
    arm2: ArmConfig
    state: DensityMatrix = field(default_factory=bell_state)

    def __post_init__(self) -> None:
        if not isinstance(self.state, DensityMatrix) or self.state.dim != 4:
            raise ValueError("experiment state must be a two-photon DensityMatrix")

    @classmethod
    def from_angles(
        cls,
        gamma1: float,
        gamma2: float,
        angles=CHSH_ANGLES,
        state: DensityMatrix | None = None,
    ) -> "ExperimentConfig":
        """Config from ``(A1, B1, A2, B2)`` directions: A is the mirror-transmitted path."""
        a1, b1, a2, b2 = angles
        return cls(
            ArmConfig(gamma1, a1, b1),
            ArmConfig(gamma2, a2, b2),
            bell_state() if state is None else state,
        )


@dataclass(frozen=True, eq=False)
class ArmPOVM:
    """Elements indexed ``[i, j]`` for outcomes ``(a_i, b_j)``, shape (2, 2, 2, 2)."""

    elements: np.ndarray

    def __getitem__(self, ij: tuple[int, int]) -> np.ndarray:
        return self.elements[ij]

    def total(self) -> np.ndarray:
        return self.elements.sum(axis=(0, 1))

    def min_eigenvalue(self) -> float:
        return float(min(np.linalg.eigvalsh(e).min() for e in self.elements.reshape(-1, 2, 2)))


@dataclass(frozen=True, eq=False)
class PairPOVM:
    """Elements indexed ``[i, j, k, l]`` for ``(a1_i, b1_j, a2_k, b2_l)``; each 4x4."""

    elements: np.ndarray

    def __getitem__(self, ijkl: tuple[int, int, int, int]) -> np.ndarray:
        return self.elements[ijkl]

    def total(self) -> np.ndarray:
        return self.elements.sum(axis=(0, 1, 2, 3))

    def min_eigenvalue(self) -> float:
        return float(min(np.linalg.eigvalsh(e).min() for e in self.elements.reshape(-1, 4, 4)))


def arm_povm(config: ArmConfig) -> ArmPOVM:
    g = config.gamma
    E = polarization_projectors(config.theta)
    F = polarization_projectors(config.theta_prime)
    R = np.zeros((2, 2, 2, 2), dtype=complex)
    R[0, 1] = g * E.plus
    R[1, 0] = (1 - g) * F.plus
    R[1, 1] = g * E.minus + (1 - g) * F.minus
    R.setflags(write=False)
    return ArmPOVM(R)


def arm_probabilities(rho1: DensityMatrix, config: ArmConfig) -> np.ndarray:
    """Single-arm detection table ``p[i, j]`` for ``(a_i, b_j)`` on a one-photon state."""
    if not isinstance(rho1, DensityMatrix) or rho1.dim != 2:
        raise ValueError("arm_probabilities expects a single-photon (dim 2) DensityMatrix")
    g = config.gamma
    e_plus = rho1.expect(polarization_projectors(config.theta).plus)
    f_plus = rho1.expect(polarization_projectors(config.theta_prime).plus)
    pa = g * e_plus
    pb = (1 - g) * f_plus
    return np.array([[0.0, pa], [pb, 1.0 - pa - pb]])


def pair_povm(config: ExperimentConfig) -> PairPOVM:
    R1 = arm_povm(config.arm1).elements
    R2 = arm_povm(config.arm2).elements
    # R[i,j,k,l] = R1[i,j] (x) R2[k,l]
    R = np.einsum("ijab,klcd->ijklacbd", R1, R2).reshape(2, 2, 2, 2, 4, 4)
    R.setflags(write=False)
    return PairPOVM(R)


def quad_probabilities(config: ExperimentConfig) -> QuadrivariateDistribution:
    R = pair_povm(config).elements
    rho = config.state.matrix
    p = np.real(np.einsum("ab,ijklba->ijkl", rho, R))
    return QuadrivariateDistribution.from_atoms(p)


def marginal_pair(quad: QuadrivariateDistribution, pair: str) -> BivariateDistribution:
    return quad.marginal(pair)


def standard_aspect_configs(
    angles=CHSH_ANGLES, state: DensityMatrix | None = None
) -> dict[str, ExperimentConfig]:
    """The four switch-type experiments (gamma in {0, 1}) keyed by measured pair."""
    out = {}
    for g1, s1 in ((1.0, "A1"), (0.0, "B1")):
        for g2, s2 in ((1.0, "A2"), (0.0, "B2")):
            out[s1 + s2] = ExperimentConfig.from_angles(g1, g2, angles, state)
    return out


def reduced_state(config: ExperimentConfig, arm: int) -> DensityMatrix:
    return config.state.reduced(arm)


def standard_aspect_quartet(angles=CHSH_ANGLES, state: DensityMatrix | None = None) -> ExperimentQuartet:
    """Each pair's bivariate taken from the standard experiment measuring it."""
    quads = {pair: quad_probabilities(cfg) for pair, cfg in standard_aspect_configs(angles, state).items()}
    return ExperimentQuartet.from_mapping({pair: q.marginal(pair) for pair, q in quads.items()})
