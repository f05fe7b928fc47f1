"""Random quartet generators on both sides of the local polytope boundary."""

from __future__ import annotations

import itertools

import numpy as np

from .distributions import PAIRS, BivariateDistribution, ExperimentQuartet, QuadrivariateDistribution

__all__ = ["PR_PATTERNS", "noisy_pr_quartet", "pr_box_quartet", "random_quad", "random_quad_quartet"]

# correlation sign patterns (PAIRS order) with an odd number of -1: the eight PR boxes
PR_PATTERNS = tuple(s for s in itertools.product((1, -1), repeat=4) if np.prod(s) == -1)


def random_quad(rng: np.random.Generator, concentration: float = 0.5) -> QuadrivariateDistribution:
    a = rng.dirichlet(np.full(16, concentration))
    return QuadrivariateDistribution.from_atoms(a / a.sum())


def random_quad_quartet(rng: np.random.Generator) -> ExperimentQuartet:
    return random_quad(rng).quartet()


def pr_box_quartet(pattern=(1, -1, -1, -1)) -> ExperimentQuartet:
    """No-signaling box with uniform marginals and correlations +-1 given by ``pattern``.

    The default reaches 4 in Bell's combination.
    """
    out = {}
    for pair, c in zip(PAIRS, pattern):
        out[pair] = BivariateDistribution.from_table(np.array([[1 + c, 1 - c], [1 - c, 1 + c]]) / 4)
    return ExperimentQuartet.from_mapping(out)


def noisy_pr_quartet(
    rng: np.random.Generator, visibility: tuple[float, float] = (0.3, 0.8)
) -> ExperimentQuartet:
    """Random PR box mixed with the marginals of a random joint.

    The mixing weight is uniform on ``visibility``, which brackets the local
    boundary (weight 1/2 against uniform noise).
    """
    pattern = PR_PATTERNS[rng.integers(len(PR_PATTERNS))]
    v = rng.uniform(*visibility)
    pr = pr_box_quartet(pattern)
    noise = random_quad_quartet(rng)
    return ExperimentQuartet.from_mapping(
        {p: BivariateDistribution.normalized(v * pr[p].table + (1 - v) * noise[p].table) for p in PAIRS}
    )
