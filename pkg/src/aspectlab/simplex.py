"""Dense phase-1 simplex for small feasibility problems ``A x = b, x >= 0``.

Bland's rule (lowest-index entering and leaving variable) guarantees
termination on the degenerate systems that marginal constraints produce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FeasibilitySolution", "phase_one", "prune_redundant_rows"]

PIVOT_TOL = 1e-11
FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class FeasibilitySolution:
    feasible: bool
    x: np.ndarray
    infeasibility: float
    iterations: int


def prune_redundant_rows(A: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Drop rows of ``[A | b]`` that are linear combinations of earlier rows.

    Rows are kept greedily in order, so the selection is deterministic.  A
    row of ``A`` that is dependent while its ``b`` entry is not makes the
    system inconsistent; such rows are kept so the simplex reports it.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    keep: list[int] = []
    basis = np.zeros((0, A.shape[1] + 1))
    for i in range(A.shape[0]):
        row = np.append(A[i], b[i])
        if basis.shape[0]:
            q, _ = np.linalg.qr(basis.T)
            resid = row - q @ (q.T @ row)
        else:
            resid = row
        if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(row)):
            keep.append(i)
            basis = np.vstack([basis, row])
    return A[keep], b[keep]


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def phase_one(
    A,
    b,
    *,
    pivot_tol: float = PIVOT_TOL,
    feasibility_tol: float = FEASIBILITY_TOL,
    max_iter: int = 10_000,
) -> FeasibilitySolution:
    """Minimize the sum of artificial variables for ``A x = b, x >= 0``.

    The system is feasible when the optimum is at most ``feasibility_tol``;
    the returned ``x`` is then a basic feasible point.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    A, b = prune_redundant_rows(A, b)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # tableau: [A | I | b] with the phase-1 objective in the last row
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    it = 0
    while True:
        if it >= max_iter:
            raise RuntimeError("simplex did not terminate")
        reduced = T[m, : n + m]
        entering = next((j for j in range(n + m) if reduced[j] < -pivot_tol), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = [i for i in range(m) if col[i] > pivot_tol]
        if not rows:
            # cannot happen for a bounded phase-1 problem
            raise RuntimeError("phase-1 problem reported unbounded")
        ratios = [T[i, -1] / col[i] for i in rows]
        best = min(ratios)
        leaving = min(
            (i for i, r in zip(rows, ratios) if r <= best + pivot_tol),
            key=lambda i: basis[i],
        )
        _pivot(T, leaving, entering)
        basis[leaving] = entering
        it += 1

    x = np.zeros(n + m)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    infeasibility = float(x[n:].sum())
    return FeasibilitySolution(
        feasible=infeasibility <= feasibility_tol,
        x=np.clip(x[:n], 0.0, None),
        infeasibility=infeasibility,
        iterations=it,
    )
