"""Dense numerical kernels shared by the other modules.

Provides numerical rank (QR with column pivoting), non-negative least
squares (active-set), phase-1 feasibility for non-negative / simplex
constrained linear systems, and plain or sum-constrained least squares.
All functions are pure and operate on small dense matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class SolveResult:
    """Coefficients of a solve, its Euclidean residual, and a convergence flag."""

    coefficients: np.ndarray
    residual_norm: float
    converged: bool


def as_matrix(M) -> np.ndarray:
    """Coerce to a 2-D float array with finite entries."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={M.ndim}")
    if M.size and not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def as_vector(b, rows: int) -> np.ndarray:
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size and not np.all(np.isfinite(b)):
        raise ValueError("vector entries must be finite")
    if b.shape[0] != rows:
        raise ValueError(
            f"incompatible dimensions: matrix has {rows} rows, vector has {b.shape[0]}"
        )
    return b


def numeric_rank(M, tol: float = 0.0) -> int:
    """Numerical rank via a rank-revealing QR factorization with column pivoting.

    A diagonal element of the triangular factor counts as independent when its
    magnitude exceeds ``tol`` times the largest diagonal magnitude.  ``tol = 0``
    selects the default relative threshold ``max(rows, cols) * eps``.
    """
    M = as_matrix(M)
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if M.size == 0:
        return 0
    R = scipy.linalg.qr(M, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag.max() == 0.0:
        return 0
    if tol == 0.0:
        tol = max(M.shape) * np.finfo(float).eps
    return int(np.count_nonzero(diag > tol * diag.max()))


def nnls(A, b, tol: float = 1e-10, max_iter: int | None = None) -> SolveResult:
    """Minimize ``||A g - b||`` subject to ``g >= 0`` by the active-set method.

    ``converged`` reports whether the KKT conditions held within ``tol``
    (relative to ``max(1, ||A' b||_inf)``) when the iteration stopped.  Hitting
    the iteration cap (default ``10 * cols``) returns the best iterate with
    ``converged = False`` instead of raising.
    """
    A = as_matrix(A)
    b = as_vector(b, A.shape[0])
    n = A.shape[1]
    if max_iter is None:
        max_iter = max(1, 10 * n)

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = A.T @ b if n else np.zeros(0)
    kkt_tol = tol * max(1.0, float(np.abs(w).max(initial=0.0)))

    iters = 0
    stalled: set[int] = set()
    while iters < max_iter:
        free = [j for j in range(n) if not passive[j] and j not in stalled]
        if not free:
            break
        j = free[int(np.argmax(w[free]))]
        if w[j] <= kkt_tol:
            break
        passive[j] = True
        moved = False
        while iters < max_iter:
            iters += 1
            P = np.flatnonzero(passive)
            z = np.zeros(n)
            z[P] = np.linalg.lstsq(A[:, P], b, rcond=None)[0]
            if z[P].min(initial=np.inf) > 0.0:
                x = z
                moved = True
                break
            # step toward z only as far as feasibility allows, then drop the
            # variables pinned at zero from the passive set
            neg = P[z[P] <= 0.0]
            alpha = float(np.min(x[neg] / (x[neg] - z[neg])))
            x = x + alpha * (z - x)
            pinned = P[np.abs(x[P]) < 1e-13]
            x[pinned] = 0.0
            passive[pinned] = False
            if not passive.any():
                x = np.zeros(n)
                break
        if moved:
            stalled.clear()
        else:
            # degenerate column: exclude it until the gradient changes
            passive[j] = False
            x[j] = 0.0
            stalled.add(j)
        w = A.T @ (b - A @ x)

    residual = float(np.linalg.norm(b - A @ x))
    converged = bool(np.all(w <= kkt_tol)) if n else True
    return SolveResult(x, residual, converged)


def affine_nonneg_feasible(
    A, b, sum_to_one: bool = False, tol: float = 1e-9, max_pivots: int | None = None
) -> SolveResult:
    """Phase-1 simplex feasibility for ``{A g = b, g >= 0}`` (optionally ``1'g = 1``).

    Minimizes the total artificial-variable mass with Bland's (smallest-index)
    pivoting rule.  The returned residual is the Euclidean norm of the full
    constraint violation at the phase-1 optimum, so the system is feasible
    exactly when it is below the caller's tolerance.  ``converged`` is False
    only if the pivot-count safety cap triggers.
    """
    A = as_matrix(A)
    b = as_vector(b, A.shape[0])
    Ah, bh = A, b
    if sum_to_one:
        Ah = np.vstack([A, np.ones((1, A.shape[1]))])
        bh = np.append(b, 1.0)
    m, n = Ah.shape
    if max_pivots is None:
        max_pivots = 200 + 20 * (n + m)

    signs = np.where(bh < 0, -1.0, 1.0)
    # tableau columns: n original variables, m artificials, rhs
    T = np.hstack([Ah * signs[:, None], np.eye(m), (bh * signs)[:, None]])
    basis = list(range(n, n + m))
    # reduced costs for minimizing the artificial sum (basis = artificials)
    obj = np.concatenate([-T[:, :n].sum(axis=0), np.zeros(m), [-T[:, -1].sum()]])

    pivot_tol = 1e-11
    converged = True
    for _ in range(max_pivots):
        entering = -1
        for j in range(n + m):
            if obj[j] < -pivot_tol:
                entering = j
                break
        if entering < 0:
            break
        col = T[:, entering]
        ratios = np.full(m, np.inf)
        ok = col > pivot_tol
        ratios[ok] = T[ok, -1] / col[ok]
        best = np.min(ratios)
        if not np.isfinite(best):
            break  # cannot happen in phase 1; guard anyway
        # Bland's leaving rule: among minimal ratios pick the smallest basis index
        candidates = np.flatnonzero(ratios <= best + pivot_tol)
        leave = min(candidates, key=lambda i: basis[i])
        T[leave] /= T[leave, entering]
        for i in range(m):
            if i != leave and T[i, entering] != 0.0:
                T[i] -= T[i, entering] * T[leave]
        obj -= obj[entering] * T[leave]
        basis[leave] = entering
    else:
        converged = False

    g = np.zeros(n)
    for i, var in enumerate(basis):
        if var < n:
            g[var] = max(T[i, -1], 0.0)
    residual = float(np.linalg.norm(Ah @ g - bh))
    return SolveResult(g, residual, converged)


def least_squares(A, b, sum_to_one: bool = False) -> SolveResult:
    """Minimum-norm least squares, optionally constrained to ``1'g = 1``.

    The sum constraint is eliminated through an orthonormal basis of its null
    space, so the constrained solve reduces to an ordinary least squares.
    """
    A = as_matrix(A)
    b = as_vector(b, A.shape[0])
    n = A.shape[1]
    if not sum_to_one:
        g = np.linalg.lstsq(A, b, rcond=None)[0] if n else np.zeros(0)
    else:
        if n == 0:
            raise ValueError("sum-to-one constraint needs at least one column")
        g0 = np.full(n, 1.0 / n)
        N = scipy.linalg.null_space(np.ones((1, n)))
        if N.size:
            z = np.linalg.lstsq(A @ N, b - A @ g0, rcond=None)[0]
            g = g0 + N @ z
        else:
            g = g0
    residual = float(np.linalg.norm(A @ g - b))
    return SolveResult(g, residual, True)
