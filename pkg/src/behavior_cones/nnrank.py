"""Non-negative rank bounding and monomial-submatrix certification.

Exact non-negative rank is NP-hard, so this module reports a certified
sandwich instead: a lower bound from the ordinary rank and from an exact
maximum fooling set, and an upper bound from a seeded multiplicative-update
factorization search.  A separate exact backtracking search certifies
monomial submatrices (one strictly positive entry per selected row and
column, zeros elsewhere in the selection).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, nnls, numeric_rank

DEFAULT_SEED = 1729


class CombinatorialCapError(ValueError):
    """Exact search refused: the matrix exceeds the configured size cap."""


@dataclass(frozen=True)
class NnRankConfig:
    """Budget for the rank-bound computations."""

    restarts: int = 50
    iters: int = 2000
    tol: float = 1e-9
    seed: int = DEFAULT_SEED
    combinatorial_cap: int = 12


@dataclass(frozen=True)
class MonomialCertificate:
    """Row/column selection whose submatrix is monomial."""

    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.row_indices)


@dataclass(frozen=True)
class NnRankBounds:
    """Certified sandwich ``lower <= rank_+(M) <= upper``.

    ``upper`` is None when no factorization within tolerance was found in the
    scan budget.  When factors are present they are entrywise non-negative and
    ``residual_norm = ||M - P Q||_F``.
    """

    lower: int
    lower_method: str  # "ordinaryRank" | "foolingSet"
    upper: int | None
    factor_p: np.ndarray | None = None
    factor_q: np.ndarray | None = None
    residual_norm: float = 0.0


def _as_nonneg_matrix(M, tol: float = 0.0) -> np.ndarray:
    M = as_matrix(M)
    if M.size and float(M.min()) < -tol:
        raise ValueError("matrix is not entrywise non-negative")
    return M


def support_pattern(M, tol: float = 0.0) -> np.ndarray:
    """Boolean matrix marking the entries strictly above ``tol``."""
    return _as_nonneg_matrix(M, tol) > tol


def fooling_set_bound(M, tol: float = 0.0, cap: int = 12) -> int:
    """Size of a maximum fooling set of ``M``; a lower bound on its non-negative rank.

    A fooling set is a set S of positions with ``M[i, j] > tol`` such that for
    distinct ``(i, j), (k, l)`` in S the cross product ``M[i, l] * M[k, j]`` is
    at most ``tol**2``.  Computed exactly by branch-and-bound maximum clique on
    the pairwise-compatibility graph.
    """
    M = _as_nonneg_matrix(M, tol)
    if max(M.shape, default=0) > cap:
        raise CombinatorialCapError(
            f"matrix of shape {M.shape} exceeds the {cap}x{cap} exact-search cap"
        )
    positions = np.argwhere(M > tol)
    k = len(positions)
    if k == 0:
        return 0
    tol2 = tol * tol
    neighbors = [0] * k
    for a in range(k):
        ia, ja = positions[a]
        for b in range(a + 1, k):
            ib, jb = positions[b]
            if M[ia, jb] * M[ib, ja] <= tol2:
                neighbors[a] |= 1 << b
                neighbors[b] |= 1 << a
    return _max_clique_size(neighbors)


def _max_clique_size(neighbors: list[int]) -> int:
    """Exact maximum clique on a bitmask adjacency list (coloring-bounded search)."""
    best = 0

    def color_bound(cand: int) -> int:
        colors = 0
        rest = cand
        while rest:
            colors += 1
            avail = rest
            while avail:
                v_bit = avail & -avail
                v = v_bit.bit_length() - 1
                rest &= ~v_bit
                avail &= ~v_bit
                avail &= ~neighbors[v]
        return colors

    def expand(cand: int, size: int) -> None:
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        while cand:
            if size + cand.bit_count() <= best or size + color_bound(cand) <= best:
                return
            v_bit = cand & -cand
            cand &= ~v_bit
            expand(cand & neighbors[v_bit.bit_length() - 1], size + 1)

    expand((1 << len(neighbors)) - 1, 0)
    return best


def nmf_search(
    M,
    r: int,
    restarts: int = 50,
    iters: int = 2000,
    tol: float = 1e-9,
    seed: int = DEFAULT_SEED,
) -> tuple[np.ndarray, np.ndarray] | None:
    """Search for non-negative factors ``P (rows x r), Q (r x cols)`` of ``M``.

    Runs multiplicative updates from ``restarts`` seeded random initializations
    (each restart draws from an independently derived child seed, so restarts
    may be evaluated in parallel without changing the result).  A short
    alternating non-negative least-squares polish follows the update budget,
    since multiplicative updates alone approach exact factorizations slowly.
    Returns the first pair with ``||M - P Q||_F <= tol * max(1, ||M||_F)``,
    or None if no restart succeeds.
    """
    M = _as_nonneg_matrix(M)
    if r < 1:
        raise ValueError("inner dimension r must be at least 1")
    rows, cols = M.shape
    norm_M = float(np.linalg.norm(M))
    target = tol * max(1.0, norm_M)
    if norm_M == 0.0:
        return np.zeros((rows, r)), np.zeros((r, cols))
    if r >= min(rows, cols):
        # exact by construction: identity factor padded to the requested width
        if rows <= cols:
            P = np.hstack([np.eye(rows), np.zeros((rows, r - rows))])
            Q = np.vstack([M, np.zeros((r - rows, cols))])
        else:
            P = np.hstack([M, np.zeros((rows, r - cols))])
            Q = np.vstack([np.eye(cols), np.zeros((r - cols, cols))])
        return P, Q

    polish_sweeps = max(10, iters // 40)
    for child in np.random.SeedSequence(seed).spawn(max(1, restarts)):
        rng = np.random.default_rng(child)
        found = _mu_attempt(M, r, rng, iters, polish_sweeps, target)
        if found is not None:
            return found
    return None


def _mu_attempt(M, r, rng, iters, polish_sweeps, target):
    rows, cols = M.shape
    scale = np.sqrt(M.mean() / r)
    P = scale * (0.1 + 0.9 * rng.random((rows, r)))
    Q = scale * (0.1 + 0.9 * rng.random((r, cols)))
    eps = 1e-12
    for it in range(iters):
        Q *= (P.T @ M) / (P.T @ P @ Q + eps)
        P *= (M @ Q.T) / (P @ Q @ Q.T + eps)
        if (it + 1) % 25 == 0 and np.linalg.norm(M - P @ Q) <= target:
            return P, Q
    for _ in range(polish_sweeps):
        for j in range(cols):
            Q[:, j] = nnls(P, M[:, j]).coefficients
        for i in range(rows):
            P[i, :] = nnls(Q.T, M[i, :]).coefficients
        if np.linalg.norm(M - P @ Q) <= target:
            return P, Q
    return None


def nonneg_rank_bounds(M, config: NnRankConfig | None = None) -> NnRankBounds:
    """Certified lower/upper bounds on the non-negative rank of ``M``.

    Lower bound: the larger of the ordinary numerical rank and (when the matrix
    fits the exact-search cap) the maximum fooling set size.  Upper bound: the
    smallest inner dimension, scanned upward from the lower bound, at which
    ``nmf_search`` reaches the target residual; the scan always terminates
    because the minimum dimension admits an exact trivial factorization.
    """
    cfg = config or NnRankConfig()
    M = _as_nonneg_matrix(M)
    rank = numeric_rank(M)
    lower, method = rank, "ordinaryRank"
    if max(M.shape, default=0) <= cfg.combinatorial_cap:
        fooling = fooling_set_bound(M, cap=cfg.combinatorial_cap)
        if fooling > lower:
            lower, method = fooling, "foolingSet"
    if M.size == 0 or float(np.linalg.norm(M)) == 0.0:
        rows, cols = M.shape
        return NnRankBounds(0, "ordinaryRank", 0, np.zeros((rows, 0)), np.zeros((0, cols)), 0.0)
    for r in range(max(lower, 1), min(M.shape) + 1):
        found = nmf_search(M, r, cfg.restarts, cfg.iters, cfg.tol, cfg.seed)
        if found is not None:
            P, Q = found
            return NnRankBounds(lower, method, r, P, Q, float(np.linalg.norm(M - P @ Q)))
    return NnRankBounds(lower, method, None)


def monomial_submatrix(
    M, k: int, tol: float = 0.0, cap: int = 12
) -> MonomialCertificate | None:
    """Exact backtracking search for a monomial submatrix of order ``k``.

    Returns a certificate iff some choice of ``k`` rows and ``k`` columns gives
    a submatrix with exactly one entry above ``tol`` in every row and every
    column and nothing else above ``tol`` inside the selection.
    """
    M = _as_nonneg_matrix(M, tol)
    if max(M.shape, default=0) > cap:
        raise CombinatorialCapError(
            f"matrix of shape {M.shape} exceeds the {cap}x{cap} exact-search cap"
        )
    if k == 0:
        return MonomialCertificate((), ())
    rows, cols = M.shape
    if k > min(rows, cols):
        return None
    pos = M > tol
    sel_rows: list[int] = []
    sel_cols: list[int] = []

    def search(start_col: int) -> bool:
        if len(sel_cols) == k:
            return True
        if cols - start_col < k - len(sel_cols):
            return False
        for c in range(start_col, cols):
            if any(pos[r2, c] for r2 in sel_rows):
                continue  # column intersects a chosen row in a positive entry
            for r in range(rows):
                if r in sel_rows or not pos[r, c]:
                    continue
                if any(pos[r, c2] for c2 in sel_cols):
                    continue
                sel_rows.append(r)
                sel_cols.append(c)
                if search(c + 1):
                    return True
                sel_rows.pop()
                sel_cols.pop()
        return False

    if search(0):
        return MonomialCertificate(tuple(sel_rows), tuple(sel_cols))
    return None
