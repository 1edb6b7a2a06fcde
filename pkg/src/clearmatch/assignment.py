"""Linear assignment solvers for rectangular cost matrices.

Two routes with one contract (rows <= columns, every row assigned, no
column reused):

:func:`hungarian`
    Globally optimal.  The rectangular matrix is padded to square with
    a sentinel cost strictly greater than any real assignment's total,
    solved by shortest-augmenting-path iteration over dual potentials,
    then canonicalised so that among all optimal assignments the
    lexicographically smallest row-to-column vector is returned.

:func:`greedy_sort_assign`
    The cheap alternative: sort all entries ascending (ties in
    row-major order) and accept greedily.  Never better than optimal;
    used as the fast projection mode and as a baseline.

Kernels are numba-compiled when available; the pure-Python fallback
runs the same code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

__all__ = ["Assignment", "hungarian", "greedy_sort_assign"]


@dataclass(frozen=True)
class Assignment:
    """Result of a solve: column per row, and the total real cost."""

    row_to_col: tuple[int, ...]
    cost: float


@njit(cache=True)
def _solve_square(cost):  # pragma: no cover - exercised via hungarian
    """Shortest-augmenting-path assignment on a square matrix.

    Returns (row_to_col, u, v) with feasible dual potentials:
    cost[i, j] - u[i] - v[j] >= 0 everywhere, with equality on matched
    pairs, so every optimal assignment lives inside the reduced-cost
    zero subgraph.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = np.inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    return row_to_col, u[1:], v[1:]


@njit(cache=True)
def _lexicographic_refine(cost, r_real, row_to_col, col_to_row, u, v):
    # pragma: no cover - exercised via hungarian
    """Canonicalise ties: smallest feasible column per row, top down.

    All optimal assignments use only edges of zero reduced cost, so for
    each real row in order we move it to the smallest admissible column
    from which the rest of the matching can still be repaired (one
    augmenting-path search per attempt).  Dummy rows stay flexible.
    """
    n = cost.shape[0]
    maxabs = 0.0
    for i in range(n):
        for j in range(n):
            a = abs(cost[i, j])
            if a > maxabs:
                maxabs = a
    eps = 1e-9 * (1.0 + maxabs)
    locked = np.zeros(n, dtype=np.bool_)
    row_of = np.empty(n, dtype=np.int64)
    queue = np.empty(n + 1, dtype=np.int64)
    for i in range(r_real):
        ci = row_to_col[i]
        for c in range(n):
            if locked[c]:
                continue
            if cost[i, c] - u[i] - v[c] > eps:
                continue
            if c == ci:
                break  # current column is the smallest feasible one
            # Tentatively take column c and try to re-match its owner.
            i2 = col_to_row[c]
            row_to_col[i] = c
            col_to_row[c] = i
            row_to_col[i2] = -1
            col_to_row[ci] = -1
            visited = locked.copy()
            visited[c] = True
            head = 0
            tail = 0
            queue[tail] = i2
            tail += 1
            found = False
            while head < tail and not found:
                row = queue[head]
                head += 1
                for j in range(n):
                    if visited[j]:
                        continue
                    if cost[row, j] - u[row] - v[j] > eps:
                        continue
                    visited[j] = True
                    row_of[j] = row
                    if col_to_row[j] == -1:
                        # Flip the alternating path ending at the free column.
                        jj = j
                        while True:
                            rr = row_of[jj]
                            prev = row_to_col[rr]
                            row_to_col[rr] = jj
                            col_to_row[jj] = rr
                            if rr == i2:
                                break
                            jj = prev
                        found = True
                        break
                    queue[tail] = col_to_row[j]
                    tail += 1
            if found:
                break
            # No repair possible: roll the tentative move back.
            row_to_col[i] = ci
            col_to_row[ci] = i
            row_to_col[i2] = c
            col_to_row[c] = i2
        locked[row_to_col[i]] = True
    return row_to_col


@njit(cache=True)
def _greedy_scan(order, r, c):  # pragma: no cover - via greedy_sort_assign
    row_done = np.zeros(r, dtype=np.bool_)
    col_done = np.zeros(c, dtype=np.bool_)
    out = np.full(r, -1, dtype=np.int64)
    assigned = 0
    for k in range(order.shape[0]):
        flat = order[k]
        i = flat // c
        j = flat - i * c
        if not row_done[i] and not col_done[j]:
            row_done[i] = True
            col_done[j] = True
            out[i] = j
            assigned += 1
            if assigned == r:
                break
    return out


def _validated(cost: np.ndarray) -> np.ndarray:
    mat = np.ascontiguousarray(np.asarray(cost, dtype=np.float64))
    if mat.ndim != 2:
        raise ShapeError(f"cost matrix must be 2-D, got {mat.ndim}-D")
    r, c = mat.shape
    if r > c:
        raise ShapeError(f"need rows <= cols, got {r}x{c}")
    if mat.size and not np.all(np.isfinite(mat)):
        raise ValueError("cost matrix entries must be finite")
    return mat


def _total(cost: np.ndarray, cols: np.ndarray) -> float:
    # Summed in row order so equal assignments give bit-equal totals.
    total = 0.0
    for i in range(cost.shape[0]):
        total += float(cost[i, cols[i]])
    return total


def hungarian(cost: np.ndarray) -> Assignment:
    """Minimal-cost injective row-to-column assignment.

    The total cost is the global minimum; when several assignments
    reach it (within a relative tolerance of ~1e-9 on reduced costs),
    the lexicographically smallest row_to_col vector is returned.
    """
    mat = _validated(cost)
    r, c = mat.shape
    if r == 0:
        return Assignment((), 0.0)
    sentinel = 1.0 + float(np.sum(np.max(mat, axis=1)))
    square = np.full((c, c), sentinel)
    square[:r] = mat
    row_to_col, u, v = _solve_square(square)
    col_to_row = np.empty(c, dtype=np.int64)
    col_to_row[row_to_col] = np.arange(c, dtype=np.int64)
    _lexicographic_refine(square, r, row_to_col, col_to_row, u, v)
    cols = row_to_col[:r]
    return Assignment(tuple(int(x) for x in cols), _total(mat, cols))


def greedy_sort_assign(cost: np.ndarray) -> Assignment:
    """Greedy assignment over globally sorted entries.

    Entries are scanned in ascending cost order (ties resolved by
    row-major position); an entry is accepted when both its row and
    column are still free.  Complete because rows <= columns.
    """
    mat = _validated(cost)
    r, c = mat.shape
    if r == 0:
        return Assignment((), 0.0)
    order = np.argsort(mat.ravel(), kind="stable")
    cols = _greedy_scan(order, r, c)
    return Assignment(tuple(int(x) for x in cols), _total(mat, cols))
