"""Hot loops: BiasedGreedy assignment and the exact branch-and-bound search.

Each kernel is written once as plain Python over numpy arrays and compiled
with ``numba.njit`` unless ``MESC_JIT=0`` is set (or numba is unavailable).
The uncompiled originals stay reachable through :data:`PY_KERNELS` so tests
and the benchmark can compare both paths.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

JIT_ENABLED = numba is not None and os.environ.get("MESC_JIT", "1").strip().lower() not in ("0", "false", "no", "off")


def _maybe_jit(fn):
    if JIT_ENABLED:
        return numba.njit(cache=False, nogil=True)(fn)
    return fn


def _biased_greedy(member, sizes, light):
    """Assign every element; returns ``(chosen, a_v, current, order)`` (0-based).

    Light elements (ascending index) take a containing set of maximum
    original size.  The Heavy elements are then covered greedily: the set
    holding the most uncovered Heavy elements takes all of them, those
    elements are erased from every set, and so on.  Ties go to the smallest
    set index.  ``current`` is the residual size of the chosen set when it
    was picked; ``order`` lists elements in processing order.
    """
    n, m = member.shape
    chosen = np.empty(n, dtype=np.int64)
    a_v = np.empty(n, dtype=np.int64)
    current = np.empty(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    k = 0
    for u in range(n):
        if light[u]:
            best = -1
            for i in range(m):
                if member[u, i] and (best < 0 or sizes[i] > sizes[best]):
                    best = i
            chosen[u] = best
            a_v[u] = sizes[best]
            current[u] = sizes[best]
            order[k] = u
            k += 1
    residual = np.zeros(m, dtype=np.int64)
    left = np.zeros(n, dtype=np.bool_)
    for u in range(n):
        if not light[u]:
            left[u] = True
            for i in range(m):
                if member[u, i]:
                    residual[i] += 1
    while k < n:
        best = 0
        for i in range(1, m):
            if residual[i] > residual[best]:
                best = i
        size = residual[best]
        for u in range(n):
            if left[u] and member[u, best]:
                chosen[u] = best
                a_v[u] = sizes[best]
                current[u] = size
                order[k] = u
                k += 1
                left[u] = False
                for i in range(m):
                    if member[u, i]:
                        residual[i] -= 1
    return chosen, a_v, current, order


def _bnb_search(indptr, cand, n, m, xlogx, budget, tol):
    """Depth-first search for the cover maximizing ``sum c log2 c``.

    Elements are branched in index order and candidate sets in ascending
    order, so the first optimum found is the lexicographically smallest
    assignment; later covers replace it only when better by more than
    ``tol``.  A subtree is cut when even putting all unassigned elements
    into the currently largest class cannot beat the incumbent by ``tol``
    (``x log x`` is convex, so that completion is the best possible).

    Returns ``(best_assign, best_score, nodes, complete)``.
    """
    counts = np.zeros(m, dtype=np.int64)
    assign = np.zeros(n, dtype=np.int64)
    pos = np.zeros(n + 1, dtype=np.int64)
    best_assign = np.full(n, -1, dtype=np.int64)
    best = -np.inf
    found = False
    nodes = 0
    complete = True
    d = 0
    pos[0] = indptr[0] - 1
    while True:
        if d == n:
            score = 0.0
            for i in range(m):
                score += xlogx[counts[i]]
            if not found or score > best + tol:
                best = score
                found = True
                for k in range(n):
                    best_assign[k] = assign[k]
            d -= 1
            counts[assign[d]] -= 1
            continue
        p = pos[d] + 1
        if p >= indptr[d + 1]:
            d -= 1
            if d < 0:
                break
            counts[assign[d]] -= 1
            continue
        pos[d] = p
        nodes += 1
        if nodes > budget:
            complete = False
            break
        s = cand[p]
        counts[s] += 1
        assign[d] = s
        if found:
            rest = n - d - 1
            total = 0.0
            cmax = 0
            for i in range(m):
                total += xlogx[counts[i]]
                if counts[i] > cmax:
                    cmax = counts[i]
            bound = total - xlogx[cmax] + xlogx[cmax + rest]
            if bound <= best + tol:
                counts[s] -= 1
                continue
        d += 1
        pos[d] = indptr[d] - 1 if d < n else 0
    return best_assign, best, nodes, complete


PY_KERNELS = {"biased_greedy": _biased_greedy, "bnb_search": _bnb_search}

biased_greedy_kernel = _maybe_jit(_biased_greedy)
bnb_search_kernel = _maybe_jit(_bnb_search)


def xlogx_table(n: int) -> np.ndarray:
    """``x * log2(x)`` for ``x = 0..n`` with ``0 log 0 = 0``."""
    x = np.arange(n + 1, dtype=np.float64)
    out = np.zeros(n + 1, dtype=np.float64)
    out[1:] = x[1:] * np.log2(x[1:])
    return out
