"""Bottleneck distance between diagrams of equal arity.

Two routes are provided: :func:`bottleneck_bruteforce`, a literal minimum over
all matchings used as ground truth, and :func:`bottleneck_distance`, which
searches the finite set of pairwise point distances for the smallest threshold
admitting a perfect matching.  Both return a value drawn from the same set of
point distances, so they agree exactly.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .diagram import DIAG, DiagramPoint, PersistenceDiagram

__all__ = [
    "BRUTEFORCE_MAX_ARITY",
    "point_to_diagonal",
    "point_distance",
    "distance_matrix",
    "pairwise_point_distances",
    "has_perfect_matching",
    "bottleneck_bruteforce",
    "bottleneck_distance",
    "bottleneck_many",
]

BRUTEFORCE_MAX_ARITY = 8
_PERMUTATION_KERNEL_MAX_ARITY = 5


def point_to_diagonal(p: DiagramPoint) -> float:
    if p is DIAG:
        return 0.0
    return abs(p[0] - p[1]) / 2


def point_distance(p: DiagramPoint, q: DiagramPoint) -> float:
    """Bottleneck distance between two one-point diagrams."""
    hp = point_to_diagonal(p)
    hq = point_to_diagonal(q)
    if p is DIAG or q is DIAG:
        return max(hp, hq)
    linf = max(abs(p[0] - q[0]), abs(p[1] - q[1]))
    return min(linf, max(hp, hq))


def pairwise_point_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised :func:`point_distance`.

    ``a`` has shape ``(..., n, 2)`` and ``b`` shape ``(..., m, 2)`` with NaN
    rows marking diagonal entries; the result has shape ``(..., n, m)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = np.isnan(a[..., 0])
    db = np.isnan(b[..., 0])
    ha = np.where(da, 0.0, (a[..., 1] - a[..., 0]) / 2)
    hb = np.where(db, 0.0, (b[..., 1] - b[..., 0]) / 2)
    diag = np.maximum(ha[..., :, None], hb[..., None, :])
    linf = np.maximum(
        np.abs(a[..., :, None, 0] - b[..., None, :, 0]),
        np.abs(a[..., :, None, 1] - b[..., None, :, 1]),
    )
    either = da[..., :, None] | db[..., None, :]
    return np.where(either, diag, np.minimum(linf, diag))


def distance_matrix(x: PersistenceDiagram, y: PersistenceDiagram) -> np.ndarray:
    return pairwise_point_distances(x.as_array(), y.as_array())


def _check_arity(x: PersistenceDiagram, y: PersistenceDiagram) -> int:
    if x.arity != y.arity:
        raise ValueError(f"arity mismatch: {x.arity} != {y.arity}")
    return x.arity


def bottleneck_bruteforce(x: PersistenceDiagram, y: PersistenceDiagram) -> float:
    """Minimum over all n! matchings of the largest matched point distance."""
    n = _check_arity(x, y)
    if n > BRUTEFORCE_MAX_ARITY:
        raise ValueError(f"brute force is limited to arity <= {BRUTEFORCE_MAX_ARITY}, got {n}")
    xs, ys = x.points, y.points
    cost = [[point_distance(p, q) for q in ys] for p in xs]
    best = float("inf")
    for perm in itertools.permutations(range(n)):
        worst = max(cost[i][j] for i, j in enumerate(perm))
        if worst < best:
            best = worst
    return best


def has_perfect_matching(adj: np.ndarray) -> bool:
    """Perfect matching test on a square boolean biadjacency matrix.

    Augmenting paths are found by iterative depth-first search (Kuhn's
    algorithm), so deep graphs do not hit the recursion limit.
    """
    n = adj.shape[0]
    neighbours = [np.flatnonzero(adj[i]).tolist() for i in range(n)]
    if any(not nb for nb in neighbours):
        return False
    match_col = [-1] * n
    for root in range(n):
        seen = [False] * n
        # stack of (row, iterator position); parent columns kept for path flipping
        stack = [(root, 0)]
        via: list[int] = []
        found = False
        while stack:
            row, pos = stack[-1]
            nb = neighbours[row]
            while pos < len(nb) and seen[nb[pos]]:
                pos += 1
            if pos == len(nb):
                stack.pop()
                if via:
                    via.pop()
                continue
            col = nb[pos]
            stack[-1] = (row, pos + 1)
            seen[col] = True
            if match_col[col] < 0:
                via.append(col)
                found = True
                break
            via.append(col)
            stack.append((match_col[col], 0))
        if not found:
            return False
        # stack rows and via columns alternate along the augmenting path
        for (row, _), col in zip(stack, via):
            match_col[col] = row
    return True


def bottleneck_distance(x: PersistenceDiagram, y: PersistenceDiagram) -> float:
    """Bottleneck distance by binary search over candidate thresholds."""
    _check_arity(x, y)
    D = distance_matrix(x, y)
    return _bottleneck_from_matrix(D)


def _bottleneck_from_matrix(D: np.ndarray) -> float:
    values = np.unique(D)
    # every row and column must be matched, so the answer is at least this
    floor = max(D.min(axis=1).max(), D.min(axis=0).max())
    lo = int(np.searchsorted(values, floor))
    hi = len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if has_perfect_matching(D <= values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def bottleneck_many(x: PersistenceDiagram, others: np.ndarray) -> np.ndarray:
    """Bottleneck distances from ``x`` to a stack of diagrams.

    ``others`` has shape ``(K, n, 2)`` (NaN rows for diagonal entries).  Small
    arities enumerate all matchings in one vectorised pass; larger ones fall
    back to threshold matching per diagram.
    """
    others = np.asarray(others, dtype=float)
    if others.ndim != 3 or others.shape[1:] != (x.arity, 2):
        raise ValueError(f"expected shape (K, {x.arity}, 2), got {others.shape}")
    D = pairwise_point_distances(x.as_array()[None], others)
    n = x.arity
    if n <= _PERMUTATION_KERNEL_MAX_ARITY:
        perms = _permutations(n)
        rows = np.arange(n)
        # D[k, i, perm[p, i]] -> (K, P, n)
        matched = D[:, rows[None, :], perms]
        return matched.max(axis=2).min(axis=1)
    return np.array([_bottleneck_from_matrix(Dk) for Dk in D])
