"""Landmark grid at a single scale and the sparse cutoff map built on it.

At scale ``R`` the landmarks are the one-point diagrams ``(m R, k R)`` with
``m`` odd and positive, ``k`` even, ``k >= 4`` and ``k >= m + 3``, together
with the diagonal.  A landmark for arity ``n`` is a multiset of ``n`` such
keys.  Keys are exact integers; real coordinates only appear after
multiplication by ``R``.

The cutoff coordinate attached to a landmark ``p`` is
``max(3R/2 - d_B(p, x), 0)``; :func:`phi_scale` returns all non-zero ones.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .bottleneck import bottleneck_distance, bottleneck_many, point_distance, point_to_diagonal
from .diagram import DIAG, DiagramPoint, PersistenceDiagram

__all__ = [
    "DIAG_KEY",
    "GridKey",
    "LandmarkKey",
    "SparseEmbedding",
    "is_grid_key",
    "grid_point",
    "landmark_points",
    "landmark_diagram",
    "grid_candidates",
    "landmark_candidates",
    "phi_component",
    "phi_scale",
    "sparse_norm",
    "sparse_distance",
    "key_to_text",
    "key_from_text",
]

GridKey = tuple[int, int]
LandmarkKey = tuple[GridKey, ...]

# (0, 0) is never a grid key (m is odd), and sorts before all of them.
DIAG_KEY: GridKey = (0, 0)


def is_grid_key(g: GridKey) -> bool:
    m, k = g
    return m >= 1 and m % 2 == 1 and k >= 4 and k % 2 == 0 and k >= m + 3


def _check_key(g: GridKey) -> None:
    if g != DIAG_KEY and not is_grid_key(g):
        raise ValueError(f"{g!r} is not a grid key")


def grid_point(g: GridKey, R: float) -> DiagramPoint:
    if g == DIAG_KEY:
        return DIAG
    return (g[0] * R, g[1] * R)


def landmark_points(keys: Iterable[LandmarkKey], R: float) -> np.ndarray:
    """Coordinates of a batch of landmarks as a ``(K, n, 2)`` array (NaN = diagonal)."""
    arr = np.array(list(keys), dtype=float)
    if arr.ndim != 3:
        raise ValueError("landmark keys must all have the same arity")
    diag = arr[..., 0] == 0
    arr = arr * R
    arr[diag] = np.nan
    return arr


def landmark_diagram(key: LandmarkKey, R: float, n: int | None = None) -> PersistenceDiagram:
    if R <= 0:
        raise ValueError("scale must be positive")
    for g in key:
        _check_key(g)
    if n is not None and n != len(key):
        raise ValueError(f"key of size {len(key)} does not have arity {n}")
    return PersistenceDiagram([grid_point(g, R) for g in key])


def grid_candidates(p: DiagramPoint, R: float) -> set[GridKey]:
    """Keys whose open ``3R/2``-ball contains the point ``p``.

    Only the few grid columns and rows around ``(b/R, d/R)`` can qualify,
    because for grid points the diagonal term of the point distance is
    ``(k - m) R / 2 >= 3R/2`` and the test reduces to the sup-norm.
    """
    if R <= 0:
        raise ValueError("scale must be positive")
    radius = 1.5 * R
    if p is DIAG:
        return {DIAG_KEY}
    out: set[GridKey] = set()
    if point_to_diagonal(p) < radius:
        out.add(DIAG_KEY)
    b, d = p
    mb = math.floor(b / R)
    kd = math.floor(d / R)
    for m in range(max(1, mb - 2), mb + 4):
        if m % 2 == 0:
            continue
        for k in range(max(4, m + 3, kd - 2), kd + 4):
            if k % 2:
                continue
            g = (m * R, k * R)
            assert point_to_diagonal(g) >= radius * (1 - 1e-12), "grid shortcut violated"
            if point_distance(p, g) < radius:
                out.add((m, k))
    return out


def landmark_candidates(x: PersistenceDiagram, R: float) -> set[LandmarkKey]:
    """Landmarks whose ``3R/2``-ball may contain ``x`` (a superset of the support of phi_R(x))."""
    per_point = [sorted(grid_candidates(p, R)) for p in x.points]
    return {tuple(sorted(combo)) for combo in itertools.product(*per_point)}


def phi_component(x: PersistenceDiagram, key: LandmarkKey, R: float) -> float:
    if len(key) != x.arity:
        raise ValueError(f"arity mismatch: key has {len(key)} entries, diagram {x.arity}")
    d = bottleneck_distance(x, landmark_diagram(key, R))
    return max(1.5 * R - d, 0.0)


@dataclass(frozen=True)
class SparseEmbedding:
    """Finitely supported vector indexed by landmark keys at one scale.

    Absent keys are zero.  Values produced by :func:`phi_scale` are positive;
    scaled differences (as used by the multi-scale maps) may be signed.
    """

    scale: float
    entries: Mapping[LandmarkKey, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> set[LandmarkKey]:
        return set(self.entries)

    def norm(self) -> float:
        return sparse_norm(self)

    def scaled(self, c: float) -> "SparseEmbedding":
        return SparseEmbedding(self.scale, {k: c * v for k, v in self.entries.items() if c * v != 0})

    def __sub__(self, other: "SparseEmbedding") -> "SparseEmbedding":
        _check_scales(self, other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0.0) - v
        return SparseEmbedding(self.scale, {k: v for k, v in out.items() if v != 0})


def _check_scales(a: SparseEmbedding, b: SparseEmbedding) -> None:
    if a.scale != b.scale:
        raise ValueError(f"scale mismatch: {a.scale} != {b.scale}")


def sparse_norm(a: SparseEmbedding) -> float:
    return math.sqrt(math.fsum(v * v for _, v in sorted(a.entries.items())))


def sparse_distance(a: SparseEmbedding, b: SparseEmbedding) -> float:
    _check_scales(a, b)
    keys = sorted(set(a.entries) | set(b.entries))
    ea, eb = a.entries, b.entries
    return math.sqrt(math.fsum((ea.get(k, 0.0) - eb.get(k, 0.0)) ** 2 for k in keys))


def phi_scale(x: PersistenceDiagram, R: float) -> SparseEmbedding:
    """Non-zero cutoff coordinates of ``x`` at scale ``R``."""
    if R <= 0:
        raise ValueError("scale must be positive")
    keys = sorted(landmark_candidates(x, R))
    dists = bottleneck_many(x, landmark_points(keys, R))
    vals = 1.5 * R - dists
    return SparseEmbedding(R, {k: float(v) for k, v in zip(keys, vals) if v > 0})


def key_to_text(key: LandmarkKey, scale_index: int) -> str:
    """Canonical text form, e.g. ``s2:1,4;3,8;D``: grid keys ascending, then diagonals."""
    grid = [f"{m},{k}" for m, k in key if (m, k) != DIAG_KEY]
    diag = ["D"] * sum(1 for g in key if g == DIAG_KEY)
    return f"s{scale_index}:" + ";".join(grid + diag)


def key_from_text(text: str) -> tuple[int, LandmarkKey]:
    head, _, body = text.partition(":")
    if not head.startswith("s") or not body:
        raise ValueError(f"malformed landmark key {text!r}")
    keys = []
    for part in body.split(";"):
        if part == "D":
            keys.append(DIAG_KEY)
        else:
            m, k = (int(v) for v in part.split(","))
            _check_key((m, k))
            keys.append((m, k))
    return int(head[1:]), tuple(sorted(keys))
