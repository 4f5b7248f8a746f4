"""Injective angle-coordinate map of framed diagrams into R^{n(n+1)}.

For an anchor ``s < 0`` every off-diagonal point ``(x, y)`` is sent to the
angle of ``(x - s, y - s)``; the diagonal goes to ``pi/4``.  Sorting the ``n``
angles per anchor and concatenating over ``n + 1`` distinct anchors gives an
injective continuous map.  :func:`reconstruct` inverts it by intersecting
level lines: a point belongs to the diagram iff it lies on one level line of
every anchor.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .diagram import DIAG, DiagramPoint, PersistenceDiagram

__all__ = [
    "QUARTER_PI",
    "AnchorSet",
    "IllConditionedError",
    "default_anchors",
    "angle_value",
    "injective_embed",
    "reconstruct",
]

QUARTER_PI = math.pi / 4
DEFAULT_TOL = 1e-9


class IllConditionedError(ValueError):
    """Image coordinates too close together to be separated reliably."""


@dataclass(frozen=True)
class AnchorSet:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if any(not v < 0 for v in vals):
            raise ValueError("anchors must be strictly negative")
        if len(set(vals)) != len(vals):
            raise ValueError("anchors must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def default_anchors(L: float, n: int) -> AnchorSet:
    """``s_i = -L i / (n + 1)`` for ``i = 1..n+1``."""
    if not L > 0:
        raise ValueError("frame size must be positive")
    return AnchorSet(tuple(-L * i / (n + 1) for i in range(1, n + 2)))


def angle_value(p: DiagramPoint, s: float) -> float:
    if not s < 0:
        raise ValueError("anchor must be negative")
    if p is DIAG:
        return QUARTER_PI
    return math.atan2(p[1] - s, p[0] - s)


def injective_embed(x: PersistenceDiagram, anchors: AnchorSet, L: float | None = None,
                    strict: bool = False, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Sorted angles per anchor, concatenated.

    Points extremely close to the diagonal can round to exactly ``pi/4`` and
    become indistinguishable from it; ``strict`` raises
    :class:`IllConditionedError` for any off-diagonal angle within ``10 tol``
    of ``pi/4``.
    """
    n = x.arity
    if len(anchors) != n + 1:
        raise ValueError(f"need {n + 1} anchors for arity {n}, got {len(anchors)}")
    if L is not None and not x.in_frame(L):
        raise ValueError(f"diagram has points outside the frame [0, {L}]^2")
    if strict:
        for p in x.offdiagonal:
            if min(angle_value(p, s) for s in anchors) < QUARTER_PI + 10 * tol:
                raise IllConditionedError(f"point {p!r} is too close to the diagonal")
    return np.concatenate([np.sort([angle_value(p, s) for p in x.points]) for s in anchors])


def _levels(values: np.ndarray, tol: float) -> list[tuple[float, int]]:
    """Distinct values with their repetition counts."""
    values = np.sort(values)
    groups: list[list[float]] = [[values[0]]]
    for v in values[1:]:
        gap = v - groups[-1][-1]
        if gap <= tol:
            groups[-1].append(v)
        elif gap < 10 * tol:
            raise IllConditionedError(f"coordinates {groups[-1][-1]!r} and {v!r} are nearly equal")
        else:
            groups.append([v])
    return [(float(np.mean(g)), len(g)) for g in groups]


def _intersect(s1: float, t1: float, s2: float, t2: float) -> tuple[float, float] | None:
    """Intersection of the ray through (s1, s1) at angle t1 with the one through (s2, s2) at t2."""
    det = math.sin(t2 - t1)
    if det == 0:
        return None
    r = (s2 - s1) * (math.sin(t2) - math.cos(t2)) / det
    return (s1 + r * math.cos(t1), s1 + r * math.sin(t1))


def reconstruct(image: Sequence[float], anchors: AnchorSet, n: int, tol: float = DEFAULT_TOL) -> PersistenceDiagram:
    """Recover the diagram whose :func:`injective_embed` image is ``image``."""
    image = np.asarray(image, dtype=float)
    if image.shape != (n * (n + 1),):
        raise ValueError(f"expected {n * (n + 1)} coordinates, got shape {image.shape}")
    if len(anchors) != n + 1:
        raise ValueError(f"need {n + 1} anchors for arity {n}")
    if np.any(image < QUARTER_PI - tol) or np.any(image >= math.pi / 2):
        raise ValueError("coordinates must lie in [pi/4, pi/2)")

    families = []
    n_diag = None
    for block in image.reshape(n + 1, n):
        crowded = block[(block > QUARTER_PI) & (block < QUARTER_PI + 10 * tol)]
        if crowded.size:
            # the diagonal maps to exactly pi/4, every other point strictly above
            raise IllConditionedError(f"coordinate {crowded[0]!r} is too close to the diagonal value pi/4")
        levels = _levels(block, tol)
        diag = sum(c for v, c in levels if abs(v - QUARTER_PI) <= tol)
        if n_diag is not None and diag != n_diag:
            raise ValueError("anchors disagree on the number of diagonal points")
        n_diag = diag
        families.append([(v, c) for v, c in levels if abs(v - QUARTER_PI) > tol])

    s = anchors.values
    points: list[tuple[float, float]] = []
    for t0, c0 in families[0]:
        for t1, c1 in families[1]:
            v = _intersect(s[0], t0, s[1], t1)
            if v is None:
                continue
            mult = min(c0, c1)
            for si, fam in zip(s[2:], families[2:]):
                a = math.atan2(v[1] - si, v[0] - si)
                hits = [c for t, c in fam if abs(t - a) <= tol]
                if not hits:
                    mult = 0
                    break
                mult = min(mult, hits[0])
            if mult:
                b = v[0] if abs(v[0]) > tol else 0.0
                points.extend([(b, v[1])] * mult)
    if len(points) + n_diag != n:
        raise ValueError("image is not consistent with any diagram")
    return PersistenceDiagram(points, n)
