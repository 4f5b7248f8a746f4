"""Persistence diagrams on a fixed number of points.

A diagram on ``n`` points is a multiset of exactly ``n`` entries, each either an
off-diagonal birth/death pair ``(b, d)`` with ``d > b >= 0`` or the diagonal
marker :data:`DIAG`.  Diagrams are stored in a canonical order (diagonal
entries first, then off-diagonal points sorted by ``(birth, death)``), so two
diagrams are equal exactly when their multisets are equal.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from typing import Union

import numpy as np

__all__ = [
    "DIAG",
    "DiagramPoint",
    "PersistenceDiagram",
    "is_diagonal",
    "pad_to_arity",
]


class _Diagonal:
    """Singleton marker for the diagonal point."""

    __slots__ = ()
    _instance: "_Diagonal | None" = None

    def __new__(cls) -> "_Diagonal":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DIAG"

    def __reduce__(self):
        return (_Diagonal, ())


DIAG = _Diagonal()

DiagramPoint = Union[_Diagonal, tuple[float, float]]


def is_diagonal(p) -> bool:
    return p is DIAG


def _coerce_point(p) -> DiagramPoint:
    if p is DIAG or p is None:
        return DIAG
    if isinstance(p, str):
        if p.strip().lower() in ("diag", "d", "delta"):
            return DIAG
        raise ValueError(f"cannot parse diagram point {p!r}")
    try:
        b, d = p
    except (TypeError, ValueError):
        raise ValueError(f"diagram point must be DIAG or a (birth, death) pair, got {p!r}") from None
    b = float(b)
    d = float(d)
    if not (math.isfinite(b) and math.isfinite(d)):
        raise ValueError(f"diagram point {p!r} has a non-finite coordinate")
    if b < 0:
        raise ValueError(f"birth must be >= 0, got {b}")
    if not d > b:
        # points with birth == death are not silently collapsed onto the diagonal
        raise ValueError(f"death must exceed birth, got ({b}, {d})")
    return (b, d)


def _sort_key(p: DiagramPoint) -> tuple[int, float, float]:
    if p is DIAG:
        return (0, 0.0, 0.0)
    return (1, p[0], p[1])


class PersistenceDiagram:
    """An element of the space of persistence diagrams on ``n`` points.

    Parameters
    ----------
    points : iterable
        Off-diagonal ``(birth, death)`` pairs and/or :data:`DIAG` entries.
        ``None`` and the string ``"diag"`` are accepted as aliases of DIAG.
    n : int, optional
        Arity.  Missing entries are filled with DIAG.  Defaults to the number
        of given points.

    Instances are immutable and hashable.
    """

    __slots__ = ("_points", "_array")

    def __init__(self, points: Iterable = (), n: int | None = None):
        pts = [_coerce_point(p) for p in points]
        if n is None:
            n = len(pts)
        if n < 1:
            raise ValueError("a diagram needs arity n >= 1")
        if len(pts) > n:
            raise ValueError(f"{len(pts)} points do not fit arity {n}")
        pts.extend([DIAG] * (n - len(pts)))
        pts.sort(key=_sort_key)
        object.__setattr__(self, "_points", tuple(pts))
        object.__setattr__(self, "_array", None)

    def __setattr__(self, name, value):
        raise AttributeError("PersistenceDiagram is immutable")

    def __reduce__(self):
        return (PersistenceDiagram, (self._points,))

    @classmethod
    def diagonal(cls, n: int) -> "PersistenceDiagram":
        """The diagram consisting of ``n`` copies of DIAG."""
        return cls((), n)

    @property
    def points(self) -> tuple[DiagramPoint, ...]:
        return self._points

    @property
    def arity(self) -> int:
        return len(self._points)

    @property
    def offdiagonal(self) -> list[tuple[float, float]]:
        return [p for p in self._points if p is not DIAG]

    def as_array(self) -> np.ndarray:
        """``(n, 2)`` float array; diagonal entries are rows of NaN."""
        if self._array is None:
            arr = np.full((self.arity, 2), np.nan)
            for i, p in enumerate(self._points):
                if p is not DIAG:
                    arr[i] = p
            arr.setflags(write=False)
            object.__setattr__(self, "_array", arr)
        return self._array

    def max_coordinate(self) -> float:
        return max((p[1] for p in self.offdiagonal), default=0.0)

    def in_frame(self, L: float) -> bool:
        """True when every off-diagonal point lies in the closed square [0, L]^2."""
        return all(p[1] <= L for p in self.offdiagonal)

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        inner = ", ".join("DIAG" if p is DIAG else f"({p[0]!r}, {p[1]!r})" for p in self._points)
        return f"PersistenceDiagram([{inner}])"


def pad_to_arity(x: PersistenceDiagram, n: int) -> PersistenceDiagram:
    """Append ``n - x.arity`` diagonal entries (isometric inclusion into arity ``n``)."""
    if n < x.arity:
        raise ValueError(f"cannot pad a diagram of arity {x.arity} down to {n}")
    return PersistenceDiagram(x.points, n)
