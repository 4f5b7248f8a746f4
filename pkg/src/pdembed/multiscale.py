"""Multi-scale assembly of the single-scale maps.

A :class:`ScaleSchedule` fixes weights ``w_k`` and scales ``R_k``.  Block ``k``
of the assembled map is ``c * w_k * 2**-n * phi_{R_k}(x)`` (minus the same
term at a base point for the coarse kind), where ``c`` is an overall
normalisation.  Blocks live in disjoint key spaces, so squared distances add
across scales.

Images are infinite sequences of blocks and are never stored.  Distances are
computed by :func:`certified_distance`, which evaluates finitely many blocks
and bounds the rest.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.special import polygamma

from .bottleneck import bottleneck_distance, point_to_diagonal
from .diagram import PersistenceDiagram
from .grid import SparseEmbedding, phi_scale, sparse_distance

__all__ = [
    "ScaleSchedule",
    "CombinedSchedule",
    "CertifiedInterval",
    "coarse_schedule",
    "uniform_schedule",
    "combined_schedule",
    "embed_phi1_truncated",
    "embed_phi2_truncated",
    "certified_distance",
    "rho_minus",
    "rho_minus_separated",
    "rho_minus_improved",
    "lipschitz_constant",
    "step_constant",
]

COARSE = "coarse"
UNIFORM = "uniform"
COMBINED = "combined"

# Relative slack on closed-form tail sums (special-function evaluation error).
_TAIL_RTOL = 1e-12
# A diagram is "saturated" at scale R once every death is below 2.5 R: the only
# landmark within 3R/2 of each point is then the diagonal.
_SATURATION_FACTOR = 2.5 * (1 - 1e-9)


def step_constant(n: int) -> float:
    """``2**(-n-2.5) / 3``, the per-scale lower-distortion factor."""
    return 2.0 ** (-n - 2.5) / 3


@dataclass(frozen=True)
class ScaleSchedule:
    """Weights and scales of a coarse or uniform multi-scale map.

    ``weight_sq_tail(K)`` must return ``sum_{k > K} w_k**2`` and
    ``weighted_scale_sq_tail(K)`` (uniform kind only) ``sum_{k > K} (w_k R_k)**2``,
    both in closed form; ``K = 0`` gives the full sums.
    """

    kind: str
    n: int
    weight: Callable[[int], float]
    scale: Callable[[int], float]
    weight_sq_tail: Callable[[int], float]
    weighted_scale_sq_tail: Callable[[int], float] | None = None
    normalization: float = 1.0
    basepoint: PersistenceDiagram | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in (COARSE, UNIFORM):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("arity must be positive")
        scales = [self.scale(k) for k in range(1, 33)]
        if any(r <= 0 for r in scales):
            raise ValueError("scales must be positive")
        steps = np.diff(scales)
        if self.kind == COARSE and not np.all(steps > 0):
            raise ValueError("coarse schedule needs strictly increasing scales")
        if self.kind == UNIFORM and not np.all(steps < 0):
            raise ValueError("uniform schedule needs strictly decreasing scales")
        total = self.weight_sq_tail(0)
        if not math.isfinite(total) or total <= 0:
            raise ValueError("weights must be square summable with a computable tail")
        if self.kind == UNIFORM:
            if self.weighted_scale_sq_tail is None or not math.isfinite(self.weighted_scale_sq_tail(0)):
                raise ValueError("uniform schedule needs a finite tail for sum (w_k R_k)^2")
        if not (math.isfinite(self.normalization) and self.normalization > 0):
            raise ValueError("normalization must be positive and finite")
        if self.basepoint is None:
            object.__setattr__(self, "basepoint", PersistenceDiagram.diagonal(self.n))
        elif self.basepoint.arity != self.n:
            raise ValueError("basepoint arity differs from schedule arity")

    def block_coefficient(self, k: int) -> float:
        return self.normalization * self.weight(k) * 2.0 ** (-self.n)

    def step_height(self, k: int) -> float:
        """Lower-distortion contribution of scale ``k``: ``c * w_k R_k * 2**(-n-2.5) / 3``."""
        return self.normalization * step_constant(self.n) * self.weight(k) * self.scale(k)


@dataclass(frozen=True)
class CombinedSchedule:
    """Coarse and uniform schedules glued as ``(Phi_1, Phi_2) / sqrt(2)``."""

    coarse: ScaleSchedule
    uniform: ScaleSchedule
    kind: str = field(default=COMBINED, init=False)

    def __post_init__(self):
        if self.coarse.kind != COARSE or self.uniform.kind != UNIFORM:
            raise ValueError("combined schedule needs one coarse and one uniform part")
        if self.coarse.n != self.uniform.n:
            raise ValueError("parts must share the arity")

    @property
    def n(self) -> int:
        return self.coarse.n


@dataclass(frozen=True)
class CertifiedInterval:
    lower: float
    upper: float
    scales_used: int = 0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def _inv_square_tail(K: int) -> float:
    # sum_{k > K} k^-2
    return float(polygamma(1, K + 1))


def _inv_fourth_tail(K: int) -> float:
    # sum_{k > K} k^-4
    return float(polygamma(3, K + 1)) / 6


def coarse_schedule(n: int, normalization: float = 6 / math.pi**2,
                    basepoint: PersistenceDiagram | None = None) -> ScaleSchedule:
    """``w_k = 1/k``, ``R_k = k**2``; scaled by ``6/pi**2`` by default."""
    return ScaleSchedule(
        kind=COARSE, n=n,
        weight=lambda k: 1.0 / k,
        scale=lambda k: float(k * k),
        weight_sq_tail=_inv_square_tail,
        normalization=normalization,
        basepoint=basepoint,
        name="coarse-default",
    )


def uniform_schedule(n: int, normalization: float = 6 / math.pi**2) -> ScaleSchedule:
    """``w_k = R_k = 1/k``; scaled by ``6/pi**2`` by default."""
    return ScaleSchedule(
        kind=UNIFORM, n=n,
        weight=lambda k: 1.0 / k,
        scale=lambda k: 1.0 / k,
        weight_sq_tail=_inv_square_tail,
        weighted_scale_sq_tail=_inv_fourth_tail,
        normalization=normalization,
        name="uniform-default",
    )


def combined_schedule(n: int, normalization: float = 6 / math.pi**2,
                      basepoint: PersistenceDiagram | None = None) -> CombinedSchedule:
    return CombinedSchedule(coarse_schedule(n, normalization, basepoint), uniform_schedule(n, normalization))


def lipschitz_constant(s: ScaleSchedule | CombinedSchedule) -> float:
    """Upper Lipschitz constant ``c * ||w||`` guaranteed by orthogonal assembly."""
    if isinstance(s, CombinedSchedule):
        return math.sqrt((lipschitz_constant(s.coarse) ** 2 + lipschitz_constant(s.uniform) ** 2) / 2)
    return s.normalization * math.sqrt(s.weight_sq_tail(0))


def _require(s, kind: str) -> None:
    if s.kind != kind:
        raise ValueError(f"expected a {kind} schedule, got {s.kind}")


def embed_phi1_truncated(x: PersistenceDiagram, s: ScaleSchedule, K: int,
                         basepoint: PersistenceDiagram | None = None) -> list[SparseEmbedding]:
    """First ``K`` blocks of the coarse map, ``c w_k 2^-n (phi_{R_k}(x) - phi_{R_k}(x0))``."""
    _require(s, COARSE)
    if K < 1:
        raise ValueError("K must be >= 1")
    x0 = s.basepoint if basepoint is None else basepoint
    blocks = []
    for k in range(1, K + 1):
        R = s.scale(k)
        blocks.append((phi_scale(x, R) - phi_scale(x0, R)).scaled(s.block_coefficient(k)))
    return blocks


def embed_phi2_truncated(x: PersistenceDiagram, s: ScaleSchedule, K: int) -> list[SparseEmbedding]:
    """First ``K`` blocks of the uniform map, ``c w_k 2^-n phi_{R_k}(x)``."""
    _require(s, UNIFORM)
    if K < 1:
        raise ValueError("K must be >= 1")
    return [phi_scale(x, s.scale(k)).scaled(s.block_coefficient(k)) for k in range(1, K + 1)]


def _half_persistence(x: PersistenceDiagram) -> float:
    return max((point_to_diagonal(p) for p in x.points), default=0.0)


def _single_interval(x, y, s: ScaleSchedule, eps: float, d: float, max_scales: int) -> CertifiedInterval:
    c2 = s.normalization ** 2
    top = max(x.max_coordinate(), y.max_coordinate())
    # saturated tail of the coarse map: one diagonal coordinate per scale whose
    # difference is the (scale independent) gap in half persistence
    gap = _half_persistence(x) - _half_persistence(y)
    head: list[float] = []
    for K in range(1, max_scales + 1):
        R = s.scale(K)
        diff = sparse_distance(phi_scale(x, R), phi_scale(y, R))
        head.append((s.block_coefficient(K) * diff) ** 2)
        h = math.fsum(head)
        if s.kind == COARSE and s.scale(K + 1) * _SATURATION_FACTOR > top:
            exact = c2 * 4.0 ** (-s.n) * gap * gap * s.weight_sq_tail(K)
            lo, hi = exact * (1 - _TAIL_RTOL), exact * (1 + _TAIL_RTOL)
            return CertifiedInterval(math.sqrt(h + lo), math.sqrt(h + hi), K)
        # per-scale cap ||phi(x) - phi(y)|| <= min(2^n d, 3 * 2^n R_k)
        tail = d * d * s.weight_sq_tail(K)
        if s.weighted_scale_sq_tail is not None:
            tail = min(tail, 9 * s.weighted_scale_sq_tail(K))
        tail *= c2 * (1 + _TAIL_RTOL)
        if not math.isfinite(tail):
            raise ValueError("schedule tail bound is not finite")
        if math.sqrt(h + tail) - math.sqrt(h) <= eps:
            return CertifiedInterval(math.sqrt(h), math.sqrt(h + tail), K)
    raise RuntimeError(f"tail bound not below eps={eps} after {max_scales} scales")


def certified_distance(x: PersistenceDiagram, y: PersistenceDiagram,
                       s: ScaleSchedule | CombinedSchedule, eps: float,
                       max_scales: int = 100_000) -> CertifiedInterval:
    """Interval of width at most ``eps`` containing the embedded distance of ``x`` and ``y``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if x.arity != s.n or y.arity != s.n:
        raise ValueError("diagram arity differs from schedule arity")
    if x == y:
        return CertifiedInterval(0.0, 0.0, 0)
    d = bottleneck_distance(x, y)
    if isinstance(s, CombinedSchedule):
        a = _single_interval(x, y, s.coarse, eps, d, max_scales)
        b = _single_interval(x, y, s.uniform, eps, d, max_scales)
        # (u, v) -> ||(u, v)|| / sqrt(2) is 1-Lipschitz for the sup norm, so width stays <= eps
        return CertifiedInterval(
            math.sqrt((a.lower ** 2 + b.lower ** 2) / 2),
            math.sqrt((a.upper ** 2 + b.upper ** 2) / 2),
            a.scales_used + b.scales_used,
        )
    return _single_interval(x, y, s, eps, d, max_scales)


def _step_index(s: ScaleSchedule, t: float) -> int:
    """Index ``i`` of the step containing ``t``, or 0 if no step covers it."""
    if s.kind == COARSE:
        if t < s.scale(1):
            return 0
        i = 1
        while s.scale(i + 1) <= t:
            i += 1
        return i
    if t <= 0:
        return 0
    i = 1
    while s.scale(i) > t:
        i += 1
    return i


def rho_minus(s: ScaleSchedule | CombinedSchedule, t: float) -> float:
    """Step lower-distortion function (one scale per step)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if isinstance(s, CombinedSchedule):
        return math.sqrt((rho_minus(s.coarse, t) ** 2 + rho_minus(s.uniform, t) ** 2) / 2)
    i = _step_index(s, t)
    return 0.0 if i == 0 else s.step_height(i)


def rho_minus_separated(s: ScaleSchedule | CombinedSchedule, t: float) -> float:
    """Step bound backed by ``3R`` separation: ``3 rho_minus(t / 3)``.

    A scale counts only once ``t >= 3 R_k``, and the per-scale gap is then three
    times the step height used by :func:`rho_minus`.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    return 3 * rho_minus(s, t / 3)


def rho_minus_improved(s: ScaleSchedule | CombinedSchedule, t: float) -> float:
    """Lower-distortion function accumulating every scale at or below ``t``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if isinstance(s, CombinedSchedule):
        return math.sqrt((rho_minus_improved(s.coarse, t) ** 2 + rho_minus_improved(s.uniform, t) ** 2) / 2)
    i = _step_index(s, t)
    if i == 0:
        return 0.0
    if s.kind == COARSE:
        return math.sqrt(math.fsum(s.step_height(j) ** 2 for j in range(1, i + 1)))
    # sum_{j >= i} (w_j R_j)^2 from the closed-form tail
    factor = s.normalization * step_constant(s.n)
    return factor * math.sqrt(s.weighted_scale_sq_tail(i - 1))
