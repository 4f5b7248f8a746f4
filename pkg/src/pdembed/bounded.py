"""Finite-dimensional map for diagrams inside a frame ``[0, L]^2``.

With scales ``R_1 < ... < R_N <= L`` and a unit weight vector ``w``, block
``k`` of :func:`phi3` is ``w_k 2^-n phi_{R_k}(x)``.  Only landmarks whose ball
meets the frame can be non-zero, which gives a finite dense layout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bottleneck import bottleneck_distance
from .diagram import PersistenceDiagram
from .grid import DIAG_KEY, GridKey, LandmarkKey, SparseEmbedding, grid_candidates, phi_scale, sparse_distance
from .multiscale import step_constant

__all__ = [
    "DENSE_CAP",
    "BoundedEmbeddingSpec",
    "eligible_grid_keys",
    "count_landmarks",
    "dense_keys",
    "phi3",
    "phi3_distance",
    "rho3_steps",
    "rho3_steps_separated",
    "rho3_linear",
    "linear_slope",
    "lambda_closed_form",
    "lambda_bruteforce",
    "uniform_spec",
    "non_injectivity_witness",
]

DENSE_CAP = 10**6


@dataclass(frozen=True)
class BoundedEmbeddingSpec:
    L: float
    scales: tuple[float, ...]
    weights: tuple[float, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(float(r) for r in self.scales))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.L > 0:
            raise ValueError("frame size L must be positive")
        if self.n < 1:
            raise ValueError("arity must be positive")
        if len(self.scales) < 1:
            raise ValueError("need at least one scale")
        if len(self.weights) != len(self.scales):
            raise ValueError("one weight per scale")
        if self.scales[0] <= 0 or any(b <= a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be positive and strictly increasing")
        if self.scales[-1] > self.L:
            raise ValueError("largest scale exceeds the frame size")
        if abs(math.fsum(w * w for w in self.weights) - 1) > 1e-12:
            raise ValueError("weights must form a unit vector")

    @property
    def N(self) -> int:
        return len(self.scales)

    def coefficient(self, k: int) -> float:
        """Block factor ``w_k 2^-n`` for 0-based scale index ``k``."""
        return self.weights[k] * 2.0 ** (-self.n)

    @cached_property
    def landmark_counts(self) -> tuple[int, ...]:
        return tuple(count_landmarks(R, self.L, self.n) for R in self.scales)

    @property
    def dense_length(self) -> int:
        return sum(self.landmark_counts)


def eligible_grid_keys(R: float, L: float) -> list[GridKey]:
    """Grid keys whose open ``3R/2`` ball meets the frame, in ascending order."""
    if not 0 < R <= L:
        raise ValueError("need 0 < R <= L")
    limit = L + 1.5 * R
    keys = []
    m = 1
    while m * R < limit:
        k = max(4, m + 3)
        k += k % 2
        while k * R < limit:
            keys.append((m, k))
            k += 2
        m += 2
    return keys


def count_landmarks(R: float, L: float, n: int) -> int:
    """Number of multiset landmarks of arity ``n`` meeting the frame: ``C(G + n, n)``."""
    if n < 1:
        raise ValueError("arity must be positive")
    return math.comb(len(eligible_grid_keys(R, L)) + n, n)


def dense_keys(R: float, L: float, n: int) -> list[LandmarkKey]:
    """Landmark keys of one scale block in dense order (lexicographic, diagonal first)."""
    base = [DIAG_KEY] + eligible_grid_keys(R, L)
    return list(itertools.combinations_with_replacement(base, n))


def _check_frame(x: PersistenceDiagram, spec: BoundedEmbeddingSpec) -> None:
    if x.arity != spec.n:
        raise ValueError(f"diagram arity {x.arity} differs from spec arity {spec.n}")
    if not x.in_frame(spec.L):
        raise ValueError(f"diagram has points outside the frame [0, {spec.L}]^2")


def phi3(x: PersistenceDiagram, spec: BoundedEmbeddingSpec, dense: bool = False,
         dense_cap: int = DENSE_CAP):
    """Image of ``x``: a list of per-scale sparse blocks, or one dense vector."""
    _check_frame(x, spec)
    blocks = [phi_scale(x, R).scaled(spec.coefficient(i)) for i, R in enumerate(spec.scales)]
    if not dense:
        return blocks
    if spec.dense_length > dense_cap:
        raise ValueError(f"dense length {spec.dense_length} exceeds cap {dense_cap}")
    out = np.zeros(spec.dense_length)
    offset = 0
    for R, block, count in zip(spec.scales, blocks, spec.landmark_counts):
        index = {key: j for j, key in enumerate(dense_keys(R, spec.L, spec.n))}
        for key, value in block.entries.items():
            out[offset + index[key]] = value
        offset += count
    return out


def phi3_distance(a: list[SparseEmbedding], b: list[SparseEmbedding]) -> float:
    if len(a) != len(b):
        raise ValueError("block count mismatch")
    return math.sqrt(math.fsum(sparse_distance(u, v) ** 2 for u, v in zip(a, b)))


def _partial_sums(spec: BoundedEmbeddingSpec) -> list[float]:
    terms = [(w * R) ** 2 for w, R in zip(spec.weights, spec.scales)]
    return [math.fsum(terms[: i + 1]) for i in range(len(terms))]


def rho3_steps(spec: BoundedEmbeddingSpec, t: float) -> float:
    """Step lower bound: ``sqrt(sum_{k<=i} w_k^2 R_k^2) / (3 2^(n+2.5))`` on ``[R_i, R_{i+1})``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t > spec.L:
        raise ValueError(f"t={t} is outside the frame domain [0, {spec.L}]")
    i = sum(1 for R in spec.scales if R <= t)
    if i == 0:
        return 0.0
    return step_constant(spec.n) * math.sqrt(_partial_sums(spec)[i - 1])


def rho3_steps_separated(spec: BoundedEmbeddingSpec, t: float) -> float:
    """Step bound that follows from the ``3R`` separation of each block.

    ``d_B >= 3 R_k`` forces block ``k`` apart by ``w_k 2^-n R_k sqrt(2)/8``, so the
    height is ``2^-(n+2.5) sqrt(sum_{3 R_k <= t} w_k^2 R_k^2)``.  Unlike
    :func:`rho3_steps` this holds for every pair.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t > spec.L:
        raise ValueError(f"t={t} is outside the frame domain [0, {spec.L}]")
    terms = [(w * R) ** 2 for w, R in zip(spec.weights, spec.scales) if 3 * R <= t]
    return 2.0 ** (-spec.n - 2.5) * math.sqrt(math.fsum(terms))


def linear_slope(spec: BoundedEmbeddingSpec, frame_corner: bool = False) -> float:
    """Slope of the steepest line from ``(R_1, 0)`` staying below every step.

    The last step ends at ``L`` with height from ``w_N R_N``.  ``frame_corner``
    uses ``w_N L`` instead for that corner; the resulting line can rise above
    the last step when ``R_N < L``.
    """
    S = _partial_sums(spec)
    R = spec.scales
    cands = [math.sqrt(S[i - 1]) / (R[i] - R[0]) for i in range(1, spec.N)]
    if spec.L > R[0]:
        last = S[-1]
        if frame_corner:
            last = (S[-2] if spec.N > 1 else 0.0) + (spec.weights[-1] * spec.L) ** 2
        cands.append(math.sqrt(last) / (spec.L - R[0]))
    if not cands:
        return 0.0
    return step_constant(spec.n) * min(cands)


def rho3_linear(spec: BoundedEmbeddingSpec, t: float, frame_corner: bool = False) -> float:
    if t < 0:
        raise ValueError("t must be >= 0")
    if t > spec.L:
        raise ValueError(f"t={t} is outside the frame domain [0, {spec.L}]")
    R1 = spec.scales[0]
    if t <= R1:
        return 0.0
    return linear_slope(spec, frame_corner) * (t - R1)


def _f(a: float, x: float) -> float:
    return (a * a / 3) * x + (1 - a + a * a / 6) / x + (a - a * a / 2)


def lambda_bruteforce(a: float, N: int) -> float:
    """``min_{j<=N} sum_{k<=j} (1 + (k-1) a)^2 / j^2`` by direct summation."""
    best = math.inf
    acc = 0.0
    for j in range(1, N + 1):
        acc += (1 + (j - 1) * a) ** 2
        best = min(best, acc / (j * j))
    return best


def lambda_closed_form(a: float, N: int) -> float:
    """Minimum of the convex interpolant ``f`` over integers ``1..N``; needs ``0 < a <= 1``.

    The integer candidates next to the continuous minimiser are clamped into
    ``1..N``.
    """
    if not 0 < a <= 1:
        raise ValueError("closed form needs 0 < a <= 1")
    mu = math.sqrt(3 / a**2 - 3 / a + 0.5)
    if mu <= 1:
        return _f(a, 1)
    lo = min(max(math.floor(mu), 1), N)
    hi = min(max(math.ceil(mu), 1), N)
    return min(_f(a, lo), _f(a, hi))


def uniform_spec(m: float, M: float, N: int, n: int) -> tuple[BoundedEmbeddingSpec, float, float]:
    """Evenly spaced scales on ``[m, M)`` with constant weights ``1/sqrt(N)``.

    Returns the spec (frame ``L = M``), ``lambda`` and the slope of the
    linear lower bound ``sqrt(lambda) / (a sqrt(N)) / (3 2^(n+2.5))``.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    if M <= m:
        raise ValueError("need M > m")
    if N < 1:
        raise ValueError("need N >= 1")
    scales = [m + (M - m) / N * (i - 1) for i in range(1, N + 1)]
    spec = BoundedEmbeddingSpec(M, tuple(scales), (1 / math.sqrt(N),) * N, n)
    a = (M - m) / (m * N)
    lam = lambda_closed_form(a, N) if a <= 1 else lambda_bruteforce(a, N)
    slope = step_constant(n) * math.sqrt(lam) / (a * math.sqrt(N))
    return spec, lam, slope


def non_injectivity_witness(spec: BoundedEmbeddingSpec) -> tuple[PersistenceDiagram, PersistenceDiagram]:
    """Two distinct diagrams with identical :func:`phi3` images.

    Both carry a single point ``(a, a + eps)`` with ``eps = R_1 / 10`` whose
    only candidate landmark at every scale is the diagonal.  ``a`` is scanned
    from ``L/2`` downwards in steps of ``eps/2``.  The two points share the same
    computed persistence ``eps'`` (``eps`` up to rounding) and lie at bottleneck
    distance ``eps'/2``.
    """
    eps = spec.scales[0] / 10
    step = eps / 2
    # images coincide only if both points have bit-identical persistence, so
    # admissible points are grouped by their computed persistence
    groups: dict[float, list[PersistenceDiagram]] = {}
    found = None
    j = 0
    while found is None:
        a = spec.L / 2 - j * step
        j += 1
        if a < 0:
            raise ValueError("frame too small to place two admissible points")
        p = (a, a + eps)
        pers = p[1] - p[0]
        if p[1] > spec.L:
            continue
        if any(grid_candidates(p, R) != {DIAG_KEY} for R in spec.scales):
            continue
        cand = PersistenceDiagram([p], spec.n)
        group = groups.setdefault(pers, [])
        for other in group:
            if bottleneck_distance(other, cand) >= pers / 2:
                found = [other, cand]
                break
        group.append(cand)
    x, y = found
    ix, iy = phi3(x, spec), phi3(y, spec)
    if any(dict(u.entries) != dict(v.entries) for u, v in zip(ix, iy)):
        raise AssertionError("witness images differ")
    if not bottleneck_distance(x, y) > 0:
        raise AssertionError("witness diagrams coincide")
    return x, y
