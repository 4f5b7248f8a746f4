"""Seeded property checks for the quantitative guarantees of the maps.

Every check returns a :class:`CheckReport` whose ``worst_margin`` is the
smallest observed value of ``bound - observed`` (signed so that negative means
violated).  A check passes when the worst margin is at least ``-tolerance``.
"""

from __future__ import annotations

import itertools
import math
import zlib
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field

import numpy as np

from .bottleneck import bottleneck_bruteforce, bottleneck_distance
from .bounded import (
    BoundedEmbeddingSpec,
    non_injectivity_witness,
    phi3,
    phi3_distance,
    rho3_steps,
    rho3_steps_separated,
    uniform_spec,
)
from .diagram import DIAG, PersistenceDiagram
from .grid import phi_scale, sparse_distance, sparse_norm
from .injective import default_anchors, injective_embed, reconstruct
from .multiscale import (
    certified_distance,
    coarse_schedule,
    combined_schedule,
    rho_minus,
    rho_minus_separated,
    uniform_schedule,
)

__all__ = [
    "CheckConfig",
    "CheckReport",
    "CHECKS",
    "sample_diagram",
    "random_frame_spec",
    "separated_pair",
    "run_checks",
]


@dataclass(frozen=True)
class CheckConfig:
    n: int = 3
    samples: int = 1000
    seed: int = 42
    L: float = 10.0
    scales: tuple[float, ...] = (0.5, 1.0, 3.0)
    diag_prob: float = 0.2
    tolerance: float = 1e-9
    oracle_max_n: int = 6
    oracle_samples: int = 500
    separation_samples: int = 200
    multiscale_samples: int = 200
    eps: float = 1e-3
    frame_m: float = 1.0
    frame_M: float = 5.0
    frame_steps: tuple[int, ...] = (4, 19)
    witness_specs: int = 20
    inject_samples: int = 500
    inject_tolerance: float = 1e-6


@dataclass
class CheckReport:
    name: str
    samples: int
    worst_margin: float
    passed: bool
    seed: int
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _rng(seed, *salt) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    words = [int(seed)] + [zlib.crc32(str(s).encode()) for s in salt]
    return np.random.default_rng(words)


def sample_diagram(seed, n: int, L: float, diag_prob: float) -> PersistenceDiagram:
    """``n`` i.i.d. entries: DIAG with probability ``diag_prob``, otherwise uniform
    on ``{0 <= b < d <= L}``.  ``seed`` is an int or a numpy Generator."""
    if not 0 <= diag_prob <= 1:
        raise ValueError("diag_prob must lie in [0, 1]")
    rng = _rng(seed)
    pts = []
    for _ in range(n):
        if rng.random() < diag_prob:
            pts.append(DIAG)
            continue
        while True:
            b, d = sorted(rng.uniform(0, L, 2))
            if d > b:
                break
        pts.append((float(b), float(d)))
    return PersistenceDiagram(pts)


def separated_pair(rng: np.random.Generator, n: int, R: float, max_tries: int = 1000):
    """Pair with oracle-verified bottleneck distance at least ``3R``.

    Deaths of a random diagram are pushed up by ``3R + delta``; candidates that
    fail the oracle test are discarded.
    """
    for _ in range(max_tries):
        x = sample_diagram(rng, n, 10 * R, 0.0)
        delta = rng.uniform(0, R)
        y = PersistenceDiagram([(b, d + 3 * R + delta) for b, d in x.points])
        dist = bottleneck_bruteforce(x, y) if n <= 6 else bottleneck_distance(x, y)
        if dist >= 3 * R:
            return x, y
    raise RuntimeError("could not construct a separated pair")


def random_frame_spec(rng: np.random.Generator, max_n: int = 3) -> BoundedEmbeddingSpec:
    L = float(rng.uniform(2, 20))
    N = int(rng.integers(1, 6))
    scales = np.sort(rng.uniform(0.05 * L, L, N))
    while np.any(np.diff(scales) <= 0):
        scales = np.sort(rng.uniform(0.05 * L, L, N))
    w = rng.uniform(0.1, 1, N)
    w = w / math.sqrt(math.fsum(w * w))
    return BoundedEmbeddingSpec(L, tuple(scales), tuple(w), int(rng.integers(1, max_n + 1)))


CheckFn = Callable[[CheckConfig], tuple[int, float, str]]
CHECKS: dict[str, tuple[CheckFn, Callable[[CheckConfig], float]]] = {}


def _register(name: str, tolerance: Callable[[CheckConfig], float] = lambda c: c.tolerance * max(1.0, *c.scales)):
    def deco(fn: CheckFn) -> CheckFn:
        CHECKS[name] = (fn, tolerance)
        return fn
    return deco


def _arities(cfg: CheckConfig) -> range:
    return range(1, cfg.n + 1)


@_register("oracle-equivalence", tolerance=lambda c: 0.0)
def _oracle(cfg):
    rng = _rng(cfg.seed, "oracle-equivalence")
    worst, count = 0.0, 0
    for n in range(1, cfg.oracle_max_n + 1):
        for _ in range(cfg.oracle_samples):
            x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
            y = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
            worst = min(worst, -abs(bottleneck_distance(x, y) - bottleneck_bruteforce(x, y)))
            count += 1
    return count, worst, f"n=1..{cfg.oracle_max_n}"


@_register("lipschitz-phiR")
def _lipschitz(cfg):
    rng = _rng(cfg.seed, "lipschitz-phiR")
    worst, count = math.inf, 0
    for n in _arities(cfg):
        for R in cfg.scales:
            for _ in range(cfg.samples):
                x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                y = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                d = bottleneck_distance(x, y)
                worst = min(worst, 2**n * d - sparse_distance(phi_scale(x, R), phi_scale(y, R)))
                count += 1
    return count, worst, "bound 2^n d_B"


@_register("norm-floor")
def _norm_floor(cfg):
    rng = _rng(cfg.seed, "norm-floor")
    worst, count = math.inf, 0
    for n in _arities(cfg):
        for R in cfg.scales:
            for _ in range(cfg.samples):
                x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                worst = min(worst, sparse_norm(phi_scale(x, R)) - R / 8)
                count += 1
    return count, worst, "bound R/8"


@_register("separation")
def _separation(cfg):
    rng = _rng(cfg.seed, "separation")
    worst, count = math.inf, 0
    for n in _arities(cfg):
        for R in cfg.scales:
            for _ in range(cfg.separation_samples):
                x, y = separated_pair(rng, n, R)
                gap = sparse_distance(phi_scale(x, R), phi_scale(y, R))
                worst = min(worst, gap - R * math.sqrt(2) / 8)
                count += 1
    return count, worst, "d_B >= 3R implies gap >= R sqrt(2)/8"


@_register("multiplicity", tolerance=lambda c: 0.0)
def _multiplicity(cfg):
    rng = _rng(cfg.seed, "multiplicity")
    worst, count = math.inf, 0
    for n in _arities(cfg):
        for R in cfg.scales:
            for _ in range(cfg.samples):
                x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                worst = min(worst, 4**n - len(phi_scale(x, R)))
                count += 1
    return count, float(worst), "support <= 4^n"


@_register("co-support-diameter", tolerance=lambda c: 0.0)
def _cosupport(cfg):
    rng = _rng(cfg.seed, "co-support-diameter")
    worst, count = math.inf, 0
    for n in _arities(cfg):
        for R in cfg.scales:
            for _ in range(cfg.samples):
                x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                # nearby partner so that supports often overlap
                pts = []
                for p in x.points:
                    if p is DIAG:
                        pts.append(DIAG)
                        continue
                    b = max(0.0, p[0] + rng.uniform(-2 * R, 2 * R))
                    d = p[1] + rng.uniform(-2 * R, 2 * R)
                    pts.append((b, d) if d > b else DIAG)
                y = PersistenceDiagram(pts)
                shared = set(phi_scale(x, R).entries) & set(phi_scale(y, R).entries)
                if shared:
                    # strict inequality: margin must stay positive
                    margin = 3 * R - bottleneck_distance(x, y)
                    worst = min(worst, margin if margin > 0 else -math.inf)
                    count += 1
    return count, worst, "shared key implies d_B < 3R"


def _frame_pairs(cfg, rng, spec: BoundedEmbeddingSpec):
    for _ in range(cfg.samples):
        x = sample_diagram(rng, spec.n, spec.L, cfg.diag_prob)
        y = sample_diagram(rng, spec.n, spec.L, cfg.diag_prob)
        yield x, y, bottleneck_distance(x, y), phi3_distance(phi3(x, spec), phi3(y, spec))


@_register("phi3-lipschitz")
def _phi3_lipschitz(cfg):
    rng = _rng(cfg.seed, "phi3-lipschitz")
    worst, count = math.inf, 0
    for N in cfg.frame_steps:
        spec = uniform_spec(cfg.frame_m, cfg.frame_M, N, cfg.n)[0]
        for _, _, d, e in _frame_pairs(cfg, rng, spec):
            worst = min(worst, d - e)
            count += 1
    return count, worst, "||phi3(x) - phi3(y)|| <= d_B"


@_register("phi3-steps")
def _phi3_steps(cfg):
    rng = _rng(cfg.seed, "phi3-steps")
    worst, count = math.inf, 0
    for N in cfg.frame_steps:
        spec = uniform_spec(cfg.frame_m, cfg.frame_M, N, cfg.n)[0]
        for _, _, d, e in _frame_pairs(cfg, rng, spec):
            if d >= spec.scales[0]:
                worst = min(worst, e - rho3_steps(spec, d))
            count += 1
    return count, worst, "step lower bound"


@_register("phi3-steps-separated")
def _phi3_steps_separated(cfg):
    rng = _rng(cfg.seed, "phi3-steps-separated")
    worst, count = math.inf, 0
    for N in cfg.frame_steps:
        spec = uniform_spec(cfg.frame_m, cfg.frame_M, N, cfg.n)[0]
        for _, _, d, e in _frame_pairs(cfg, rng, spec):
            worst = min(worst, e - rho3_steps_separated(spec, min(d, spec.L)))
            count += 1
    return count, worst, "step lower bound from 3R separation"


def _schedules(n: int):
    return {"coarse": coarse_schedule(n), "uniform": uniform_schedule(n), "combined": combined_schedule(n)}


def _multiscale_pairs(cfg, name):
    rng = _rng(cfg.seed, name)
    for n in _arities(cfg):
        for label, sched in _schedules(n).items():
            for _ in range(cfg.multiscale_samples):
                x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                y = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
                d = bottleneck_distance(x, y)
                yield label, sched, d, certified_distance(x, y, sched, cfg.eps)


@_register("multiscale-lipschitz")
def _multiscale_lipschitz(cfg):
    worst, count = math.inf, 0
    for _, _, d, iv in _multiscale_pairs(cfg, "multiscale-lipschitz"):
        worst = min(worst, d + cfg.eps - iv.upper, cfg.eps - iv.width)
        count += 1
    return count, worst, "upper <= d_B + eps and width <= eps"


@_register("multiscale-distortion")
def _multiscale_distortion(cfg):
    worst, count = math.inf, 0
    for _, sched, d, iv in _multiscale_pairs(cfg, "multiscale-distortion"):
        worst = min(worst, iv.lower + cfg.eps - rho_minus(sched, d))
        count += 1
    return count, worst, "lower + eps >= rho_minus(d_B)"


@_register("multiscale-distortion-separated")
def _multiscale_distortion_separated(cfg):
    worst, count = math.inf, 0
    for _, sched, d, iv in _multiscale_pairs(cfg, "multiscale-distortion-separated"):
        worst = min(worst, iv.lower + cfg.eps - rho_minus_separated(sched, d))
        count += 1
    return count, worst, "lower + eps >= 3 rho_minus(d_B / 3)"


@_register("witness-zero", tolerance=lambda c: 0.0)
def _witness(cfg):
    rng = _rng(cfg.seed, "witness-zero")
    worst = math.inf
    for _ in range(cfg.witness_specs):
        spec = random_frame_spec(rng, max_n=cfg.n)
        x, y = non_injectivity_witness(spec)
        ix, iy = phi3(x, spec), phi3(y, spec)
        same = all(dict(u.entries) == dict(v.entries) for u, v in zip(ix, iy))
        eps = x.offdiagonal[0][1] - x.offdiagonal[0][0]
        margin = bottleneck_bruteforce(x, y) - eps / 2
        worst = min(worst, margin if same else -math.inf)
    return cfg.witness_specs, worst, "identical images, d_B >= eps/2"


@_register("inject-roundtrip", tolerance=lambda c: c.inject_tolerance)
def _inject(cfg):
    rng = _rng(cfg.seed, "inject-roundtrip")
    worst, count = 0.0, 0
    for n in range(1, max(cfg.n, 4) + 1):
        anchors = default_anchors(cfg.L, n)
        for _ in range(cfg.inject_samples):
            x = sample_diagram(rng, n, cfg.L, cfg.diag_prob)
            y = reconstruct(injective_embed(x, anchors, cfg.L), anchors, n)
            worst = min(worst, -_multiset_error(x, y))
            count += 1
    return count, worst, "reconstruct(F(x)) == x"


def _multiset_error(x: PersistenceDiagram, y: PersistenceDiagram) -> float:
    """Sup-norm mismatch of the best point pairing (inf if diagonal counts differ)."""
    if sum(p is DIAG for p in x.points) != sum(p is DIAG for p in y.points):
        return math.inf
    a, b = x.offdiagonal, y.offdiagonal
    if not a:
        return 0.0
    return min(max(max(abs(p[0] - q[0]), abs(p[1] - q[1])) for p, q in zip(a, perm))
               for perm in itertools.permutations(b))


def run_checks(suite: Iterable[str] | str = "all", config: CheckConfig | None = None) -> list[CheckReport]:
    """Run the named checks (or ``"all"``) and return one report per check."""
    cfg = config or CheckConfig()
    names = list(CHECKS) if suite == "all" else [suite] if isinstance(suite, str) else list(suite)
    unknown = [s for s in names if s not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    reports = []
    for name in names:
        fn, tol = CHECKS[name]
        count, worst, detail = fn(cfg)
        tolerance = tol(cfg)
        reports.append(CheckReport(name, count, float(worst), bool(worst >= -tolerance), cfg.seed, tolerance, detail))
    return reports
