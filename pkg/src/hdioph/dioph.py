"""Diophantine experiments on Heis^1 in both models.

Carnot model: for each denominator q the best approximant of g by a point of
delta_{1/q} Z^3 is found by rounding, and the solutions of d <= C q^-alpha
are counted.  Siegel model: rational points near h are found by a direct scan
over canonical denominators, or by lattice reduction when heights are large.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _rng
from .carnot import CarnotHit, CarnotPoint, CarnotSpec, best_distances, heisenberg, nearest_lattice_point
from .siegel import SiegelHit, SiegelPoint, rationals_near, rationals_within, s_dist, siegel_height, to_siegel
from .zkernel import Radical


def worker_count() -> int:
    env = os.environ.get("HDIOPH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Ordered map over a thread pool capped by HDIOPH_THREADS."""
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _threshold(C, alpha, height: np.ndarray) -> np.ndarray:
    return float(C) * height ** (-float(alpha))


def _checkpoints(N: int) -> list[int]:
    pts = []
    k = 1
    while k < N:
        pts.append(k)
        k *= 2
    pts.append(N)
    return pts


def fit_log_slope(checkpoints: Sequence[int], counts: Sequence[int]) -> float:
    """Least-squares slope of counts against log(checkpoint)."""
    x = np.log(np.asarray(checkpoints, dtype=float))
    y = np.asarray(counts, dtype=float)
    if len(x) < 2 or np.ptp(x) == 0:
        return float("nan")
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class CountReport:
    point: object
    C: Fraction
    alpha: Fraction
    N: int
    hits: list
    fitted_slope: float
    predicted_slope: float | None
    checkpoints: list[int] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)

    @property
    def hit_count(self) -> int:
        return len(self.hits)

    def heights(self) -> list[float]:
        if self.hits and isinstance(self.hits[0], CarnotHit):
            return [float(h.q) for h in self.hits]
        return [math.sqrt(h.norm_q) for h in self.hits]

    def count_up_to(self, bound) -> int:
        return sum(1 for x in self.heights() if x <= bound)

    def summary(self) -> dict:
        return {
            "C": str(self.C),
            "alpha": str(self.alpha),
            "N": self.N,
            "hit_count": self.hit_count,
            "fitted_slope": self.fitted_slope,
            "predicted_slope": self.predicted_slope,
        }


# ---------------------------------------------------------------------------
# Carnot model


def predicted_carnot_slope(spec: CarnotSpec, C) -> float:
    return float(spec.ball_constant * Fraction(C) ** spec.homogeneous_dim)


def carnot_hits(g, C, alpha, N: int, spec: CarnotSpec | None = None, q_min: int = 1) -> list[CarnotHit]:
    """Exact list of q in [q_min, N] whose rounded approximant lies within C q^-alpha."""
    spec = spec or heisenberg(1)
    g = spec.check(g)
    C = Fraction(C)
    alpha = Fraction(alpha)
    d = best_distances(spec, g, N)
    qs = np.arange(1, N + 1, dtype=float)
    thr = _threshold(C, alpha, qs)
    # floats decide clear cases; anything within 1e-9 relative is rechecked exactly
    near = np.nonzero(d <= thr * (1 + 1e-9))[0]
    hits = []
    for idx in near.tolist():
        q = idx + 1
        if q < q_min:
            continue
        hit = nearest_lattice_point(spec, g, q)
        if _radical_le_power(hit.dist, C, alpha, q):
            hits.append(hit)
    return hits


def _radical_le_power(dist: Radical, C: Fraction, alpha: Fraction, q: int) -> bool:
    """dist <= C q^-alpha exactly; dist is value^(1/index)."""
    k = dist.index * alpha.denominator
    # dist^k <= C^k q^(-alpha k)
    lhs = dist.power(k) * Fraction(q) ** (alpha.numerator * dist.index)
    return lhs <= C ** k


def carnot_count(g, C=Fraction(1, 2), alpha=Fraction(5, 4), N: int = 10_000, spec: CarnotSpec | None = None) -> CountReport:
    """Count A_C(g, N) and fit its growth against log N on dyadic checkpoints."""
    spec = spec or heisenberg(1)
    hits = carnot_hits(g, C, alpha, N, spec)
    cps = _checkpoints(N)
    qs = [h.q for h in hits]
    counts = [int(np.searchsorted(qs, c, side="right")) for c in cps]
    return CountReport(
        point=spec.check(g),
        C=Fraction(C),
        alpha=Fraction(alpha),
        N=N,
        hits=hits,
        fitted_slope=fit_log_slope(cps, counts),
        predicted_slope=predicted_carnot_slope(spec, C),
        checkpoints=cps,
        counts=counts,
    )


def random_carnot_point(seed: int, index: int, bits: int = 53) -> CarnotPoint:
    gen = _rng.stream(seed, "dioph.carnot", index)
    return CarnotPoint(tuple(_rng.dyadic(gen, bits) for _ in range(3)))


def random_axis_point(axis: str, seed: int, index: int, bits: int = 53) -> CarnotPoint:
    gen = _rng.stream(seed, f"dioph.axis.{axis}", index)
    while True:
        s = _rng.dyadic(gen, bits)
        if s != 0:
            break
    if axis == "x_axis":
        return CarnotPoint((s, Fraction(0), Fraction(0)))
    if axis == "t_axis":
        return CarnotPoint((Fraction(0), Fraction(0), s))
    raise ValueError(f"unknown axis {axis!r}")


def random_siegel_point(seed: int, index: int, bits: int = 53) -> SiegelPoint:
    gen = _rng.stream(seed, "dioph.siegel", index)
    return to_siegel(tuple(_rng.dyadic(gen, bits) for _ in range(3)))


@dataclass
class MonteCarloCount:
    reports: list[CountReport]

    @property
    def slopes(self) -> list[float]:
        return [r.fitted_slope for r in self.reports]

    @property
    def mean_slope(self) -> float:
        return float(np.mean(self.slopes))

    @property
    def predicted_slope(self) -> float | None:
        return self.reports[0].predicted_slope if self.reports else None


def carnot_count_experiment(samples: int, C=Fraction(1, 2), alpha=Fraction(5, 4), N: int = 10_000, seed: int = 7) -> MonteCarloCount:
    spec = heisenberg(1)
    pts = [random_carnot_point(seed, i) for i in range(samples)]
    return MonteCarloCount(parallel_map(lambda g: carnot_count(g, C, alpha, N, spec), pts))


@dataclass
class UpperBoundReport:
    samples: int
    hits_per_sample: list[int]
    expected_total: float

    @property
    def total_hits(self) -> int:
        return sum(self.hits_per_sample)

    @property
    def fraction_with_hit(self) -> float:
        return sum(1 for h in self.hits_per_sample if h) / max(1, self.samples)


def expected_carnot_hits(C, alpha, q_lo: int, q_hi: int, spec: CarnotSpec | None = None) -> float:
    """Mean number of q in [q_lo, q_hi] with a solution, for a uniform random point.

    Per q the chance is B C^Q q^(Q - Q alpha) as long as it stays below 1.
    """
    spec = spec or heisenberg(1)
    Q = spec.homogeneous_dim
    B = float(spec.ball_constant) * float(C) ** Q
    q = np.arange(q_lo, q_hi + 1, dtype=float)
    return float(np.minimum(1.0, B * q ** (Q - Q * float(alpha))).sum())


def carnot_upper_experiment(samples: int, C, alpha, q_range: tuple[int, int], seed: int = 7, points=None) -> UpperBoundReport:
    """Hits with q in q_range for random points (or the given points)."""
    spec = heisenberg(1)
    lo, hi = q_range
    if points is None:
        points = [random_carnot_point(seed, i) for i in range(samples)]
    counts = parallel_map(lambda g: len(carnot_hits(g, C, alpha, hi, spec, q_min=lo)), list(points))
    return UpperBoundReport(len(points), counts, expected_carnot_hits(C, alpha, lo, hi, spec) * len(points))


# ---------------------------------------------------------------------------
# Siegel model


def siegel_scan(h: SiegelPoint, C=1, alpha=1, Nnorm: int = 200) -> CountReport:
    """All lowest-terms rational points with |q| <= Nnorm and d <= C |q|^-alpha."""
    hits = rationals_near(h, C, alpha, Nnorm)
    cps = _checkpoints(Nnorm)
    heights = [math.sqrt(x.norm_q) for x in hits]
    counts = [sum(1 for x in heights if x <= c) for c in cps]
    return CountReport(h, Fraction(C), Fraction(alpha), Nnorm, hits, fit_log_slope(cps, counts), None, cps, counts)


@dataclass
class BAEstimate:
    value: float
    cutoff: int
    witness: SiegelHit | None
    rational: bool = False

    def to_json(self) -> dict:
        out = {"value": self.value, "cutoff": self.cutoff, "rational": self.rational}
        if self.witness is not None:
            out["witness"] = self.witness.rational.to_json()
        return out


_SCAN_LIMIT = 256


def ba_constant(h: SiegelPoint, Nnorm: int) -> BAEstimate:
    """min |q| d(h, r/q) over lowest-terms rationals with |q| <= Nnorm.

    Small cutoffs are scanned directly.  Beyond that the search runs over
    dyadic shells 2^j <= |q| < 2^(j+1) with lattice reduction, looking only
    for rationals that would beat the current minimum.
    """
    wit = siegel_height(h)
    if wit.q.norm() <= Nnorm * Nnorm:
        return BAEstimate(0.0, Nnorm, SiegelHit(wit, Radical(0)), rational=True)
    best: SiegelHit | None = None
    best_val = math.inf
    scan_to = min(Nnorm, _SCAN_LIMIT)
    C = Fraction(1)
    while best is None:
        for hit in rationals_near(h, C, 1, scan_to):
            val = hit.quality()
            if val < best_val:
                best, best_val = hit, val
        C *= 2
    if Nnorm > scan_to:
        lo = scan_to
        while lo < Nnorm:
            hi = min(2 * lo, Nnorm)
            D = Fraction(best_val).limit_denominator(1 << 40) * Fraction(1001, 1000) / lo
            for hit in rationals_within(h, hi, D):
                if hit.norm_q <= hi * hi:
                    val = hit.quality()
                    if val < best_val:
                        best, best_val = hit, val
            lo = hi
    return BAEstimate(best_val, Nnorm, best)


# ---------------------------------------------------------------------------
# exponent estimates


@dataclass
class ExponentEstimate:
    descriptor: str
    samples: list[tuple[float, float]]  # (height, -log d / log height) at record-setting hits
    estimate: float
    window: tuple[float, float]
    status: str = "ok"

    def to_json(self) -> dict:
        return {
            "point": self.descriptor,
            "estimate": self.estimate,
            "window": list(self.window),
            "status": self.status,
            "records": len(self.samples),
        }


def records(heights: np.ndarray, dists: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Entries that set a new minimum distance as the height increases."""
    order = np.argsort(heights, kind="stable")
    h = heights[order]
    d = dists[order]
    keep = []
    best = math.inf
    for k in range(len(h)):
        if 0 < d[k] < best:
            best = d[k]
            keep.append(k)
    return h[keep], d[keep]


def envelope_exponent(heights: np.ndarray, dists: np.ndarray, lo: float, hi: float, descriptor: str = "") -> ExponentEstimate:
    """Slope of -log d against log height over the record-setting approximations in [lo, hi].

    The records trace the lower envelope d_min(H) ~ H^-alpha, so the slope
    estimates the irrationality exponent without the bias of the additive
    constant in -log d / log H.
    """
    h, d = records(np.asarray(heights, dtype=float), np.asarray(dists, dtype=float))
    mask = (h >= lo) & (h <= hi) & (h > 1)
    h, d = h[mask], d[mask]
    samples = [(float(a), float(-math.log(b) / math.log(a))) for a, b in zip(h, d)]
    if len(h) < 3:
        return ExponentEstimate(descriptor, samples, float("nan"), (lo, hi), "insufficient data")
    slope = float(np.polyfit(np.log(h), -np.log(d), 1)[0])
    return ExponentEstimate(descriptor, samples, slope, (lo, hi))


def estimate_exponent(point, model: str = "carnot", N: int = 10**6) -> ExponentEstimate:
    """Irrationality exponent of a single point from its approximations up to height N."""
    lo, hi = N ** (1 / 3), float(N)
    if model == "carnot":
        spec = heisenberg(1)
        g = spec.check(point)
        d = best_distances(spec, g, N)
        return envelope_exponent(np.arange(1, N + 1, dtype=float), d, lo, hi, str(g))
    if model == "siegel":
        hits = rationals_near(point, 1, 1, N)
        heights = np.array([math.sqrt(x.norm_q) for x in hits])
        dists = np.array([float(x.dist) for x in hits])
        return envelope_exponent(heights, dists, lo, hi, str(point))
    raise ValueError(f"unknown model {model!r}")


@dataclass
class AxisReport:
    axis: str
    estimates: list[ExponentEstimate]

    @property
    def values(self) -> list[float]:
        return [e.estimate for e in self.estimates if e.status == "ok"]

    @property
    def mean(self) -> float:
        return float(np.mean(self.values)) if self.values else float("nan")

    @property
    def spread(self) -> float:
        return float(np.std(self.values)) if self.values else float("nan")


def axis_experiment(axis: str, samples: int = 20, N: int = 10**6, seed: int = 7) -> AxisReport:
    pts = [random_axis_point(axis, seed, i) for i in range(samples)]
    return AxisReport(axis, parallel_map(lambda g: estimate_exponent(g, "carnot", N), pts))


def convergent_optimality(h: SiegelPoint, expansion, max_ratio: Fraction = Fraction(8), max_height: int = 300) -> float:
    """Largest M such that no other rational with |Q| < M |q_n| is closer than convergent n.

    Looks at the convergents with |q_n| <= max_height and returns
    ``max_ratio`` if nothing beats any of them within that range.  A rival
    of convergent n has |Q| d < max_ratio |q_n| d_n, so one scan at
    exponent 1 with that constant finds every rival at once.
    """
    convs = []
    for conv in expansion.convergents:
        if conv.q.norm() > max_height * max_height:
            break
        d = s_dist(h, conv.point())
        if d != 0:
            convs.append((conv, d, math.sqrt(conv.q.norm())))
    best = float(max_ratio)
    if not convs:
        return best
    worst = max(qn * float(d) for _, d, qn in convs)
    C = Fraction(float(max_ratio) * worst * 1.001)
    nmax = math.ceil(float(max_ratio) * max(qn for _, _, qn in convs))
    rivals = rationals_near(h, C, 1, nmax)
    for conv, d, qn in convs:
        for hit in rivals:
            if hit.rational == conv or hit.dist > d:
                continue
            ratio = math.sqrt(hit.norm_q) / qn
            if ratio < best:
                best = ratio
    return best
