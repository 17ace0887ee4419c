"""The Siegel model of the Heisenberg group.

Points are pairs (u, v) with u a vector of Gaussian rationals and v a Gaussian
rational subject to 2 Re v = |u|^2.  The product is

    (u, v) * (u', v') = (u + u', v + v' + <u, u'>),   <u, u'> = sum conj(u_j) u'_j,

the inverse is (-u, conj v) and the gauge norm is |v|^(1/2).  Rational points
carry a lowest-terms witness (p_1, ..., p_n, p_{n+1}; q) whose |q| is the
height.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .carnot import CarnotPoint, CarnotSpec, heisenberg
from .errors import DomainError, InvariantViolation
from .zkernel import (
    GaussInt,
    GaussRat,
    Radical,
    factor,
    gi_gcd,
    gi_lcm,
    parse_gauss,
)

_ONE_PLUS_I = GaussRat(1, 1)


@dataclass(frozen=True)
class SiegelPoint:
    u: tuple[GaussRat, ...]
    v: GaussRat

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(GaussRat.of(c) for c in self.u))
        object.__setattr__(self, "v", GaussRat.of(self.v))
        if 2 * self.v.re != sum((c.abs2() for c in self.u), Fraction(0)):
            raise DomainError(f"{self} violates 2 Re v = |u|^2")

    @classmethod
    def make(cls, u, v) -> "SiegelPoint":
        """Build from scalars or sequences; strings are parsed as Gaussian rationals."""
        if isinstance(u, (str, int, Fraction, GaussInt, GaussRat)):
            u = (u,)
        conv = lambda x: parse_gauss(x) if isinstance(x, str) else GaussRat.of(x)  # noqa: E731
        return cls(tuple(conv(c) for c in u), conv(v))

    @property
    def n(self) -> int:
        return len(self.u)

    def is_zero(self) -> bool:
        return self.v.is_zero()

    def is_integral(self) -> bool:
        return self.v.is_integral() and all(c.is_integral() for c in self.u)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.u] + [str(self.v)]

    def __str__(self):
        return "(" + ", ".join(self.to_json()) + ")"


def on_constraint(u: Sequence[GaussRat], v: GaussRat) -> bool:
    return 2 * GaussRat.of(v).re == sum((GaussRat.of(c).abs2() for c in u), Fraction(0))


def parse_point(text: str) -> SiegelPoint:
    """Parse ``"u_1, ..., u_n, v"``, e.g. ``"0, 1/3i"``."""
    parts = [s for s in text.replace("(", "").replace(")", "").split(",")]
    if len(parts) < 2:
        raise DomainError(f"expected at least two coordinates in {text!r}")
    coords = [parse_gauss(s) for s in parts]
    return SiegelPoint(tuple(coords[:-1]), coords[-1])


def origin(n: int = 1) -> SiegelPoint:
    return SiegelPoint(tuple(GaussRat() for _ in range(n)), GaussRat())


def _pairing(u: Sequence[GaussRat], w: Sequence[GaussRat]) -> GaussRat:
    total = GaussRat()
    for a, b in zip(u, w):
        total = total + a.conj() * b
    return total


def s_mul(g: SiegelPoint, h: SiegelPoint) -> SiegelPoint:
    if g.n != h.n:
        raise DomainError("points live in different dimensions")
    u = tuple(a + b for a, b in zip(g.u, h.u))
    v = g.v + h.v + _pairing(g.u, h.u)
    if not on_constraint(u, v):
        raise InvariantViolation("product left the Siegel constraint")
    return SiegelPoint(u, v)


def s_inv(g: SiegelPoint) -> SiegelPoint:
    return SiegelPoint(tuple(-c for c in g.u), g.v.conj())


def s_norm(h: SiegelPoint) -> Radical:
    return Radical(h.v.abs2(), 4)


def s_dist(g: SiegelPoint, h: SiegelPoint) -> Radical:
    return s_norm(s_mul(s_inv(g), h))


def koranyi_invert(h: SiegelPoint) -> SiegelPoint:
    """(u, v) -> (-u/v, 1/v)."""
    if h.v.is_zero():
        raise DomainError("inversion is undefined at the origin")
    inv_v = 1 / h.v
    return SiegelPoint(tuple(-c * inv_v for c in h.u), inv_v)


def to_siegel(g, spec: CarnotSpec | None = None) -> SiegelPoint:
    """Isometry from Carnot coordinates (x, y, t) to the Siegel model."""
    if not isinstance(g, CarnotPoint):
        g = CarnotPoint.of(g)
    n = (len(g) - 1) // 2
    if spec is not None and spec.layer_dims != (2 * n, 1):
        raise DomainError("to_siegel needs a Heisenberg spec")
    xs, ys, t = g.coords[:n], g.coords[n : 2 * n], g.coords[-1]
    u = tuple(GaussRat(x, y) * _ONE_PLUS_I for x, y in zip(xs, ys))
    horiz = sum((x * x for x in xs), Fraction(0)) + sum((y * y for y in ys), Fraction(0))
    return SiegelPoint(u, GaussRat(horiz, t))


def to_carnot(h: SiegelPoint) -> CarnotPoint:
    w = [c / _ONE_PLUS_I for c in h.u]
    return CarnotPoint(tuple(c.re for c in w) + tuple(c.im for c in w) + (h.v.im,))


def carnot_spec_for(h: SiegelPoint) -> CarnotSpec:
    return heisenberg(h.n)


# ---------------------------------------------------------------------------
# heights


@dataclass(frozen=True)
class RationalSiegelPoint:
    """Lowest-terms witness: the point is (p_1/q, ..., p_n/q, p_{n+1}/q)."""

    p_vec: tuple[GaussInt, ...]
    q: GaussInt

    @property
    def norm_q(self) -> int:
        return self.q.norm()

    @property
    def height(self) -> Radical:
        return Radical(self.q.norm(), 2)

    def point(self) -> SiegelPoint:
        coords = [GaussRat.from_parts(p, self.q) for p in self.p_vec]
        return SiegelPoint(tuple(coords[:-1]), coords[-1])

    def in_lowest_terms(self) -> bool:
        g = self.q
        for p in self.p_vec:
            g = gi_gcd(g, p)
        return g.is_unit()

    def to_json(self) -> dict:
        return {
            "point": self.point().to_json(),
            "p_vec": [str(p) for p in self.p_vec],
            "q": str(self.q),
            "norm_q": self.norm_q,
        }


def siegel_height(h: SiegelPoint) -> RationalSiegelPoint:
    """Minimal canonical denominator q and the numerators p = q * coordinates."""
    coords = list(h.u) + [h.v]
    q = GaussInt(1, 0)
    for c in coords:
        q = gi_lcm(q, c.den)
    qr = GaussRat.of(q)
    p_vec = tuple(GaussInt.of(c * qr) for c in coords)
    return RationalSiegelPoint(p_vec, q)


def _witness(q: GaussInt, r_tilde: GaussInt, p: GaussInt) -> RationalSiegelPoint:
    return RationalSiegelPoint((r_tilde * GaussInt(1, 1), p), q)


def _gcd3_is_unit(r: GaussInt, p: GaussInt, q: GaussInt) -> bool:
    return gi_gcd(gi_gcd(q, r), p).is_unit()


# ---------------------------------------------------------------------------
# rational points with a fixed denominator


def _check_denominator(q) -> GaussInt:
    q = GaussInt.of(q)
    if q.is_zero() or q != q.canonical():
        raise DomainError("q must be a non-zero canonical Gaussian integer")
    if q.im != 0 and math.gcd(q.re, q.im) != 1:
        raise DomainError("q needs coprime real and imaginary parts (or be a rational integer)")
    return q


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    return old_r, old_s, old_t


class _Progression:
    """Solutions p of Re(p conj q) = m, written p = p0 + k * i q / g."""

    def __init__(self, q: GaussInt):
        self.q = q
        self.a, self.b = q.re, q.im
        self.g, self.x0, self.y0 = _ext_gcd(self.a, self.b)
        self.N = q.norm()
        self.step = self.N // self.g

    def base(self, m: int):
        """(p0, s0) with s0 = Im(p0 conj q), or None when no solution exists."""
        if m % self.g:
            return None
        p0 = GaussInt(m // self.g * self.x0, m // self.g * self.y0)
        s0 = p0.im * self.a - p0.re * self.b
        return p0, s0

    def at(self, p0: GaussInt, k: int) -> GaussInt:
        return GaussInt(p0.re - k * (self.b // self.g), p0.im + k * (self.a // self.g))


def _coprime_to(q: GaussInt):
    primes = list(factor(q)) if not q.is_unit() else []
    return lambda z: not any(pi.divides(z) for pi in primes)


def _k_range(s0: int, step: int, smax: int) -> range:
    """k with |s0 + k*step| <= smax."""
    lo = -((smax + s0) // step)
    hi = (smax - s0) // step
    return range(lo, hi + 1)


def _rational_points_raw(q: GaussInt, R) -> Iterator[tuple[GaussInt, GaussInt]]:
    R4 = Fraction(R) ** 4
    if R4 < 0:
        raise DomainError("R must be non-negative")
    prog = _Progression(q)
    N = prog.N
    bound = R4 * N * N  # |p conj q|^2 <= R^4 |q|^4
    rmax = math.isqrt(math.floor(Fraction(R) ** 2 * N))
    coprime = _coprime_to(q)
    for x in range(-rmax, rmax + 1):
        for y in range(-rmax, rmax + 1):
            m = x * x + y * y
            if m * m > bound:
                continue
            rt = GaussInt(x, y)
            if not coprime(rt):
                continue
            base = prog.base(m)
            if base is None:
                continue
            p0, s0 = base
            smax = math.isqrt(math.floor(bound - m * m))
            for k in _k_range(s0, prog.step, smax):
                yield rt, prog.at(p0, k)


def enumerate_rationals(q, R) -> list[RationalSiegelPoint]:
    """Rational points (r/q, p/q) of Sieg^1 with gauge norm <= R and gcd(r/(1+i), q) = 1.

    Ordered lexicographically on (r/(1+i), p).
    """
    q = _check_denominator(q)
    pts = sorted(_rational_points_raw(q, R), key=lambda rp: (rp[0].re, rp[0].im, rp[1].re, rp[1].im))
    return [_witness(q, rt, p) for rt, p in pts]


def count_rationals(q, R) -> int:
    """len(enumerate_rationals(q, R)) without materializing the points."""
    q = _check_denominator(q)
    R4 = Fraction(R) ** 4
    prog = _Progression(q)
    N = prog.N
    bound = R4 * N * N
    rmax = math.isqrt(math.floor(Fraction(R) ** 2 * N))
    coprime = _coprime_to(q)
    total = 0
    for x in range(-rmax, rmax + 1):
        for y in range(-rmax, rmax + 1):
            m = x * x + y * y
            if m * m > bound or not coprime(GaussInt(x, y)):
                continue
            base = prog.base(m)
            if base is None:
                continue
            total += len(_k_range(base[1], prog.step, math.isqrt(math.floor(bound - m * m))))
    return total


# ---------------------------------------------------------------------------
# rational points near a given point


@dataclass(frozen=True)
class SiegelHit:
    rational: RationalSiegelPoint
    dist: Radical | float

    @property
    def norm_q(self) -> int:
        return self.rational.q.norm()

    def quality(self) -> float:
        """|q| * d(h, p/q)."""
        return math.sqrt(self.norm_q) * float(self.dist)

    def sort_key(self):
        q = self.rational.q
        return (q.norm(), q.re, q.im, *[(p.re, p.im) for p in self.rational.p_vec])


def within(d4: Fraction, C, alpha, norm_q: int) -> bool:
    """Exact test d <= C |q|^-alpha given d^4, for rational C and alpha."""
    C = Fraction(C)
    alpha = Fraction(alpha)
    if C <= 0:
        return d4 == 0 and C == 0
    # d^4 <= C^4 N^(-2 alpha); raise to the denominator of alpha
    k = alpha.denominator
    lhs = d4 ** k * Fraction(norm_q) ** (2 * alpha.numerator)
    return lhs <= C ** (4 * k)


def rationals_near(h: SiegelPoint, C, alpha, nmax: int, *, lowest_terms: bool = True) -> list[SiegelHit]:
    """Rational points with |q| <= nmax and d(h, p/q) <= C |q|^-alpha.

    Candidates come from the compiled scan in floating point with a small
    widening of the threshold; every candidate is then rechecked exactly.
    Sorted by (|q|^2, q, numerators).
    """
    from .kernels import siegel_scan

    if h.n != 1:
        raise DomainError("rational scans are implemented for n = 1")
    C = Fraction(C)
    alpha = Fraction(alpha)
    u, v = h.u[0], h.v
    rows, _ = siegel_scan(float(u.re), float(u.im), float(v.im), float(C), float(alpha), int(nmax))
    hits = []
    hinv = s_inv(h)
    for a, b, rr, ri, pr, pi in rows.tolist():
        q = GaussInt(a, b)
        r = GaussInt(rr, ri) * GaussInt(1, 1)
        p = GaussInt(pr, pi)
        if lowest_terms and not _gcd3_is_unit(r, p, q):
            continue
        wit = RationalSiegelPoint((r, p), q)
        w = s_mul(hinv, wit.point()).v
        d4 = w.abs2()
        if within(d4, C, alpha, q.norm()):
            hits.append(SiegelHit(wit, Radical(d4, 4)))
    hits.sort(key=SiegelHit.sort_key)
    return hits


def _lattice_rows(u: GaussRat, v: GaussRat, Q: Fraction, D: Fraction):
    """Integer basis of the form whose unit-ish ball holds all near rationals.

    Coordinates z = (q, r~, p) in Z[i]^3 map to the three complex numbers
    q/Q, (r~ - u' q)/(D Q) and (p - conj(u)(1+i) r~ + conj(v) q)/(D^2 Q), with
    u' = u/(1+i).  Any rational within D of (u, v) with |q| <= Q has squared
    image length at most 3.
    """
    up = u / _ONE_PLUS_I
    w1 = u.conj() * _ONE_PLUS_I
    vb = v.conj()
    A = D * Q
    B = D * D * Q
    zero = GaussRat()
    images = []
    for unit in (GaussRat(1), GaussRat(0, 1)):
        images.append((unit / Q, -(up * unit) / A, (vb * unit) / B))  # q
        images.append((zero, unit / A, -(w1 * unit) / B))  # r~
        images.append((zero, zero, unit / B))  # p
    order = [0, 3, 1, 4, 2, 5]  # (q re, q im, r~ re, r~ im, p re, p im)
    real_rows = []
    for k in order:
        row = []
        for c in images[k]:
            row.extend([c.re, c.im])
        real_rows.append(row)
    scale = 1
    for row in real_rows:
        for x in row:
            scale = math.lcm(scale, x.denominator)
    return [[int(x * scale) for x in row] for row in real_rows], scale


def _gauss_lattice_rows(u: GaussRat, v: GaussRat, Q: Fraction, D: Fraction):
    """The same form as ``_lattice_rows`` written as a rank-3 Z[i]-lattice."""
    up = u / _ONE_PLUS_I
    w1 = u.conj() * _ONE_PLUS_I
    vb = v.conj()
    A = D * Q
    B = D * D * Q
    zero = GaussRat()
    rows = [
        (GaussRat(1 / Q), -up / A, vb / B),  # q
        (zero, GaussRat(1 / A), -w1 / B),  # r~
        (zero, zero, GaussRat(1 / B)),  # p
    ]
    scale = 1
    for row in rows:
        for c in row:
            scale = math.lcm(scale, c.re.denominator, c.im.denominator)
    return [[(int(c.re * scale), int(c.im * scale)) for c in row] for row in rows], scale


# with the shortest reduced vector below bound/64 the real enumeration would
# visit hundreds of its Gaussian multiples
_MULTIPLE_GUARD = 64


def rationals_within(h: SiegelPoint, Q, D, *, lowest_terms: bool = True, method: str = "auto") -> list[SiegelHit]:
    """Every rational point with 0 < |q| <= Q and d(h, point) <= D, exactly.

    Uses lattice reduction, so the cost depends on (Q D)^6 rather than on Q;
    meant for very large heights where a direct scan is impossible.  The
    default reduces over Z[i] and skips non-primitive vectors, which keeps
    the cost bounded when h sits very close to a low-height rational.
    ``method="real"`` reduces the 6-dimensional real embedding instead (fast
    LLL, but it enumerates every multiple of a very short vector), and
    ``"auto"`` uses the real route unless the reduced basis has such a vector.
    """
    from ._lattice import gaussian_short_vectors, lll, short_vectors

    if h.n != 1:
        raise DomainError("rational searches are implemented for n = 1")
    Q = Fraction(Q)
    D = Fraction(D)
    if Q <= 0 or D <= 0:
        return []
    bound = Fraction(3)
    reduced = None
    if method == "auto":
        rows, scale = _lattice_rows(h.u[0], h.v, Q, D)
        reduced = lll(rows)
        shortest = min(sum(x * x for x in r) for r in reduced[0])
        method = "gauss" if Fraction(shortest, scale * scale) * _MULTIPLE_GUARD < bound else "real"
    if method == "gauss":
        rows, scale = _gauss_lattice_rows(h.u[0], h.v, Q, D)
        vectors = [
            tuple(x for c in z for x in c)
            for z in gaussian_short_vectors(rows, scale, bound, primitive=lowest_terms)
        ]
    elif method == "real":
        if reduced is None:
            rows, scale = _lattice_rows(h.u[0], h.v, Q, D)
            reduced = lll(rows)
        vectors = short_vectors(rows, scale, bound, reduce=lambda _rows: reduced)
    else:
        raise DomainError(f"unknown lattice method {method!r}")
    hinv = s_inv(h)
    D4 = D ** 4
    Q2 = Q * Q
    seen = set()
    hits = []
    for z in vectors:
        q = GaussInt(z[0], z[1])
        if q.is_zero() or q.norm() > Q2:
            continue
        unit = q.unit_to_canonical()
        q = q * unit
        rt = GaussInt(z[2], z[3]) * unit
        p = GaussInt(z[4], z[5]) * unit
        if 2 * (p.re * q.re + p.im * q.im) != 2 * rt.norm():
            continue
        r = rt * GaussInt(1, 1)
        if lowest_terms and not _gcd3_is_unit(r, p, q):
            continue
        key = (q, r, p)
        if key in seen:
            continue
        seen.add(key)
        wit = RationalSiegelPoint((r, p), q)
        d4 = s_mul(hinv, wit.point()).v.abs2()
        if d4 <= D4:
            hits.append(SiegelHit(wit, Radical(d4, 4)))
    hits.sort(key=SiegelHit.sort_key)
    return hits
