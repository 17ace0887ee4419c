"""Horoballs over the boundary of complex hyperbolic 2-space.

A point of the hyperbolic space is written (u, v) with 2 Re v > |u|^2; its
horoheight s satisfies s^2 = Re v - |u|^2/2, and the boundary (s = 0) is the
Siegel model.  A horoball based at infinity is {s >= height}; a horoball based
at a boundary point is the image of one at infinity under an isometry, and we
record it by its base and its maximal height.

Heights are exact: a height is stored as a ``Radical`` of index 2, so the
inversion action and the continued-fraction chain can be compared with ==.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InvariantViolation
from .heiscf import gauss_step, nearest_sieg_int
from .siegel import (
    RationalSiegelPoint,
    SiegelPoint,
    koranyi_invert,
    origin,
    rationals_near,
    s_inv,
    s_mul,
    siegel_height,
)
from .zkernel import GaussRat, Radical, parse_gauss


class _Infinity:
    """The cusp at infinity, used as a horoball base."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _as_height(s) -> Radical:
    if isinstance(s, Radical):
        r = s
    else:
        r = Radical(Fraction(s))
    if r <= 0:
        raise DomainError(f"horoball height must be positive, got {s}")
    return r


def _sqrt(x: Fraction) -> Radical:
    return Radical(x, 2)


@dataclass(frozen=True)
class Horoball:
    base: SiegelPoint | _Infinity
    height: Radical

    def __post_init__(self):
        object.__setattr__(self, "height", _as_height(self.height))

    @property
    def at_infinity(self) -> bool:
        return self.base is INFINITY

    def to_json(self) -> dict:
        base = "inf" if self.at_infinity else self.base.to_json()
        return {"base": base, "height": str(self.height)}


def _gauss(x) -> GaussRat:
    return parse_gauss(x) if isinstance(x, str) else GaussRat.of(x)


def horoheight(u, v) -> Radical:
    """s with s^2 = Re v - |u|^2 / 2 for an interior point (u, v)."""
    if isinstance(u, (str, int, Fraction, GaussRat)) or not isinstance(u, Sequence):
        u = (u,)
    us = [_gauss(c) for c in u]
    v = _gauss(v)
    s2 = v.re - sum((c.abs2() for c in us), Fraction(0)) / 2
    if s2 <= 0:
        raise DomainError("horoheight is defined only for interior points (2 Re v > |u|^2)")
    return _sqrt(s2)


def invert_horoball(H: Horoball) -> Horoball:
    """Image of a horoball under the Koranyi inversion.

    Infinity and the origin are exchanged with the height inverted; any other
    base b = (u, v) goes to iota(b) and the height is divided by |v|.
    """
    if H.at_infinity:
        return Horoball(origin(1), 1 / H.height)
    if H.base.is_zero():
        return Horoball(INFINITY, 1 / H.height)
    abs_v = _sqrt(H.base.v.abs2())
    return Horoball(koranyi_invert(H.base), H.height / abs_v)


def family_horoball(h: RationalSiegelPoint, s0=1) -> Horoball:
    """Member of the invariant family through the origin with height s0, based at h."""
    return Horoball(h.point(), rational_horoheight(h, s0))


@dataclass(frozen=True)
class HoroheightReport:
    closed_form: Radical
    chain: Radical
    chain_product: Fraction  # prod |v_i|^2 along the continued fraction
    steps: int

    @property
    def agree(self) -> bool:
        return self.closed_form == self.chain


def horoheight_report(h: RationalSiegelPoint, s0=1) -> HoroheightReport:
    """Both derivations of the horoheight at a rational base.

    The chain walks the Gauss map from the base to the origin.  A horoball of
    height sigma based at a remainder (u_i, v_i) is carried by the inversion
    to one of height sigma / |v_i|, and integer translations keep heights, so
    reaching the origin with the family height s0 forces
    sigma = s0 * prod |v_i|.  The closed form is s0 / |q|.
    """
    if h.point().n != 1:
        raise DomainError("horoheights via continued fractions need n = 1")
    if not h.in_lowest_terms():
        raise DomainError("rational base must be in lowest terms")
    s0 = _as_height(s0)
    s0_sq = s0.power(2) if s0.index in (1, 2) else None
    if s0_sq is None:
        raise DomainError("s0 must be rational or a square root of a rational")
    pt = h.point()
    # first remainder: translate by the nearest integer point
    cur = s_mul(s_inv(nearest_sieg_int(pt)), pt)
    product = Fraction(1)
    steps = 0
    while not cur.is_zero():
        product *= cur.v.abs2()
        step = gauss_step(cur)
        if step is None:
            raise InvariantViolation("continued-fraction chain reached the origin prematurely")
        _, cur = step
        steps += 1
    closed = _sqrt(s0_sq / h.norm_q)
    chain = _sqrt(s0_sq * product)
    if closed != chain:
        raise InvariantViolation(
            f"horoheight chain {chain} disagrees with s0/|q| = {closed} at {h.point()}"
        )
    return HoroheightReport(closed, chain, product, steps)


def rational_horoheight(h: RationalSiegelPoint | SiegelPoint, s0=1) -> Radical:
    """s0 / |q|, checked against the continued-fraction chain."""
    if isinstance(h, SiegelPoint):
        h = siegel_height(h)
    return horoheight_report(h, s0).closed_form


# ---------------------------------------------------------------------------
# excursions


@dataclass(frozen=True)
class ExcursionRecord:
    rational: RationalSiegelPoint
    depth: float  # math.inf when the point is the base itself

    @property
    def norm_q(self) -> int:
        return self.rational.norm_q

    def row(self) -> list:
        q = self.rational.q
        r, p = self.rational.p_vec
        return [q.re, q.im, r.re, r.im, p.re, p.im, self.depth]


def _depth(dist: Radical, s0: Fraction, norm_q: int) -> float:
    if dist.value == 0:
        return math.inf
    # logs of the exact parts, so tiny distances do not underflow
    log_d = (math.log(dist.value.numerator) - math.log(dist.value.denominator)) / dist.index
    return max(0.0, 2 * (math.log(s0) - 0.5 * math.log(norm_q) - log_d))


def excursion_profile(h: SiegelPoint, s0=1, Nnorm: int = 200) -> list[ExcursionRecord]:
    """Rational bases with |q| <= Nnorm whose family horoball shadows h.

    Only bases with positive depth are returned: by construction depth > 0
    exactly when d(h, b) < s0 / |q|, so every omitted base has depth 0.
    Sorted by |q|^2 then by the witness.
    """
    s0 = Fraction(s0)
    if s0 <= 0:
        raise DomainError("s0 must be positive")
    out = []
    for hit in rationals_near(h, s0, 1, Nnorm):
        d4 = hit.dist.power(4)
        if d4 * hit.norm_q ** 2 == s0 ** 4:
            continue  # on the shadow boundary: depth exactly 0
        out.append(ExcursionRecord(hit.rational, _depth(hit.dist, s0, hit.norm_q)))
    return out


def max_depth(profile: Sequence[ExcursionRecord], Nnorm: int | None = None) -> float:
    """Deepest excursion among bases with |q| <= Nnorm (all bases if None)."""
    best = 0.0
    for rec in profile:
        if Nnorm is None or rec.norm_q <= Nnorm * Nnorm:
            best = max(best, rec.depth)
    return best
