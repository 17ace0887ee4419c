"""Continued fractions on the Heisenberg group (Siegel model, n = 1).

Digits are lattice points of Sieg^1(Z).  A point h is expanded by taking its
nearest lattice point g0, then repeatedly inverting the remainder and
splitting off the nearest lattice point again:

    h = g0 * iota(g1 * iota(g2 * ...)).

Rational points are carried internally as integer triples (U, V, d) meaning
u = U/d, v = V/d, so the hot loop never touches Fractions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError, InvariantViolation
from .siegel import RationalSiegelPoint, SiegelPoint, s_dist, s_norm, siegel_height
from .zkernel import GaussRat, Radical

# (ur, ui, vr, vi, d) with d > 0
_Rep = tuple[int, int, int, int, int]


def _reduce(ur, ui, vr, vi, d) -> _Rep:
    g = math.gcd(math.gcd(math.gcd(ur, ui), math.gcd(vr, vi)), d)
    if g > 1:
        return ur // g, ui // g, vr // g, vi // g, d // g
    return ur, ui, vr, vi, d


def _from_point(h: SiegelPoint) -> _Rep:
    if h.n != 1:
        raise DomainError("continued fractions are implemented for n = 1")
    u, v = h.u[0], h.v
    d = math.lcm(u.re.denominator, u.im.denominator, v.re.denominator, v.im.denominator)
    return _reduce(int(u.re * d), int(u.im * d), int(v.re * d), int(v.im * d), d)


def _to_point(rep: _Rep) -> SiegelPoint:
    ur, ui, vr, vi, d = rep
    return SiegelPoint((GaussRat(Fraction(ur, d), Fraction(ui, d)),), GaussRat(Fraction(vr, d), Fraction(vi, d)))


def _digit_point(x: int, y: int, pr: int, pi: int) -> SiegelPoint:
    return SiegelPoint((GaussRat(x, y),), GaussRat(pr, pi))


def _iota(rep: _Rep) -> _Rep:
    ur, ui, vr, vi, d = rep
    nv = vr * vr + vi * vi
    if nv == 0:
        raise DomainError("inversion is undefined at the origin")
    # -U conj(V), d conj(V), N(V)
    return _reduce(-(ur * vr + ui * vi), -(ui * vr - ur * vi), d * vr, -d * vi, nv)


def _left_mul(gamma: tuple[int, int, int, int], rep: _Rep) -> _Rep:
    """gamma * h for a lattice point gamma = (r, p)."""
    x, y, pr, pi = gamma
    ur, ui, vr, vi, d = rep
    # v'' = p + v + conj(r) u
    cr = x * ur + y * ui
    ci = x * ui - y * ur
    return _reduce(x * d + ur, y * d + ui, pr * d + vr + cr, pi * d + vi + ci, d)


def _nearest(rep: _Rep, radius: int = 2) -> tuple[tuple[int, int, int, int], int]:
    """Nearest lattice point and d^2 |w|^2 for the winning candidate.

    For each admissible horizontal part r, Re p is fixed by the lattice
    constraint and the best Im p is the floor or ceiling of an explicit
    target; only those two are compared.  Ties go to the lexicographically
    smallest (Re r, Im r, Re p, Im p).
    """
    ur, ui, vr, vi, d = rep
    best = None
    x_lo = -((radius * d - ur) // d)
    x_hi = (ur + radius * d) // d
    y_lo = -((radius * d - ui) // d)
    y_hi = (ui + radius * d) // d
    for x in range(x_lo, x_hi + 1):
        for y in range(y_lo, y_hi + 1):
            if (x + y) & 1:
                continue
            pr = (x * x + y * y) >> 1
            cr = x * ur + y * ui
            ci = x * ui - y * ur
            wre = pr * d + vr - cr
            base_im = vi - ci
            f = base_im // d
            for pi in (f, f + 1):
                wim = base_im - pi * d
                key = (wre * wre + wim * wim, x, y, pr, pi)
                if best is None or key < best:
                    best = key
    _, x, y, pr, pi = best
    return (x, y, pr, pi), best[0]


def _remainder(gamma, rep: _Rep) -> _Rep:
    x, y, pr, pi = gamma
    ur, ui, vr, vi, d = rep
    cr = x * ur + y * ui
    ci = x * ui - y * ur
    return _reduce(ur - x * d, ui - y * d, pr * d + vr - cr, -pi * d + vi - ci, d)


def nearest_sieg_int(h: SiegelPoint) -> SiegelPoint:
    """A lattice point of Sieg^1(Z) closest to h in the gauge metric."""
    gamma, _ = _nearest(_from_point(h))
    return _digit_point(*gamma)


def nearest_bruteforce(h: SiegelPoint, radius: int = 8) -> SiegelPoint:
    """Reference search over every lattice point with |r - u|, |p - v| <= radius per coordinate."""
    ur, ui, vr, vi, d = _from_point(h)
    best = None
    for x in range(math.floor(Fraction(ur, d)) - radius, math.ceil(Fraction(ur, d)) + radius + 1):
        for y in range(math.floor(Fraction(ui, d)) - radius, math.ceil(Fraction(ui, d)) + radius + 1):
            if (x + y) & 1:
                continue
            pr = (x * x + y * y) >> 1
            if abs(Fraction(pr) - Fraction(vr, d)) > radius:
                continue
            for pi in range(math.floor(Fraction(vi, d)) - radius, math.ceil(Fraction(vi, d)) + radius + 1):
                w = _remainder((x, y, pr, pi), (ur, ui, vr, vi, d))
                n = Fraction(w[2] ** 2 + w[3] ** 2, w[4] ** 2)
                key = (n, x, y, pr, pi)
                if best is None or key < best:
                    best = key
    return _digit_point(*best[1:])


def gauss_step(h: SiegelPoint) -> tuple[SiegelPoint, SiegelPoint] | None:
    """One step of the Gauss map: (digit [iota h], remainder [iota h]^-1 * iota h).

    Returns None for h = 0, where the map stops.
    """
    rep = _from_point(h)
    if rep[2] == 0 and rep[3] == 0:
        return None
    inv = _iota(rep)
    gamma, _ = _nearest(inv)
    return _digit_point(*gamma), _to_point(_remainder(gamma, inv))


@dataclass
class CFExpansion:
    gamma0: SiegelPoint
    digits: list[SiegelPoint]
    remainders: list[SiegelPoint]
    terminated: bool
    precision_log: list[str] = field(default_factory=list)
    _convergents: list[RationalSiegelPoint] | None = field(default=None, repr=False)

    @property
    def convergents(self) -> list[RationalSiegelPoint]:
        if self._convergents is None:
            self._convergents = convergents(self)
        return self._convergents

    @property
    def status(self) -> str:
        return "unstable" if "unstable" in self.precision_log else "ok"

    def to_json(self) -> dict:
        return {
            "gamma0": self.gamma0.to_json(),
            "digits": [g.to_json() for g in self.digits],
            "remainders": [r.to_json() for r in self.remainders],
            "convergents": [
                {"r": str(c.p_vec[0]), "p": str(c.p_vec[1]), "q": str(c.q)} for c in self.convergents
            ],
            "terminated": self.terminated,
            "digit_bound": str(digit_bound(self)),
            "status": self.status,
        }


def _expand_rep(rep: _Rep, max_digits: int):
    gamma0, _ = _nearest(rep)
    cur = _remainder(gamma0, rep)
    digits = []
    rems = []
    while cur[2] != 0 or cur[3] != 0:
        if len(digits) >= max_digits:
            return gamma0, digits, rems, False
        rems.append(cur)
        inv = _iota(cur)
        gamma, _ = _nearest(inv)
        digits.append(gamma)
        cur = _remainder(gamma, inv)
    return gamma0, digits, rems, True


def expand(h: SiegelPoint, max_digits: int = 10_000) -> CFExpansion:
    """Continued fraction of a rational point; stops on termination or max_digits."""
    gamma0, digits, rems, done = _expand_rep(_from_point(h), max_digits)
    return CFExpansion(
        _digit_point(*gamma0),
        [_digit_point(*g) for g in digits],
        [_to_point(r) for r in rems],
        done,
        ["exact"] * len(digits),
    )


def dyadic_surrogate(u: complex, v_im: float, bits: int) -> SiegelPoint:
    """Rational point at dyadic precision 2^-bits near (u, |u|^2/2 + i v_im).

    u and Im v are rounded; Re v is then forced by the constraint.
    """
    scale = 1 << bits
    ur = Fraction(round(Fraction(u.real) * scale), scale)
    ui = Fraction(round(Fraction(u.imag) * scale), scale)
    vi = Fraction(round(Fraction(v_im) * scale), scale)
    return SiegelPoint((GaussRat(ur, ui),), GaussRat((ur * ur + ui * ui) / 2, vi))


def expand_approx(approx: Callable[[int], SiegelPoint], max_digits: int, bits: int = 64) -> CFExpansion:
    """Expansion of a point known only through rational approximations.

    ``approx(k)`` must return a point within about 2^-k of the target.  The
    expansions at precisions k and 2k are compared and only their common
    leading digits are accepted; the first disagreement is logged as
    "unstable" and ends the expansion.
    """
    lo = expand(approx(bits), max_digits)
    hi = expand(approx(2 * bits), max_digits)
    if lo.gamma0 != hi.gamma0:
        return CFExpansion(hi.gamma0, [], [], False, ["unstable"])
    digits, rems, log = [], [], []
    for k in range(min(len(lo.digits), len(hi.digits))):
        if lo.digits[k] != hi.digits[k]:
            log.append("unstable")
            break
        digits.append(hi.digits[k])
        rems.append(hi.remainders[k])
        log.append("stable")
    else:
        if len(lo.digits) != len(hi.digits) and len(digits) < max_digits:
            log.append("unstable")
    return CFExpansion(hi.gamma0, digits, rems, False, log)


def evaluate(gamma0: SiegelPoint, digits: Sequence[SiegelPoint]) -> SiegelPoint:
    """gamma0 * iota(g1 * iota(g2 * ... iota(gn))) in exact arithmetic."""
    reps = [_from_point(g) for g in digits]
    for g in [gamma0, *digits]:
        if not g.is_integral():
            raise DomainError(f"digit {g} is not a lattice point")
    if not reps:
        return gamma0
    cur = reps[-1]
    for k in range(len(reps) - 2, -1, -1):
        if cur[2] == 0 and cur[3] == 0:
            raise DomainError(f"suffix starting at digit {k + 2} evaluates to the origin")
        cur = _left_mul(reps[k][:2] + reps[k][2:4], _iota(cur))
    if cur[2] == 0 and cur[3] == 0:
        raise DomainError("suffix starting at digit 1 evaluates to the origin")
    g0 = _from_point(gamma0)
    return _to_point(_left_mul(g0[:4], _iota(cur)))


def convergents(expansion: CFExpansion) -> list[RationalSiegelPoint]:
    """Lowest-terms witnesses of the prefix evaluations (k = 1..n digits).

    Without digits the only convergent is gamma0 itself.
    """
    if not expansion.digits:
        return [siegel_height(expansion.gamma0)]
    out = []
    for k in range(1, len(expansion.digits) + 1):
        wit = siegel_height(evaluate(expansion.gamma0, expansion.digits[:k]))
        if not wit.in_lowest_terms():
            raise InvariantViolation(f"convergent {k} is not in lowest terms")
        out.append(wit)
    return out


def digit_bound(expansion: CFExpansion) -> Radical:
    """Largest gauge norm among the digits after gamma0 (0 if there are none)."""
    best = Radical(0)
    for g in expansion.digits:
        nrm = s_norm(g)
        if nrm > best:
            best = nrm
    return best


def quality(h: SiegelPoint, expansion: CFExpansion, n: int) -> float:
    """|q_n| * d(h, convergent n)."""
    conv = expansion.convergents[n - 1] if expansion.digits else expansion.convergents[0]
    d = s_dist(h, conv.point())
    return math.sqrt(conv.q.norm()) * float(d)


def chain_product(expansion: CFExpansion) -> Fraction:
    """Product of |v_i|^2 over the remainders before termination."""
    out = Fraction(1)
    for r in expansion.remainders:
        out *= r.v.abs2()
    return out


def check_chain_identity(h: SiegelPoint, expansion: CFExpansion | None = None) -> bool:
    """prod |v_i|^2 * |q|^2 == 1 for the height q of a rational point."""
    if expansion is None:
        expansion = expand(h)
    if not expansion.terminated:
        raise DomainError("chain identity needs a terminated expansion")
    return chain_product(expansion) * siegel_height(h).q.norm() == 1


def in_fundamental_domain(h: SiegelPoint, radius: int = 2) -> bool:
    """d(h, 0) <= d(h, g) for every lattice g in the search window."""
    rep = _from_point(h)
    _, best = _nearest(rep, radius)
    return rep[2] ** 2 + rep[3] ** 2 <= best


def synthesize(digits: Sequence[SiegelPoint], gamma0: SiegelPoint | None = None) -> SiegelPoint:
    """Rational point with the given digit string (no validation that it is admissible)."""
    if gamma0 is None:
        gamma0 = SiegelPoint((GaussRat(),), GaussRat())
    return evaluate(gamma0, digits)

