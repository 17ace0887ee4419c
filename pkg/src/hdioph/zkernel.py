"""Exact arithmetic in Z[i] and Q(i) and number-theoretic counting over Z[i].

Gaussian integers are immutable ``GaussInt`` values.  Gaussian rationals
(``GaussRat``) keep their real and imaginary parts as ``Fraction`` and expose
the reduced Gaussian numerator/denominator on demand.

Besides gcd, totient and Moebius function the module provides the counting
oracles used to check lattice-point and linear-form estimates, and the
partial sums ``analytic_sum`` which are evaluated exactly and rounded once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError


def _round_half_down(n: int, d: int) -> int:
    """Nearest integer to n/d (d > 0), ties toward -infinity."""
    return -((d - 2 * n) // (2 * d))


class GaussInt:
    """An element re + im*i of Z[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        if not isinstance(re, (int, np.integer)) or not isinstance(im, (int, np.integer)):
            raise TypeError("GaussInt parts must be integers")
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussInt is immutable")

    @classmethod
    def of(cls, x) -> "GaussInt":
        if isinstance(x, GaussInt):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(int(x), 0)
        if isinstance(x, complex) and x.real.is_integer() and x.imag.is_integer():
            return cls(int(x.real), int(x.imag))
        if isinstance(x, tuple) and len(x) == 2:
            return cls(x[0], x[1])
        if isinstance(x, GaussRat) and x.is_integral():
            return cls(int(x.re), int(x.im))
        raise TypeError(f"cannot interpret {x!r} as a Gaussian integer")

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def canonical(self) -> "GaussInt":
        """The associate with re > 0 and im >= 0 (zero maps to zero)."""
        a, b = self.re, self.im
        if a == 0 and b == 0:
            return self
        while not (a > 0 and b >= 0):
            a, b = -b, a
        return GaussInt(a, b)

    def unit_to_canonical(self) -> "GaussInt":
        """The unit u with u*self == self.canonical()."""
        if self.is_zero():
            return GaussInt(1, 0)
        u = GaussInt(1, 0)
        a, b = self.re, self.im
        while not (a > 0 and b >= 0):
            a, b = -b, a
            u = GaussInt(-u.im, u.re)
        return u

    def __add__(self, other):
        try:
            o = GaussInt.of(other)
        except TypeError:
            return NotImplemented
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussInt.of(other)
        except TypeError:
            return NotImplemented
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussInt.of(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other):
        try:
            o = GaussInt.of(other)
        except TypeError:
            return NotImplemented
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative power of a Gaussian integer")
        out = GaussInt(1, 0)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divides(self, other: "GaussInt") -> bool:
        if self.is_zero():
            return GaussInt.of(other).is_zero()
        o = GaussInt.of(other) * self.conj()
        n = self.norm()
        return o.re % n == 0 and o.im % n == 0

    def exact_div(self, other) -> "GaussInt":
        o = GaussInt.of(other)
        num = self * o.conj()
        n = o.norm()
        if n == 0 or num.re % n or num.im % n:
            raise DomainError(f"{o} does not divide {self}")
        return GaussInt(num.re // n, num.im // n)

    def __eq__(self, other):
        if isinstance(other, GaussInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, np.integer)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRat):
            return other == self
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def __str__(self):
        return format_gauss(Fraction(self.re), Fraction(self.im))


ONE = GaussInt(1, 0)
ZERO = GaussInt(0, 0)
ONE_PLUS_I = GaussInt(1, 1)
UNITS = (GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1))


def gi_divmod(a: GaussInt, b: GaussInt) -> tuple[GaussInt, GaussInt]:
    """Rounded-quotient division: a = q*b + r with N(r) <= N(b)/2."""
    a, b = GaussInt.of(a), GaussInt.of(b)
    n = b.norm()
    if n == 0:
        raise DomainError("division by zero in Z[i]")
    num = a * b.conj()
    q = GaussInt(_round_half_down(num.re, n), _round_half_down(num.im, n))
    return q, a - q * b


def residue(a: GaussInt, b: GaussInt) -> GaussInt:
    """Class representative of a mod b; equal for congruent inputs."""
    return gi_divmod(a, b)[1]


def gi_gcd(a, b) -> GaussInt:
    """Canonical greatest common divisor via the Euclidean algorithm."""
    a, b = GaussInt.of(a), GaussInt.of(b)
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, gi_divmod(a, b)[1]
    return a.canonical()


def gi_lcm(a, b) -> GaussInt:
    a, b = GaussInt.of(a), GaussInt.of(b)
    if a.is_zero() or b.is_zero():
        return ZERO
    return (a * b).exact_div(gi_gcd(a, b)).canonical()


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussRat:
    """An element of Q(i), stored as two Fractions.

    ``num`` and ``den`` give the reduced Gaussian form: gcd(num, den) is a unit
    and den is a canonical associate.
    """

    __slots__ = ("re", "im", "_nd")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))
        object.__setattr__(self, "_nd", None)

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @classmethod
    def of(cls, x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, GaussInt):
            return cls(x.re, x.im)
        if isinstance(x, (int, Fraction, np.integer)):
            return cls(Fraction(x), 0)
        if isinstance(x, tuple) and len(x) == 2:
            return cls(x[0], x[1])
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    @classmethod
    def from_parts(cls, num, den) -> "GaussRat":
        num, den = GaussInt.of(num), GaussInt.of(den)
        n = den.norm()
        if n == 0:
            raise DomainError("zero denominator")
        t = num * den.conj()
        return cls(Fraction(t.re, n), Fraction(t.im, n))

    def _num_den(self):
        if self._nd is None:
            d = self.re.denominator * self.im.denominator // math.gcd(self.re.denominator, self.im.denominator)
            num = GaussInt(int(self.re * d), int(self.im * d))
            den = GaussInt(d, 0)
            if num.is_zero():
                nd = (ZERO, ONE)
            else:
                g = gi_gcd(num, den)
                num, den = num.exact_div(g), den.exact_div(g)
                u = den.unit_to_canonical()
                nd = (num * u, den * u)
            object.__setattr__(self, "_nd", nd)
        return self._nd

    @property
    def num(self) -> GaussInt:
        return self._num_den()[0]

    @property
    def den(self) -> GaussInt:
        return self._num_den()[1]

    def is_integral(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            o = GaussRat.of(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussRat.of(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussRat.of(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other):
        try:
            o = GaussRat.of(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussRat.of(other)
        except TypeError:
            return NotImplemented
        n = o.abs2()
        if n == 0:
            raise DomainError("division by zero in Q(i)")
        return GaussRat((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        try:
            o = GaussRat.of(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, GaussInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, np.integer)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRat({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_gauss(self.re, self.im)


def format_gauss(re: Fraction, im: Fraction) -> str:
    """Render a Gaussian rational as ``a/b+c/d i`` (parts omitted when zero)."""
    if im == 0:
        return str(re)
    im_s = "i" if abs(im) == 1 else f"{abs(im)}i"
    if re == 0:
        return ("-" if im < 0 else "") + im_s
    return f"{re}{'-' if im < 0 else '+'}{im_s}"


def parse_gauss(text: str) -> GaussRat:
    """Parse ``a/b+c/d i``; either part may be omitted, whitespace is ignored.

    Decimal literals such as ``0.1`` are read exactly.
    """
    s = "".join(text.split())
    if not s:
        raise DomainError("empty Gaussian rational")
    terms = []
    start = 0
    for k in range(1, len(s)):
        if s[k] in "+-" and s[k - 1] not in "eE/":
            terms.append(s[start:k])
            start = k
    terms.append(s[start:])
    re = Fraction(0)
    im = Fraction(0)
    for term in terms:
        try:
            if term.endswith("i"):
                body = term[:-1]
                if body in ("", "+"):
                    coeff = Fraction(1)
                elif body == "-":
                    coeff = Fraction(-1)
                else:
                    coeff = Fraction(body)
                im += coeff
            else:
                re += Fraction(term)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse Gaussian rational {text!r}") from exc
    return GaussRat(re, im)


# ---------------------------------------------------------------------------
# Exact radicals


class Radical:
    """The non-negative real number ``value ** (1/index)`` with rational value.

    Distances in the weighted infinity metric and gauge norms of rational
    points are radicals of rationals; keeping them symbolic makes comparisons
    and scaling exact.
    """

    __slots__ = ("value", "index")

    def __init__(self, value, index: int = 1):
        value = Fraction(value)
        if value < 0 or index < 1:
            raise DomainError("radical needs a non-negative value and a positive index")
        # reduce to the smallest index when the value is a perfect power
        for k in range(index, 1, -1):
            if index % k == 0:
                r = _exact_root(value, k)
                if r is not None:
                    value, index = r, index // k
                    break
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "index", index)

    def __setattr__(self, name, value):
        raise AttributeError("Radical is immutable")

    @staticmethod
    def _coerce(x) -> "Radical":
        if isinstance(x, Radical):
            return x
        if isinstance(x, (int, Fraction, np.integer)):
            if x < 0:
                raise DomainError("negative value")
            return Radical(Fraction(x), 1)
        raise TypeError

    def _cmp(self, other) -> int:
        o = Radical._coerce(other)
        lhs = self.value ** o.index
        rhs = o.value ** self.index
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            if isinstance(other, float):
                return float(self) == other
            return NotImplemented

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            if isinstance(other, float):
                return float(self) < other
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            if isinstance(other, float):
                return float(self) <= other
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            if isinstance(other, float):
                return float(self) > other
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            if isinstance(other, float):
                return float(self) >= other
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.index))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            if other < 0:
                raise DomainError("radicals are non-negative")
            return Radical(Fraction(other) ** self.index * self.value, self.index)
        if isinstance(other, Radical):
            k = self.index * other.index // math.gcd(self.index, other.index)
            return Radical(self.value ** (k // self.index) * other.value ** (k // other.index), k)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            return self * (1 / Fraction(other))
        if isinstance(other, Radical):
            if other.value == 0:
                raise ZeroDivisionError
            return self * Radical(1 / other.value, other.index)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            if self.value == 0:
                raise ZeroDivisionError
            return Radical(1 / self.value, self.index) * Fraction(other)
        return NotImplemented

    def power(self, k: int) -> Fraction:
        """self**k as an exact rational; k must be a multiple of the index."""
        if k % self.index:
            raise DomainError("power is not rational")
        return self.value ** (k // self.index)

    def __float__(self):
        if self.index == 1:
            return float(self.value)
        if self.value == 0:
            return 0.0
        # log-domain evaluation avoids overflow for huge numerators/denominators
        return math.exp((math.log(self.value.numerator) - math.log(self.value.denominator)) / self.index)

    def __repr__(self):
        if self.index == 1:
            return f"Radical({self.value})"
        return f"Radical({self.value}, {self.index})"

    def __str__(self):
        if self.index == 1:
            return str(self.value)
        return f"({self.value})^(1/{self.index})"


def _iroot(n: int, k: int) -> int | None:
    if n < 0:
        return None
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n < 1 << 1000 else 1 << (n.bit_length() // k)
    # Newton refinement for big inputs
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if abs(nr - r) <= 1:
            break
        r = nr
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def _exact_root(x: Fraction, k: int) -> Fraction | None:
    a = _iroot(x.numerator, k)
    if a is None:
        return None
    b = _iroot(x.denominator, k)
    if b is None:
        return None
    return Fraction(a, b)


def max_radical(values: Iterable[Radical]) -> Radical:
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    return best


# ---------------------------------------------------------------------------
# Factorization


@lru_cache(maxsize=4)
def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.nonzero(sieve)[0])


def factor_integer(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer (fine for n <= 1e12)."""
    if n < 1:
        raise DomainError("factor_integer needs n >= 1")
    out: dict[int, int] = {}
    limit = 1 << 20
    for p in _small_primes(limit):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    else:
        p = limit + 1
        while p * p <= n:
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
            p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=65536)
def split_prime(p: int) -> GaussInt:
    """A canonical Gaussian prime of norm p, for p = 2 or p = 1 mod 4."""
    if p == 2:
        return ONE_PLUS_I
    if p % 4 != 1:
        raise DomainError(f"{p} is inert in Z[i]")
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    x = pow(c, (p - 1) // 4, p)
    return gi_gcd(GaussInt(p, 0), GaussInt(x, 1))


def factor(a) -> dict[GaussInt, int]:
    """Prime factorization {canonical prime: exponent}; units are dropped."""
    a = GaussInt.of(a)
    if a.is_zero():
        raise DomainError("cannot factor zero")
    out: dict[GaussInt, int] = {}
    rest = a
    for p, e in sorted(factor_integer(a.norm()).items()):
        if p == 2:
            out[ONE_PLUS_I] = e
            rest = rest.exact_div(ONE_PLUS_I ** e)
        elif p % 4 == 3:
            out[GaussInt(p, 0)] = e // 2
            rest = rest.exact_div(GaussInt(p ** (e // 2), 0))
        else:
            pi = split_prime(p)
            pib = pi.conj().canonical()
            k = 0
            while k < e and pi.divides(rest):
                rest = rest.exact_div(pi)
                k += 1
            if k:
                out[pi] = k
            if e - k:
                out[pib] = e - k
                rest = rest.exact_div(pib ** (e - k))
    if not rest.is_unit():
        raise AssertionError("factorization left a non-unit cofactor")
    return out


def _nonzero(a) -> GaussInt:
    a = GaussInt.of(a)
    if a.is_zero():
        raise DomainError("argument must be non-zero")
    return a


def totient(a) -> int:
    """Number of invertible residues modulo a."""
    a = _nonzero(a)
    out = 1
    for pi, e in factor(a).items():
        n = pi.norm()
        out *= n ** (e - 1) * (n - 1)
    return out


def moebius(a) -> int:
    a = _nonzero(a)
    f = factor(a)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(a) -> list[GaussInt]:
    """Canonical divisors of a non-zero Gaussian integer."""
    a = _nonzero(a)
    divs = [ONE]
    for pi, e in factor(a).items():
        divs = [(d * pi ** k).canonical() for d in divs for k in range(e + 1)]
    return sorted(divs, key=lambda g: (g.norm(), g.re, g.im))


def is_gaussian_prime(a) -> bool:
    a = GaussInt.of(a)
    if a.is_zero() or a.is_unit():
        return False
    f = factor(a)
    return len(f) == 1 and next(iter(f.values())) == 1


def canonical_elements(max_norm: int) -> Iterator[GaussInt]:
    """All canonical Gaussian integers 0 < N <= max_norm, by norm then parts."""
    m = math.isqrt(max_norm)
    items = [
        (a * a + b * b, a, b)
        for a in range(1, m + 1)
        for b in range(0, math.isqrt(max_norm - a * a) + 1)
    ]
    items.sort()
    for _, a, b in items:
        yield GaussInt(a, b)


# ---------------------------------------------------------------------------
# Counting oracles


@dataclass(frozen=True)
class DiskCount:
    count: int
    main_term: float


def count_disk_residues(K, beta, S) -> DiskCount:
    """Count alpha with |alpha| <= K whose residue mod beta lies in S.

    ``main_term`` is the asymptotic prediction pi |S| K^2 / |beta|^2.
    """
    beta = _nonzero(beta)
    reps = {residue(GaussInt.of(s), beta) for s in S}
    K2 = Fraction(K) ** 2 if not isinstance(K, float) else K * K
    main = math.pi * len(reps) * float(K2) / beta.norm()
    if not reps:
        return DiskCount(0, main)
    m = math.isqrt(int(math.floor(K2)))
    count = 0
    unit = beta.is_unit()
    for a in range(-m, m + 1):
        bmax = math.isqrt(int(math.floor(K2 - a * a)))
        for b in range(-bmax, bmax + 1):
            if unit or residue(GaussInt(a, b), beta) in reps:
                count += 1
    return DiskCount(count, main)


def count_linear_solutions(n: int, m: int, k, A) -> int:
    """Pairs 0 <= x < m, 0 <= y < n with |x n - y m + k| <= A."""
    if n < 1 or m < 1:
        raise DomainError("n and m must be positive")
    return sum(1 for x in range(m) for y in range(n) if abs(x * n - y * m + k) <= A)


def linear_solution_bound(n: int, m: int, A) -> float:
    return 2 * A + math.gcd(n, m)


def _disk_points(radius2) -> list[GaussInt]:
    """Gaussian integers with N(z) < radius2 (strict)."""
    pts = []
    m = math.isqrt(max(0, math.ceil(radius2)))
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            if a * a + b * b < radius2:
                pts.append(GaussInt(a, b))
    return pts


def count_linear_form_gauss(q, Q, A, R) -> int:
    """Pairs (x, y) in Z[i]^2 with 0 < |q x - Q y| <= A, |x/Q| < R, |y/q| < R."""
    q, Q = _nonzero(q), _nonzero(Q)
    A2 = Fraction(A) ** 2
    R2 = Fraction(R) ** 2
    xs = _disk_points(R2 * Q.norm())
    ys = _disk_points(R2 * q.norm())
    count = 0
    for x in xs:
        qx = q * x
        for y in ys:
            n = (qx - Q * y).norm()
            if 0 < n <= A2:
                count += 1
    return count


# ---------------------------------------------------------------------------
# Partial sums


SUM_KINDS = ("inverse_norm_s", "moebius_k", "phi_starred")
_DEFAULT_EXPONENT = {"inverse_norm_s": 1, "moebius_k": 2, "phi_starred": 2}


@dataclass(frozen=True)
class SumReport:
    kind: str
    K: int
    exponent: int
    value: str
    term_count: int
    exact: Fraction | None = None

    def __float__(self):
        return float(Decimal(self.value))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "K": self.K,
            "exponent": self.exponent,
            "value": self.value,
            "term_count": self.term_count,
        }


def round_significant(x: Fraction, digits: int = 30) -> str:
    """Round an exact rational once to the given number of significant digits."""
    if x == 0:
        return "0." + "0" * (digits - 1)
    e = math.floor(math.log10(abs(x.numerator)) - math.log10(x.denominator))
    # the float estimate of the exponent may be off by one
    while abs(x) >= Fraction(10) ** (e + 1):
        e += 1
    while abs(x) < Fraction(10) ** e:
        e -= 1
    shift = digits - 1 - e
    n = round(x * Fraction(10) ** shift)
    if abs(n) >= 10 ** digits:
        return round_significant(Fraction(n, 1) / Fraction(10) ** shift, digits)
    d = Decimal((1 if n < 0 else 0, tuple(int(c) for c in str(abs(n))), -shift))
    return format(d, "f")


def _sum_by_norm(coeffs: dict[int, int], power: int, digits: int) -> tuple[str, Fraction | None]:
    """Correctly rounded value of sum c_n / n^power.

    Small sums are added as Fractions.  Large ones are bracketed with integer
    fixed-point arithmetic whose width is increased until both ends round to
    the same decimal string, which is then the rounding of the exact sum.
    """
    items = sorted((n, c) for n, c in coeffs.items() if c)
    if len(items) <= 4000:
        total = sum((Fraction(c, n ** power) for n, c in items), Fraction(0))
        return round_significant(total, digits), total
    guard = digits + 12 + len(str(len(items)))
    while True:
        scale = 10 ** guard
        lo = 0
        hi = 0
        for n, c in items:
            den = n ** power
            lo += (c * scale) // den
            hi += -((-c * scale) // den)
        a = round_significant(Fraction(lo, scale), digits)
        b = round_significant(Fraction(hi, scale), digits)
        if a == b:
            return a, None
        guard += 20


def analytic_sum(kind: str, K: int, exponent: int | None = None, digits: int = 30) -> SumReport:
    """Partial sums over Gaussian integers with norm at most K.

    ``inverse_norm_s``  sum of N(a)^-s over all non-zero a.
    ``moebius_k``       sum of mu(a)/N(a)^k over canonical a (k >= 2).
    ``phi_starred``     sum of phi(a)/N(a)^e over a with Re, Im > 0 and
                        gcd(Re a, Im a) = 1 (e defaults to 2).
    """
    if kind not in SUM_KINDS:
        raise DomainError(f"unknown sum kind {kind!r}")
    if exponent is None:
        exponent = _DEFAULT_EXPONENT[kind]
    if K < 1:
        raise DomainError("K must be at least 1")
    if exponent < 0 or (kind == "moebius_k" and exponent < 2):
        raise DomainError(f"invalid exponent {exponent} for {kind}")
    coeffs: dict[int, int] = {}
    if kind == "inverse_norm_s":
        m = math.isqrt(K)
        a = np.arange(-m, m + 1, dtype=np.int64)
        n = (a[:, None] ** 2 + a[None, :] ** 2).ravel()
        n = n[(n > 0) & (n <= K)]
        counts = np.bincount(n, minlength=K + 1)
        coeffs = {int(i): int(counts[i]) for i in np.nonzero(counts)[0]}
        term_count = int(counts.sum())
    else:
        from .kernels import gauss_sieve

        phi, mu = gauss_sieve(K)
        m = phi.shape[0] - 1
        a = np.arange(m + 1, dtype=np.int64)
        norms = a[:, None] ** 2 + a[None, :] ** 2
        if kind == "moebius_k":
            mask = (a[:, None] > 0) & (norms <= K)
            vals = mu
        else:
            g = np.gcd(a[:, None], a[None, :])
            mask = (a[:, None] > 0) & (a[None, :] > 0) & (g == 1) & (norms <= K)
            vals = phi
        nn = norms[mask]
        vv = vals[mask].astype(np.int64)
        sums = np.bincount(nn, weights=None, minlength=K + 1)
        acc = np.zeros(K + 1, dtype=np.int64)
        np.add.at(acc, nn, vv)
        coeffs = {int(i): int(acc[i]) for i in np.nonzero(acc)[0]}
        term_count = int(sums.sum())
    value, exact = _sum_by_norm(coeffs, exponent, digits)
    return SumReport(kind, int(K), int(exponent), value, term_count, exact)


def gaussian_primes(max_norm: int) -> list[GaussInt]:
    """Canonical Gaussian primes with norm at most max_norm."""
    m = math.isqrt(max_norm)
    limit = max(max_norm, 2)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    out = []
    for a in range(1, m + 1):
        for b in range(1, math.isqrt(max_norm - a * a) + 1):
            if sieve[a * a + b * b]:
                out.append(GaussInt(a, b))
    for p in range(3, m + 1, 4):
        if sieve[p]:
            out.append(GaussInt(p, 0))
    out.sort(key=lambda g: (g.norm(), g.re, g.im))
    return out
