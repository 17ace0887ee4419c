"""Integer lattice reduction and short-vector enumeration.

LLL comes from python-flint when available; ``lll_fraction`` is a slow exact
implementation used as fallback and as a cross-check in tests.  Enumeration
is Fincke-Pohst on the reduced basis in floating point with a safety margin,
followed by an exact integer norm test.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

try:
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

# exact rationals for the Gaussian reduction; flint's are much faster
_Q = flint.fmpq if flint is not None else Fraction


def lll_fraction(rows: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)):
    """Textbook LLL in exact rationals; returns (reduced rows, transform)."""
    b = [list(map(int, r)) for r in rows]
    n = len(b)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def dot(x, y):
        return sum(p * q for p, q in zip(x, y))

    def gram_schmidt():
        bstar = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bstar[j])) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            c = round(mu[k][j])
            if c:
                b[k] = [x - c * y for x, y in zip(b[k], b[j])]
                U[k] = [x - c * y for x, y in zip(U[k], U[j])]
                mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return b, U


def lll(rows: Sequence[Sequence[int]]):
    if flint is None:
        return lll_fraction(rows)
    M = flint.fmpz_mat([[int(x) for x in r] for r in rows])
    red, T = M.lll(transform=True)
    to_list = lambda A: [[int(A[i, j]) for j in range(A.ncols())] for i in range(A.nrows())]  # noqa: E731
    return to_list(red), to_list(T)


def _float_rows(rows, scale: int):
    return [[x / scale for x in r] for r in rows]


def short_vectors(rows: Sequence[Sequence[int]], scale: int, bound: Fraction, reduce=lll) -> list[tuple[int, ...]]:
    """All non-zero coefficient vectors z with |z B|^2 <= bound * scale^2.

    ``rows`` is an integer basis B (one row per basis vector, full rank).
    The returned vectors are coefficients with respect to ``rows``.
    """
    n = len(rows)
    red, T = reduce(rows)
    fb = _float_rows(red, scale)
    # Gram-Schmidt in floats on the reduced, well-conditioned basis
    bstar = []
    mu = [[0.0] * n for _ in range(n)]
    bn = []
    for i in range(n):
        v = list(fb[i])
        for j in range(i):
            mu[i][j] = sum(a * c for a, c in zip(fb[i], bstar[j])) / bn[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        bn.append(sum(a * a for a in v))
    limit = float(bound) * (1 + 1e-6) + 1e-9
    found = []
    coeffs = [0] * n

    def recurse(i: int, remaining: float):
        centre = -sum(coeffs[j] * mu[j][i] for j in range(i + 1, n))
        width = math.sqrt(max(remaining, 0.0) / bn[i])
        lo = math.ceil(centre - width - 1e-9)
        hi = math.floor(centre + width + 1e-9)
        for c in range(lo, hi + 1):
            coeffs[i] = c
            rest = remaining - (c - centre) ** 2 * bn[i]
            if rest < -1e-9:
                continue
            if i == 0:
                if any(coeffs):
                    found.append(tuple(coeffs))
            else:
                recurse(i - 1, rest)
        coeffs[i] = 0

    recurse(n - 1, limit)
    out = []
    target = bound * scale * scale
    for c in found:
        vec = [sum(c[i] * red[i][k] for i in range(n)) for k in range(len(red[0]))]
        if sum(x * x for x in vec) <= target:
            out.append(tuple(sum(c[i] * T[i][k] for i in range(n)) for k in range(n)))
    return out


# ---------------------------------------------------------------------------
# Gaussian lattices
#
# A Z[i]-module of rank n inside C^m, given by n rows of Gaussian integers and
# the Hermitian product <x, y> = sum x_k conj(y_k).  Reducing over Z[i] keeps
# the complex structure, so all Gaussian multiples of a short vector sit on
# one basis line and non-primitive vectors can be skipped during enumeration.


def _ghdot(x, y) -> tuple[Fraction, Fraction]:
    re = im = 0
    for a, b in zip(x, y):
        # a * conj(b)
        re += a[0] * b[0] + a[1] * b[1]
        im += a[1] * b[0] - a[0] * b[1]
    return re, im


def _gram_schmidt_gauss(b):
    """Exact Hermitian Gram-Schmidt: (mu, squared norms), mu[i][j] as (re, im) Fractions."""
    n = len(b)
    bstar = []
    norms = []
    zero = _Q(0)
    mu = [[(zero, zero)] * n for _ in range(n)]
    for i in range(n):
        v = [(_Q(c[0]), _Q(c[1])) for c in b[i]]
        for j in range(i):
            if norms[j] == 0:
                continue
            re, im = _ghdot(b[i], bstar[j])
            m = (_Q(re) / norms[j], _Q(im) / norms[j])
            mu[i][j] = m
            v = [(x[0] - (m[0] * y[0] - m[1] * y[1]), x[1] - (m[0] * y[1] + m[1] * y[0])) for x, y in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(sum(x[0] * x[0] + x[1] * x[1] for x in v))
    return mu, norms


def _gsub(x, c, y):
    """x - c * y for Gaussian integer vectors (pairs) and a Gaussian integer c."""
    return [(a[0] - (c[0] * b[0] - c[1] * b[1]), a[1] - (c[0] * b[1] + c[1] * b[0])) for a, b in zip(x, y)]


def gauss_lll(rows, delta: Fraction = Fraction(99, 100)):
    """LLL over Z[i] in exact arithmetic; rows are sequences of (re, im) pairs.

    Returns (reduced rows, transform) with reduced = transform * rows.
    """
    b = [[(int(c[0]), int(c[1])) for c in r] for r in rows]
    n = len(b)
    U = [[(int(i == j), 0) for j in range(n)] for i in range(n)]
    delta = _Q(delta.numerator, delta.denominator)
    mu, norms = _gram_schmidt_gauss(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            m = mu[k][j]
            c = (int(round(m[0])), int(round(m[1])))
            if c == (0, 0):
                continue
            b[k] = _gsub(b[k], c, b[j])
            U[k] = _gsub(U[k], c, U[j])
            # mu[k][l] -= c * mu[j][l] for l < j, and mu[k][j] -= c
            for l in range(j):
                a = mu[j][l]
                mu[k][l] = (mu[k][l][0] - (c[0] * a[0] - c[1] * a[1]), mu[k][l][1] - (c[0] * a[1] + c[1] * a[0]))
            mu[k][j] = (m[0] - c[0], m[1] - c[1])
        m = mu[k][k - 1]
        if norms[k] >= (delta - (m[0] * m[0] + m[1] * m[1])) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, norms = _gram_schmidt_gauss(b)
            k = max(k - 1, 1)
    return b, U


def _is_canonical(z) -> bool:
    return z[0] > 0 and z[1] >= 0


def gaussian_short_vectors(rows, scale: int, bound: Fraction, *, primitive: bool = True, reduce=gauss_lll):
    """Nonzero Gaussian coefficient vectors z with |z B|^2 <= bound * scale^2.

    With ``primitive`` only vectors whose coefficients have unit gcd are
    returned, one per associate class (the last nonzero coefficient is a
    canonical associate).  Coefficients refer to the original ``rows``.
    """
    n = len(rows)
    red, T = reduce(rows)
    fb = [[complex(float(Fraction(c[0], scale)), float(Fraction(c[1], scale))) for c in r] for r in red]
    bstar = []
    mu = [[0j] * n for _ in range(n)]
    bn = []
    for i in range(n):
        v = list(fb[i])
        for j in range(i):
            mu[i][j] = sum(a * c.conjugate() for a, c in zip(fb[i], bstar[j])) / bn[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        bn.append(sum(abs(a) ** 2 for a in v))
    limit = float(bound) * (1 + 1e-6) + 1e-9
    found = []
    coeffs = [(0, 0)] * n

    def recurse(i: int, remaining: float, top: bool):
        centre = -sum(complex(*coeffs[j]) * mu[j][i] for j in range(i + 1, n))
        width = math.sqrt(max(remaining, 0.0) / bn[i])
        x_lo = math.ceil(centre.real - width - 1e-9)
        x_hi = math.floor(centre.real + width + 1e-9)
        for x in range(x_lo, x_hi + 1):
            dx2 = (x - centre.real) ** 2
            h = math.sqrt(max(width * width - dx2, 0.0))
            for y in range(math.ceil(centre.imag - h - 1e-9), math.floor(centre.imag + h + 1e-9) + 1):
                z = (x, y)
                if top and primitive and z != (0, 0) and not _is_canonical(z):
                    continue
                if top and primitive and i == 0 and x * x + y * y != 1:
                    continue  # a multiple of the first basis vector
                rest = remaining - abs(complex(x, y) - centre) ** 2 * bn[i]
                if rest < -1e-9:
                    continue
                coeffs[i] = z
                if i == 0:
                    if any(c != (0, 0) for c in coeffs):
                        found.append(tuple(coeffs))
                else:
                    recurse(i - 1, rest, top and z == (0, 0))
        coeffs[i] = (0, 0)

    recurse(n - 1, limit, True)
    out = []
    target = bound * scale * scale
    for c in found:
        if primitive and not _unit_gcd(c):
            continue
        vec = _combine(c, red)
        if sum(a * a + b * b for a, b in vec) <= target:
            out.append(tuple(_combine(c, T)))
    return out


def _combine(c, rows):
    m = len(rows[0])
    out = [(0, 0)] * m
    for z, r in zip(c, rows):
        if z == (0, 0):
            continue
        out = [(a[0] + z[0] * b[0] - z[1] * b[1], a[1] + z[0] * b[1] + z[1] * b[0]) for a, b in zip(out, r)]
    return out


def _unit_gcd(c) -> bool:
    from .zkernel import GaussInt, gi_gcd

    g = GaussInt(0, 0)
    for z in c:
        if z != (0, 0):
            g = gi_gcd(g, GaussInt(*z)) if not g.is_zero() else GaussInt(*z)
    return g.is_unit()
