import math
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hdioph.siegel import SiegelPoint
from hdioph.zkernel import GaussInt, GaussRat

small_ints = st.integers(min_value=-60, max_value=60)
gauss_ints = st.builds(GaussInt, small_ints, small_ints)
nonzero_gauss = gauss_ints.filter(lambda z: not z.is_zero())
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=40)
gauss_rats = st.builds(GaussRat, rationals, rationals)


@st.composite
def siegel_points(draw, den=40):
    """Exact points of Sieg^1: v = |u|^2/2 + i t."""
    u = draw(st.builds(GaussRat, st.fractions(-3, 3, max_denominator=den), st.fractions(-3, 3, max_denominator=den)))
    t = draw(st.fractions(-3, 3, max_denominator=den))
    return SiegelPoint((u,), GaussRat(u.abs2() / 2, t))


def random_rational_siegel(rng: random.Random, max_den: int) -> SiegelPoint:
    """Random point with Gaussian-rational coordinates of bounded denominators."""
    def rat():
        return Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den))
    u = GaussRat(rat(), rat())
    return SiegelPoint((u,), GaussRat(u.abs2() / 2, rat()))


def random_point_of_height(rng: random.Random, max_norm: int) -> SiegelPoint:
    """Random rational point (r/q, p/q) with N(q) <= max_norm, built on the constraint Re(p conj q) = |r/(1+i)|^2."""
    side = math.isqrt(max_norm)
    while True:
        a, b = rng.randint(1, side), rng.randint(0, side)
        if a * a + b * b <= max_norm and math.gcd(a, b) == 1:
            break
    q = GaussInt(a, b)
    rad = math.isqrt(a * a + b * b)
    rt = GaussInt(rng.randint(-rad, rad), rng.randint(-rad, rad))
    m = rt.norm()
    # c a + d b = m, shifted along the kernel (b, -a)
    g, x0, y0 = _ext_gcd(a, b)
    k = rng.randint(-rad, rad)
    p = GaussInt(m * x0 + k * b, m * y0 - k * a)
    u = GaussRat.of(rt * GaussInt(1, 1)) / GaussRat.of(q)
    v = GaussRat.of(p) / GaussRat.of(q)
    return SiegelPoint((u,), v)


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


@pytest.fixture
def rng():
    return random.Random(20240611)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion; the lines are echoed and summarised at the end."""
    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
