import math
import random
from fractions import Fraction

import mpmath
import pytest
from conftest import gauss_ints, gauss_rats, nonzero_gauss
from hypothesis import given, settings
from hypothesis import strategies as st

from hdioph.errors import DomainError
from hdioph.zkernel import (
    GaussInt,
    GaussRat,
    Radical,
    analytic_sum,
    canonical_elements,
    count_disk_residues,
    count_linear_form_gauss,
    count_linear_solutions,
    divisors,
    factor,
    gi_gcd,
    linear_solution_bound,
    moebius,
    parse_gauss,
    residue,
    round_significant,
    totient,
)


def brute_totient(a: GaussInt) -> int:
    """Invertible residues mod a, counted over a complete residue system."""
    N = a.norm()
    seen = set()
    for x in range(N):
        for y in range(N):
            z = GaussInt(x, y)
            r = residue(z, a)
            if r in seen:
                continue
            seen.add(r)
    return sum(1 for r in seen if gi_gcd(r, a).is_unit()), len(seen)


class TestGcd:
    def test_examples(self):
        assert gi_gcd(GaussInt(3), GaussInt(5)) == GaussInt(1)
        assert gi_gcd(GaussInt(0), GaussInt(-2, -3)) == GaussInt(-2, -3).canonical()
        assert gi_gcd(GaussInt(2), GaussInt(1, 1)) == GaussInt(1, 1)

    def test_both_zero(self):
        with pytest.raises(DomainError):
            gi_gcd(GaussInt(0), GaussInt(0))

    @given(gauss_ints, gauss_ints, gauss_ints)
    def test_divides_and_is_greatest(self, a, b, c):
        if a.is_zero() and b.is_zero():
            return
        g = gi_gcd(a, b)
        assert g == g.canonical()
        assert g.divides(a) and g.divides(b)
        if not c.is_zero() and c.divides(a) and c.divides(b):
            assert c.divides(g)
        # common multiples of c
        if not c.is_zero():
            assert gi_gcd(a * c, b * c) == (g * c).canonical()


class TestGaussInt:
    @given(gauss_ints)
    def test_norm(self, a):
        assert a.norm() >= 0
        assert (a.norm() == 0) == a.is_zero()

    @given(nonzero_gauss)
    def test_canonical_unique(self, a):
        reps = {(a * u).canonical() for u in (GaussInt(1), GaussInt(0, 1), GaussInt(-1), GaussInt(0, -1))}
        assert len(reps) == 1
        c = reps.pop()
        assert c.re > 0 and c.im >= 0

    @given(gauss_rats)
    def test_gaussrat_reduced(self, x):
        num, den = x.num, x.den
        assert gi_gcd(num, den).is_unit() or num.is_zero()
        assert den == den.canonical()
        assert (den == GaussInt(1)) == x.is_integral()

    @given(gauss_rats)
    def test_parse_roundtrip(self, x):
        assert parse_gauss(str(x)) == x

    def test_parse_grammar(self):
        assert parse_gauss("1/3i") == GaussRat(0, Fraction(1, 3))
        assert parse_gauss(" 1/2 + 3/4 i ") == GaussRat(Fraction(1, 2), Fraction(3, 4))
        assert parse_gauss("-i") == GaussRat(0, -1)
        with pytest.raises(ValueError):
            parse_gauss("1+i/3")


class TestTotientMoebius:
    def test_examples(self):
        assert totient(GaussInt(1)) == 1
        assert totient(GaussInt(1, 1)) == 1
        assert totient(GaussInt(3)) == 8
        assert moebius(GaussInt(1)) == 1
        assert moebius(GaussInt(1, 1)) == -1
        assert moebius(GaussInt(2)) == 0

    @pytest.mark.parametrize("a", [GaussInt(1, 1), GaussInt(3), GaussInt(2, 1), GaussInt(2), GaussInt(3, 1), GaussInt(4, 2), GaussInt(5)])
    def test_against_residue_count(self, a):
        units, total = brute_totient(a)
        assert total == a.norm()
        assert totient(a) == units

    def test_zero(self):
        with pytest.raises(DomainError):
            totient(GaussInt(0))
        with pytest.raises(DomainError):
            moebius(GaussInt(0))

    @given(nonzero_gauss)
    def test_unit_invariant(self, a):
        assert moebius(a) == moebius(a * GaussInt(0, 1))
        assert totient(a) == totient(-a)

    @given(nonzero_gauss)
    def test_factor_reconstructs(self, a):
        prod = GaussInt(1)
        for p, e in factor(a).items():
            assert p == p.canonical() and not p.is_unit()
            prod = prod * p ** e
        assert prod.canonical() == a.canonical()

    @pytest.mark.slow
    def test_phi_mu_identity_to_2000(self):
        for a in canonical_elements(2000):
            if a.is_zero():
                continue
            N = a.norm()
            total = sum(moebius(d) * (N // d.norm()) for d in divisors(a))
            assert total == totient(a), a

    def test_multiplicativity(self):
        rng = random.Random(5)
        checked = 0
        while checked < 10_000:
            a = GaussInt(rng.randint(1, 99), rng.randint(0, 99))
            b = GaussInt(rng.randint(1, 99), rng.randint(0, 99))
            if a.norm() > 10_000 or b.norm() > 10_000 or not gi_gcd(a, b).is_unit():
                continue
            assert totient(a * b) == totient(a) * totient(b)
            assert moebius(a * b) == moebius(a) * moebius(b)
            checked += 1


class TestCounting:
    def test_disk_examples(self):
        assert count_disk_residues(2, GaussInt(1), [GaussInt(0)]).count == 13
        dc = count_disk_residues(5, GaussInt(1, 1), [GaussInt(0)])
        assert abs(dc.count - math.pi * 25 / 2) <= 10 * 5 / math.sqrt(2)
        assert count_disk_residues(3, GaussInt(1), []).count == 0

    def test_gauss_circle_shape(self):
        for K in range(5, 61):
            dc = count_disk_residues(K, GaussInt(1), [GaussInt(0)])
            assert abs(dc.count - math.pi * K * K) <= 8 * K

    def test_linear_examples(self):
        assert count_linear_solutions(1, 1, 0, 1) == 1 and linear_solution_bound(1, 1, 1) == 3
        assert count_linear_solutions(2, 3, 0, 0) == 1 and linear_solution_bound(2, 3, 0) == 1
        assert count_linear_solutions(2, 2, 1, 1) == 3 and linear_solution_bound(2, 2, 1) == 4

    def test_linear_bound_exhaustive_small(self):
        for n in range(1, 16):
            for m in range(1, 16):
                for k in range(0, 11):
                    for A in range(1, 11):
                        assert count_linear_solutions(n, m, k, A) <= linear_solution_bound(n, m, A)

    def test_linear_form_examples(self):
        assert count_linear_form_gauss(GaussInt(1), GaussInt(1), 1, 2) == 24
        assert count_linear_form_gauss(GaussInt(1), GaussInt(1), Fraction(1, 2), 2) == 0
        assert count_linear_form_gauss(GaussInt(2), GaussInt(2), 1, 3) == 0

    def test_phi_is_large_often(self):
        good = total = 0
        for a in canonical_elements(10_000):
            if a.is_zero():
                continue
            total += 1
            good += totient(a) * 3 >= a.norm()
        assert good >= total // 10


class TestSums:
    def test_examples(self):
        assert analytic_sum("inverse_norm_s", 4, 1).exact == 7
        rep = analytic_sum("phi_starred", 10)
        assert rep.exact == Fraction(13, 20)
        assert rep.value.startswith("0.65") and len(rep.value.replace("0.", "", 1)) == 30
        assert rep.term_count == 5

    def test_errors(self):
        with pytest.raises(DomainError):
            analytic_sum("moebius_k", 10, 1)
        with pytest.raises(DomainError):
            analytic_sum("nonsense", 10)
        with pytest.raises(DomainError):
            analytic_sum("phi_starred", 0)

    @given(st.integers(1, 400), st.sampled_from(["inverse_norm_s", "moebius_k", "phi_starred"]))
    @settings(max_examples=30, deadline=None)
    def test_value_is_rounded_exact_sum(self, K, kind):
        rep = analytic_sum(kind, K)
        # independent direct summation
        total = Fraction(0)
        m = math.isqrt(K)
        for a in range(-m, m + 1):
            for b in range(-m, m + 1):
                z = GaussInt(a, b)
                n = z.norm()
                if n == 0 or n > K:
                    continue
                if kind == "inverse_norm_s":
                    total += Fraction(1, n)
                elif kind == "moebius_k" and z == z.canonical():
                    total += Fraction(moebius(z), n * n)
                elif kind == "phi_starred" and a > 0 and b > 0 and math.gcd(a, b) == 1:
                    total += Fraction(totient(z), n * n)
        assert rep.exact == total
        assert rep.value == round_significant(total, 30)

    def test_large_sum_uses_bracketing(self):
        # above the exact-fraction threshold the decimal must still match
        K = 40_000
        rep = analytic_sum("inverse_norm_s", K, 2)
        assert rep.exact is None
        counts = {}
        m = math.isqrt(K)
        for a in range(-m, m + 1):
            for b in range(-m, m + 1):
                n = a * a + b * b
                if 0 < n <= K:
                    counts[n] = counts.get(n, 0) + 1
        direct = sum((Fraction(c, n * n) for n, c in counts.items()), Fraction(0))
        assert rep.value == round_significant(direct, 30)

    def test_moebius_constant(self):
        rep = analytic_sum("moebius_k", 10**5, 2)
        mpmath.mp.dps = 30
        oracle = 1 / (mpmath.zeta(2) * mpmath.catalan)
        assert abs(float(rep) - float(oracle)) < 1e-3


class TestRadical:
    @given(st.fractions(0, 50, max_denominator=30), st.fractions(0, 50, max_denominator=30), st.sampled_from([1, 2, 4]))
    def test_order_matches_float(self, a, b, k):
        ra, rb = Radical(a, k), Radical(b, k)
        assert (ra < rb) == (a < b)
        assert (ra == rb) == (a == b)

    def test_exact_roots_simplify(self):
        assert Radical(Fraction(1, 9), 2) == Fraction(1, 3)
        assert Radical(16, 4) == 2
        assert float(Radical(2, 2)) == pytest.approx(math.sqrt(2))
