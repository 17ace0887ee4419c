import math
import random
from fractions import Fraction

import pytest
from conftest import random_rational_siegel

from hdioph.dioph import random_siegel_point
from hdioph.errors import DomainError
from hdioph.heiscf import synthesize
from hdioph.hyper import (
    INFINITY,
    Horoball,
    excursion_profile,
    family_horoball,
    horoheight,
    horoheight_report,
    invert_horoball,
    max_depth,
    rational_horoheight,
)
from hdioph.siegel import SiegelPoint, origin, parse_point, s_dist, siegel_height
from hdioph.zkernel import GaussRat, Radical

pt = parse_point

# deepest excursion for periodic bounded-digit points, measured up to |q| = 200
BOUNDED_DEPTH_LIMIT = 2.0


def lattice(x, y, t):
    return SiegelPoint.make(GaussRat(x, y), GaussRat(Fraction(x * x + y * y, 2), t))


class TestHoroheight:
    def test_examples(self):
        assert horoheight(0, 1) == 1
        assert horoheight("1+i", 2) == 1
        with pytest.raises(DomainError):
            horoheight("1+i", 1)

    def test_exterior_rejected(self):
        with pytest.raises(DomainError):
            horoheight(2, 1)

    def test_non_square(self):
        assert horoheight(0, 2) == Radical(2, 2)

    def test_height_must_be_positive(self):
        with pytest.raises(DomainError):
            Horoball(INFINITY, 0)


class TestInversion:
    def test_examples(self):
        assert invert_horoball(Horoball(INFINITY, 2)) == Horoball(origin(), Fraction(1, 2))
        assert invert_horoball(Horoball(pt("0, 2i"), 1)) == Horoball(pt("0, -1/2i"), Fraction(1, 2))
        s = Fraction(3, 7)
        assert invert_horoball(Horoball(pt("0, i"), s)) == Horoball(pt("0, -i"), s)
        assert invert_horoball(Horoball(origin(), 5)) == Horoball(INFINITY, Fraction(1, 5))

    def test_involution_on_rational_bases(self):
        rng = random.Random(31)
        for _ in range(1000):
            h = random_rational_siegel(rng, 50)
            if h.is_zero():
                continue
            H = Horoball(h, Radical(Fraction(rng.randint(1, 99), rng.randint(1, 99)), 2))
            assert invert_horoball(invert_horoball(H)) == H

    def test_serialization(self):
        assert Horoball(INFINITY, 2).to_json() == {"base": "inf", "height": "2"}


class TestRationalHoroheight:
    def test_examples(self):
        assert rational_horoheight(siegel_height(origin()), 5) == 5
        rep = horoheight_report(siegel_height(pt("0, 1/3i")))
        assert rep.closed_form == Fraction(1, 3) and rep.chain_product == Fraction(1, 9) and rep.steps == 1
        assert rational_horoheight(pt("1/3+1/3i, 1/9")) == Fraction(1, 9)

    def test_family_horoball(self):
        H = family_horoball(siegel_height(pt("0, 1/3i")), 2)
        assert H.base == pt("0, 1/3i") and H.height == Fraction(2, 3)

    def test_chain_agrees_with_closed_form(self):
        rng = random.Random(37)
        seen = 0
        while seen < 1000:
            h = random_rational_siegel(rng, 12)
            w = siegel_height(h)
            if w.norm_q > 10**8:
                continue
            s0 = Radical(Fraction(rng.randint(1, 20), rng.randint(1, 20)), rng.choice([1, 2]))
            rep = horoheight_report(w, s0)
            assert rep.agree
            assert rep.closed_form == s0 / Radical(w.norm_q, 2)
            seen += 1

    def test_rejects_bad_s0(self):
        with pytest.raises(DomainError):
            horoheight_report(siegel_height(origin()), Radical(2, 3))


class TestExcursions:
    def test_rational_point_diverges_at_itself(self):
        h = pt("0, 1/3i")
        prof = excursion_profile(h, 1, 10)
        own = [r for r in prof if r.rational == siegel_height(h)]
        assert len(own) == 1 and own[0].depth == math.inf
        assert max_depth(prof) == math.inf

    def test_depth_indicator(self):
        h = random_siegel_point(7, 3)
        s0 = Fraction(1)
        for rec in excursion_profile(h, s0, 40):
            d = s_dist(h, rec.rational.point())
            assert rec.depth > 0
            assert d.power(4) * rec.norm_q ** 2 < s0 ** 4
            expected = 2 * math.log(float(s0) / (math.sqrt(rec.norm_q) * float(d)))
            assert rec.depth == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("digit", [(2, 2, -3), (1, 1, 3), (0, 0, 4)])
    def test_bounded_digits_bounded_depth(self, digit):
        h = synthesize([lattice(*digit)] * 40)
        prof = excursion_profile(h, 1, 200)
        depths = [max_depth(prof, N) for N in (50, 100, 200)]
        assert depths[0] == depths[1] == depths[2]
        assert depths[2] < BOUNDED_DEPTH_LIMIT

    def test_random_points_go_deeper(self):
        # growth of the running maximum is slow (roughly log log of the
        # cutoff), so it is pooled over samples
        totals = [0.0] * 4
        above = 0
        for k in range(12):
            h = random_siegel_point(7, k)
            prof = excursion_profile(h, 1, 200)
            depths = [max_depth(prof, N) for N in (25, 50, 100, 200)]
            assert depths == sorted(depths)
            totals = [a + b for a, b in zip(totals, depths)]
            above += depths[-1] > BOUNDED_DEPTH_LIMIT
        assert totals[-1] > totals[0]
        assert above >= 4

    def test_rows(self):
        prof = excursion_profile(pt("0, 1/3i"), 1, 5)
        assert all(len(r.row()) == 7 for r in prof)
        assert [r.norm_q for r in prof] == sorted(r.norm_q for r in prof)
