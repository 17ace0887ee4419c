import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdioph import _rng
from hdioph.carnot import (
    GAUGE_BRACKET_HEIS1,
    CarnotPoint,
    axiom_violations,
    best_distances,
    builtin,
    c_dilate,
    c_dist_inf,
    c_inv,
    c_mul,
    c_norm_inf,
    heis_gauge_dist,
    heis_gauge_norm,
    heisenberg,
    load_spec,
    nearest_lattice_point,
    random_rational_point,
    spec_from_dict,
)
from hdioph.errors import ConfigError, DomainError
from hdioph.zkernel import Radical

H1 = heisenberg(1)
P = CarnotPoint.of
small = st.fractions(-5, 5, max_denominator=12)
heis_points = st.builds(lambda a, b, c: P((a, b, c)), small, small, small)


class TestGroupLaw:
    def test_examples(self):
        assert c_mul(H1, P((1, 0, 0)), P((0, 1, 0))) == P((1, 1, 2))
        g = P((Fraction(1, 3), -2, Fraction(5, 7)))
        assert c_mul(H1, g, P([-c for c in g])) == H1.zero()
        H2 = heisenberg(2)
        assert c_mul(H2, P((1, 0, 0, 0, 0)), P((0, 0, 1, 0, 0))) == P((1, 0, 1, 0, 2))

    def test_inverse_examples(self):
        assert c_inv(H1, H1.zero()) == H1.zero()
        assert c_inv(H1, P((1, 2, 3))) == P((-1, -2, -3))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            c_mul(H1, P((1, 2)), P((1, 2, 3)))

    @pytest.mark.parametrize("name", ["heis1", "heis2", "unitriangular4"])
    def test_axioms_on_random_triples(self, name):
        spec = builtin(name)
        gen = _rng.stream(11, "tests.carnot", hash(name) & 0xFFFF)
        e = spec.zero()
        for _ in range(1000):
            a, b, c = (random_rational_point(spec, gen) for _ in range(3))
            assert c_mul(spec, c_mul(spec, a, b), c) == c_mul(spec, a, c_mul(spec, b, c))
            assert c_mul(spec, a, e) == a == c_mul(spec, e, a)
            assert c_mul(spec, a, c_inv(spec, a)) == e

    def test_unitriangular_is_matrix_product(self):
        spec = builtin("unitriangular4")

        def mat(g):
            a12, a23, a34, a13, a24, a14 = g
            return np.array(
                [[1, a12, a13, a14], [0, 1, a23, a24], [0, 0, 1, a34], [0, 0, 0, 1]], dtype=object
            )

        gen = _rng.stream(3, "tests.unitriangular")
        for _ in range(50):
            a, b = random_rational_point(spec, gen), random_rational_point(spec, gen)
            m = mat(a).dot(mat(b))
            prod = c_mul(spec, a, b)
            assert (mat(prod) == m).all()

    def test_integer_points_closed(self):
        gen = _rng.stream(4, "tests.integral")
        for _ in range(200):
            a = P(int(x) for x in gen.integers(-20, 20, 3))
            b = P(int(x) for x in gen.integers(-20, 20, 3))
            assert c_mul(H1, a, b).is_integral()
            assert c_inv(H1, a).is_integral()


class TestDilationAndMetrics:
    def test_dilation_examples(self):
        assert c_dilate(H1, 2, P((1, 1, 1))) == P((2, 2, 4))
        g = P((Fraction(1, 3), 2, -1))
        assert c_dilate(H1, 1, g) == g
        with pytest.raises(DomainError):
            c_dilate(H1, 0, g)

    def test_norm_examples(self):
        assert c_norm_inf(H1, P((1, 0, 0))) == 1
        assert c_norm_inf(H1, P((0, 0, 2))) == 1
        g = P((Fraction(2, 3), 1, 5))
        assert c_dist_inf(H1, g, g) == 0
        assert heis_gauge_norm(H1, P((1, 0, 0))) == 1
        assert heis_gauge_norm(H1, P((0, 0, 1))) == 1
        assert heis_gauge_norm(H1, P((1, 1, 0))) == Radical(2, 2)

    def test_gauge_needs_heisenberg(self):
        with pytest.raises(DomainError):
            heis_gauge_norm(builtin("unitriangular4"), builtin("unitriangular4").zero())

    @given(heis_points, heis_points, st.fractions(Fraction(1, 10), 10, max_denominator=10))
    def test_homogeneity(self, g, h, r):
        assert c_dist_inf(H1, c_dilate(H1, r, g), c_dilate(H1, r, h)) == c_dist_inf(H1, g, h) * Radical(r)
        assert c_dilate(H1, r, c_mul(H1, g, h)) == c_mul(H1, c_dilate(H1, r, g), c_dilate(H1, r, h))

    @given(heis_points, heis_points, heis_points)
    def test_left_invariance_and_symmetry(self, k, g, h):
        d = c_dist_inf(H1, g, h)
        assert c_dist_inf(H1, c_mul(H1, k, g), c_mul(H1, k, h)) == d
        assert c_dist_inf(H1, h, g) == d
        assert heis_gauge_dist(H1, c_mul(H1, k, g), c_mul(H1, k, h)) == heis_gauge_dist(H1, g, h)

    def test_three_layer_dilation_scales_norm(self):
        spec = builtin("unitriangular4")
        gen = _rng.stream(5, "tests.dilate3")
        for _ in range(100):
            g = random_rational_point(spec, gen)
            r = Fraction(int(gen.integers(1, 9)), int(gen.integers(1, 9)))
            assert c_norm_inf(spec, c_dilate(spec, r, g)) == c_norm_inf(spec, g) * Radical(r)


def _heis_float_law(g, h):
    x, y, t = g
    xp, yp, tp = h
    return np.stack([x + xp, y + yp, t + tp + 2 * (x * yp - xp * y)])


def _float_dinf(g, h, lam=0.5):
    d = _heis_float_law(-g, h)
    return np.maximum(np.maximum(abs(d[0]), abs(d[1])), np.sqrt(lam * abs(d[2])))


def _float_gauge(g, h):
    d = _heis_float_law(-g, h)
    return ((d[0] ** 2 + d[1] ** 2) ** 2 + d[2] ** 2) ** 0.25


def test_triangle_inequality_float_sample():
    gen = np.random.default_rng(17)
    a, b, c = (gen.uniform(-2, 2, (3, 100_000)) for _ in range(3))
    lhs = _float_dinf(a, c)
    rhs = _float_dinf(a, b) + _float_dinf(b, c)
    assert (lhs <= rhs * (1 + 1e-12)).all()


def test_gauge_over_sup_bracket():
    gen = np.random.default_rng(19)
    a, b = (gen.uniform(-2, 2, (3, 100_000)) for _ in range(2))
    ratio = _float_gauge(a, b) / _float_dinf(a, b)
    lo, hi = GAUGE_BRACKET_HEIS1
    assert ratio.min() >= float(lo) - 1e-12
    assert ratio.max() <= float(hi) + 1e-12
    # the measured bracket is not trivially loose
    assert ratio.max() / ratio.min() > 1.3


class TestNearest:
    def test_examples(self):
        hit = nearest_lattice_point(H1, P((Fraction(1, 3), 0, 0)), 3)
        assert hit.p == P((1, 0, 0)) and hit.dist == 0
        hit = nearest_lattice_point(H1, P((0, 0, Fraction(1, 2))), 1)
        assert hit.p == P((0, 0, 0)) and hit.dist == Fraction(1, 2)
        hit = nearest_lattice_point(H1, P((Fraction(49, 100), 0, 0)), 1)
        assert hit.p == H1.zero() and hit.dist == Fraction(49, 100)

    def test_optimal_within_half_over_q(self):
        gen = _rng.stream(23, "tests.nearest")
        checked = 0
        for _ in range(1000):
            g = P(_rng.dyadic(gen, 20) for _ in range(3))
            q = int(gen.integers(1, 101))
            hit = nearest_lattice_point(H1, g, q)
            if not hit.dist < Fraction(1, 2 * q):
                continue
            checked += 1
            x, y, t = g
            for a in range(round(q * x) - 1, round(q * x) + 2):
                for b in range(round(q * y) - 1, round(q * y) + 2):
                    c0 = round(q * q * t - 2 * q * (a * y - b * x))
                    for c in range(c0 - 3, c0 + 4):
                        p = c_dilate(H1, Fraction(1, q), P((a, b, c)))
                        assert c_dist_inf(H1, g, p) >= hit.dist
        assert checked > 50

    def test_kernel_matches_exact(self):
        gen = _rng.stream(29, "tests.kernel")
        for _ in range(5):
            g = P(_rng.dyadic(gen, 53) for _ in range(3))
            fast = best_distances(H1, g, 300)
            exact = [float(nearest_lattice_point(H1, g, q).dist) for q in range(1, 301)]
            assert np.allclose(fast, exact, rtol=1e-12, atol=0)


class TestSpecLoading:
    def test_builtin_file(self, tmp_path):
        f = tmp_path / "g.json"
        f.write_text(json.dumps({"builtin": "heis1"}))
        assert load_spec(f) == H1

    def test_roundtrip_dict(self):
        d = H1.to_dict()
        spec = spec_from_dict(d)
        assert spec.polys == H1.polys and spec.weights == H1.weights

    def test_non_associative_rejected(self):
        data = {
            "layer_dims": [1, 1, 1],
            "weights": ["1", "1/2", "1/4"],
            "law_polynomials": [[], [{"coeff": 1, "exponents": [2, 0, 0, 1, 0, 0]}]],
        }
        with pytest.raises(ConfigError, match="associativity fails for g="):
            spec_from_dict(data)
        spec = spec_from_dict(data, validate=False)
        assert axiom_violations(spec)

    def test_bad_weights(self):
        data = H1.to_dict()
        data["weights"] = ["2", "1/2"]
        with pytest.raises(ConfigError):
            spec_from_dict(data)

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigError):
            load_spec(tmp_path / "missing.json")

    def test_ball_constant(self):
        assert H1.ball_constant == 16
        assert H1.homogeneous_dim == 4
