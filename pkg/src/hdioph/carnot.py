"""Rational Carnot groups in exponential coordinates.

A group is described by a ``CarnotSpec``: the dimensions of its layers, one
integer polynomial per coordinate above the first layer giving the correction
term of the product, and positive rational weights for the sup-type norm.
Points are tuples of Fractions ordered layer by layer.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _rng
from .errors import ConfigError, DomainError
from .zkernel import Radical, max_radical

Monomial = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class CarnotPoint:
    coords: tuple[Fraction, ...]

    @classmethod
    def of(cls, coords: Sequence) -> "CarnotPoint":
        return cls(tuple(Fraction(c) for c in coords))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class CarnotHit:
    q: int
    p: CarnotPoint
    dist: Radical

    def row(self) -> tuple:
        return (self.q, *[int(c) for c in self.p.coords], float(self.dist))


@dataclass(frozen=True)
class CarnotSpec:
    layer_dims: tuple[int, ...]
    # polys[j] is the correction polynomial for coordinate j; empty on layer 1
    polys: tuple[tuple[Monomial, ...], ...]
    weights: tuple[Fraction, ...]
    name: str = "custom"
    _layer_of: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        layer_of = []
        for i, d in enumerate(self.layer_dims, start=1):
            layer_of.extend([i] * d)
        object.__setattr__(self, "_layer_of", tuple(layer_of))

    @property
    def dim(self) -> int:
        return sum(self.layer_dims)

    @property
    def homogeneous_dim(self) -> int:
        return sum(i * d for i, d in enumerate(self.layer_dims, start=1))

    @property
    def steps(self) -> int:
        return len(self.layer_dims)

    def layer(self, coord: int) -> int:
        return self._layer_of[coord]

    @property
    def ball_constant(self) -> Fraction:
        """Measure of the unit ball of the weighted sup norm."""
        out = Fraction(2) ** self.dim
        for lam, d in zip(self.weights, self.layer_dims):
            out /= lam ** d
        return out

    def is_heisenberg(self) -> bool:
        return self.name.startswith("heis")

    def zero(self) -> CarnotPoint:
        return CarnotPoint(tuple(Fraction(0) for _ in range(self.dim)))

    def check(self, g: CarnotPoint) -> CarnotPoint:
        if not isinstance(g, CarnotPoint):
            g = CarnotPoint.of(g)
        if len(g) != self.dim:
            raise DomainError(f"point has {len(g)} coordinates, group has {self.dim}")
        return g

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "layer_dims": list(self.layer_dims),
            "weights": [str(w) for w in self.weights],
            "law_polynomials": [
                [{"coeff": c, "exponents": list(e)} for c, e in poly]
                for j, poly in enumerate(self.polys)
                if self.layer(j) > 1
            ],
        }


def _eval_poly(poly, gh: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for coeff, exps in poly:
        term = Fraction(coeff)
        for k, e in enumerate(exps):
            if e:
                term *= gh[k] ** e
        total += term
    return total


def c_mul(spec: CarnotSpec, g, h) -> CarnotPoint:
    g, h = spec.check(g), spec.check(h)
    gh = g.coords + h.coords
    return CarnotPoint(tuple(a + b + _eval_poly(p, gh) for a, b, p in zip(g.coords, h.coords, spec.polys)))


def c_inv(spec: CarnotSpec, g) -> CarnotPoint:
    """Solve g*h = 0 layer by layer; correction terms only see lower layers."""
    g = spec.check(g)
    n = spec.dim
    h = [Fraction(0)] * n
    for j in range(n):
        h[j] = -g.coords[j] - _eval_poly(spec.polys[j], g.coords + tuple(h))
    return CarnotPoint(tuple(h))


def c_dilate(spec: CarnotSpec, r, g) -> CarnotPoint:
    r = Fraction(r)
    if r <= 0:
        raise DomainError("dilation factor must be positive")
    g = spec.check(g)
    return CarnotPoint(tuple(c * r ** spec.layer(j) for j, c in enumerate(g.coords)))


def c_norm_inf(spec: CarnotSpec, g) -> Radical:
    g = spec.check(g)
    return max_radical(
        Radical(abs(spec.weights[spec.layer(j) - 1] * c), spec.layer(j)) for j, c in enumerate(g.coords)
    )


def c_dist_inf(spec: CarnotSpec, g, h) -> Radical:
    return c_norm_inf(spec, c_mul(spec, c_inv(spec, g), h))


def heis_gauge_norm(spec: CarnotSpec, g) -> Radical:
    """((|x|^2 + |y|^2)^2 + t^2)^(1/4) on a Heisenberg group."""
    if not spec.is_heisenberg():
        raise DomainError("gauge norm is defined for Heisenberg specs only")
    g = spec.check(g)
    horiz = sum((c * c for c in g.coords[:-1]), Fraction(0))
    return Radical(horiz * horiz + g.coords[-1] ** 2, 4)


def heis_gauge_dist(spec: CarnotSpec, g, h) -> Radical:
    return heis_gauge_norm(spec, c_mul(spec, c_inv(spec, g), h))


# ---------------------------------------------------------------------------
# built-in groups


def heisenberg(n: int = 1, weight: Fraction | None = None) -> CarnotSpec:
    """Heis^n with coordinates (x_1..x_n, y_1..y_n, t) and t-correction 2(x.y' - x'.y)."""
    if n < 1:
        raise DomainError("n must be positive")
    if weight is None:
        weight = Fraction(1, 2 * n)
    dim = 2 * n + 1
    poly = []
    for j in range(n):
        e = [0] * (2 * dim)
        e[j] = 1
        e[dim + n + j] = 1
        poly.append((2, tuple(e)))
        e = [0] * (2 * dim)
        e[dim + j] = 1
        e[n + j] = 1
        poly.append((-2, tuple(e)))
    polys = tuple(() for _ in range(2 * n)) + (tuple(poly),)
    return CarnotSpec((2 * n, 1), polys, (Fraction(1), Fraction(weight)), name=f"heis{n}")


def unitriangular4() -> CarnotSpec:
    """Upper unitriangular 4x4 matrices, a three-step group.

    Coordinates (a12, a23, a34 | a13, a24 | a14); the product is the matrix
    product, which is already polynomial with correction terms of the right
    weighted degree.
    """
    dim = 6

    def mono(coeff, *pairs):
        e = [0] * (2 * dim)
        for k in pairs:
            e[k] = 1
        return (coeff, tuple(e))

    g = lambda k: k  # noqa: E731
    h = lambda k: dim + k  # noqa: E731
    polys = (
        (),
        (),
        (),
        (mono(1, g(0), h(1)),),
        (mono(1, g(1), h(2)),),
        (mono(1, g(0), h(4)), mono(1, g(3), h(2))),
    )
    weights = (Fraction(1), Fraction(1, 2), Fraction(1, 4))
    return CarnotSpec((3, 2, 1), polys, weights, name="unitriangular4")


BUILTIN = {"heis1": lambda: heisenberg(1), "heis2": lambda: heisenberg(2), "unitriangular4": unitriangular4}


def builtin(name: str) -> CarnotSpec:
    try:
        return BUILTIN[name]()
    except KeyError:
        raise ConfigError(f"unknown built-in group {name!r}") from None


# ---------------------------------------------------------------------------
# loading and validation


def random_rational_point(spec: CarnotSpec, gen: np.random.Generator, den: int = 7, span: int = 5) -> CarnotPoint:
    return CarnotPoint(
        tuple(Fraction(int(gen.integers(-span * den, span * den + 1)), int(gen.integers(1, den + 1))) for _ in range(spec.dim))
    )


def axiom_violations(spec: CarnotSpec, trials: int = 200, seed: int = 0) -> list[str]:
    """Randomized exact checks of the group axioms; returns readable witnesses."""
    problems = []
    gen = _rng.stream(seed, "carnot.axioms")
    e = spec.zero()
    for _ in range(trials):
        a = random_rational_point(spec, gen)
        b = random_rational_point(spec, gen)
        c = random_rational_point(spec, gen)
        if c_mul(spec, c_mul(spec, a, b), c) != c_mul(spec, a, c_mul(spec, b, c)):
            problems.append(f"associativity fails for g={a}, h={b}, k={c}")
            break
        if c_mul(spec, a, e) != a or c_mul(spec, e, a) != a:
            problems.append(f"identity fails for g={a}")
            break
        ai = c_inv(spec, a)
        if c_mul(spec, a, ai) != e or c_mul(spec, ai, a) != e:
            problems.append(f"inverse fails for g={a}")
            break
    return problems


def structural_violations(spec: CarnotSpec) -> list[str]:
    problems = []
    dim = spec.dim
    if not spec.layer_dims or any(d < 1 for d in spec.layer_dims):
        return ["layer_dims must be positive integers"]
    if len(spec.weights) != spec.steps:
        problems.append("one weight per layer is required")
    elif spec.weights[0] != 1 or any(w <= 0 for w in spec.weights):
        problems.append("weights must be positive with the first equal to 1")
    if len(spec.polys) != dim:
        problems.append("wrong number of law polynomials")
        return problems
    for j, poly in enumerate(spec.polys):
        lj = spec.layer(j)
        for coeff, exps in poly:
            if len(exps) != 2 * dim:
                problems.append(f"monomial on coordinate {j} needs {2 * dim} exponents")
                continue
            if lj == 1:
                problems.append("first-layer coordinates cannot have correction terms")
            wdeg = sum(e * spec.layer(k % dim) for k, e in enumerate(exps))
            if any(e and spec.layer(k % dim) >= lj for k, e in enumerate(exps)):
                problems.append(f"correction for coordinate {j} uses a coordinate of layer >= {lj}")
            elif wdeg != lj:
                problems.append(f"monomial {coeff}*{exps} on coordinate {j} has weighted degree {wdeg}, expected {lj}")
    return problems


def spec_from_dict(data: dict, *, validate: bool = True) -> CarnotSpec:
    try:
        dims = tuple(int(d) for d in data["layer_dims"])
        weights = tuple(Fraction(str(w)) for w in data["weights"])
        raw = data.get("law_polynomials", [])
        dim = sum(dims)
        upper = dim - dims[0]
        if len(raw) != upper:
            raise ConfigError(f"expected {upper} law polynomials, got {len(raw)}")
        polys = [()] * dims[0]
        for poly in raw:
            polys.append(tuple((int(m["coeff"]), tuple(int(e) for e in m["exponents"])) for m in poly))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"malformed group spec: {exc}") from exc
    spec = CarnotSpec(dims, tuple(polys), weights, name=str(data.get("name", "custom")))
    if validate:
        problems = structural_violations(spec)
        if not problems:
            problems = axiom_violations(spec)
        if problems:
            raise ConfigError("; ".join(problems))
    return spec


def load_spec(path) -> CarnotSpec:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read group spec {path}: {exc}") from exc
    if "builtin" in data:
        return builtin(data["builtin"])
    return spec_from_dict(data)


# ---------------------------------------------------------------------------
# nearest rational point with denominator q (Heis^1)


def _require_heis1(spec: CarnotSpec):
    if spec.layer_dims != (2, 1) or not spec.is_heisenberg():
        raise DomainError("operation is implemented for Heis^1 only")


def nearest_lattice_point(spec: CarnotSpec, g, q: int) -> CarnotHit:
    """Integer point p whose dilate delta_{1/q} p is closest to g in the sup metric.

    Coordinates are rounded in order, each using the already fixed lower
    ones; ties go to the even integer.
    """
    _require_heis1(spec)
    if q < 1:
        raise DomainError("q must be a positive integer")
    g = spec.check(g)
    x, y, t = g.coords
    a = round(q * x)
    b = round(q * y)
    c = round(q * q * t - 2 * q * (a * y - b * x))
    p = CarnotPoint.of((a, b, c))
    return CarnotHit(q, p, c_dist_inf(spec, g, c_dilate(spec, Fraction(1, q), p)))


def _dyadic_parts(g: CarnotPoint, max_shift: int = 60):
    shift = max(c.denominator.bit_length() - 1 for c in g.coords)
    if any(c.denominator != 1 << (c.denominator.bit_length() - 1) for c in g.coords) or shift > max_shift:
        return None
    nums = [int(c * (1 << shift)) for c in g.coords]
    if any(abs(v) >= 1 << 62 for v in nums):
        return None
    return nums, shift


def best_distances(spec: CarnotSpec, g, N: int) -> np.ndarray:
    """Float distance to the nearest point of each dilated lattice, q = 1..N.

    Dyadic points go through the compiled kernel, whose integer arithmetic is
    exact up to the final conversion to double.  Other rationals use exact
    Python arithmetic.
    """
    _require_heis1(spec)
    g = spec.check(g)
    parts = _dyadic_parts(g)
    lam = spec.weights[1]
    if parts is not None and N <= 10**9:
        from .kernels import carnot_dists

        (X, Y, T), shift = parts
        return carnot_dists(X, Y, T, shift, lam.numerator, lam.denominator, N)
    return np.array([float(nearest_lattice_point(spec, g, q).dist) for q in range(1, N + 1)])


GAUGE_BRACKET_HEIS1 = (Radical(1), Radical(8, 4))
"""Analytic bounds on gauge/sup distance for Heis^1 with weight 1/2."""
