"""Schmidt games on the Heisenberg group and White's avoidance strategy.

The game is played in Sieg^1 with the gauge metric.  Black opens with a ball
of radius r1; White answers with a ball of radius alpha * r inside it, Black
with a ball of radius beta times White's, and so on.  White's strategy in
round i looks at rational points whose denominator satisfies
R^(i-1) <= |q| < R^i and steers its ball at least eps/|q| away from them.
With admissible parameters there is at most one such point per round; the
code checks this every time rather than trusting it.

All balls have exact rational centres and radii.  Distances are compared
exactly: a gauge distance d has rational d^4, and every threshold used here
has the form a + sqrt(s2) with rational a, s2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _rng
from .dioph import BAEstimate, ba_constant, parallel_map
from .errors import ConfigError, InvariantViolation, RuleViolation
from .siegel import SiegelHit, SiegelPoint, rationals_within, s_inv, s_mul, to_siegel

# volume of the unit gauge ball {(x^2 + y^2)^2 + t^2 <= 1} in (x, y, t)
UNIT_BALL_VOLUME = math.pi ** 2 / 2

_SPACINGS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32)


@dataclass(frozen=True)
class GameConfig:
    alpha: Fraction = Fraction(1, 48)
    beta: Fraction = Fraction(1, 4)
    r1: Fraction = Fraction(1, 768)
    epsilon: Fraction | None = None  # None means alpha * r1 / 100
    L: Fraction = Fraction(13, 4)
    delta: int = 4
    space: str = "siegel1"
    max_packing: int = 4096

    def __post_init__(self):
        for name in ("alpha", "beta", "r1", "L"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        eps = self.alpha * self.r1 / 100 if self.epsilon is None else Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "delta", int(self.delta))

    @property
    def R(self) -> Fraction:
        return 1 / (self.alpha * self.beta)

    def admissibility(self) -> Fraction:
        """L^4 (12 alpha)^delta; must be below 1."""
        return self.L ** 4 * (12 * self.alpha) ** self.delta

    def feasibility(self) -> Fraction:
        """L^4 (6 alpha)^delta ((eps + 2 alpha r1) / (alpha r1))^delta; White can always move when < 1."""
        ratio = (self.epsilon + 2 * self.alpha * self.r1) / (self.alpha * self.r1)
        return self.L ** 4 * (6 * self.alpha) ** self.delta * ratio ** self.delta

    def violations(self) -> list[str]:
        out = []
        if not 0 < self.alpha < 1:
            out.append(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.beta < 1:
            out.append(f"beta must lie in (0, 1), got {self.beta}")
        if not 0 < self.epsilon < 1:
            out.append(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 < self.r1 < 1:
            out.append(f"r1 must lie in (0, 1), got {self.r1}")
        if self.L < 1:
            out.append(f"L must be at least 1, got {self.L}")
        if self.delta <= 0:
            out.append(f"delta must be positive, got {self.delta}")
        if out:
            return out
        adm = self.admissibility()
        if not adm < 1:
            out.append(f"1 > L^4 (12 alpha)^delta fails: L^4 (12 alpha)^delta = {float(adm):.6g}")
        if not 2 * self.r1 + 2 * self.epsilon < self.alpha * self.beta:
            out.append(
                "2 r1 + 2 epsilon < alpha beta fails: "
                f"{float(2 * self.r1 + 2 * self.epsilon):.6g} >= {float(self.alpha * self.beta):.6g}"
            )
        if not self.feasibility() < 1:
            out.append(f"feasibility bound fails: {float(self.feasibility()):.6g} >= 1")
        return out

    def check(self) -> "GameConfig":
        bad = self.violations()
        if bad:
            raise ConfigError("; ".join(bad))
        return self

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "r1": str(self.r1),
            "epsilon": str(self.epsilon),
            "L": str(self.L),
            "delta": self.delta,
            "R": str(self.R),
            "space": self.space,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameConfig":
        known = {"alpha", "beta", "r1", "epsilon", "L", "delta", "space", "max_packing"}
        extra = set(data) - known - {"R"}
        if extra:
            raise ConfigError(f"unknown game parameters: {sorted(extra)}")
        try:
            kw = {k: (Fraction(str(v)) if k not in ("space", "delta", "max_packing") else v) for k, v in data.items() if k in known}
            return cls(**kw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad game parameter: {exc}") from exc


@dataclass(frozen=True)
class GameBall:
    center: SiegelPoint
    radius: Fraction
    round_index: int

    def to_json(self) -> dict:
        return {"center": self.center.to_json(), "radius": str(self.radius), "round": self.round_index}


# ---------------------------------------------------------------------------
# exact geometry


def _dilate(h: SiegelPoint, r: Fraction) -> SiegelPoint:
    return SiegelPoint(tuple(c * r for c in h.u), h.v * (r * r))


def _d4(a: SiegelPoint, b: SiegelPoint) -> Fraction:
    """Fourth power of the gauge distance."""
    return s_mul(s_inv(a), b).v.abs2()


def compare_distance(d4: Fraction, a: Fraction, s2: Fraction = Fraction(0)) -> int:
    """Sign of d - (a + sqrt(s2)) for d = d4^(1/4), with a, s2 >= 0 rational."""
    a = Fraction(a)
    s2 = Fraction(s2)
    # (a + s)^4 = P + s * Qs with P, Qs rational
    P = a ** 4 + 6 * a * a * s2 + s2 * s2
    Qs = 4 * a ** 3 + 4 * a * s2
    X = d4 - P
    if Qs == 0 or s2 == 0:
        return (X > 0) - (X < 0)
    if X <= 0:
        return -1
    diff = X * X - s2 * Qs * Qs
    return (diff > 0) - (diff < 0)


def _nested(inner: GameBall, outer: GameBall) -> bool:
    if inner.radius > outer.radius:
        return False
    return compare_distance(_d4(outer.center, inner.center), outer.radius - inner.radius) <= 0


# ---------------------------------------------------------------------------
# packings


def packing_lower_bound(beta, L, delta: int) -> int:
    """ceil(L^-2 (6 beta)^-delta), the guaranteed number of disjoint sub-balls."""
    beta = Fraction(beta)
    L = Fraction(L)
    val = 1 / (L * L * (6 * beta) ** int(delta))
    return max(1, math.ceil(val))


@lru_cache(maxsize=64)
def _unit_offsets(beta: Fraction, max_count: int) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    """Offsets (x, y, t) of a disjoint packing of the unit ball by beta-balls.

    Grid with horizontal step h > 2 beta and vertical step h^2.  Two grid
    points with different (x, y) are at gauge distance at least their
    horizontal distance, and two with the same (x, y) at least sqrt(h^2) = h,
    so the balls are disjoint.  Offsets of norm <= 1 - beta keep the
    sub-balls inside.  The step is widened by integer factors until the
    expected count is at most max_count.  Sorted by norm, centre first.
    """
    if beta == 1:
        return ((Fraction(0), Fraction(0), Fraction(0)),)
    outer = 1 - beta
    for f in _SPACINGS:
        h = 2 * beta * f * Fraction(1001, 1000)
        if UNIT_BALL_VOLUME * float(outer) ** 4 / float(h) ** 4 <= max_count:
            break
    k = h * h
    o2, o4 = outer * outer, outer ** 4
    amax = math.floor(outer / h)
    pts = []
    for a in range(-amax, amax + 1):
        for b in range(-amax, amax + 1):
            x, y = a * h, b * h
            rho2 = x * x + y * y
            if rho2 > o2:
                continue
            rem = o4 - rho2 * rho2
            cmax = math.isqrt(math.floor(rem / (k * k))) + 1
            while cmax >= 0 and (cmax * k) ** 2 > rem:
                cmax -= 1
            for c in range(-cmax, cmax + 1):
                t = c * k
                pts.append((rho2 * rho2 + t * t, a, b, c, (x, y, t)))
    pts.sort(key=lambda p: p[:4])
    return tuple(p[4] for p in pts)


def _offset_ball(B: GameBall, off, beta: Fraction) -> GameBall:
    g = _dilate(to_siegel(off), B.radius)
    return GameBall(s_mul(B.center, g), B.radius * beta, B.round_index)


def iter_subballs(B: GameBall, beta, max_count: int = 4096) -> Iterator[GameBall]:
    beta = Fraction(beta)
    for off in _unit_offsets(beta, max_count):
        yield _offset_ball(B, off, beta)


def packing_subballs(B: GameBall, beta, cfg: GameConfig | None = None) -> list[GameBall]:
    """Pairwise-disjoint balls of radius beta * r inside B, centre ball first.

    With a config, the count is checked against the volume lower bound.
    """
    beta = Fraction(beta)
    if not 0 < beta <= 1:
        raise ConfigError(f"beta must lie in (0, 1], got {beta}")
    max_count = cfg.max_packing if cfg is not None else 4096
    balls = list(iter_subballs(B, beta, max_count))
    if cfg is not None:
        need = packing_lower_bound(beta, cfg.L, cfg.delta)
        if len(balls) < need:
            raise InvariantViolation(f"packing found {len(balls)} balls, the volume bound promises {need}")
    return balls


def packing_is_disjoint(balls: Sequence[GameBall]) -> bool:
    """Pairwise check d(c_j, c_k) > r_j + r_k.

    Pairs that are clearly apart in double precision are accepted; the rest
    are decided exactly.
    """
    n = len(balls)
    if n < 2:
        return True
    u = np.array([complex(b.center.u[0]) for b in balls])
    v = np.array([complex(b.center.v) for b in balls])
    r = np.array([float(b.radius) for b in balls])
    for j in range(n - 1):
        w = np.conj(v[j]) + v[j + 1 :] - np.conj(u[j]) * u[j + 1 :]
        d = np.sqrt(np.abs(w))
        close = np.nonzero(d <= (r[j] + r[j + 1 :]) * (1 + 1e-6))[0]
        for k in (close + j + 1).tolist():
            if compare_distance(_d4(balls[j].center, balls[k].center), balls[j].radius + balls[k].radius) <= 0:
                return False
    return True


# ---------------------------------------------------------------------------
# White


def _shell(cfg: GameConfig, i: int) -> tuple[Fraction, Fraction]:
    R = cfg.R
    return R ** (2 * (i - 1)), R ** (2 * i)


def shell_rationals(cfg: GameConfig, ball: GameBall, i: int) -> list[SiegelHit]:
    """Rationals with R^(i-1) <= |q| < R^i and d(centre, p/q) <= radius + eps/|q|."""
    lo2, hi2 = _shell(cfg, i)
    Q = cfg.R ** i
    D = ball.radius + cfg.epsilon / cfg.R ** (i - 1)
    out = []
    for hit in rationals_within(ball.center, Q, D):
        N = hit.norm_q
        if not lo2 <= N < hi2:
            continue
        d4 = hit.dist.power(4)
        if compare_distance(d4, ball.radius, cfg.epsilon ** 2 / N) <= 0:
            out.append(hit)
    return out


def candidates(cfg: GameConfig, B: GameBall) -> list[SiegelHit]:
    return shell_rationals(cfg, B, B.round_index)


def _avoids(cfg: GameConfig, ball: GameBall, hit: SiegelHit) -> bool:
    """d(centre, p/q) > radius + eps/|q|, so every point of the ball is farther than eps/|q|."""
    d4 = _d4(ball.center, hit.rational.point())
    return compare_distance(d4, ball.radius, cfg.epsilon ** 2 / hit.norm_q) > 0


@dataclass
class WhiteReply:
    ball: GameBall
    candidate: SiegelHit | None


def strategy_white(cfg: GameConfig, B: GameBall) -> WhiteReply:
    found = candidates(cfg, B)
    if len(found) > 1:
        pts = ", ".join(str(h.rational.point()) for h in found)
        raise InvariantViolation(
            f"round {B.round_index}: {len(found)} rational points in the avoidance window "
            f"(expected at most one): {pts}"
        )
    if not found:
        return WhiteReply(next(iter_subballs(B, cfg.alpha, cfg.max_packing)), None)
    target = found[0]
    for ball in iter_subballs(B, cfg.alpha, cfg.max_packing):
        if _avoids(cfg, ball, target):
            return WhiteReply(ball, target)
    raise InvariantViolation(f"round {B.round_index}: no packing ball avoids {target.rational.point()}")


def careless_white(cfg: GameConfig, B: GameBall) -> WhiteReply:
    """Negative control: moves toward the candidate instead of away from it."""
    found = candidates(cfg, B)
    balls = list(iter_subballs(B, cfg.alpha, cfg.max_packing))
    if not found:
        return WhiteReply(balls[0], None)
    p = found[0].rational.point()
    best = min(balls, key=lambda b: _d4(b.center, p))
    return WhiteReply(best, found[0])


def white_move(cfg: GameConfig, B: GameBall) -> GameBall:
    """White's reply to Black's ball B (round taken from B.round_index)."""
    return strategy_white(cfg, B).ball


WHITE_STRATEGIES: dict[str, Callable[[GameConfig, GameBall], WhiteReply]] = {
    "strategy": strategy_white,
    "careless": careless_white,
}


# ---------------------------------------------------------------------------
# Black


def random_black(cfg: GameConfig, W: GameBall, gen: np.random.Generator) -> GameBall:
    offs = _unit_offsets(cfg.beta, cfg.max_packing)
    k = int(gen.integers(0, len(offs)))
    ball = _offset_ball(W, offs[k], cfg.beta)
    return GameBall(ball.center, ball.radius, W.round_index + 1)


def adversarial_black(cfg: GameConfig, W: GameBall, gen: np.random.Generator) -> GameBall:
    """Sub-ball whose centre is nearest the lowest-height rational close to W."""
    i = W.round_index + 1
    hits = rationals_within(W.center, cfg.R ** i, W.radius)
    balls = [GameBall(b.center, b.radius, i) for b in iter_subballs(W, cfg.beta, cfg.max_packing)]
    if not hits:
        return balls[0]
    target = min(hits, key=lambda h: h.sort_key()).rational.point()
    return min(balls, key=lambda b: _d4(b.center, target))


BLACK_STRATEGIES: dict[str, Callable[[GameConfig, GameBall, np.random.Generator], GameBall]] = {
    "random": random_black,
    "adversarial": adversarial_black,
}


def initial_ball(cfg: GameConfig, seed: int = 7, index: int = 0) -> GameBall:
    """Black's opening ball, centred at a uniform dyadic point of the unit box."""
    gen = _rng.stream(seed, "schmidt.start", index)
    centre = to_siegel(tuple(_rng.dyadic(gen, 53) for _ in range(3)))
    return GameBall(centre, cfg.r1, 1)


# ---------------------------------------------------------------------------
# games


@dataclass
class GameRecord:
    config: GameConfig
    balls: list[GameBall]
    candidates: list[SiegelHit | None]
    black: str
    seed: int
    index: int

    @property
    def limit_center(self) -> SiegelPoint:
        return self.balls[-1].center

    @property
    def rounds(self) -> int:
        return len(self.candidates)

    def to_json(self, verify: bool = True) -> dict:
        rounds = []
        for i, cand in enumerate(self.candidates):
            entry = {"black_ball": self.balls[2 * i].to_json(), "white_ball": self.balls[2 * i + 1].to_json()}
            if cand is not None:
                entry["candidate"] = cand.rational.to_json()
            rounds.append(entry)
        out = {
            "config": self.config.to_dict(),
            "black": self.black,
            "seed": self.seed,
            "index": self.index,
            "rounds": rounds,
            "final_black_ball": self.balls[-1].to_json(),
            "limit_center": self.limit_center.to_json(),
        }
        if verify:
            out["verification"] = verification_report(self.balls, self.config).to_json()
        return out


def _check_black(cfg: GameConfig, W: GameBall, B: GameBall) -> None:
    if B.radius != cfg.beta * W.radius:
        raise RuleViolation(f"Black's ball has radius {B.radius}, expected {cfg.beta * W.radius}")
    if not _nested(B, W):
        raise RuleViolation(f"Black's ball at round {B.round_index} is not inside White's ball")


def play(
    cfg: GameConfig,
    black: str | Callable = "random",
    rounds: int = 15,
    *,
    seed: int = 7,
    index: int = 0,
    white: str | Callable = "strategy",
    start: GameBall | None = None,
) -> GameRecord:
    """Alternate White and Black for ``rounds`` rounds starting from Black's ball."""
    cfg.check()
    black_fn = BLACK_STRATEGIES[black] if isinstance(black, str) else black
    white_fn = WHITE_STRATEGIES[white] if isinstance(white, str) else white
    B = start if start is not None else initial_ball(cfg, seed, index)
    if B.radius != cfg.r1:
        raise RuleViolation(f"opening ball must have radius r1 = {cfg.r1}")
    gen = _rng.stream(seed, "schmidt.black", index)
    balls = [B]
    cands: list[SiegelHit | None] = []
    for _ in range(rounds):
        reply = white_fn(cfg, B)
        W = reply.ball
        if W.radius != cfg.alpha * B.radius or not _nested(W, B):
            raise InvariantViolation(f"White's reply at round {B.round_index} breaks the rules")
        nxt = black_fn(cfg, W, gen)
        _check_black(cfg, W, nxt)
        balls += [W, nxt]
        cands.append(reply.candidate)
        B = nxt
    name = black if isinstance(black, str) else getattr(black, "__name__", "custom")
    return GameRecord(cfg, balls, cands, name, seed, index)


@dataclass
class VerificationReport:
    ok: bool
    rounds_checked: int
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "rounds_checked": self.rounds_checked, "failures": self.failures}


def verification_report(seq: Sequence[GameBall], cfg: GameConfig) -> VerificationReport:
    """Replay a ball sequence [B_1, W_1, B_2, W_2, ...] against White's goal.

    Radii and nesting are checked exactly.  For each White ball W_i the
    rationals with R^(i-1) <= |q| < R^i are re-enumerated and every point of
    W_i must be farther than eps/|q| from them.  Smaller denominators were
    checked on an earlier White ball that contains W_i, so together this
    covers every |q| < R^i.
    """
    failures = []
    if not seq:
        return VerificationReport(True, 0)
    if seq[0].radius != cfg.r1:
        failures.append(f"opening radius {seq[0].radius} != r1 = {cfg.r1}")
    for k in range(1, len(seq)):
        ratio = cfg.alpha if k % 2 else cfg.beta
        if seq[k].radius != ratio * seq[k - 1].radius:
            failures.append(f"ball {k}: radius ratio is not {ratio}")
        if not _nested(seq[k], seq[k - 1]):
            failures.append(f"ball {k} is not nested in ball {k - 1}")
    rounds = 0
    for k in range(1, len(seq), 2):
        i = (k + 1) // 2
        for hit in shell_rationals(cfg, seq[k], i):
            failures.append(f"round {i}: {hit.rational.point()} with |q|^2 = {hit.norm_q} is within eps/|q|")
        rounds += 1
    return VerificationReport(not failures, rounds, failures)


def verify_strategy(seq: Sequence[GameBall], cfg: GameConfig) -> bool:
    return verification_report(seq, cfg).ok


# ---------------------------------------------------------------------------
# Cantor sets


def cantor_dimension(n: int, ratio) -> float:
    """-log n / log ratio, the dimension of the Cantor set C(ratio, n, r)."""
    return -math.log(n) / math.log(float(ratio))


@dataclass
class CantorNode:
    black: GameBall
    white: GameBall | None = None
    children: list["CantorNode"] = field(default_factory=list)


@dataclass
class CantorTree:
    root: CantorNode
    n: int
    depth: int
    ratio: Fraction
    dimension_estimate: float

    def paths(self) -> list[list[GameBall]]:
        """Ball sequences [B_1, W_1, ..., B_{depth+1}] from the root to every leaf."""
        out = []

        def walk(node: CantorNode, prefix: list[GameBall]):
            if not node.children:
                out.append(prefix + [node.black])
                return
            for child in node.children:
                walk(child, prefix + [node.black, node.white])

        walk(self.root, [])
        return out

    def leaves(self) -> list[GameBall]:
        return [p[-1] for p in self.paths()]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "ratio": str(self.ratio),
            "dimension_estimate": self.dimension_estimate,
            "leaves": [b.to_json() for b in self.leaves()],
        }


def cantor_build(cfg: GameConfig, n: int, depth: int, *, seed: int = 7, start: GameBall | None = None) -> CantorTree:
    """n-ary tree: White replies by strategy, Black branches into n packing balls."""
    cfg.check()
    if n < 1 or depth < 0:
        raise ConfigError("need n >= 1 and depth >= 0")
    available = len(_unit_offsets(cfg.beta, cfg.max_packing))
    if n > available:
        raise ConfigError(f"infeasible: the beta-packing has only {available} balls, asked for n = {n}")
    root_ball = start if start is not None else initial_ball(cfg, seed, 0)

    def branch(node: CantorNode) -> list[GameBall]:
        node.white = strategy_white(cfg, node.black).ball
        kids = []
        for ball in iter_subballs(node.white, cfg.beta, cfg.max_packing):
            kids.append(GameBall(ball.center, ball.radius, node.black.round_index + 1))
            if len(kids) == n:
                break
        return kids

    def grow(B: GameBall, remaining: int) -> CantorNode:
        node = CantorNode(B)
        if remaining > 0:
            node.children = [grow(k, remaining - 1) for k in branch(node)]
        return node

    root = CantorNode(root_ball)
    if depth > 0:
        root.children = parallel_map(lambda k: grow(k, depth - 1), branch(root))
    ratio = cfg.alpha * cfg.beta
    return CantorTree(root, n, depth, ratio, cantor_dimension(n, ratio))


# ---------------------------------------------------------------------------
# regularity constant and the quality experiment


@dataclass
class RegularityEstimate:
    volume: float  # Monte Carlo volume of the unit gauge ball
    samples: int
    L: float  # diam^4 / volume for balls (diam = 2 r)


def measure_regularity(samples: int = 200_000, seed: int = 7) -> RegularityEstimate:
    """Estimate the ball-volume constant by sampling the box [-1, 1]^3."""
    gen = _rng.stream(seed, "schmidt.regularity", 0)
    pts = gen.uniform(-1.0, 1.0, size=(samples, 3))
    rho2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    inside = np.count_nonzero(rho2 * rho2 + pts[:, 2] ** 2 <= 1.0)
    vol = 8.0 * inside / samples
    return RegularityEstimate(vol, samples, max(16.0 / vol, vol / 16.0))


def random_control(seed: int, index: int) -> SiegelPoint:
    gen = _rng.stream(seed, "schmidt.control", index)
    return to_siegel(tuple(_rng.dyadic(gen, 53) for _ in range(3)))


@dataclass
class StrategyReport:
    games: list[GameRecord]
    verified: list[bool]
    game_ba: list[BAEstimate]
    control_ba: list[BAEstimate]
    cutoff: int

    @property
    def candidate_rounds(self) -> int:
        return sum(1 for g in self.games for c in g.candidates if c is not None)

    @property
    def beat_fraction(self) -> float:
        wins = sum(1 for g, c in zip(self.game_ba, self.control_ba) if g.value > c.value)
        return wins / len(self.game_ba) if self.game_ba else 0.0

    def to_json(self) -> dict:
        return {
            "games": len(self.games),
            "verified": sum(self.verified),
            "candidate_rounds": self.candidate_rounds,
            "cutoff": self.cutoff,
            "beat_fraction": self.beat_fraction,
            "game_ba": [b.value for b in self.game_ba],
            "control_ba": [b.value for b in self.control_ba],
        }


def quality_cutoff(cfg: GameConfig, rounds: int) -> int:
    return math.floor(cfg.R ** (rounds // 2))


def strategy_experiment(
    games: int = 50, rounds: int = 15, seed: int = 7, cfg: GameConfig | None = None, black: str = "random"
) -> StrategyReport:
    """Play games, replay them, and compare limit centres with random controls."""
    cfg = (cfg or GameConfig()).check()
    cutoff = quality_cutoff(cfg, rounds)
    records = parallel_map(lambda k: play(cfg, black, rounds, seed=seed, index=k), list(range(games)))
    verified = parallel_map(lambda g: verify_strategy(g.balls, cfg), records)
    game_ba = parallel_map(lambda g: ba_constant(g.limit_center, cutoff), records)
    control_ba = parallel_map(lambda k: ba_constant(random_control(seed, k), cutoff), list(range(games)))
    return StrategyReport(records, verified, game_ba, control_ba, cutoff)
