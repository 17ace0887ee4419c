"""Command-line front end.

Every command writes a JSON summary (to stdout, or to ``<out>/summary.json``
with ``--out``) and, when there is per-item detail, ``<out>/detail.csv``.
Numbers in the summary are tagged with their provenance.  Exit codes: 0 on
success, 2 for invalid input or configuration, 3 when an invariant check
fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import carnot, dioph, heiscf, hyper, schmidt, siegel, zkernel
from .errors import ConfigError, DomainError, InvariantViolation

SCHEMA = "hdioph.summary/1"
DOUBLE_BITS = 53


class Output:
    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.args = args
        self.summary: dict = {}
        self.header: list[str] | None = None
        self.rows: list[Sequence] = []

    def detail(self, header: list[str], rows) -> None:
        self.header = header
        self.rows = [list(r) for r in rows]


# ---------------------------------------------------------------------------
# provenance tagging


class Rounded(str):
    """Decimal text correctly rounded from an exact value to a given binary precision."""

    def __new__(cls, text: str, bits: int):
        obj = super().__new__(cls, text)
        obj.bits = bits
        return obj


def _numeric_text(s: str) -> bool:
    """True for the textual forms of exact numbers: Gaussian rationals, tuples of them, radicals."""
    t = s.strip()
    if not t:
        return False
    try:
        if t.startswith("(") and t.endswith(")"):
            if ")^(1/" in t:
                return True
            parts = t[1:-1].split(",")
        else:
            parts = [t]
        for part in parts:
            zkernel.parse_gauss(part)
    except (ValueError, TypeError, ZeroDivisionError):
        return False
    return True


def _tag(x):
    if isinstance(x, Rounded):
        return {"value": str(x), "provenance": f"float({x.bits})"}
    if isinstance(x, str):
        return {"value": x, "provenance": "exact"} if _numeric_text(x) else x
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (zkernel.GaussInt, zkernel.GaussRat)):
        return {"value": str(x), "provenance": "exact"}
    if isinstance(x, int):
        return {"value": x, "provenance": "exact"}
    if isinstance(x, (Fraction, zkernel.Radical)):
        return {"value": str(x), "provenance": "exact"}
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            return {"value": str(x), "provenance": f"float({DOUBLE_BITS})"}
        return {"value": x, "provenance": f"float({DOUBLE_BITS})"}
    if isinstance(x, dict):
        return {k: _tag(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_tag(v) for v in x]
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(c) if isinstance(c, float) else c for c in r])
    return buf.getvalue()


def _emit(out: Output) -> None:
    a = out.args
    doc = {
        "schema": SCHEMA,
        "command": out.command,
        "seed": a.seed,
        "precision_bits": a.precision_bits,
        "result": _tag(out.summary),
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if a.out is None:
        sys.stdout.write(text)
        return
    d = Path(a.out)
    d.mkdir(parents=True, exist_ok=True)
    (d / "summary.json").write_text(text)
    if out.header is not None:
        (d / "detail.csv").write_text(_csv_text(out.header, out.rows))


# ---------------------------------------------------------------------------
# argument helpers


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def _carnot_point(text: str) -> carnot.CarnotPoint:
    return carnot.CarnotPoint(tuple(_frac(s) for s in text.replace("(", "").replace(")", "").split(",")))


def _siegel_point(text: str) -> siegel.SiegelPoint:
    try:
        return siegel.parse_point(text)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad Siegel point {text!r}: {exc}") from exc


def _gauss_int(text: str) -> zkernel.GaussInt:
    g = zkernel.parse_gauss(text)
    if not g.is_integral():
        raise ConfigError(f"{text!r} is not a Gaussian integer")
    return zkernel.GaussInt(int(g.re), int(g.im))


def _group_spec(args) -> carnot.CarnotSpec:
    if args.spec:
        return carnot.load_spec(args.spec)
    return carnot.builtin(args.group)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


# ---------------------------------------------------------------------------
# commands


def cmd_nt(args, out: Output) -> None:
    if args.action == "sum":
        _require(args.K is not None, "nt sum needs --K")
        digits = math.ceil(args.precision_bits * math.log10(2)) + 1
        rep = zkernel.analytic_sum(args.kind, args.K, args.exponent, digits=digits)
        out.summary = rep.to_json()
        out.summary["value"] = Rounded(rep.value, args.precision_bits)
        out.summary["exact"] = rep.exact
        return
    _require(args.z is not None, f"nt {args.action} needs --z")
    z = _gauss_int(args.z)
    if args.action == "factor":
        f = zkernel.factor(z)
        out.summary = {"z": str(z), "factors": [{"prime": str(p), "exponent": e} for p, e in f.items()]}
        out.detail(["prime", "exponent"], [(str(p), e) for p, e in f.items()])
    elif args.action == "totient":
        out.summary = {"z": str(z), "totient": zkernel.totient(z)}
    elif args.action == "moebius":
        out.summary = {"z": str(z), "moebius": zkernel.moebius(z)}
    elif args.action == "gcd":
        _require(args.w is not None, "nt gcd needs --w")
        w = _gauss_int(args.w)
        out.summary = {"z": str(z), "w": str(w), "gcd": str(zkernel.gi_gcd(z, w))}


def cmd_group(args, out: Output) -> None:
    spec = _group_spec(args)
    out.summary = {"group": spec.to_dict()}
    _require(args.a is not None, f"group {args.action} needs --a")
    g = spec.check(_carnot_point(args.a))
    if args.action == "mul":
        _require(args.b is not None, "group mul needs --b")
        out.summary["product"] = str(carnot.c_mul(spec, g, spec.check(_carnot_point(args.b))))
    elif args.action == "inv":
        out.summary["inverse"] = str(carnot.c_inv(spec, g))
    elif args.action == "norm":
        out.summary["norm_inf"] = carnot.c_norm_inf(spec, g)
        if spec.is_heisenberg() and spec.dim == 3:
            out.summary["gauge_norm"] = carnot.heis_gauge_norm(spec, g)
    elif args.action == "dist":
        _require(args.b is not None, "group dist needs --b")
        h = spec.check(_carnot_point(args.b))
        out.summary["dist_inf"] = carnot.c_dist_inf(spec, g, h)
        if spec.is_heisenberg() and spec.dim == 3:
            out.summary["gauge_dist"] = carnot.heis_gauge_dist(spec, g, h)
    elif args.action == "nearest":
        _require(args.q is not None, "group nearest needs --q")
        hit = carnot.nearest_lattice_point(spec, g, args.q)
        out.summary.update({"q": hit.q, "p": [int(c) for c in hit.p.coords], "dist": hit.dist})


def cmd_cf(args, out: Output) -> None:
    _require(args.point is not None, "cf needs --point")
    h = _siegel_point(args.point)
    if args.action == "expand":
        exp = heiscf.expand(h, args.max_digits)
        out.summary = exp.to_json()
        out.summary["chain_identity"] = heiscf.check_chain_identity(h, exp) if exp.terminated else None
        out.detail(
            ["index", "digit", "remainder"],
            [(k + 1, str(d), str(r)) for k, (d, r) in enumerate(zip(exp.digits, exp.remainders))],
        )
    elif args.action == "nearest":
        out.summary = {"point": h.to_json(), "nearest": heiscf.nearest_sieg_int(h).to_json()}
    elif args.action == "height":
        out.summary = siegel.siegel_height(h).to_json()


def _count_rows(reports, carnot_model: bool):
    rows = []
    for k, rep in enumerate(reports):
        for hit in rep.hits:
            if carnot_model:
                rows.append((k, *hit.row()))
            else:
                q = hit.rational.q
                r, p = hit.rational.p_vec
                rows.append((k, q.re, q.im, r.re, r.im, p.re, p.im, float(hit.dist)))
    return rows


def cmd_count(args, out: Output) -> None:
    C, alpha = _frac(args.C), _frac(args.alpha)
    _require(C > 0 and alpha > 0, "--C and --alpha must be positive")
    if args.model == "carnot":
        N = args.N
        _require(N >= 1, "--N must be at least 1")
        if args.point:
            reps = [dioph.carnot_count(_carnot_point(args.point), C, alpha, N)]
        else:
            reps = dioph.carnot_count_experiment(args.samples, C, alpha, N, args.seed).reports
        header = ["sample", "q", "a", "b", "c", "dist"]
    else:
        N = args.Nnorm
        _require(N >= 1, "--Nnorm must be at least 1")
        if args.point:
            pts = [_siegel_point(args.point)]
        else:
            pts = [dioph.random_siegel_point(args.seed, k) for k in range(args.samples)]
        reps = dioph.parallel_map(lambda h: dioph.siegel_scan(h, C, alpha, N), pts)
        header = ["sample", "q_re", "q_im", "r_re", "r_im", "p_re", "p_im", "dist"]
    slopes = [r.fitted_slope for r in reps]
    out.summary = {
        "model": args.model,
        "C": C,
        "alpha": alpha,
        "N": N,
        "samples": len(reps),
        "hit_count": sum(r.hit_count for r in reps),
        "fitted_slope": sum(slopes) / len(slopes),
        "predicted_slope": reps[0].predicted_slope if reps else None,
    }
    out.detail(header, _count_rows(reps, args.model == "carnot"))


def cmd_scan(args, out: Output) -> None:
    _require(args.point is not None, "scan needs --point")
    h = _siegel_point(args.point)
    if args.action == "near":
        rep = dioph.siegel_scan(h, _frac(args.C), _frac(args.alpha), args.Nnorm)
        out.summary = rep.summary()
        out.summary.update({"C": rep.C, "alpha": rep.alpha, "point": h.to_json()})
        out.detail(["q_re", "q_im", "r_re", "r_im", "p_re", "p_im", "dist"], [r[1:] for r in _count_rows([rep], False)])
    else:
        est = dioph.ba_constant(h, args.Nnorm)
        out.summary = est.to_json()
        out.summary["point"] = h.to_json()


def cmd_exponent(args, out: Output) -> None:
    if args.model == "carnot":
        if args.axis in ("t_axis", "x_axis"):
            rep = dioph.axis_experiment(args.axis, args.samples, args.N, args.seed)
            ests = rep.estimates
        else:
            pts = [dioph.random_carnot_point(args.seed, k) for k in range(args.samples)]
            ests = dioph.parallel_map(lambda g: dioph.estimate_exponent(g, "carnot", args.N), pts)
    else:
        pts = [dioph.random_siegel_point(args.seed, k) for k in range(args.samples)]
        ests = dioph.parallel_map(lambda h: dioph.estimate_exponent(h, "siegel", args.N), pts)
    vals = [e.estimate for e in ests if e.status == "ok"]
    mean = sum(vals) / len(vals) if vals else float("nan")
    spread = math.sqrt(sum((v - mean) ** 2 for v in vals) / len(vals)) if vals else float("nan")
    out.summary = {
        "model": args.model,
        "axis": args.axis,
        "N": args.N,
        "samples": len(ests),
        "mean_estimate": mean,
        "spread": spread,
        "estimates": [e.to_json() for e in ests],
    }
    out.detail(["sample", "estimate", "status", "records"], [(k, e.estimate, e.status, len(e.samples)) for k, e in enumerate(ests)])


def cmd_horo(args, out: Output) -> None:
    if args.action == "height":
        _require(args.u is not None and args.v is not None, "horo height needs --u and --v")
        out.summary = {"height": hyper.horoheight(zkernel.parse_gauss(args.u), zkernel.parse_gauss(args.v))}
        return
    if args.action == "invert":
        _require(args.height is not None, "horo invert needs --height")
        base = hyper.INFINITY if args.point in (None, "inf") else _siegel_point(args.point)
        H = hyper.invert_horoball(hyper.Horoball(base, _frac(args.height)))
        out.summary = H.to_json()
        return
    _require(args.point is not None, f"horo {args.action} needs --point")
    h = _siegel_point(args.point)
    s0 = _frac(args.s0)
    if args.action == "rational":
        rep = hyper.horoheight_report(siegel.siegel_height(h), s0)
        out.summary = {
            "closed_form": rep.closed_form,
            "chain": rep.chain,
            "chain_product": rep.chain_product,
            "steps": rep.steps,
            "agree": rep.agree,
        }
    else:
        prof = hyper.excursion_profile(h, s0, args.Nnorm)
        out.summary = {"s0": s0, "Nnorm": args.Nnorm, "bases": len(prof), "max_depth": hyper.max_depth(prof)}
        out.detail(["q_re", "q_im", "r_re", "r_im", "p_re", "p_im", "depth"], [r.row() for r in prof])


def _game_config(args) -> schmidt.GameConfig:
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read game config {args.config}: {exc}") from exc
        return schmidt.GameConfig.from_dict(data).check()
    return schmidt.GameConfig().check()


def cmd_game(args, out: Output) -> None:
    cfg = _game_config(args)
    games = dioph.parallel_map(
        lambda k: schmidt.play(cfg, args.black, args.rounds, seed=args.seed, index=k), list(range(args.games))
    )
    transcripts = [g.to_json() for g in games]
    out.summary = {
        "config": cfg.to_dict(),
        "games": transcripts,
        "all_verified": all(t["verification"]["ok"] for t in transcripts),
    }
    rows = []
    for k, g in enumerate(games):
        for i, cand in enumerate(g.candidates):
            rows.append((k, i + 1, str(g.balls[2 * i].center), str(g.balls[2 * i + 1].center), "" if cand is None else str(cand.rational.point())))
    out.detail(["game", "round", "black_center", "white_center", "candidate"], rows)
    if not out.summary["all_verified"]:
        _emit(out)
        raise InvariantViolation("a game failed strategy verification")


def cmd_cantor(args, out: Output) -> None:
    cfg = _game_config(args)
    tree = schmidt.cantor_build(cfg, args.n, args.depth, seed=args.seed)
    paths = tree.paths()
    ok = all(schmidt.verify_strategy(p, cfg) for p in paths)
    out.summary = tree.to_json()
    out.summary["leaf_count"] = len(paths)
    out.summary["all_verified"] = ok
    out.detail(["leaf", "center", "radius"], [(k, str(p[-1].center), str(p[-1].radius)) for k, p in enumerate(paths)])
    if not ok:
        _emit(out)
        raise InvariantViolation("a Cantor branch failed strategy verification")


def validate_config(path) -> list[str]:
    """Diagnostics for a group spec or a game config file; empty means valid."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        return ["top level must be a JSON object"]
    if "game" in data or "alpha" in data:
        try:
            cfg = schmidt.GameConfig.from_dict(data.get("game", data))
        except ConfigError as exc:
            return [str(exc)]
        return cfg.violations()
    if "builtin" in data:
        try:
            spec = carnot.builtin(data["builtin"])
        except (ConfigError, KeyError) as exc:
            return [str(exc)]
    else:
        try:
            spec = carnot.spec_from_dict(data, validate=False)
        except ConfigError as exc:
            return [str(exc)]
    problems = carnot.structural_violations(spec)
    return problems or carnot.axiom_violations(spec)


def cmd_validate(args, out: Output) -> None:
    _require(args.file is not None, "validate needs a file")
    problems = validate_config(args.file)
    out.summary = {"file": str(args.file), "valid": not problems, "diagnostics": problems}
    if problems:
        _emit(out)
        raise ConfigError("; ".join(problems))


COMMANDS = {
    "nt": cmd_nt,
    "group": cmd_group,
    "cf": cmd_cf,
    "count": cmd_count,
    "scan": cmd_scan,
    "exponent": cmd_exponent,
    "horo": cmd_horo,
    "game": cmd_game,
    "cantor": cmd_cantor,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--precision-bits", type=int, default=64)
    common.add_argument("--out", default=None, help="directory for summary.json and detail.csv")
    common.add_argument("--model", choices=["carnot", "siegel"], default="carnot")
    common.add_argument("--spec", default=None, help="group spec JSON file")
    common.add_argument("--C", default="1/2")
    common.add_argument("--alpha", default="5/4")
    common.add_argument("--N", type=int, default=10_000)
    common.add_argument("--Nnorm", type=int, default=200)
    common.add_argument("--samples", type=int, default=20)

    p = argparse.ArgumentParser(prog="hdioph", description="Diophantine approximation on the Heisenberg group")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nt", parents=[common], help="Gaussian-integer number theory")
    s.add_argument("action", choices=["sum", "factor", "totient", "moebius", "gcd"])
    s.add_argument("--kind", choices=list(zkernel.SUM_KINDS), default="phi_starred")
    s.add_argument("--K", type=int)
    s.add_argument("--exponent", type=int)
    s.add_argument("--z")
    s.add_argument("--w")

    s = sub.add_parser("group", parents=[common], help="Carnot group operations")
    s.add_argument("action", choices=["mul", "inv", "norm", "dist", "nearest"])
    s.add_argument("--group", default="heis1")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--q", type=int)

    s = sub.add_parser("cf", parents=[common], help="Heisenberg continued fractions")
    s.add_argument("action", choices=["expand", "nearest", "height"])
    s.add_argument("--point")
    s.add_argument("--max-digits", type=int, default=10_000)

    s = sub.add_parser("count", parents=[common], help="count approximations")
    s.add_argument("model_pos", nargs="?", choices=["carnot", "siegel"])
    s.add_argument("--point")

    s = sub.add_parser("scan", parents=[common], help="rational points near one Siegel point")
    s.add_argument("action", choices=["near", "ba"], nargs="?", default="near")
    s.add_argument("--point")

    s = sub.add_parser("exponent", parents=[common], help="Diophantine exponent estimates")
    s.add_argument("--axis", choices=["t_axis", "x_axis", "generic"], default="generic")

    s = sub.add_parser("horo", parents=[common], help="horoball geometry")
    s.add_argument("action", choices=["height", "invert", "rational", "excursion"])
    s.add_argument("--u")
    s.add_argument("--v")
    s.add_argument("--point")
    s.add_argument("--height")
    s.add_argument("--s0", default="1")

    s = sub.add_parser("game", parents=[common], help="play Schmidt games")
    s.add_argument("--rounds", type=int, default=15)
    s.add_argument("--games", type=int, default=1)
    s.add_argument("--black", choices=sorted(schmidt.BLACK_STRATEGIES), default="random")
    s.add_argument("--config", default=None, help="game config JSON file")

    s = sub.add_parser("cantor", parents=[common], help="Cantor set from White's strategy")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--config", default=None)

    s = sub.add_parser("validate", parents=[common], help="check a group spec or game config")
    s.add_argument("file")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "model_pos", None):
        args.model = args.model_pos
    out = Output(args.command, args)
    try:
        _require(args.precision_bits >= 64, "--precision-bits must be at least 64")
        _require(0 <= args.seed < 2 ** 64, "--seed must be a 64-bit unsigned integer")
        _require(args.samples >= 1, "--samples must be positive")
        COMMANDS[args.command](args, out)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
