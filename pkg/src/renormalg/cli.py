"""Command-line front end.

Exit codes: 0 when every identity holds, 1 when one fails, 2 on a
configuration, parse or window error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from . import birkhoff as bk
from . import bohnenblust as bs
from . import magnus as mg
from . import matrix_calculus as mc
from . import rota_baxter as rb
from .convolution import ConvolutionContext, char_from_spec, character_from_generators, conv_log
from .errors import RenormalgError, WindowOverflowError
from .hopf import INSTANCES, get_instance
from .linalg import Matrix
from .polynomials import Polynomial
from .scalars import Laurent, LaurentRing, override_bernoulli, parse_rational
from .verify import RunConfig, run_suite

EXIT_OK, EXIT_IDENTITY, EXIT_CONFIG = 0, 1, 2

# B_2 = 1/6; the corrupted value breaks every Magnus recursion from t^3 on
FAULT_BERNOULLI = (2, Fraction(1, 3))

_CHECKS = {"type": "object", "additionalProperties": {"type": "boolean"}}

VERIFY_SCHEMA = {
    "type": "object",
    "required": ["command", "config", "identities", "passed"],
    "properties": {
        "command": {"const": "verify"},
        "config": {"type": "object"},
        "passed": {"type": "boolean"},
        "identities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["tag", "passed", "detail", "witness"],
                "properties": {
                    "tag": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "detail": {"type": "string"},
                    "witness": {"type": ["string", "null"]},
                },
                "additionalProperties": False,
            },
        },
    },
}

_LINMAP = {
    "type": "object",
    "required": ["instance", "cutoff", "window", "values"],
    "properties": {"values": {"type": "object", "additionalProperties": {"type": "string"}}},
}

BIRKHOFF_SCHEMA = {
    "type": "object",
    "required": ["command", "phi", "minus", "plus", "prep", "bch", "checks", "agrees", "passed"],
    "properties": {
        "command": {"const": "birkhoff"},
        "phi": _LINMAP,
        "minus": _LINMAP,
        "plus": _LINMAP,
        "prep": _LINMAP,
        "bch": {"type": "object", "required": ["minus", "plus"],
                "properties": {"minus": _LINMAP, "plus": _LINMAP}},
        "checks": _CHECKS,
        "agrees": {"type": "boolean"},
        "passed": {"type": "boolean"},
    },
}

EXPAND_SCHEMA = {
    "type": "object",
    "required": ["command", "kind", "parameters", "result", "checks", "passed"],
    "properties": {
        "command": {"const": "expand"},
        "kind": {"enum": ["magnus", "spitzer", "bohnenblust", "matrix"]},
        "parameters": {"type": "object"},
        "result": {"type": "object"},
        "checks": _CHECKS,
        "passed": {"type": "boolean"},
    },
}

SCHEMAS = {"verify": VERIFY_SCHEMA, "birkhoff": BIRKHOFF_SCHEMA, "expand": EXPAND_SCHEMA}


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- rendering


def render(x: Any) -> Any:
    """JSON-ready form of an algebra element."""
    if isinstance(x, Matrix):
        return [[render(e) for e in row] for row in x.rows]
    if isinstance(x, rb.FiniteSequence):
        return [str(v) for v in x.values]
    if isinstance(x, (Laurent, Polynomial, Fraction, int)):
        return str(x)
    if x is None:
        return None
    return str(x)


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    if isinstance(obj, bool):
        return [(prefix, "true" if obj else "false")]
    return [(prefix, "" if obj is None else str(obj))]


def format_report(report: dict, fmt: str) -> str:
    jsonschema.validate(report, SCHEMAS[report["command"]])
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if report["command"] == "verify":
            w.writerow(["tag", "passed", "witness"])
            for item in report["identities"]:
                w.writerow([item["tag"], "true" if item["passed"] else "false", item["witness"] or ""])
        else:
            w.writerow(["field", "value"])
            w.writerows(_flatten(report))
        return buf.getvalue()
    if report["command"] == "verify":
        cfg = report["config"]
        buf.write(f"seed {cfg['seed']}  instance {cfg['instance']}  cutoff {cfg['cutoff']}  "
                  f"order {cfg['order']}  theta {cfg['theta']}\n")
        for item in report["identities"]:
            mark = "PASS" if item["passed"] else "FAIL"
            buf.write(f"{mark}  {item['tag']}: {item['detail']}\n")
            if item["witness"]:
                buf.write(f"      witness: {item['witness']}\n")
        buf.write(f"{'all identities hold' if report['passed'] else 'identity failure'}\n")
    else:
        for k, v in _flatten(report):
            buf.write(f"{k} = {v}\n")
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _run_config(args) -> RunConfig:
    theta = Fraction(-1) if args.theta is None else args.theta
    cfg = RunConfig(args.instance, args.cutoff, args.order, theta, args.seed, args.samples,
                    args.pole_order, args.degree)
    try:
        cfg.validate()
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def cmd_verify(args) -> tuple[dict, int]:
    cfg = _run_config(args)
    fault = override_bernoulli(*FAULT_BERNOULLI) if args.inject_fault else contextlib.nullcontext()
    with fault:
        results = run_suite(cfg, args.only or None)
    passed = all(r.passed for r in results)
    report = {
        "command": "verify",
        "config": cfg.to_json(),
        "identities": [r.to_json() for r in results],
        "passed": passed,
    }
    return report, EXIT_OK if passed else EXIT_IDENTITY


def cmd_birkhoff(args) -> tuple[dict, int]:
    try:
        spec = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read character spec: {exc}") from exc
    if args.cutoff_given:
        spec["cutoff"] = args.cutoff
    if args.instance_given:
        spec["instance"] = args.instance
    if int(spec.get("cutoff", 0)) < 1:
        raise ConfigError("cutoff must be >= 1")
    ring = None
    if args.pole_order is not None or args.degree is not None:
        n = int(spec["cutoff"])
        ring = LaurentRing(args.pole_order or n, args.degree or n)
    try:
        phi = char_from_spec(spec, ring)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid character spec: {exc}") from exc
    pair = bk.birkhoff_decompose(phi)
    prep = bk.bogoliubov_prep(phi)
    fac = bk.bch_factorize(conv_log(phi))
    agrees = (fac.minus, fac.plus) == (pair.minus, pair.plus)
    checks = dict(bk.check_birkhoff_pair(phi, pair))
    checks["characters"] = bk.characters_in_characters_out(phi, pair)
    checks["bch_agrees"] = agrees
    passed = all(checks.values())
    report = {
        "command": "birkhoff",
        "phi": phi.to_json(),
        "minus": pair.minus.to_json(),
        "plus": pair.plus.to_json(),
        "prep": prep.to_json(),
        "bch": {"minus": fac.minus.to_json(), "plus": fac.plus.to_json()},
        "checks": checks,
        "agrees": agrees,
        "passed": passed,
    }
    return report, EXIT_OK if passed else EXIT_IDENTITY


RB_CHOICES = ("laurent", "upper-triangular", "sequence-inclusive", "sequence-strict",
              "poly-integration", "poly-matrix")


def _rb_instance(name: str, theta: Fraction | None, size: int) -> rb.RBInstance:
    weight0 = name in ("poly-integration", "poly-matrix")
    if weight0:
        if theta not in (None, 0):
            raise ConfigError(f"{name} has weight 0")
        return rb.poly_integration() if name == "poly-integration" else rb.poly_matrix_integration(size)
    theta = Fraction(-1) if theta is None else theta
    if theta == 0:
        raise ConfigError(f"{name} needs a nonzero weight")
    if name == "laurent":
        return rb.laurent_ms(theta)
    if name == "upper-triangular":
        return rb.upper_triangular(size, theta)
    # inclusive sums of step s have weight -s, strict sums weight +s
    if name == "sequence-inclusive":
        return rb.sequence_summation(-theta, length=size, inclusive=True)
    return rb.sequence_summation(theta, length=size, inclusive=False)


def _element(inst: rb.RBInstance, text: str | None, rng: random.Random):
    if text is None:
        return inst.sample(rng)
    try:
        if isinstance(inst.one, Laurent):
            return LaurentRing(16, 16).parse(text)
        if isinstance(inst.one, rb.FiniteSequence):
            vals = [parse_rational(v) for v in text.split(",")]
            if len(vals) != len(inst.one.values):
                raise ConfigError(f"sequence needs {len(inst.one.values)} entries")
            return rb.FiniteSequence(vals)
        if isinstance(inst.one, Polynomial):
            return Polynomial([parse_rational(v) for v in text.split(",")])
        rows = json.loads(text)
        if isinstance(inst.one.rows[0][0], Polynomial):
            return Matrix([[Polynomial([parse_rational(str(c)) for c in e]) for e in row] for row in rows],
                          Polynomial())
        return Matrix([[parse_rational(str(e)) for e in row] for row in rows])
    except (ValueError, ZeroDivisionError, json.JSONDecodeError, IndexError, TypeError) as exc:
        raise ConfigError(f"cannot parse element {text!r}: {exc}") from exc


def _expand_magnus(args, rng):
    inst = _rb_instance(args.rb, args.theta, args.size)
    a = _element(inst, args.element, rng)
    T = args.order
    ctx = mg.SeriesContext(inst, T)
    omega = mg.magnus_prelie(a, inst, T=T, ctx=ctx)
    result = {"element": render(a), "weight": str(inst.weight),
              "omega": [render(c) for c in omega.coeffs[1:]]}
    if inst.weight == 0 and isinstance(a, Matrix):
        classical = mg.magnus_classical(a, T, inst, ctx)
        result["classical_omega"] = [render(c) for c in classical.coeffs[1:]]
        checks = {"exp_solves_ivp": ctx.ord_exp(classical) == mg.picard_solution(a, T, inst, ctx)}
    else:
        rep = mg.verify_magnus(a, inst, T)
        checks = {"exp_equals_X": rep.exp_equals_X, "exp_minus_equals_Y": rep.exp_minus_equals_Y,
                  "forms_agree": rep.forms_agree, "words_match": rep.words_match}
    if inst.commutative:
        closed = mg.commutative_magnus_closed_form(a, inst, T, ctx)
        checks["closed_form"] = closed == omega
    return {"rb": inst.name, "order": T}, result, checks


def _expand_spitzer(args, rng):
    inst = _rb_instance(args.rb, args.theta, args.size)
    if not inst.commutative:
        raise ConfigError("spitzer expansion needs a commutative instance")
    a = _element(inst, args.element, rng)
    res = mg.spitzer_commutative(a, inst, T=args.order)
    result = {"element": render(a), "weight": str(inst.weight),
              "r": [render(x) for x in res.r[1:]], "a": [render(x) for x in res.iterated[1:]]}
    return {"rb": inst.name, "order": args.order}, result, dict(res.checks)


def _expand_bohnenblust(args, rng):
    if not 1 <= args.n <= 7:
        raise ConfigError("bohnenblust needs 1 <= n <= 7")
    inst = _rb_instance(args.rb if args.rb != "laurent" else "upper-triangular", args.theta, args.size)
    letters = [inst.sample(rng) for _ in range(args.n)]
    rep = bs.bohnenblust_spitzer(letters, inst)
    result = {"letters": [render(x) for x in letters], "permutation_sum": render(rep.permutation_side),
              "partition_sum": render(rep.partition_side), "packet_sum": render(rep.packet_side)}
    return {"rb": inst.name, "n": args.n}, result, {"three_way_equality": rep.passed}


def _expand_matrix(args, rng):
    if args.spec:
        try:
            spec = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read character spec: {exc}") from exc
        phi = char_from_spec(spec)
        ctx = phi.ctx
    else:
        ctx = ConvolutionContext(get_instance(args.instance), args.cutoff)
        c = ctx.ring.parse(args.element or "1")
        gens = {g: c for n in range(1, args.cutoff + 1) for g in ctx.hopf.generators(n)}
        phi = character_from_generators(ctx, gens)
    B = mc.coideal_basis(ctx.hopf, ctx.cutoff)
    M = mc.coproduct_matrix(B)
    L = mc.normal_coordinates(B, M)
    hat = mc.psi(phi, B, M)
    mb = mc.matrix_birkhoff(hat, ctx.ring)
    pair = bk.birkhoff_decompose(phi)
    fmt = lambda h: str(h)
    result = {
        "basis": [ctx.hopf.format_key(k) for k in B.keys],
        "M": M.to_json(fmt), "L": L.to_json(fmt), "psi": mc.matrix_to_json(hat),
        "minus": mc.matrix_to_json(mb.minus), "plus": mc.matrix_to_json(mb.plus),
    }
    checks = dict(mb.checks)
    checks["log_psi_is_phi_of_L"] = mc.matrix_log(hat, ctx.ring) == L.map(phi.apply, ctx.ring.zero())
    checks["psi_of_birkhoff"] = (mc.psi(pair.minus, B, M), mc.psi(pair.plus, B, M)) == (mb.minus, mb.plus)
    return {"instance": ctx.hopf.name, "d": ctx.cutoff, "phi": phi.to_json()}, result, checks


EXPANDERS = {"magnus": _expand_magnus, "spitzer": _expand_spitzer,
             "bohnenblust": _expand_bohnenblust, "matrix": _expand_matrix}


def cmd_expand(args) -> tuple[dict, int]:
    if args.cutoff < 1:
        raise ConfigError("cutoff must be >= 1")
    if args.order < 1:
        raise ConfigError("order must be >= 1")
    rng = random.Random(f"{args.seed}:expand:{args.kind}")
    params, result, checks = EXPANDERS[args.kind](args, rng)
    params["seed"] = args.seed
    passed = all(checks.values())
    report = {"command": "expand", "kind": args.kind, "parameters": params,
              "result": result, "checks": checks, "passed": passed}
    return report, EXIT_OK if passed else EXIT_IDENTITY


# ---------------------------------------------------------------- parser


class _Given(argparse.Action):
    """Store the value and remember that the flag was given explicitly."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"{self.dest}_given", True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", choices=sorted(INSTANCES), default="rooted-forest", action=_Given)
    common.add_argument("--cutoff", type=int, default=4, action=_Given, help="degree cutoff N")
    common.add_argument("--order", type=int, default=6, help="formal-series order T")
    common.add_argument("--theta", type=_rational, default=None, help="Rota-Baxter weight")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--pole-order", type=int, default=None, help="Laurent window: lowest exponent is -p")
    common.add_argument("--degree", type=int, default=None, help="Laurent window: highest exponent")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="renormalg", description="Exact renormalization algebra toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run every identity check")
    v.add_argument("--samples", type=int, default=3, help="random samples per check")
    v.add_argument("--only", action="append", metavar="TAG", help="run only this identity tag")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    b = sub.add_parser("birkhoff", parents=[common], help="decompose a character given as a JSON spec")
    b.add_argument("spec")

    e = sub.add_parser("expand", parents=[common], help="print an expansion")
    e.add_argument("kind", choices=sorted(EXPANDERS))
    e.add_argument("--rb", choices=RB_CHOICES, default="laurent", help="Rota-Baxter instance")
    e.add_argument("--element", default=None,
                   help="Laurent string, comma-separated sequence, or JSON matrix rows (default: seeded sample)")
    e.add_argument("--size", type=int, default=4, help="matrix size or sequence length")
    e.add_argument("--n", type=int, default=3, help="number of letters for bohnenblust")
    e.add_argument("--spec", default=None, help="character spec for the matrix expansion")
    return parser


COMMANDS = {"verify": cmd_verify, "birkhoff": cmd_birkhoff, "expand": cmd_expand}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    for name in ("cutoff", "instance"):
        if not hasattr(args, f"{name}_given"):
            setattr(args, f"{name}_given", False)
    if not hasattr(args, "samples"):
        args.samples = 3
    try:
        report, code = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WindowOverflowError as exc:
        print(f"error: {exc} (use --pole-order/--degree or a \"window\" entry in the spec)", file=sys.stderr)
        return EXIT_CONFIG
    except (RenormalgError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = format_report(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
