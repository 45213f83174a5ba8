"""The ``expdef`` command line.

Every subcommand builds one JSON document and an exit code:
0 success, 1 mathematical negative, 2 indeterminate, 3 usage or parse error.
``--format text`` and ``--format latex`` are renderings of the same document.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import expr as ex
from .checker import NumericModel, SKModel, check_with_witnesses
from .cyclotomic import CycNum, zeta
from .definitions import BUILDERS, Definition, WitnessPlan, def_real_abelian
from .formula import SexprError, free_vars, parse_sexpr, quantifier_complexity, render
from .rab import cos_decomposition, is_real_abelian, is_totally_real
from .recognition import Verdict, recognize
from .skmodel import (
    SKElement, additive_dependencies, ck_tau_involution_test, delta_SK, is_free_tuple,
    multiplicative_dependencies, sigma1, sk_E,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3
DEFAULT_PRECISION = 256
FORMATS = ("json", "text", "latex")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def default_precision() -> int:
    raw = os.environ.get("EXPDEF_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise UsageError(f"EXPDEF_PRECISION must be an integer, got {raw!r}") from None
    if bits < 64:
        raise UsageError("EXPDEF_PRECISION must be at least 64")
    return bits


def parse_sk_expr(src: str) -> SKElement:
    """Expression grammar with ``tau`` allowed; evaluates in SK."""
    node = ex.parse_expr(src)
    ops = ex.Ops(
        const=SKElement.const,
        zeta=lambda n: SKElement.const(zeta(n)),
        tau=SKElement.tau,
        call=lambda fn, x: _sk_call(fn, x),
    )
    return ex.evaluate(node, ops)


def _sk_call(fn: str, x: SKElement) -> SKElement:
    if fn != "E":
        raise ValueError(f"{fn}() is not available in SK expressions")
    return SKElement.const(sk_E(x))


def _kernel_multiple(src: str) -> Fraction:
    q = parse_sk_expr(src).kernel_coefficient()
    if q is None:
        raise ValueError(f"{src!r} is not a rational multiple of tau")
    return q


# -- subcommands -------------------------------------------------------

def _resolve_alpha(args) -> tuple[CycNum | None, dict]:
    if args.expr is not None and args.minpoly is not None:
        raise UsageError("give either an expression or --minpoly/--root, not both")
    if args.expr is not None:
        a = ex.parse_cyc_expr(args.expr)
        return a, {"input": args.expr}
    if args.minpoly is None or args.root is None:
        raise UsageError("give an expression, or --minpoly together with --root")
    f = ex.parse_poly(args.minpoly)
    result = recognize(f, args.root, args.max_level, args.precision)
    info = {"input": {"minpoly": args.minpoly, "root": args.root}, "recognition": result.to_json()}
    return result.witness, info


def cmd_define(args) -> tuple[dict, int]:
    a, info = _resolve_alpha(args)
    if a is None:
        return {**info, "refused": True, "verdict": Verdict.NOT_ABELIAN_UP_TO_BOUND.value,
                "reason": "no cyclotomic representation found within the search bound"}, EXIT_INDETERMINATE
    if not is_real_abelian(a):
        return {**info, "refused": True, "verdict": Verdict.ABELIAN_NOT_REAL.value,
                "value": a.to_expr(),
                "reason": "abelian but not real: conjugation moves it, so no formula pins it down"}, EXIT_NEGATIVE
    d = def_real_abelian(cos_decomposition(a))
    out = {**info, "refused": False, "verdict": Verdict.REAL_ABELIAN.value, "value": a.to_expr()}
    out.update(d.to_json())
    out["rendered"] = d.render("latex" if args.format == "latex" else "text")
    return out, EXIT_OK


def cmd_decompose(args) -> tuple[dict, int]:
    a = ex.parse_cyc_expr(args.expr)
    if not is_real_abelian(a):
        return {"input": args.expr, "real_abelian": False, "value": a.to_expr()}, EXIT_NEGATIVE
    d = cos_decomposition(a)
    return {"input": args.expr, "real_abelian": True, "value": a.to_expr(),
            "totally_real": is_totally_real(a), "decomposition": d.to_json()}, EXIT_OK


def cmd_recognize(args) -> tuple[dict, int]:
    f = ex.parse_poly(args.minpoly)
    result = recognize(f, args.root, args.max_level, args.precision)
    out = {"minpoly": args.minpoly, "root": args.root, "precision_bits": args.precision}
    out.update(result.to_json())
    code = EXIT_INDETERMINATE if result.verdict is Verdict.NOT_ABELIAN_UP_TO_BOUND else EXIT_OK
    return out, code


def _load_formula(args) -> tuple[object, WitnessPlan, str]:
    if args.builder is not None and args.formula is not None:
        raise UsageError("give either --formula or --builder")
    if args.builder is not None:
        if args.builder not in BUILDERS:
            raise UsageError(f"unknown builder {args.builder!r}; choose from {', '.join(BUILDERS)}")
        d: Definition = BUILDERS[args.builder]()
        return d.formula, d.plan, d.name
    if args.formula is None:
        raise UsageError("--formula or --builder is required")
    text = _read(args.formula)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        envelope = json.loads(text)
        plan = WitnessPlan.from_json(envelope.get("witness_plan", {}))
        return parse_sexpr(envelope["formula"]), plan, envelope.get("name", args.formula)
    return parse_sexpr(text), WitnessPlan(), args.formula


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_witnesses(path: str, plan: WitnessPlan) -> WitnessPlan:
    data = json.loads(_read(path))
    if not isinstance(data, dict):
        raise UsageError("witness file must hold a JSON object")
    if "assignments" in data:
        extra = WitnessPlan.from_json(data)
        merged = plan.with_assignments(**extra.assignments)
        merged.probes.update(extra.probes)
        merged.numeric_only |= extra.numeric_only
        return merged
    return plan.with_assignments(**{k: str(v) for k, v in data.items()})


def cmd_check(args) -> tuple[dict, int]:
    f, plan, name = _load_formula(args)
    if args.witnesses:
        plan = _load_witnesses(args.witnesses, plan)
    missing = sorted(v for v in free_vars(f) if v not in plan.assignments)
    if missing:
        raise UsageError(f"no value for free variable(s) {', '.join(missing)}; pass --witnesses")
    model = SKModel() if args.model == "sk" else NumericModel(args.precision)
    report = check_with_witnesses(model, f, plan)
    out = {"formula": name, "complexity": quantifier_complexity(f), "witness_plan": plan.to_json()}
    out.update(report.to_json())
    code = {"pass": EXIT_OK, "fail": EXIT_NEGATIVE}.get(report.verdict, EXIT_INDETERMINATE)
    return out, code


def cmd_render(args) -> tuple[dict, int]:
    f, plan, name = _load_formula(args)
    style = "text" if args.format == "json" else args.format
    return {"name": name, "style": style, "complexity": quantifier_complexity(f),
            "rendered": render(f, style)}, EXIT_OK


def cmd_sk(args) -> tuple[dict, int]:
    if args.verb == "sigma1":
        x = parse_sk_expr(args.values[0]) if len(args.values) == 1 else None
        if x is None:
            raise UsageError("sk sigma1 takes exactly one expression")
        y = sigma1(x)
        return {"input": x.to_expr(), "sigma1": y.to_expr(), "element": y.to_json(),
                "involution": sigma1(y) == x}, EXIT_OK
    if args.verb == "cktau":
        if len(args.values) != 1:
            raise UsageError("sk cktau takes exactly one expression")
        result = ck_tau_involution_test(ex.parse_cyc_expr(args.values[0]))
        return {"t": args.values[0], **result.to_json()}, EXIT_OK
    qs = [_kernel_multiple(s) for s in args.values]
    inputs = [str(q) for q in qs]
    if args.verb == "delta":
        return {"X": inputs, "delta": delta_SK(qs)}, EXIT_OK
    result = is_free_tuple(qs)
    out = {"X": inputs, **result.to_json(),
           "additive": [[str(c) for c in row] for row in additive_dependencies(qs)],
           "multiplicative": multiplicative_dependencies([sk_E(q) for q in qs])}
    return out, EXIT_OK if result.free else EXIT_NEGATIVE


# -- output ------------------------------------------------------------

def _text(doc: dict) -> str:
    if doc.get("style") == "sexpr":
        return doc["rendered"]
    if "rendered" in doc:
        head = [doc["rendered"]]
        if "complexity" in doc:
            head.append(f"complexity: {doc['complexity'] or 'quantifier-free'}")
        return "\n".join(head)
    lines = []
    for key, value in doc.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, ensure_ascii=False)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def dump(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False)
    return _text(doc)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits")

    parser = _Parser(prog="expdef", description="Definable real abelian numbers, executable.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("define", parents=[common], help="compile a real abelian number into a formula")
    p.add_argument("expr", nargs="?", help='expression such as "z(8) + z(8)^-1"')
    p.add_argument("--minpoly")
    p.add_argument("--root", type=int, help="0-based index into the sorted roots")
    p.add_argument("--max-level", type=int, default=None)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(run=cmd_define)

    p = sub.add_parser("decompose", parents=[common], help="cosine decomposition of a real abelian number")
    p.add_argument("expr")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("recognize", parents=[common], help="find a cyclotomic form of a root of a polynomial")
    p.add_argument("--minpoly", required=True)
    p.add_argument("--root", type=int, required=True, help="0-based index into the sorted roots")
    p.add_argument("--max-level", type=int, default=None)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(run=cmd_recognize)

    p = sub.add_parser("check", parents=[common], help="check a formula against a witness plan")
    p.add_argument("--formula", help="s-expression file or JSON envelope ('-' for stdin)")
    p.add_argument("--builder", help="use a built-in definition instead of a file")
    p.add_argument("--model", choices=("sk", "numeric"), default="sk")
    p.add_argument("--witnesses", help="JSON object of variable recipes, or a full witness plan")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("render", parents=[common], help="print a formula")
    p.add_argument("--formula")
    p.add_argument("--builder")
    p.add_argument("--format", choices=("json", "text", "latex", "sexpr"), default="json")
    p.set_defaults(run=cmd_render)

    p = sub.add_parser("sk", parents=[common], help="operations in the standard kernel model")
    p.add_argument("verb", choices=("sigma1", "delta", "free", "cktau"))
    p.add_argument("values", nargs="*", help="SK expressions; delta and free take multiples of tau")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(run=cmd_sk)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.precision is None:
            args.precision = default_precision()
        elif args.precision < 64:
            raise UsageError("--precision must be at least 64")
        doc, code = args.run(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (ex.ParseError, SexprError, json.JSONDecodeError, KeyError) as exc:
        print(f"expdef: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, IndexError, ZeroDivisionError) as exc:
        print(f"expdef: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(dump(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
