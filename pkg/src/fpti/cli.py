"""Command-line front end.

Input format (``#`` starts a comment)::

    char: 2
    vars: x y
    order: grevlex          # optional: grevlex | lex, optionally followed by pot | top
    ideal:
      y^2 + x^3
    c: x^2                  # optional test element

Exit codes: 0 success, 1 input error, 2 no test element, 3 resource cap,
4 a ``--verify`` cross-check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import fsing
from .errors import (
    FptiError,
    InvariantViolation,
    NoTestElement,
    ParseError,
    ResourceCap,
    StabilizationCapExceeded,
)
from .frobenius import DEFAULT_STAR_CAP, fe_root, is_u_stable, star_closure_chain
from .groebner import Submodule, ideal
from .homology import free_resolution, induced_frobenius_matrix, non_cm_locus
from .ringcore import PolyMatrix, make_ring

EXIT_OK, EXIT_INPUT, EXIT_ASSUMPTION, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3, 4


@dataclass
class InputSpec:
    char: int
    vars: list
    order: str = "grevlex"
    module_order: str = "pot"
    ideal: list = field(default_factory=list)
    c: str | None = None
    lines: dict = field(default_factory=dict, repr=False)

    def ring(self):
        return make_ring(self.char, self.vars, self.order, self.module_order)

    def build(self):
        """(ctx, I, c) with polynomial errors reported at their source line."""
        ctx = self.ring()
        polys = []
        for k, text in enumerate(self.ideal):
            polys.append(_parse_at(ctx, text, self.lines.get(("ideal", k))))
        c = _parse_at(ctx, self.c, self.lines.get("c")) if self.c is not None else None
        return ctx, Submodule.ideal(ctx, polys), c


def _parse_at(ctx, text, where):
    try:
        return ctx.parse(text)
    except ParseError as exc:
        line, offset = where or (None, 0)
        column = exc.column + offset if exc.column is not None else None
        raise ParseError(exc.message, line, column) from None


def parse_input(text: str) -> InputSpec:
    fields = {}
    gens = []
    lines = {}
    in_ideal = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if in_ideal and line[0] in " \t":
            body = line.strip()
            lines[("ideal", len(gens))] = (lineno, len(line) - len(body))
            gens.append(body)
            continue
        in_ideal = False
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        offset = len(key) + 1 + (len(value) - len(value.lstrip()))
        value = value.strip()
        if key == "ideal":
            in_ideal = True
            fields["ideal"] = lineno
            for part in filter(None, (s.strip() for s in value.split(","))):
                lines[("ideal", len(gens))] = (lineno, offset + value.find(part))
                gens.append(part)
        elif key in ("char", "vars", "order", "c"):
            fields[key] = value
            lines[key] = (lineno, offset)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    for key in ("char", "vars", "ideal"):
        if key not in fields:
            raise ParseError(f"missing '{key}:'")
    if not gens:
        raise ParseError("the ideal has no generators", fields["ideal"])
    try:
        char = int(fields["char"])
    except ValueError:
        raise ParseError(f"characteristic must be an integer, got {fields['char']!r}", *lines["char"]) from None
    names = fields["vars"].replace(",", " ").split()
    if not names:
        raise ParseError("no variables given", *lines["vars"])
    order, module_order = "grevlex", "pot"
    if "order" in fields:
        words = fields["order"].split()
        if not words or words[0] not in ("grevlex", "lex") or len(words) > 2 or \
                (len(words) == 2 and words[1] not in ("pot", "top")):
            raise ParseError(f"bad order {fields['order']!r}", *lines["order"])
        order = words[0]
        if len(words) == 2:
            module_order = words[1]
    return InputSpec(char, names, order, module_order, gens, fields.get("c"), lines)


def _gens(W: Submodule) -> list:
    return W.canonical().generator_strings() or ["0"]


def _matrix(M: PolyMatrix) -> list:
    return M.to_strings()


def _hsl_result(report) -> dict:
    return {
        "j": report.j,
        "eta": report.eta,
        "chain": [_gens(B) for B in report.chain],
        "loci": [_gens(L) for L in report.loci],
    }


def _verify(args, ctx, I, result, extra):
    """Oracle cross-checks; returns a list of failed check names."""
    from . import oracle

    failed = []
    if args.command == "gb":
        G, symbols = oracle.sympy_groebner(I)
        ours = Submodule.ideal(ctx, result["generators"]) if result["generators"] != ["0"] else ideal(ctx, [])
        theirs = Submodule.ideal(ctx, [ctx.parse(str(g.as_expr()).replace("**", "^")) for g in G.exprs])
        if not ours.equals(theirs):
            failed.append("sympy-groebner")
    elif args.command == "froot":
        if not oracle.dense_fe_root(I, args.e).equals(extra):
            failed.append("dense-root")
    elif args.command == "star":
        V, U, W = extra
        if not oracle.verify_star_minimality(V, U, W, args.e):
            failed.append("star-minimality")
    elif args.command in ("tau", "sandwich"):
        pti = extra
        data = induced_frobenius_matrix(I, pti.h, 1)
        if not is_u_stable(pti.star_module, data.U):
            failed.append("star-stability")
    elif args.command in ("ext", "hsl"):
        if not extra.is_well_defined():
            failed.append("frobenius-well-defined")
    return failed


def run(args, spec: InputSpec):
    """Execute one command; returns (result dict, object for --verify)."""
    ctx, I, c = spec.build()
    cap = args.cap_iterations
    cmd = args.command
    if cmd == "gb":
        return {"generators": _gens(I)}, None
    if cmd == "froot":
        R = fe_root(I, args.e)
        return {"e": args.e, "generators": _gens(R)}, R
    if cmd == "star":
        u = ctx.parse(args.u)
        U = PolyMatrix(ctx, [[u]])
        chain = star_closure_chain(I, U, args.e, cap)
        return {"e": args.e, "u": str(u), "iterations": len(chain) - 1,
                "generators": _gens(chain[-1])}, (I, U, chain[-1])
    if cmd == "ext":
        data = induced_frobenius_matrix(free_resolution(I), args.i, 1)
        return {"i": args.i, "zero": data.ext.is_zero, "presentation": _matrix(data.A),
                "frobenius": _matrix(data.U)}, data
    if cmd == "tau":
        pti = fsing.global_pti_cm(I, c, seed=args.seed, cap=cap)
        return {"generators": _gens(pti.Z), "c": str(pti.c.c), "provenance": pti.c.provenance,
                "h": pti.h, "iterations": pti.iterations,
                "scope": "parameter test ideal on the Cohen-Macaulay locus"}, pti
    if cmd == "sandwich":
        s = fsing.pti_sandwich(I, c, seed=args.seed, cap=cap)
        return {"lower": _gens(s.lower), "upper": _gens(s.upper), "J": _gens(s.J), "d": s.d,
                "c": str(s.pti.c.c), "exact": s.lower.equals(s.upper)}, s.pti
    if cmd == "hsl":
        report = fsing.hsl_chain(I, args.j, args.emax)
        return _hsl_result(report), induced_frobenius_matrix(I, args.j, 1)
    if cmd == "noncm":
        return {"generators": _gens(non_cm_locus(I))}, None
    if cmd == "finjective":
        return {"generators": _gens(fsing.f_injective_locus(I))}, None
    raise ValueError(f"unknown command {cmd}")


def _format_text(command, spec, result) -> str:
    out = [f"command: {command}",
           f"ring: char {spec.char}, vars {' '.join(spec.vars)}, order {spec.order} {spec.module_order}"]
    for key, value in result.items():
        if isinstance(value, list) and value and isinstance(value[0], list):
            out.append(f"{key}:")
            for k, row in enumerate(value):
                out.append(f"  [{k}] " + ", ".join(row) if key in ("chain", "loci") else "  [ " + ", ".join(row) + " ]")
        elif isinstance(value, list):
            out.append(f"{key}:")
            out.extend(f"  {v}" for v in value)
        elif isinstance(value, bool):
            out.append(f"{key}: {'yes' if value else 'no'}")
        else:
            out.append(f"{key}: {value}")
    return "\n".join(out) + "\n"


def _format_json(command, spec, result) -> str:
    doc = {
        "schema": 1,
        "command": command,
        "ring": {"char": spec.char, "vars": list(spec.vars), "order": f"{spec.order} {spec.module_order}"},
        "result": result,
    }
    return json.dumps(doc, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE", help="input file (default: stdin)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for random test-element combinations")
    common.add_argument("--verify", action="store_true", help="run oracle cross-checks on the result")
    common.add_argument("--cap-iterations", type=int, default=DEFAULT_STAR_CAP, metavar="N",
                        help="iteration cap for star-closure chains")
    parser = argparse.ArgumentParser(prog="fpti", description="Frobenius roots, parameter test ideals and HSL numbers.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gb", parents=[common], help="reduced Groebner basis of the ideal")
    p = sub.add_parser("froot", parents=[common], help="Frobenius root I_e of the ideal")
    p.add_argument("-e", type=int, default=1)
    p = sub.add_parser("star", parents=[common], help="star-closure of the ideal under multiplication by u")
    p.add_argument("--u", default="1", help="polynomial u, giving the 1x1 matrix U = [u]")
    p.add_argument("-e", type=int, default=1)
    p = sub.add_parser("ext", parents=[common], help="presentation and Frobenius matrix of Ext^i(R/I, R)")
    p.add_argument("-i", type=int, required=True)
    sub.add_parser("tau", parents=[common], help="global parameter test ideal Z")
    sub.add_parser("sandwich", parents=[common], help="bounds J^d Z and Z for the parameter test ideal")
    p = sub.add_parser("hsl", parents=[common], help="HSL chain, number and loci for Ext degree j")
    p.add_argument("-j", type=int, required=True)
    p.add_argument("--emax", type=int, default=8)
    sub.add_parser("noncm", parents=[common], help="ideal of the non-Cohen-Macaulay locus")
    sub.add_parser("finjective", parents=[common], help="ideal of the non-F-injective locus")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = _format_json if args.format == "json" else _format_text
    try:
        if args.input:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        spec = parse_input(text)
        result, extra = run(args, spec)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoTestElement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except StabilizationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.partial is not None:
            sys.stdout.write(fmt(args.command, spec, _hsl_result(exc.partial)))
        return EXIT_CAP
    except ResourceCap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (FptiError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.verify:
        _, I, _ = spec.build()
        failed = _verify(args, I.ctx, I, result, extra)
        result["verified"] = not failed
        if failed:
            result["failed_checks"] = failed
    sys.stdout.write(fmt(args.command, spec, result))
    return EXIT_VERIFY if args.verify and not result["verified"] else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
