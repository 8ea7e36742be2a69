"""Command-line front end: project, cad, valuate, residue, compare."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .cad import ProblemSpec, groebner_preprocess, run, verify_sign_invariance
from .lifting import WellOrientednessError
from .poly import ParseError, Polynomial, VarOrder, parse_polynomial
from .projection import OPERATORS, ProjectionError, projection_chain
from .realalg import coord_str
from .valuation import lazard_residue, valuation_at

EXIT_OK, EXIT_USAGE, EXIT_ORIENTATION, EXIT_VIOLATIONS = 0, 1, 2, 3

log = logging.getLogger("lazcad")

OPERATOR_CHOICES = list(OPERATORS) + ["single-ec", "multi-ec"]


class InputError(ValueError):
    pass


@dataclass
class InputFile:
    variables: List[str]
    polynomials: List[Polynomial]
    ec: List[int] = field(default_factory=list)
    options: dict = field(default_factory=dict)
    ring: Optional[VarOrder] = None

    @property
    def ecs(self) -> List[Polynomial]:
        return [self.polynomials[i] for i in self.ec]


def parse_input(text: str, name: str = "<input>") -> InputFile:
    """Read ``vars:``, ``poly:``, ``ec:`` and ``option:`` lines; ``#`` starts a comment."""
    variables: Optional[List[str]] = None
    ring = None
    polys: List[Polynomial] = []
    ec_refs = []
    options = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise InputError(f"{name}:{lineno}:1: expected 'key: value'")
        key, value = line.split(":", 1)
        key = key.strip().lower()
        offset = len(line) - len(line.lstrip()) + len(line.split(":", 1)[0].strip()) + 1
        offset += len(value) - len(value.lstrip())
        value = value.strip()
        if key == "vars":
            if variables is not None:
                raise InputError(f"{name}:{lineno}:1: variables declared twice")
            variables = value.replace(",", " ").split()
            if not variables:
                raise InputError(f"{name}:{lineno}:1: empty variable list")
            try:
                ring = VarOrder(variables)
            except ValueError as exc:
                raise InputError(f"{name}:{lineno}:1: {exc}") from None
        elif key == "poly":
            if ring is None:
                raise InputError(f"{name}:{lineno}:1: 'poly' before 'vars'")
            try:
                polys.append(parse_polynomial(value, ring, lineno))
            except ParseError as exc:
                raise InputError(f"{name}:{lineno}:{exc.column + offset}: {exc.message}") from None
        elif key == "ec":
            for tok in value.replace(",", " ").split():
                if not tok.isdigit():
                    raise InputError(f"{name}:{lineno}:1: EC index {tok!r} is not a positive integer")
                ec_refs.append((int(tok), lineno))
        elif key == "option":
            k, _, v = value.partition("=")
            options[k.strip()] = v.strip()
        else:
            raise InputError(f"{name}:{lineno}:1: unknown key {key!r}")
    if variables is None:
        raise InputError(f"{name}: no 'vars:' line")
    ec = []
    for idx, lineno in ec_refs:
        if not 1 <= idx <= len(polys):
            raise InputError(f"{name}:{lineno}:1: EC index {idx} out of range 1..{len(polys)}")
        ec.append(idx - 1)
    return InputFile(variables, polys, ec, options, ring)


def _read(path: str) -> InputFile:
    if path == "-":
        return parse_input(sys.stdin.read(), "<stdin>")
    with open(path) as fh:
        return parse_input(fh.read(), path)


def _operator(args, inp: InputFile):
    op = args.operator
    mode = getattr(args, "ec_mode", None) or "auto"
    if op in ("single-ec", "multi-ec"):
        mode = op.split("-")[0]
        op = "brown_mccallum"
    if mode == "auto":
        mode = "single" if inp.ec else "none"
    if mode != "none" and not inp.ec:
        raise InputError(f"EC mode {mode!r} needs at least one 'ec:' line")
    if mode == "multi" and op not in ("brown_mccallum", "mccallum"):
        raise InputError("multiple equational constraints need the brown_mccallum or mccallum operator")
    return op, mode


def _problem(args, inp: InputFile) -> ProblemSpec:
    op, mode = _operator(args, inp)
    polys = [p for p in inp.polynomials if p and not p.is_constant()]
    if not polys:
        raise InputError("no non-constant polynomials")
    ecs = inp.ecs if mode != "none" else []
    return ProblemSpec(polys, inp.ring, ecs, op, mode, getattr(args, "groebner", False),
                       getattr(args, "verify", 0), getattr(args, "seed", 0))


# ----- commands ---------------------------------------------------------------


def cmd_project(args) -> int:
    inp = _read(args.input)
    spec = _problem(args, inp)
    out = sys.stdout
    if inp.ring.n == 1:
        print("single variable: the projection chain is empty", file=out)
        return EXIT_OK
    polys, ecs = spec.polys, spec.ecs
    if spec.groebner and ecs:
        gb = groebner_preprocess(ecs)
        polys = [p for p in polys if p not in ecs] + gb
        ecs = gb
    chain = projection_chain(polys, ecs, spec.operator, spec.ec_mode)
    levels = range(chain.n, 0, -1)
    if args.levels:
        levels = list(levels)[: args.levels + 1]
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["level", "variable", "polynomials", "points"])
        for k in levels:
            d = chain.levels[k]
            w.writerow([k, chain.ring.names[k - 1], len(d.polys), len(d.gamma)])
    elif args.format == "json":
        json.dump({"operator": spec.operator, "ec_mode": spec.ec_mode, "levels": [
            {"level": k, "variable": chain.ring.names[k - 1], "polys": [str(p) for p in chain.levels[k].polys],
             "ec": str(chain.levels[k].chosen_ec) if chain.levels[k].chosen_ec is not None else None,
             "points": [[coord_str(c) for c in g.coords] for g in chain.levels[k].gamma]}
            for k in levels]}, out, indent=2)
        out.write("\n")
    else:
        print(f"operator {spec.operator}, EC mode {spec.ec_mode}", file=out)
        for k in levels:
            d = chain.levels[k]
            mark = f"  [EC {d.chosen_ec}]" if d.chosen_ec is not None else ""
            print(f"level {k} ({chain.ring.names[k - 1]}): {{{', '.join(str(p) for p in d.polys)}}}{mark}", file=out)
            if d.gamma:
                pts = "; ".join("(" + ", ".join(coord_str(c) for c in g.coords) + ")" for g in d.gamma)
                print(f"  points: {pts}", file=out)
    return EXIT_OK


def cmd_cad(args) -> int:
    inp = _read(args.input)
    spec = _problem(args, inp)
    result = run(spec)
    log.info("timings: %s", ", ".join(f"{k} {v:.3f}s" for k, v in result.timings.items()))
    payload = result.to_json()
    code = EXIT_OK
    if args.verify:
        report = verify_sign_invariance(result, args.verify, args.seed)
        payload["verification"] = {"cells": report["cells"], "samples": report["samples"],
                                   "lines": report["lines"], "violations": report["violations"]}
        if report["violations"]:
            code = EXIT_VIOLATIONS
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
    s = result.summary()
    if args.format == "json" and not args.out:
        json.dump(payload, sys.stdout, indent=1)
        sys.stdout.write("\n")
        return code
    print(f"operator {s['operator']}, EC mode {s['ec_mode']}")
    print(f"polynomials per level: {s['poly_counts']}")
    print(f"cells per level: {s['cell_counts']}")
    print(f"{s['total']} cells")
    if s["curtains"]:
        kinds = {}
        for c in s["curtains"]:
            kinds[c["kind"]] = kinds.get(c["kind"], 0) + 1
        print("curtains: " + ", ".join(f"{v} {k}" for k, v in sorted(kinds.items())))
    if args.verify:
        v = payload["verification"]
        print(f"verified {v['cells']} cells with {v['samples']} samples: {len(v['violations'])} violations")
        for item in v["violations"][:10]:
            print(f"  {item}")
    return code


def _point(text: str) -> List[Fraction]:
    try:
        return [Fraction(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad point {text!r}: expected comma-separated rationals") from None


def _selected(args, inp: InputFile) -> Polynomial:
    if not inp.polynomials:
        raise InputError("no polynomials in input")
    if not 1 <= args.poly <= len(inp.polynomials):
        raise InputError(f"--poly {args.poly} out of range 1..{len(inp.polynomials)}")
    return inp.polynomials[args.poly - 1]


def _fmt(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def cmd_valuate(args) -> int:
    inp = _read(args.input)
    f = _selected(args, inp)
    if not f:
        raise InputError("the zero polynomial has no valuation")
    if args.point is None and args.above is None:
        raise InputError("give --point or --above")
    if args.point is not None:
        pt = _point(args.point)
        if len(pt) != inp.ring.n:
            raise InputError(f"point has {len(pt)} coordinates, expected {inp.ring.n}")
        print(_fmt(valuation_at(f, pt)))
    if args.above is not None:
        pt = _point(args.above)
        if len(pt) != inp.ring.n - 1:
            raise InputError(f"point has {len(pt)} coordinates, expected {inp.ring.n - 1}")
        r = lazard_residue(f, pt)
        print(f"{_fmt(r.semivaluation)}; {r.residue}")
    return EXIT_OK


def cmd_residue(args) -> int:
    args.point = None
    return cmd_valuate(args)


def cmd_compare(args) -> int:
    inp = _read(args.input)
    polys = [p for p in inp.polynomials if p and not p.is_constant()]
    if not polys:
        raise InputError("no non-constant polynomials")
    runs = [(op, "none") for op in OPERATORS]
    if inp.ec:
        runs += [(op, "single") for op in OPERATORS]
        runs += [(op, "multi") for op in ("brown_mccallum", "mccallum")]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["operator", "ec_mode", "level", "variable", "polynomials", "cells", "status"])
    for op, mode in runs:
        spec = ProblemSpec(polys, inp.ring, inp.ecs if mode != "none" else [], op, mode, args.groebner)
        try:
            if args.cells:
                result = run(spec)
                chain, counts = result.chain, result.cell_counts()
            else:
                ps, es = spec.polys, spec.ecs
                if spec.groebner and es:
                    gb = groebner_preprocess(es)
                    ps, es = [p for p in ps if p not in es] + gb, gb
                chain, counts = projection_chain(ps, es, op, mode), None
        except (WellOrientednessError, ProjectionError, ArithmeticError, ValueError) as exc:
            w.writerow([op, mode, "", "", "", "", f"error: {exc}"])
            continue
        for k in range(chain.n, 0, -1):
            w.writerow([op, mode, k, chain.ring.names[k - 1], len(chain.levels[k].polys),
                        counts[k - 1] if counts else "", "ok"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lazcad", description="Cylindrical algebraic decomposition with Lazard lifting.")
    ap.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="Print the projection chain.")
    p.add_argument("input", help="Input file ('-' for stdin).")
    p.add_argument("--operator", choices=OPERATOR_CHOICES, default="brown_mccallum")
    p.add_argument("--ec-mode", choices=["auto", "none", "single", "multi"], default="auto")
    p.add_argument("--groebner", action="store_true", help="Replace the ECs by their grevlex basis first.")
    p.add_argument("--levels", type=int, default=0, help="Only show this many projection steps.")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("cad", help="Build a CAD and report cell counts.")
    p.add_argument("input")
    p.add_argument("--operator", choices=OPERATOR_CHOICES, default="brown_mccallum")
    p.add_argument("--ec-mode", choices=["auto", "none", "single", "multi"], default="auto")
    p.add_argument("--groebner", action="store_true")
    p.add_argument("--verify", type=int, default=0, metavar="N", help="Check sign invariance with N samples per cell.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="Write the full result as JSON.")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_cad)

    for name, func, helptext in (("valuate", cmd_valuate, "Lex-least valuation or Lazard residue."),
                                 ("residue", cmd_residue, "Lazard residue over a point.")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        p.add_argument("--poly", type=int, default=1, help="1-based polynomial index.")
        if name == "valuate":
            p.add_argument("--point", help="Point of R^n, e.g. 0,0,1.")
        p.add_argument("--above", help="Point of R^(n-1) for the residue.")
        p.set_defaults(func=func)

    p = sub.add_parser("compare", help="CSV of projection sizes per operator and level.")
    p.add_argument("input")
    p.add_argument("--cells", action="store_true", help="Also build each CAD and report cell counts.")
    p.add_argument("--groebner", action="store_true")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WellOrientednessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORIENTATION
    except ProjectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
