"""Full CAD pipeline, equational-constraint runs, verification and growth checks."""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .elim import MonomialOrder, groebner_basis
from .lifting import (CADTree, Cell, CurtainInfo, DelineabilityError, lift_all, rebase, refine_nonpoint_curtains,
                      roots_with_sources, _merge)
from .poly import Polynomial, VarOrder, square_free_basis
from .projection import (Chain, project_brown_mccallum, project_lazard, project_mccallum,
                         project_multi_ec, project_single_ec, projection_chain)
from .realalg import (RealRoot, SamplePoint, _enclosure, compare_in_fibre, isolate_dense, roots_of_residue,
                      separate, sign_at)

log = logging.getLogger(__name__)


@dataclass
class ProblemSpec:
    polys: List[Polynomial]
    order: VarOrder
    ecs: List[Polynomial] = field(default_factory=list)
    operator: str = "brown_mccallum"
    ec_mode: str = "none"
    groebner: bool = False
    verify_samples: int = 0
    seed: int = 0


@dataclass
class CADResult:
    spec: ProblemSpec
    inputs: List[Polynomial]
    ecs: List[Polynomial]
    chain: Chain
    tree: CADTree
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def curtains(self) -> List[CurtainInfo]:
        return self.tree.curtains()

    def cell_counts(self) -> List[int]:
        return self.tree.counts()

    @property
    def total_cells(self) -> int:
        return len(self.tree.levels[self.tree.n])

    def poly_counts(self) -> List[int]:
        return [len(self.chain.levels[k].polys) for k in range(1, self.chain.n + 1)]

    def summary(self) -> dict:
        return {
            "operator": self.chain.operator,
            "ec_mode": self.chain.ec_mode,
            "variables": list(self.chain.ring.names),
            "ec_levels": self.chain.ec_levels,
            "poly_counts": self.poly_counts(),
            "cell_counts": self.cell_counts(),
            "total": self.total_cells,
            "curtains": [{"foot": list(c.foot.index), "kind": c.kind, "poly": str(c.poly), "reason": c.reason}
                         for c in self.curtains],
            "refinements": self.tree.refinements,
        }

    def to_json(self) -> dict:
        levels = []
        for k in range(1, self.tree.n + 1):
            levels.append([{
                "index": list(c.index),
                "kind": c.kind,
                "sample": c.sample.to_json(),
                "defining": [str(p) for p in c.polys],
                "signs": list(c.signs),
                "curtain": c.curtain,
            } for c in self.tree.levels[k]])
        return {"inputs": [str(p) for p in self.inputs], "ecs": [str(p) for p in self.ecs],
                "levels": levels, "summary": self.summary()}


def _sign_vector(inputs: Sequence[Polynomial], point: Sequence) -> Tuple:
    k = len(point)
    return tuple(sign_at(g, point) if g.level() <= k else None for g in inputs)


def _decorate(tree: CADTree, inputs: Sequence[Polynomial]) -> None:
    for lvl in tree.levels[1:]:
        for c in lvl:
            c.signs = _sign_vector(inputs, c.sample)


def groebner_preprocess(ecs: Sequence[Polynomial]) -> List[Polynomial]:
    """Replace equational constraints by their reduced grevlex basis in the CAD order."""
    if not ecs:
        return []
    gb = groebner_basis(ecs, MonomialOrder("grevlex", ecs[0].ring))
    return [g.normalized() for g in gb if not g.is_constant()]


def _prepare(spec: ProblemSpec) -> Tuple[List[Polynomial], List[Polynomial]]:
    polys = [p.normalized() for p in spec.polys if p and not p.is_constant()]
    ecs = [e.normalized() for e in spec.ecs if e and not e.is_constant()]
    if spec.groebner and ecs:
        gb = groebner_preprocess(ecs)
        if not gb:
            raise ValueError("equational constraints generate the unit ideal: no real solutions")
        polys = [p for p in polys if p not in ecs] + gb
        ecs = gb
    seen = {}
    for p in polys + ecs:
        seen.setdefault(p, None)
    return list(seen), ecs


def cad_full(spec: ProblemSpec) -> CADResult:
    """CAD sign-invariant for every input polynomial."""
    if spec.ecs and spec.ec_mode != "none":
        raise ValueError("cad_full takes no equational constraints; use cad_with_ecs")
    t0 = time.perf_counter()
    inputs, _ = _prepare(ProblemSpec(spec.polys, spec.order))
    chain = projection_chain(inputs, operator=spec.operator, ec_mode="none")
    t1 = time.perf_counter()
    tree = lift_all(chain, spec.operator)
    t2 = time.perf_counter()
    _decorate(tree, inputs)
    res = CADResult(spec, inputs, [], chain, tree, {"projection": t1 - t0, "lifting": t2 - t1})
    return res


def cad_with_ecs(spec: ProblemSpec) -> CADResult:
    """CAD sign-invariant for the inputs on the cells where the equational constraints vanish."""
    if not spec.ecs:
        raise ValueError("cad_with_ecs needs at least one equational constraint")
    mode = spec.ec_mode if spec.ec_mode != "none" else "single"
    t0 = time.perf_counter()
    inputs, ecs = _prepare(spec)
    chain = projection_chain(inputs, ecs, spec.operator, mode)
    t1 = time.perf_counter()
    tree = lift_all(chain, spec.operator)
    t2 = time.perf_counter()
    if any(c.curtain == "nonpoint" for lvl in tree.levels for c in lvl):
        top = chain.levels[chain.n]
        if mode == "single":
            E = set(top.ec_basis)
            aux_input = [p for p in square_free_basis(inputs) if p not in E]
        else:
            aux_input = list(inputs)
        refine_nonpoint_curtains(tree, aux_input)
    t3 = time.perf_counter()
    _decorate(tree, inputs)
    return CADResult(spec, inputs, ecs, chain, tree,
                     {"projection": t1 - t0, "lifting": t2 - t1, "refinement": t3 - t2})


def run(spec: ProblemSpec) -> CADResult:
    if spec.ecs and spec.ec_mode != "none":
        return cad_with_ecs(spec)
    return cad_full(spec)


# ----- verification --------------------------------------------------------------


def _between(a, b, rng: random.Random) -> Fraction:
    """Random rational strictly between two coordinates (None = unbounded)."""
    if a is None and b is None:
        return Fraction(rng.randint(-20, 20), rng.randint(1, 4))
    if a is None:
        return _enclosure(b)[0] - rng.randint(1, 5) - Fraction(rng.randint(0, 9), 10)
    if b is None:
        return _enclosure(a)[1] + rng.randint(1, 5) + Fraction(rng.randint(0, 9), 10)
    separate([a, b])
    lo = _enclosure(a)[1]
    hi = _enclosure(b)[0]
    if lo == hi:
        return lo
    return lo + (hi - lo) * Fraction(rng.randint(1, 999), 1000)


def stack_structure(base: Cell, point: Sequence) -> List[tuple]:
    """Per child of ``base``: ('section', coord) or ('sector', lo, hi) over a point of the base cell."""
    kids = base.children
    if base.dim == 0:
        out = []
        for i, c in enumerate(kids):
            if c.is_section():
                out.append(("section", c.sample[-1]))
            else:
                lo = kids[i - 1].sample[-1] if i > 0 else None
                hi = kids[i + 1].sample[-1] if i + 1 < len(kids) else None
                out.append(("sector", lo, hi))
        return out
    entries, _, _ = roots_with_sources(point, base.lift_polys or ())
    roots = [c for c, _, _ in _merge(entries)]
    if max((c.orig_pos for c in kids), default=1) != 2 * len(roots) + 1:
        raise DelineabilityError(f"{len(roots)} roots over {point} but the stack over {base.index} expects "
                                 f"{(max(c.orig_pos for c in kids) - 1) // 2}")
    inner = {}
    extra = []
    if base.split_polys:
        e2, _, _ = roots_with_sources(point, base.split_polys)
        extra = [c for c, _, _ in _merge(e2)]
    out = []
    for c in kids:
        p = c.orig_pos
        if p % 2 == 0:
            out.append(("section", roots[p // 2 - 1]))
            continue
        j = (p - 1) // 2
        lo = roots[j - 1] if j > 0 else None
        hi = roots[j] if j < len(roots) else None
        if c.piece is None:
            out.append(("sector", lo, hi))
            continue
        if p not in inner:
            inside = [x for x in extra
                      if (lo is None or compare_in_fibre(x, lo) > 0) and (hi is None or compare_in_fibre(x, hi) < 0)]
            inner[p] = [lo] + inside + [hi]
        seq = inner[p]
        pieces = sum(1 for k in kids if k.orig_pos == p)
        if pieces != 2 * (len(seq) - 2) + 1:
            raise DelineabilityError(f"split sector {p} over {base.index} has {len(seq) - 2} cuts at {point}")
        i = c.piece
        if i % 2:
            out.append(("section", seq[(i + 1) // 2]))
        else:
            out.append(("sector", seq[i // 2], seq[i // 2 + 1]))
    return out


def _interior_points(tree: CADTree, per_cell: int, rng: random.Random) -> Tuple[Dict[int, list], list]:
    """Random points of every cell, drawn top-down through recomputed stacks."""
    pts: Dict[int, list] = {id(tree.root): [SamplePoint(())]}
    errors = []
    for k in range(0, tree.n):
        for base in tree.levels[k]:
            base_pts = pts.get(id(base), [])
            if not base.children:
                continue
            if base.dim == 0:
                base_pts = [base.sample]
            share = max(1, -(-per_cell // max(1, len(base_pts))))
            for c in base.children:
                pts[id(c)] = []
            for bp in base_pts:
                try:
                    struct = stack_structure(base, bp)
                except DelineabilityError as exc:
                    errors.append({"cell": list(base.index), "kind": "delineability", "detail": str(exc)})
                    continue
                for c, s in zip(base.children, struct):
                    if s[0] == "section":
                        pts[id(c)].append(SamplePoint(tuple(bp) + (s[1],)))
                    else:
                        for _ in range(share):
                            pts[id(c)].append(SamplePoint(tuple(bp) + (_between(s[1], s[2], rng),)))
            for c in base.children:
                pts[id(c)] = pts[id(c)][:per_cell]
    return pts, errors


def _checked_cells(result: CADResult) -> List[Cell]:
    top = result.tree.levels[result.tree.n]
    if not result.ecs:
        return top
    idx = [i for i, g in enumerate(result.inputs) if g in result.ecs]
    return [c for c in top if all(c.signs[i] == 0 for i in idx)]


def locate(tree: CADTree, point: Sequence) -> Cell:
    """The cell of D_n containing a point (coordinates in the CAD order)."""
    cell = tree.root
    pref: tuple = ()
    for k in range(1, len(point) + 1):
        if cell.dim == 0:
            pref = tuple(cell.sample)
        c = rebase(point[k - 1], pref)
        struct = stack_structure(cell, pref)
        chosen = None
        for child, s in zip(cell.children, struct):
            if s[0] == "section":
                if compare_in_fibre(c, s[1]) == 0:
                    chosen = child
                    break
            else:
                lo, hi = s[1], s[2]
                if (lo is None or compare_in_fibre(c, lo) > 0) and (hi is None or compare_in_fibre(c, hi) < 0):
                    chosen = child
                    break
        if chosen is None:
            raise DelineabilityError(f"point {point} not located at level {k}")
        cell = chosen
        pref = pref + (c,)
    return cell


def _check_line(tree: CADTree, level: int, polys: Sequence[Polynomial], rng: random.Random, violations: list) -> dict:
    """Compare signs of ``polys`` along a random line in R^level with the cells of D_level that meet it."""
    points, restricted = _line_points(level, polys, rng)
    oracle = [_restricted_signs(restricted, p[0], polys) for p in points]
    engine = []
    for p, o in zip(points, oracle):
        try:
            cell = locate(tree, p)
        except DelineabilityError as exc:
            violations.append({"kind": "locate", "detail": str(exc)})
            engine.append(None)
            continue
        got = cell.signs if level == tree.n else _sign_vector(polys, cell.sample)
        engine.append(got)
        if got != o:
            violations.append({"cell": list(cell.index), "kind": "line", "point": str(p),
                               "expected": list(o), "got": list(got)})
    if _runs(oracle) != _runs(engine):
        violations.append({"kind": "regions", "level": level, "oracle": _runs(oracle), "engine": _runs(engine)})
    return {"level": level, "oracle_regions": _runs(oracle), "engine_regions": _runs(engine)}


def _line_points(n: int, inputs: Sequence[Polynomial], rng: random.Random):
    """Points along a random rational line in R^n (n <= 2): exact roots of the restricted inputs plus points between."""
    from .poly import dense

    ring = inputs[0].ring
    s = Fraction(rng.randint(-7, 7), rng.randint(1, 3))
    b = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
    restricted = []
    for g in inputs:
        h = g if n == 1 else g.substitute(1, ring.var(0) * s + b) if g.has_var(1) else g
        coeffs = [h.coeff(0, d).constant_value() if h.coeff(0, d).is_constant() else 0
                  for d in range(max(h.degree(0), 0) + 1)]
        restricted.append(dense.from_rationals(coeffs) if h.degree(0) >= 0 else [])
    prod = [1]
    for r in restricted:
        if len(r) > 1:
            prod = dense.primitive(dense.mul(prod, r))
    sq = dense.squarefree_part(prod) if len(prod) > 1 else prod
    xs = []
    upoly = Polynomial.from_univariate(ring, 0, sq)
    for lo, hi in (isolate_dense(sq) if len(sq) > 1 else []):
        xs.append(lo if lo == hi else RealRoot(upoly, 0, (), lo, hi))
    marks = [None] + xs + [None]
    xs_all = []
    for i in range(len(marks) - 1):
        if i > 0:
            xs_all.append(marks[i])
        xs_all.append(_between(marks[i], marks[i + 1], rng))
    out = []
    for x in xs_all:
        if n == 1:
            out.append(SamplePoint((x,)))
            continue
        line = ring.var(1) - ring.var(0) * s - b
        y = roots_of_residue(line, (x,))[0]
        out.append(SamplePoint((x, y)))
    return out, restricted


def _restricted_signs(restricted: List[List[int]], x, inputs: Sequence[Polynomial]) -> Tuple:
    """Signs of the inputs along the line, from their univariate restrictions."""
    from .poly import dense

    ring = inputs[0].ring
    out = []
    for r in restricted:
        if not r:
            out.append(0)
        elif not isinstance(x, RealRoot) or x.value is not None:
            out.append(dense.sign_at(r, x if not isinstance(x, RealRoot) else x.value))
        else:
            out.append(sign_at(Polynomial.from_univariate(ring, 0, r), (x,)))
    return tuple(out)


def _runs(vectors: List[Tuple]) -> int:
    return sum(1 for i, v in enumerate(vectors) if i == 0 or v != vectors[i - 1])


def verify_sign_invariance(result: CADResult, samples_per_cell: int = 10, seed: int = 0, lines: int = 5) -> dict:
    """Sampled sign-invariance check of the input polynomials on every relevant cell of D_n."""
    rng = random.Random(seed)
    tree = result.tree
    inputs = result.inputs
    violations = []
    pts, errors = _interior_points(tree, samples_per_cell, rng)
    violations.extend(errors)
    cells = _checked_cells(result)
    checked = 0
    for c in cells:
        for p in pts.get(id(c), []):
            checked += 1
            got = _sign_vector(inputs, p)
            if got != c.signs:
                violations.append({"cell": list(c.index), "kind": "sign", "point": str(p),
                                   "expected": list(c.signs), "got": list(got)})
                break
    line_reports = []
    if not result.ecs and inputs:
        if tree.n <= 2:
            polys, level = list(inputs), tree.n
        else:
            polys, level = [p for k in (1, 2) for p in result.chain.polys_at(k)], 2
        for _ in range(lines if polys else 0):
            line_reports.append(_check_line(tree, level, polys, rng, violations))
    return {"cells": len(cells), "samples": checked, "lines": line_reports, "violations": violations}


# ----- growth bounds --------------------------------------------------------


GROWTH_TABLE = {
    "mccallum": (lambda m: (m + 1) ** 2 // 2, lambda m: (5 * m + 4) // 4, lambda m: 11 * m // 4),
    "lazard": (lambda m: (m + 1) ** 2 // 2, lambda m: (5 * m + 3) // 4, lambda m: (9 * m - 1) // 4),
    "brown_mccallum": (lambda m: m * (m + 1) // 2, lambda m: (5 * m + 2) // 4, lambda m: (9 * m - 2) // 4),
}
COLUMNS = ("original", "single_ec", "multi_ec")


def combined_degree(polys: Iterable[Polynomial]) -> int:
    """Maximum over variables of the degree of the product."""
    polys = list(polys)
    if not polys:
        return 0
    n = polys[0].ring.n
    return max(sum(max(p.degree(j), 0) for p in polys) for j in range(n))


def _greedy_partition(polys: List[Polynomial], bound: int) -> List[List[Polynomial]]:
    parts: List[List[Polynomial]] = []
    for p in sorted(polys, key=lambda q: (-combined_degree([q]), q.sort_key())):
        for part in parts:
            if combined_degree(part + [p]) <= bound:
                part.append(p)
                break
        else:
            parts.append([p])
    return parts


def _structured_groups(partition: List[List[Polynomial]], column: str, op: str, v: int) -> List[List[Polynomial]]:
    """Output groups following the usual counting argument for each operator/column."""
    from .elim import resultant

    def one(A_i):
        if op == "mccallum":
            return list(project_mccallum(A_i, v).raw)
        if op == "lazard":
            return list(project_lazard(A_i, v).raw)
        return list(project_brown_mccallum(A_i, (), v).raw)

    def cross(A_i, A_j):
        return [resultant(f, g, v) for f in A_i for g in A_j if f.degree(v) > 0 and g.degree(v) > 0]

    m = len(partition)
    groups = []
    if column == "original":
        for i in range(m):
            groups.append(one(partition[i]))
        for i in range(m):
            for j in range(i + 1, m):
                groups.append(cross(partition[i], partition[j]))
    elif column == "single_ec":
        groups.append(one(partition[0]))
        for j in range(1, m):
            groups.append(cross(partition[0], partition[j]))
    else:
        groups.append(one(partition[0]))
        for j in range(1, m):
            groups.append(cross(partition[0], partition[j]))
            A_j = [g for g in partition[j] if g.degree(v) > 0]
            groups.append([g.leading_coeff(v) for g in A_j] + [
                r for g in A_j for r in ([] if g.degree(v) < 2 else [_disc(g, v)])])
    return groups


def _disc(g, v):
    from .elim import discriminant

    return discriminant(g, v)


def md_growth_check(A: Sequence[Polynomial], partition: Sequence[Sequence[Polynomial]], d: int,
                    row: str = "brown_mccallum", column: str = "original") -> dict:
    """One projection step and a partition of its output witnessing the (M, 2d^2)-property."""
    if row not in GROWTH_TABLE:
        raise ValueError(f"unknown operator row {row!r}")
    if column not in COLUMNS:
        raise ValueError(f"unknown column {column!r}")
    partition = [list(p) for p in partition]
    m = len(partition)
    for part in partition:
        if combined_degree(part) > d:
            raise ValueError("partition does not witness the (m, d)-property")
    A = [p for part in partition for p in part]
    v = max(p.main_var() for p in A)
    if column == "original":
        proj = {"mccallum": project_mccallum, "lazard": project_lazard}.get(row)
        out = proj(A, v) if proj else project_brown_mccallum(A, (), v)
    elif column == "single_ec":
        out = project_single_ec(A, partition[0], (), v, family="mccallum" if row == "mccallum" else "brown_mccallum")
    else:
        out = project_multi_ec(A, partition[0], (), v, family="mccallum" if row == "mccallum" else "brown_mccallum")
    target = out.polys
    bound_deg = 2 * d * d
    seen = set()
    structured = []
    for g in _structured_groups(partition, column, row, v):
        part = [f for f in square_free_basis(g) if f in target and f not in seen]
        seen.update(part)
        if part:
            structured.append(part)
    leftover = [f for f in target if f not in seen]
    if leftover:
        structured.append(leftover)
    greedy = _greedy_partition(list(target), bound_deg)
    options = [p for p in (structured, greedy) if all(combined_degree(x) <= bound_deg for x in p)]
    best = min(options, key=len) if options else greedy
    bound = GROWTH_TABLE[row][COLUMNS.index(column)](m)
    M = len(best)
    maxdeg = max((combined_degree(x) for x in best), default=0)
    return {"m": m, "d": d, "row": row, "column": column, "M": M, "bound": bound, "max_degree": maxdeg,
            "degree_bound": bound_deg, "ok": M <= bound and maxdeg <= bound_deg, "outputs": len(target)}
