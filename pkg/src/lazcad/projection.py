"""Projection operators, test T, equational-constraint propagation and chains."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .elim import MonomialOrder, discriminant, groebner_basis, normal_form, resultant, zero_dimensional
from .poly import PolySet, Polynomial, VarOrder, content_and_primitive, square_free_basis
from .realalg import RealRoot, SamplePoint, is_zero_at, roots_of_residue

log = logging.getLogger(__name__)

OPERATORS = ("mccallum", "brown", "lazard", "brown_mccallum")
EC_MODES = ("none", "single", "multi")


class ProjectionError(ValueError):
    pass


# ----- points part -----------------------------------------------------------


def _coord_key(c):
    if isinstance(c, RealRoot):
        if c.value is not None:
            return ("q", c.value)
        return ("a", id(c))
    return ("q", Fraction(c))


class GammaPoint:
    """A point of a Γ set with identity keys frozen at creation."""

    __slots__ = ("coords", "keys")

    def __init__(self, coords: Sequence, keys: Optional[Tuple] = None):
        self.coords = SamplePoint(coords)
        self.keys = tuple(keys) if keys is not None else tuple(_coord_key(c) for c in self.coords)

    def __len__(self):
        return len(self.coords)

    def drop_last(self) -> "GammaPoint":
        return GammaPoint(self.coords[:-1], self.keys[:-1])

    def __eq__(self, other):
        return isinstance(other, GammaPoint) and self.keys == other.keys

    def __hash__(self):
        return hash(self.keys)

    def __repr__(self):
        return f"GammaPoint{self.coords}"


def _dedupe_points(points: Iterable[GammaPoint]) -> List[GammaPoint]:
    seen = {}
    for p in points:
        seen.setdefault(p.keys, p)
    return list(seen.values())


# ----- results -------------------------------------------------------------------


@dataclass
class ProjectionSet:
    """Output of one projection step from ``level`` to the levels below."""

    level: int
    operator: str
    raw: PolySet
    polys: PolySet
    points: List[GammaPoint] = field(default_factory=list)
    ec_marks: PolySet = field(default_factory=PolySet)

    def at_level(self, level: int) -> PolySet:
        return self.polys.at_level(level)


# ----- building blocks ---------------------------------------------------------------


def _var_index(A: Sequence[Polynomial], v) -> int:
    if v is None:
        return max(p.main_var() for p in A)
    return A[0].ring.position(v)


def _split(A: Iterable[Polynomial], i: int):
    """Contents (and polynomials free of x_i) plus the square-free basis of primitive parts."""
    conts, prims = [], []
    for p in A:
        if not p or p.is_constant():
            continue
        if p.degree(i) <= 0:
            conts.append(p)
            continue
        c, q = content_and_primitive(p, i)
        if not c.is_constant():
            conts.append(c)
        prims.append(q)
    B = [b for b in square_free_basis(prims) if b.degree(i) > 0]
    conts.extend(b for b in square_free_basis(prims) if b.degree(i) <= 0)
    return conts, B


def _lcs(B, i):
    return [b.leading_coeff(i) for b in B]


def _tcs(B, i):
    return [b.trailing_coeff(i) for b in B]


def _coeffs(B, i):
    out = []
    for b in B:
        out.extend(b.coeffs(i).values())
    return out


def _discs(B, i):
    return [discriminant(b, i) for b in B if b.degree(i) >= 2]


def _res_pairs(B, i):
    out = []
    for a in range(len(B)):
        for b in range(a + 1, len(B)):
            out.append(resultant(B[a], B[b], i))
    return out


def _res_cross(E, B, i):
    out = []
    for f in E:
        for g in B:
            if g != f:
                out.append(resultant(f, g, i))
    return out


def _finish(level: int, op: str, raw: Iterable[Polynomial], points=(), ec_marks=()) -> ProjectionSet:
    raw = PolySet(raw)
    return ProjectionSet(level, op, raw, PolySet(square_free_basis(raw)), _dedupe_points(points), PolySet(ec_marks))


def _as_list(A) -> List[Polynomial]:
    out = [p for p in A if p and not p.is_constant()]
    if not out:
        raise ProjectionError("projection of an empty set")
    return out


# ----- test T ------------------------------------------------------------------------


def test_T(f: Polynomial, v=None) -> Optional[List[GammaPoint]]:
    """Finite superset of the nullification points of f, or None (⊥).

    The coefficients of f in ``v`` are checked for a nonzero constant (no
    nullification) and for zero-dimensionality; finite solution sets are
    found by a lex Gröbner basis and back substitution.
    """
    ring = f.ring
    k = f.main_var() if v is None else ring.position(v)
    if f.degree(k) < 1:
        raise ProjectionError("test T needs positive degree in the variable")
    coeffs = [c for c in f.coeffs(k).values() if c]
    if any(c.is_constant() for c in coeffs):
        return []
    if not zero_dimensional(coeffs, list(range(k))):
        return None
    gb = groebner_basis(coeffs, MonomialOrder("lex", ring))
    if len(gb) == 1 and gb[0].is_constant():
        return []
    cands: List[tuple] = [()]
    for j in range(k):
        level_j = [g for g in gb if g.main_var() == j]
        pivot = [g for g in level_j if g.leading_coeff(j).is_constant()]
        if not pivot:
            return None
        new = []
        for c in cands:
            for r in roots_of_residue(pivot[0], c):
                pt = c + (r,)
                if all(is_zero_at(g, pt) for g in level_j if g is not pivot[0]):
                    new.append(pt)
        cands = new
    feet = []
    for c in cands:
        if all(is_zero_at(a, c) for a in coeffs):
            feet.append(GammaPoint(c))
    return feet


# ----- the operators ----------------------------------------------------------


def project_mccallum(A, v=None) -> ProjectionSet:
    A = _as_list(A)
    i = _var_index(A, v)
    conts, B = _split(A, i)
    return _finish(i + 1, "mccallum", conts + _coeffs(B, i) + _discs(B, i) + _res_pairs(B, i))


def project_brown(A, v=None) -> ProjectionSet:
    A = _as_list(A)
    i = _var_index(A, v)
    conts, B = _split(A, i)
    return _finish(i + 1, "brown", conts + _lcs(B, i) + _discs(B, i) + _res_pairs(B, i))


def project_lazard(A, v=None) -> ProjectionSet:
    A = _as_list(A)
    i = _var_index(A, v)
    conts, B = _split(A, i)
    return _finish(i + 1, "lazard", conts + _lcs(B, i) + _tcs(B, i) + _discs(B, i) + _res_pairs(B, i))


def _required_tcs(F, i, points: list):
    """Trailing coefficients of elements of F for which test T returns ⊥; feet go to ``points``."""
    out = []
    for f in F:
        feet = test_T(f, i)
        if feet is None:
            out.append((f, f.trailing_coeff(i)))
        else:
            points.extend(feet)
    return out


def _elide(pairs, others: Sequence[Polynomial], i: int) -> List[Polynomial]:
    """Drop trailing-coefficient factors whose zero set on lc(f) = 0 is already present."""
    others = square_free_basis(others)
    present = set(others)
    out = []
    for f, tc in pairs:
        if not tc or tc.is_constant():
            continue
        lc_parts = square_free_basis([f.leading_coeff(i)])
        for q in square_free_basis([tc]):
            if q in present:
                continue
            if lc_parts and all(_covered_mod(q, l, others) for l in lc_parts):
                log.debug("trailing coefficient factor %s covered on lc factors %s", q, lc_parts)
                continue
            out.append(q)
    return out


def _covered_mod(q: Polynomial, l: Polynomial, others: Sequence[Polynomial]) -> bool:
    j = l.main_var()
    if not l.leading_coeff(j).is_constant():
        return False
    order = MonomialOrder("lex", q.ring)
    nq = normal_form(q, [l], order)
    if not nq:
        return True
    target = nq.normalized()
    for p in others:
        if p == q or p.is_constant():
            continue
        np_ = normal_form(p, [l], order)
        if np_ and np_.normalized() == target:
            return True
    return False


def project_brown_mccallum(A, gamma: Sequence[GammaPoint] = (), v=None, elide_tc: bool = False) -> ProjectionSet:
    """Brown–McCallum projection with points part."""
    A = _as_list(A)
    i = _var_index(A, v)
    conts, B = _split(A, i)
    points = [g.drop_last() for g in gamma if len(g) == i + 1]
    base = conts + _lcs(B, i) + _discs(B, i) + _res_pairs(B, i)
    pairs = _required_tcs(B, i, points)
    tcs = _elide(pairs, base, i) if elide_tc else [tc for _, tc in pairs]
    return _finish(i + 1, "brown_mccallum", base + tcs, points)


def _ec_basis(B: List[Polynomial], E: Iterable[Polynomial], i: int) -> List[Polynomial]:
    """Elements of the basis B dividing some element of E."""
    from .poly.ring import divide_exact

    E = [e for e in E if e and e.degree(i) > 0]
    if not E:
        raise ProjectionError("equational constraint set is empty or free of the main variable")
    out = [b for b in B if any(divide_exact(e, b) is not None for e in E)]
    if not out:
        raise ProjectionError("equational constraints are not among the projected polynomials")
    return out


def project_single_ec(A, E, gamma: Sequence[GammaPoint] = (), v=None, family: str = "brown_mccallum",
                      elide_tc: bool = False) -> ProjectionSet:
    """P_BM^E (or P_M^E / P_B^E): base projection of E plus cross resultants with A∖E."""
    A = _as_list(A)
    i = _var_index(A, v)
    conts, B = _split(A, i)
    EB = _ec_basis(B, E, i)
    rest = [b for b in B if b not in EB]
    cross = [resultant(f, g, i) for f in EB for g in rest]
    econts = [c for c in _split(list(E), i)[0]]
    if family == "mccallum":
        raw = econts + _coeffs(EB, i) + _discs(EB, i) + _res_pairs(EB, i) + cross
        return _finish(i + 1, "mccallum_ec", raw + conts)
    if family == "brown":
        raw = econts + _lcs(EB, i) + _discs(EB, i) + _res_pairs(EB, i) + cross
        return _finish(i + 1, "brown_ec", raw + conts)
    if family not in ("brown_mccallum", "lazard"):
        raise ProjectionError(f"unknown operator family {family!r}")
    points = [g.drop_last() for g in gamma if len(g) == i + 1]
    base = conts + _lcs(EB, i) + _discs(EB, i) + _res_pairs(EB, i) + cross
    pairs = _required_tcs(EB, i, points)
    tcs = _elide(pairs, base, i) if elide_tc else [tc for _, tc in pairs]
    return _finish(i + 1, "brown_mccallum_ec", base + tcs, points)


def project_multi_ec(A, E, gamma: Sequence[GammaPoint] = (), v=None, elide_tc: bool = False,
                     family: str = "brown_mccallum") -> ProjectionSet:
    """P̂_BM^E: lc(A), T-required tc of E, disc(A), res(f, g) for f in E, g in A."""
    A = _as_list(A)
    i = _var_index(A, v)
    conts, B = _split(A, i)
    EB = _ec_basis(B, E, i)
    cross = _res_cross(EB, B, i)
    ec_res = [resultant(EB[a], EB[b], i) for a in range(len(EB)) for b in range(a + 1, len(EB))]
    if family == "mccallum":
        raw = conts + _coeffs(EB, i) + _lcs(B, i) + _discs(B, i) + cross
        return _finish(i + 1, "mccallum_multi_ec", raw, ec_marks=_primitive_parts(ec_res, i))
    points = [g.drop_last() for g in gamma if len(g) == i + 1]
    base = conts + _lcs(B, i) + _discs(B, i) + cross
    pairs = _required_tcs(EB, i, points)
    tcs = _elide(pairs, base, i) if elide_tc else [tc for _, tc in pairs]
    return _finish(i + 1, "brown_mccallum_multi_ec", base + tcs, points, ec_marks=_primitive_parts(ec_res, i))


def project_mccallum_ec(A, E, v=None) -> ProjectionSet:
    """P_M^E(A) = P_M(E) ∪ res(E, A∖E)."""
    return project_single_ec(A, E, (), v, family="mccallum")


def _primitive_parts(polys, i):
    out = []
    for r in polys:
        if not r or r.is_constant():
            continue
        v = r.main_var()
        out.append(content_and_primitive(r, v)[1])
    return out


# ----- EC handling ----------------------------------------------------------


def _prim(p: Polynomial) -> Polynomial:
    return content_and_primitive(p, p.main_var())[1]


def ec_choice_key(p: Polynomial):
    q = _prim(p)
    return (q.total_degree(), len(q.terms), str(q))


def choose_ec(ecs: Sequence[Polynomial]) -> Polynomial:
    """Smallest EC by (total degree, number of terms, printed form) of its primitive part."""
    return min(ecs, key=ec_choice_key)


def derive_ecs(chosen: Polynomial, others: Sequence[Polynomial], i: int) -> List[Polynomial]:
    """Resultants of the chosen EC with the other ECs, contents kept (they are implied equations)."""
    derived = []
    seen = set()
    for e in others:
        if e == chosen:
            continue
        r = resultant(chosen, e, i)
        if not r:
            log.info("resultant of %s and %s vanishes (common factor kept in the projection); dropped", chosen, e)
            continue
        if r.is_constant():
            continue
        r = r.normalized()
        if r not in seen:
            seen.add(r)
            derived.append(r)
    return derived


def propagate_ecs(ecs: Sequence[Polynomial], v=None) -> Tuple[Polynomial, List[Polynomial]]:
    """(chosen EC, derived ECs): primitive parts of res(chosen, other ECs)."""
    ecs = [e.normalized() for e in ecs if e and not e.is_constant()]
    if not ecs:
        raise ProjectionError("no equational constraints to propagate")
    i = max(e.main_var() for e in ecs) if v is None else ecs[0].ring.position(v)
    chosen = choose_ec([e for e in ecs if e.degree(i) > 0] or ecs)
    out = []
    for r in derive_ecs(chosen, ecs, i):
        q = _prim(r)
        if q not in out:
            out.append(q)
    return chosen, out


# ----- chains -----------------------------------------------------------------


@dataclass
class LevelData:
    """Everything the lifting phase needs for one level (1-based)."""

    level: int
    polys: PolySet
    ec_polys: List[Polynomial] = field(default_factory=list)
    chosen_ec: Optional[Polynomial] = None
    ec_basis: Optional[PolySet] = None
    gamma: List[GammaPoint] = field(default_factory=list)
    projection: Optional[ProjectionSet] = None


@dataclass
class Chain:
    ring: VarOrder
    operator: str
    ec_mode: str
    levels: Dict[int, LevelData]
    ec_levels: List[int]

    @property
    def n(self) -> int:
        return self.ring.n

    def polys_at(self, level: int) -> PolySet:
        return self.levels[level].polys

    def sets(self) -> List[ProjectionSet]:
        return [self.levels[k].projection for k in range(self.n, 1, -1) if self.levels[k].projection]

    def summary(self) -> List[Tuple[int, List[str]]]:
        return [(k, [str(p) for p in self.levels[k].polys]) for k in range(self.n, 0, -1)]


def _plain(op: str, A, gamma, i, elide=False) -> ProjectionSet:
    if op == "mccallum":
        return project_mccallum(A, i)
    if op == "brown":
        return project_brown(A, i)
    if op == "lazard":
        return project_lazard(A, i)
    if op == "brown_mccallum":
        return project_brown_mccallum(A, gamma, i, elide_tc=elide)
    raise ProjectionError(f"unknown operator {op!r}")


def projection_chain(A: Iterable[Polynomial], ecs: Sequence[Polynomial] = (), operator: str = "brown_mccallum",
                     ec_mode: str = "none", elide_tc: bool = True) -> Chain:
    """Project A down to R^1.

    With ECs, the EC operator is used at the top level (single) or at every
    consecutive EC-bearing level from the top (multi); plain projection below.
    """
    if operator not in OPERATORS:
        raise ProjectionError(f"unknown operator {operator!r}")
    if ec_mode not in EC_MODES:
        raise ProjectionError(f"unknown EC mode {ec_mode!r}")
    A = [p for p in A if p and not p.is_constant()]
    if not A:
        raise ProjectionError("no non-constant polynomials")
    ring = A[0].ring
    n = ring.n
    ecs = [e.normalized() for e in ecs if e and not e.is_constant()]
    if ec_mode != "none" and not ecs:
        raise ProjectionError("EC mode requested without equational constraints")
    if ec_mode == "none":
        ecs = []
    pending: Dict[int, List[Polynomial]] = {k: [] for k in range(1, n + 1)}
    pending_ecs: Dict[int, List[Polynomial]] = {k: [] for k in range(1, n + 1)}
    for p in square_free_basis(A):
        pending[p.level()].append(p)
    for e in ecs:
        pending_ecs[e.level()].append(e)
    gamma: List[GammaPoint] = []
    levels: Dict[int, LevelData] = {}
    ec_levels: List[int] = []
    ec_active = ec_mode != "none"
    for k in range(n, 0, -1):
        basis = PolySet(square_free_basis(pending[k]))
        data = LevelData(k, basis, gamma=[g for g in gamma if len(g) == k])
        levels[k] = data
        here = [e for e in pending_ecs[k] if e.level() == k]
        if ec_active and here and (not ec_levels or ec_levels[-1] == k + 1):
            chosen = choose_ec(here)
            derived = derive_ecs(chosen, here, k - 1)
            data.ec_polys = here
            data.chosen_ec = chosen
            data.ec_basis = PolySet(_ec_basis(list(basis), [chosen], k - 1))
            ec_levels.append(k)
            if ec_mode == "single":
                derived = []
                ec_active = False
            for d in derived:
                pending_ecs[d.level()].append(d)
        else:
            ec_active = False if ec_levels else ec_active
        if k == 1:
            break
        if not basis:
            data.projection = _finish(k, operator, [], [g.drop_last() for g in data.gamma])
        elif data.chosen_ec is not None:
            E = list(data.ec_basis)
            if ec_mode == "multi":
                proj = project_multi_ec(list(basis), E, data.gamma, k - 1, elide_tc=elide_tc,
                                        family="mccallum" if operator == "mccallum" else "brown_mccallum")
                proj.ec_marks = PolySet(_prim(d) for e in pending_ecs.values() for d in e if d.level() < k)
            else:
                family = operator if operator in ("mccallum", "brown") else "brown_mccallum"
                proj = project_single_ec(list(basis), E, data.gamma, k - 1, family=family, elide_tc=elide_tc)
            data.projection = proj
        else:
            data.projection = _plain(operator, list(basis), data.gamma, k - 1)
        for p in data.projection.polys:
            if p.level() >= k:
                raise ProjectionError(f"projection produced {p} at level {p.level()}")
            pending[p.level()].append(p)
        gamma = gamma + data.projection.points
    return Chain(ring, operator, ec_mode, levels, sorted(ec_levels, reverse=True))


def auxiliary_chain(A: Iterable[Polynomial]) -> Dict[int, PolySet]:
    """Plain Brown–McCallum projection of A to R^1, as polynomials per level."""
    chain = projection_chain(A, operator="brown_mccallum", ec_mode="none", elide_tc=False)
    return {k: chain.levels[k].polys for k in chain.levels}
