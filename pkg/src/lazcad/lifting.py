"""Stack construction, Γ insertion, curtain handling and CAD trees."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import PolySet, Polynomial
from .projection import Chain, GammaPoint, auxiliary_chain, test_T
from .realalg import (RealRoot, SamplePoint, compare_in_fibre, roots_of_residue, sector_samples, sign_at,
                      simplify_coord)
from .valuation import nullifies, residue_at

log = logging.getLogger(__name__)


class WellOrientednessError(RuntimeError):
    """A polynomial nullifies where the chosen lifting cannot handle it."""

    def __init__(self, cell: "Cell", poly: Polynomial, mode: str):
        self.cell = cell
        self.poly = poly
        self.mode = mode
        super().__init__(
            f"not well-oriented: {poly} nullifies over the {cell.dim}-dimensional cell "
            f"{_path(cell)} with sample {cell.sample} ({mode} lifting)")


def _path(cell: "Cell") -> Tuple:
    """Index vector of a cell, worked out from its parents if not yet numbered."""
    if cell.index or cell.parent is None:
        return cell.index
    sibs = cell.parent.children
    pos = next((i for i, c in enumerate(sibs, 1) if c is cell), 0)
    return _path(cell.parent) + (pos,)


class DelineabilityError(RuntimeError):
    pass


class Cell:
    """A cell of some D_k, linked to its base cell and its stack."""

    __slots__ = ("level", "index", "sample", "kind", "parent", "children", "polys", "dim", "gamma_keys",
                 "lift_polys", "split_polys", "orig_pos", "piece", "bounds", "curtain", "curtain_info",
                 "over_curtain", "on_variety", "signs")

    def __init__(self, level: int, sample: SamplePoint, kind: str, parent: Optional["Cell"] = None,
                 polys: Tuple[Polynomial, ...] = ()):
        self.level = level
        self.sample = sample
        self.kind = kind
        self.parent = parent
        self.children: List[Cell] = []
        self.polys = polys
        self.dim = (parent.dim if parent else 0) + (1 if kind == "sector" else 0)
        self.index: Tuple[int, ...] = ()
        self.gamma_keys: set = set()
        self.lift_polys: Optional[PolySet] = None
        self.split_polys: Optional[PolySet] = None
        self.orig_pos = 0
        self.piece: Optional[int] = None
        self.bounds: Tuple = (None, None)
        self.curtain: Optional[str] = None
        self.curtain_info: Optional[CurtainInfo] = None
        self.over_curtain = False
        self.on_variety = True
        self.signs: Tuple = ()

    @classmethod
    def root(cls) -> "Cell":
        c = cls(0, SamplePoint(()), "sector")
        c.dim = 0
        c.gamma_keys = {()}
        return c

    def is_section(self) -> bool:
        return self.kind != "sector"

    def ancestor(self, level: int) -> "Cell":
        c = self
        while c.level > level:
            c = c.parent
        return c

    def __repr__(self):
        return f"Cell({self.index}, {self.kind}, {self.sample})"


@dataclass
class CurtainInfo:
    foot: Cell
    poly: Polynomial
    kind: str
    fibre_dim: int
    reason: str = ""


@dataclass
class Stack:
    base: Cell
    sections: List[Tuple[object, Tuple[Polynomial, ...]]]
    cells: List[Cell]
    semivaluations: Dict[Polynomial, Tuple[int, ...]] = field(default_factory=dict)
    nullified: List[Polynomial] = field(default_factory=list)


@dataclass
class CADTree:
    root: Cell
    n: int
    mode: str
    chain: Chain
    levels: List[List[Cell]] = field(default_factory=list)
    refinements: List[dict] = field(default_factory=list)

    def cells(self, level: int) -> List[Cell]:
        return self.levels[level]

    def curtains(self) -> List[CurtainInfo]:
        return [c.curtain_info for lvl in self.levels for c in lvl if c.curtain_info is not None]

    def counts(self) -> List[int]:
        return [len(self.levels[k]) for k in range(1, self.n + 1)]


# ----- roots and stacks --------------------------------------------------------


def rebase(c, prefix: Sequence):
    """The same number re-expressed over a numerically equal prefix."""
    if not isinstance(c, RealRoot) or c.value is not None:
        return simplify_coord(c)
    prefix = tuple(prefix)
    if c.prefix == prefix:
        return c
    return RealRoot(c.poly, c.var, prefix, c.lo, c.hi, None, c.slo)


def _merge(entries: List[Tuple[object, Tuple, Tuple]]) -> List[Tuple[object, Tuple, set]]:
    """Sort (coord, polys, gamma keys) entries, merging equal coordinates."""
    entries = sorted(entries, key=cmp_to_key(lambda a, b: compare_in_fibre(a[0], b[0])))
    out: List[Tuple[object, Tuple, set]] = []
    for c, polys, keys in entries:
        if out and compare_in_fibre(out[-1][0], c) == 0:
            prev, pp, pk = out[-1]
            if not isinstance(prev, Fraction) and isinstance(simplify_coord(c), Fraction):
                prev = simplify_coord(c)
            out[-1] = (prev, pp + tuple(p for p in polys if p not in pp), pk | set(keys))
        else:
            out.append((simplify_coord(c), tuple(polys), set(keys)))
    return out


def roots_with_sources(base_point: Sequence, polys: Iterable[Polynomial]):
    """Merged, sorted roots of the residues of ``polys`` over a point, with nullification data."""
    entries = []
    semis = {}
    nulls = []
    for f in polys:
        F, nus = residue_at(f, base_point)
        semis[f] = nus
        if any(nus):
            nulls.append(f)
        for r in roots_of_residue(F, base_point):
            entries.append((r, (f,), ()))
    return entries, semis, nulls


def _check_orientation(base: Cell, nulls: List[Polynomial], mode: str) -> None:
    for f in nulls:
        if mode == "mccallum" or (mode == "brown" and base.dim > 0):
            raise WellOrientednessError(base, f, mode)


def build_stack(base: Cell, polys: Iterable[Polynomial], gamma: Sequence[GammaPoint] = (),
                mode: str = "brown_mccallum") -> Stack:
    """Stack over ``base`` from the Lazard residues of ``polys`` plus Γ points lying over it."""
    polys = [p for p in polys if p and not p.is_constant()]
    k = base.level + 1
    entries, semis, nulls = roots_with_sources(base.sample, polys)
    _check_orientation(base, nulls, mode)
    for g in gamma:
        if len(g) == k and g.keys[:-1] in base.gamma_keys:
            entries.append((rebase(g.coords[-1], base.sample), (), (g.keys,)))
    merged = _merge(entries)
    roots = [c for c, _, _ in merged]
    samples = sector_samples(roots)
    cells = []
    for j in range(len(roots) + 1):
        lo = roots[j - 1] if j > 0 else None
        hi = roots[j] if j < len(roots) else None
        sec = Cell(k, base.sample.extend(samples[j]), "sector", base)
        sec.bounds = (lo, hi)
        sec.orig_pos = len(cells) + 1
        cells.append(sec)
        if j < len(roots):
            c, ps, keys = merged[j]
            kind = "section" if ps else "point"
            cell = Cell(k, base.sample.extend(c), kind, base, ps)
            cell.gamma_keys = keys
            cell.orig_pos = len(cells) + 1
            cells.append(cell)
    return Stack(base, [(c, ps) for c, ps, _ in merged], cells, semis, nulls)


def detect_nullification(f: Polynomial, base: Cell) -> bool:
    """True iff f vanishes identically on the fibre above the base sample."""
    if not f or f.is_constant():
        return False
    return nullifies(f, base.sample)


def _neighbours(cell: Cell) -> List[Cell]:
    if cell.parent is None:
        return []
    sibs = cell.parent.children
    for i, c in enumerate(sibs):
        if c is cell:
            return [sibs[j] for j in (i - 1, i + 1) if 0 <= j < len(sibs)]
    return []


_T_CACHE: Dict[Polynomial, object] = {}


def _test_T_cached(f: Polynomial, v: int):
    key = (f, v)
    if key not in _T_CACHE:
        _T_CACHE[key] = test_T(f, v)
    return _T_CACHE[key]


def classify_curtain(f: Polynomial, foot: Cell, n: Optional[int] = None) -> CurtainInfo:
    """Point or non-point curtain of f over the foot cell.

    Point needs a 0-dimensional foot, no nullifying adjacent 1-cell, a finite
    answer from test T and (when ``n`` is given) the top lifting level.
    """
    top = n if n is not None else foot.level + 1
    fibre = top - foot.level
    if foot.dim > 0:
        return CurtainInfo(foot, f, "nonpoint", fibre, "positive-dimensional foot")
    for nb in _neighbours(foot):
        if nb.dim == 1 and detect_nullification(f, nb):
            return CurtainInfo(foot, f, "nonpoint", fibre, "adjacent 1-cell nullifies")
    if f.degree(foot.level) <= 0 or _test_T_cached(f, foot.level) is None:
        return CurtainInfo(foot, f, "nonpoint", fibre, "nullification set not known to be finite")
    if foot.level + 1 != top:
        return CurtainInfo(foot, f, "nonpoint", fibre, "point curtain below the top level")
    return CurtainInfo(foot, f, "point", fibre, "isolated nullification point")


# ----- lifting ---------------------------------------------------------------------


class _Lifter:
    def __init__(self, chain: Chain, mode: str, aux: Optional[Dict[int, PolySet]] = None):
        self.chain = chain
        self.n = chain.n
        self.mode = mode
        self.aux = aux or {}
        self.multi = chain.ec_mode == "multi"

    def rules(self, base: Cell):
        """(polys to lift with, children over a curtain)."""
        k = base.level + 1
        data = self.chain.levels[k]
        aux = self.aux.get(k, PolySet())
        if base.over_curtain:
            return data.polys | aux, True
        if data.chosen_ec is None:
            return data.polys, False
        if not base.on_variety:
            return data.ec_basis, False
        if detect_nullification(data.chosen_ec, base):
            info = classify_curtain(data.chosen_ec, base, self.n)
            base.curtain = info.kind
            base.curtain_info = info
            log.info("%s curtain of %s over %s (%s)", info.kind, data.chosen_ec, base.sample, info.reason)
            if info.kind == "point":
                return data.polys, False
            if self.mode == "mccallum":
                raise WellOrientednessError(base, data.chosen_ec, self.mode)
            return data.polys | aux, True
        return data.ec_basis, False

    def mark(self, cell: Cell, over: bool) -> None:
        cell.over_curtain = over or cell.parent.over_curtain
        cell.on_variety = cell.parent.on_variety
        if self.multi and cell.on_variety and cell.level < self.n:
            ec = self.chain.levels[cell.level].chosen_ec
            if ec is not None and sign_at(ec, cell.sample) != 0:
                cell.on_variety = False

    def lift(self, base: Cell) -> List[Cell]:
        polys, over = self.rules(base)
        k = base.level + 1
        st = build_stack(base, polys, self.chain.levels[k].gamma, self.mode)
        base.lift_polys = PolySet(polys)
        base.split_polys = None
        for c in st.cells:
            self.mark(c, over)
        base.children = st.cells
        return st.cells


def renumber(root: Cell, n: int) -> List[List[Cell]]:
    """Assign index vectors and parents top-down; returns cells per level."""
    levels: List[List[Cell]] = [[root]] + [[] for _ in range(n)]
    todo = [root]
    while todo:
        nxt = []
        for c in todo:
            for i, ch in enumerate(c.children, 1):
                ch.parent = c
                ch.index = c.index + (i,)
                levels[ch.level].append(ch)
                nxt.append(ch)
        todo = nxt
    return levels


def lift_all(chain: Chain, mode: Optional[str] = None, aux: Optional[Dict[int, PolySet]] = None) -> CADTree:
    """Build D_1 .. D_n level by level."""
    mode = mode or chain.operator
    root = Cell.root()
    lifter = _Lifter(chain, mode, aux)
    frontier = [root]
    for _ in range(chain.n):
        nxt = []
        for base in frontier:
            nxt.extend(lifter.lift(base))
        frontier = nxt
    tree = CADTree(root, chain.n, mode, chain)
    tree.levels = renumber(root, chain.n)
    return tree


# ----- non-point curtain refinement ----------------------------------------


def _split_sector(cell: Cell, base: Cell, polys: PolySet) -> List[Cell]:
    """Pieces of a sector cut by the roots of ``polys`` lying inside it."""
    lo, hi = cell.bounds
    entries, _, _ = roots_with_sources(base.sample, polys)
    inner = []
    for c, ps, keys in _merge(entries):
        if lo is not None and compare_in_fibre(c, lo) <= 0:
            continue
        if hi is not None and compare_in_fibre(c, hi) >= 0:
            continue
        inner.append((c, ps))
    if not inner:
        return [cell]
    ends = ([lo] if lo is not None else []) + [c for c, _ in inner] + ([hi] if hi is not None else [])
    samples = sector_samples(ends)
    if lo is not None:
        samples = samples[1:]
    if hi is not None:
        samples = samples[:-1]
    k = cell.level
    pieces = []
    bounds = [lo] + [c for c, _ in inner] + [hi]
    for j in range(len(inner) + 1):
        s = Cell(k, base.sample.extend(samples[j]), "sector", base)
        s.bounds = (bounds[j], bounds[j + 1])
        pieces.append(s)
        if j < len(inner):
            pieces.append(Cell(k, base.sample.extend(inner[j][0]), "section", base, inner[j][1]))
    for i, p in enumerate(pieces):
        p.orig_pos = cell.orig_pos
        p.piece = i
    return pieces


def refine_nonpoint_curtains(tree: CADTree, aux_input: Iterable[Polynomial]) -> CADTree:
    """Split the cells over non-point curtain feet with an auxiliary projection and re-lift.

    Only ancestors of feet (hot cells) are split; subtrees over unsplit,
    non-hot cells are reused.  The result is renumbered.
    """
    feet = [c for lvl in tree.levels for c in lvl if c.curtain == "nonpoint"]
    if not feet:
        return tree
    aux_input = [p for p in aux_input if p and not p.is_constant()]
    aux = auxiliary_chain(aux_input) if aux_input else {}
    hot = set()
    for f in feet:
        c = f
        while c is not None:
            hot.add(id(c))
            c = c.parent
    lifter = _Lifter(tree.chain, tree.mode, aux)
    stats = {"feet": len(feet), "split": 0, "relifted": 0}

    def relift(base: Cell, orig: Optional[Cell]) -> None:
        if base.level == tree.n:
            base.children = []
            return
        k = base.level + 1
        if orig is not None and base is orig and id(orig) not in hot:
            return
        base.curtain = None
        base.curtain_info = None
        polys, over = lifter.rules(base)
        polys = PolySet(polys)
        if base is orig and orig is not None and not over and polys == orig.lift_polys:
            cells = list(orig.children)
        else:
            st = build_stack(base, polys, tree.chain.levels[k].gamma, tree.mode)
            cells = st.cells
            stats["relifted"] += 1
        base.lift_polys = polys
        base.split_polys = None
        mapped = orig is not None and not over and polys == orig.lift_polys \
            and len(cells) == len(orig.children)
        out: List[Tuple[Cell, Optional[Cell]]] = []
        for i, c in enumerate(cells):
            co = orig.children[i] if mapped else None
            if co is not None and id(co) in hot and c.kind == "sector" and aux.get(k):
                pieces = _split_sector(c, base, aux[k])
                if len(pieces) > 1:
                    base.split_polys = aux[k]
                    stats["split"] += 1
            else:
                pieces = [c]
            for p in pieces:
                p.parent = base
                out.append((p, co))
        base.children = [p for p, _ in out]
        for p, co in out:
            if p is not co:
                lifter.mark(p, over)
        for p, co in out:
            relift(p, co)

    relift(tree.root, tree.root)
    tree.levels = renumber(tree.root, tree.n)
    tree.refinements.append(stats)
    return tree
