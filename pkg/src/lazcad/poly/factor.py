"""Multivariate gcd, contents, square-free decomposition and coprime bases."""

from __future__ import annotations

from typing import Dict, Iterable, List, Tuple

from . import dense
from .recursive import from_rec, subresultant_gcd, to_rec
from .ring import BITS, FIELD, Polynomial, divide_exact

_EVAL_POINTS = (3, -2, 5, 7, -4, 11, 2, -6, 13, 9, -3, 17)


def _one(p: Polynomial) -> Polynomial:
    return p.ring.one()


def content(p: Polynomial, v) -> Polynomial:
    """Normalized gcd of the coefficients of ``p`` viewed in ``v``."""
    i = p.ring.position(v)
    if not p:
        raise ValueError("content of the zero polynomial")
    cs = sorted(p.coeffs(i).values(), key=lambda c: (len(c.terms), c.total_degree()))
    g = cs[0].normalized()
    for c in cs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    if g.is_constant():
        return _one(p)
    return g


def content_and_primitive(p: Polynomial, v) -> Tuple[Polynomial, Polynomial]:
    """(content, primitive) with content * primitive == p and primitive normalized."""
    if not p:
        raise ValueError("content of the zero polynomial")
    i = p.ring.position(v)
    c = content(p, i)
    prim = p if c == 1 else divide_exact(p, c)
    prim = prim.normalized()
    cont = divide_exact(p, prim)
    return cont, prim


def primitive_part(p: Polynomial, v) -> Polynomial:
    return content_and_primitive(p, v)[1]


def _dense_at(p: Polynomial, v: int, point: Dict[int, int]):
    q = p.substitute_many(point)
    shift = BITS * v
    coeffs: Dict[int, object] = {}
    for k, c in q.terms.items():
        coeffs[(k >> shift) & FIELD] = c
    if not coeffs:
        return []
    return dense.from_rationals([coeffs.get(d, 0) for d in range(max(coeffs) + 1)])


def _coprime_by_evaluation(a: Polynomial, b: Polynomial, v: int) -> bool:
    """Sound certificate of gcd(a, b) being free of ``v`` (False means unknown)."""
    others = sorted(set(a.variables()) | set(b.variables()))
    others = [i for i in others if i != v]
    la, lb = a.leading_coeff(v), b.leading_coeff(v)
    for shift in range(3):
        point = {i: _EVAL_POINTS[(j + shift * 5) % len(_EVAL_POINTS)] + shift for j, i in enumerate(others)}
        if not la.substitute_many(point) or not lb.substitute_many(point):
            continue
        da = _dense_at(a, v, point)
        db = _dense_at(b, v, point)
        g = dense.gcd(da, db)
        return len(g) <= 1
    return False


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Normalized gcd over Q; constants give 1 (or 0 for two zeros)."""
    if not a:
        return b.normalized()
    if not b:
        return a.normalized()
    if a.is_constant() or b.is_constant():
        return _one(a)
    a = a.normalized()
    b = b.normalized()
    if a == b:
        return a
    va = set(a.variables())
    vb = set(b.variables())
    if not (va & vb):
        return _one(a)
    v = max(va | vb)
    if v not in va:
        return gcd(a, content(b, v))
    if v not in vb:
        return gcd(content(a, v), b)
    ca, pa = content_and_primitive(a, v)
    cb, pb = content_and_primitive(b, v)
    c = gcd(ca, cb)
    g = _primitive_gcd(pa, pb, v)
    return (c * g).normalized()


def _primitive_gcd(pa: Polynomial, pb: Polynomial, v: int) -> Polynomial:
    """gcd of two primitive (in v) polynomials of positive degree in v."""
    if pa == pb:
        return pa
    da, db = pa.degree(v), pb.degree(v)
    if da < db:
        pa, pb, da, db = pb, pa, db, da
    if divide_exact(pa, pb) is not None:
        return pb
    if _coprime_by_evaluation(pa, pb, v):
        return _one(pa)
    r = subresultant_gcd(to_rec(pa, v), to_rec(pb, v))
    if len(r) <= 1:
        return _one(pa)
    g = from_rec(r, v, pa.ring)
    return primitive_part(g, v)


def lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    g = gcd(a, b)
    return divide_exact(a * b, g).normalized()


def squarefree_decomposition(p: Polynomial, v) -> List[Tuple[Polynomial, int]]:
    """Yun's algorithm on the primitive part of ``p`` in ``v``.

    Returns pairs (factor, multiplicity); factors are normalized, pairwise
    coprime and square-free.  The content in ``v`` is ignored.
    """
    i = p.ring.position(v)
    _, q = content_and_primitive(p, i)
    if q.degree(i) <= 0:
        return []
    dq = q.derivative(i)
    g = gcd(q, dq)
    if g == 1:
        return [(q, 1)]
    b = divide_exact(q, g)
    c = divide_exact(dq, g)
    d = c - b.derivative(i)
    out = []
    k = 1
    while b.degree(i) > 0:
        a = gcd(b, d)
        if a.degree(i) > 0:
            out.append((a.normalized(), k))
        b = divide_exact(b, a)
        c = divide_exact(d, a)
        d = c - b.derivative(i)
        k += 1
    return out


def squarefree_factors(p: Polynomial) -> List[Tuple[Polynomial, int]]:
    """Square-free factorization over all variables, contents included."""
    if not p or p.is_constant():
        return []
    v = p.main_var()
    c, _ = content_and_primitive(p, v)
    out = squarefree_decomposition(p, v)
    out.extend(squarefree_factors(c))
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    out = p.ring.one()
    for f, _ in squarefree_factors(p):
        out = out * f
    return out.normalized()


def coprime_basis(polys: Iterable[Polynomial]) -> List[Polynomial]:
    """Refine square-free polynomials into a pairwise coprime basis."""
    basis: List[Polynomial] = []
    seen = set()
    for p in polys:
        todo = [p.normalized()]
        while todo:
            f = todo.pop()
            if f.is_constant() or f in seen:
                continue
            for idx, b in enumerate(basis):
                if set(f.variables()).isdisjoint(b.variables()):
                    continue
                g = gcd(f, b)
                if g.is_constant():
                    continue
                basis.pop(idx)
                seen.discard(b)
                for piece in (divide_exact(b, g), g, divide_exact(f, g)):
                    piece = piece.normalized()
                    if not piece.is_constant():
                        todo.append(piece)
                break
            else:
                basis.append(f)
                seen.add(f)
    return sorted(basis, key=Polynomial.sort_key)


def square_free_basis(polys: Iterable[Polynomial], finest: bool = True) -> List[Polynomial]:
    """Square-free basis of a set of polynomials, contents split off.

    With ``finest`` the elements are pairwise coprime; otherwise each input
    contributes the square-free parts of its primitive part and contents.
    """
    pieces = []
    for p in polys:
        if not p or p.is_constant():
            continue
        if finest:
            pieces.extend(f for f, _ in squarefree_factors(p))
        else:
            pieces.extend(_coarse_pieces(p))
    if finest:
        return coprime_basis(pieces)
    out = []
    seen = set()
    for f in pieces:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return sorted(out, key=Polynomial.sort_key)


def _coarse_pieces(p: Polynomial) -> List[Polynomial]:
    out = []
    while not p.is_constant():
        v = p.main_var()
        c, prim = content_and_primitive(p, v)
        part = p.ring.one()
        for f, _ in squarefree_decomposition(prim, v):
            part = part * f
        out.append(part.normalized())
        p = c
    return out


def is_squarefree(p: Polynomial) -> bool:
    return all(m == 1 for _, m in squarefree_factors(p))


class PolySet:
    """Deduplicated, deterministically ordered set of normalized non-constant polynomials."""

    __slots__ = ("_items", "_set")

    def __init__(self, polys: Iterable[Polynomial] = ()):
        items = {}
        for p in polys:
            if not p or p.is_constant():
                continue
            q = p.normalized()
            items[q] = None
        self._items = tuple(sorted(items, key=Polynomial.sort_key))
        self._set = frozenset(self._items)

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __contains__(self, p):
        if not isinstance(p, Polynomial) or not p:
            return False
        return p.normalized() in self._set

    def __or__(self, other):
        return PolySet(list(self) + list(other))

    def __le__(self, other):
        return all(p in other for p in self)

    def __eq__(self, other):
        if isinstance(other, PolySet):
            return self._set == other._set
        return NotImplemented

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return "{" + ", ".join(str(p) for p in self._items) + "}"

    def at_level(self, level: int) -> "PolySet":
        """Elements whose main variable has the given 1-based level."""
        return PolySet(p for p in self._items if p.level() == level)

    @property
    def elements(self) -> Tuple[Polynomial, ...]:
        return self._items
