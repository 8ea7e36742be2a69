"""Resultants, discriminants and a Buchberger engine for small ideals."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .poly.recursive import rdiv_scalar, rprem, to_rec
from .poly.ring import BITS, FIELD, Polynomial, VarOrder, divide_exact


class EliminationError(ValueError):
    pass


def sylvester_matrix(f: Polynomial, g: Polynomial, v) -> List[List[Polynomial]]:
    """Sylvester matrix of f and g in ``v`` (rows of f shifts, then g shifts)."""
    i = f.ring.position(v)
    m, n = f.degree(i), g.degree(i)
    if m < 0 or n < 0:
        raise EliminationError("Sylvester matrix of a zero polynomial")
    zero = f.ring.zero()
    fc = list(reversed(f.coeff_list(i)))
    gc = list(reversed(g.coeff_list(i)))
    size = m + n
    rows = []
    for r in range(n):
        rows.append([zero] * r + fc + [zero] * (size - r - len(fc)))
    for r in range(m):
        rows.append([zero] * r + gc + [zero] * (size - r - len(gc)))
    return rows


def resultant(f: Polynomial, g: Polynomial, v) -> Polynomial:
    """Resultant in ``v``, equal to the Sylvester determinant including its sign."""
    ring = f.ring
    i = ring.position(v)
    if not f or not g:
        return ring.zero()
    m, n = f.degree(i), g.degree(i)
    if m == 0 and n == 0:
        raise EliminationError("resultant of two polynomials constant in the variable")
    if m == 0:
        return f ** n
    if n == 0:
        return g ** m
    a, b = to_rec(f, i), to_rec(g, i)
    s = 1
    if m < n:
        a, b = b, a
        if (m * n) % 2:
            s = -1
    g_ = ring.one()
    h = ring.one()
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = rprem(a, b)
        if not r:
            return ring.zero()
        a = b
        b = rdiv_scalar(r, g_ * h ** delta)
        g_ = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g_
        else:
            h = _exact(g_ ** delta, h ** (delta - 1))
        if len(b) - 1 == 0:
            da = len(a) - 1
            if da == 1:
                h = b[0]
            else:
                h = _exact(b[0] ** da, h ** (da - 1))
            return h * s


def _exact(a: Polynomial, b: Polynomial) -> Polynomial:
    q = divide_exact(a, b)
    if q is None:
        raise ArithmeticError("subresultant chain division failed")
    return q


def discriminant(f: Polynomial, v) -> Polynomial:
    """(-1)^(d(d-1)/2) res(f, f') / lc(f); 1 for degree one."""
    i = f.ring.position(v)
    d = f.degree(i)
    if d <= 0:
        raise EliminationError("discriminant needs positive degree in the variable")
    if d == 1:
        return f.ring.one()
    r = resultant(f, f.derivative(i), i)
    q = _exact(r, f.leading_coeff(i))
    return -q if (d * (d - 1) // 2) % 2 else q


# ----- monomial orders --------------------------------------------------


class MonomialOrder:
    """Lex or graded reverse lex order over a VarOrder (last variable greatest)."""

    __slots__ = ("kind", "ring", "_cache")

    def __init__(self, kind: str, ring: VarOrder):
        if kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.ring = ring
        self._cache: Dict[int, object] = {}

    def key(self, m: int):
        if self.kind == "lex":
            return m
        k = self._cache.get(m)
        if k is None:
            exps = [(m >> (BITS * i)) & FIELD for i in range(self.ring.n)]
            k = (sum(exps),) + tuple(-e for e in exps)
            self._cache[m] = k
        return k

    def lead(self, terms) -> int:
        if self.kind == "lex":
            return max(terms)
        return max(terms, key=self.key)

    def __repr__(self):
        return f"MonomialOrder({self.kind}, {self.ring!r})"


def _lcm_mono(a: int, b: int, n: int) -> int:
    out = 0
    for i in range(n):
        sh = BITS * i
        ea, eb = (a >> sh) & FIELD, (b >> sh) & FIELD
        out |= (ea if ea > eb else eb) << sh
    return out


def _tdeg(m: int, n: int) -> int:
    return sum((m >> (BITS * i)) & FIELD for i in range(n))


def _divides(a: int, b: int, guard: int) -> bool:
    """Monomial a divides monomial b."""
    d = b - a
    return d >= 0 and not (d & guard)


def _disjoint(a: int, b: int, n: int) -> bool:
    for i in range(n):
        sh = BITS * i
        if (a >> sh) & FIELD and (b >> sh) & FIELD:
            return False
    return True


def _monic(t: Dict[int, Fraction], lm: int) -> Dict[int, Fraction]:
    c = t[lm]
    if c == 1:
        return t
    return {k: Fraction(a) / c for k, a in t.items()}


def _reduce(t: Dict[int, Fraction], basis, order: MonomialOrder, guard: int, full: bool = True):
    """Normal form of ``t`` modulo monic ``basis`` entries (terms, lm)."""
    t = dict(t)
    out: Dict[int, Fraction] = {}
    while t:
        lm = order.lead(t)
        c = t[lm]
        for bt, blm in basis:
            if _divides(blm, lm, guard):
                shift = lm - blm
                for k, a in bt.items():
                    kk = k + shift
                    nv = t.get(kk, 0) - c * a
                    if nv:
                        t[kk] = nv
                    else:
                        t.pop(kk, None)
                break
        else:
            if not full:
                out.update(t)
                return out
            out[lm] = t.pop(lm)
    return out


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Fully reduced normal form of ``p`` modulo ``basis`` (any generating set)."""
    ring = p.ring
    gb = []
    for g in basis:
        if g:
            lm = order.lead(g.terms)
            gb.append((_monic(dict(g.terms), lm), lm))
    return Polynomial(ring, _reduce(p.terms, gb, order, ring.guard))


def groebner_basis(F: Iterable[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    """Reduced Gröbner basis (normalized, sorted by leading monomial)."""
    ring = order.ring
    n = ring.n
    guard = ring.guard
    polys = [p for p in F if p]
    if not polys:
        return []
    for p in polys:
        if p.ring != ring:
            raise ValueError("polynomial ring differs from the monomial order's ring")
    # G entries: [terms, lm, sugar, alive]
    G: List[list] = []
    pairs: List[Tuple[int, int, int, int]] = []  # (i, j, lcm, sugar)

    def update(t, lm, sugar):
        nonlocal pairs
        h = len(G)
        G.append([t, lm, sugar, True])
        C = []
        for i, g in enumerate(G[:-1]):
            if g[3]:
                l = _lcm_mono(g[1], lm, n)
                s = max(g[2] + _tdeg(l - g[1], n), sugar + _tdeg(l - lm, n))
                C.append((i, l, s, _disjoint(g[1], lm, n)))
        D = []
        while C:
            a = C.pop(0)
            if a[3] or not any(_divides(b[1], a[1], guard) for b in C + D):
                D.append(a)
        new_pairs = [(i, h, l, s) for (i, l, s, cop) in D if not cop]
        old = []
        for (i, j, l, s) in pairs:
            if (_divides(lm, l, guard)
                    and _lcm_mono(G[i][1], lm, n) != l
                    and _lcm_mono(G[j][1], lm, n) != l):
                continue
            old.append((i, j, l, s))
        pairs = old + new_pairs
        # retire basis elements whose leading monomial is divisible by lm
        for g in G[:-1]:
            if g[3] and _divides(lm, g[1], guard):
                g[3] = False

    order_key = order.key
    start = []
    for p in polys:
        lm = order.lead(p.terms)
        start.append((_monic(dict(p.terms), lm), lm, p.total_degree()))
    start.sort(key=lambda e: (e[2], order_key(e[1])))
    for t, lm, s in start:
        live = [(g[0], g[1]) for g in G if g[3]]
        r = _reduce(t, live, order, guard)
        if not r:
            continue
        rlm = order.lead(r)
        update(_monic(r, rlm), rlm, s)

    while pairs:
        pairs.sort(key=lambda e: (e[3], order_key(e[2])))
        i, j, l, s = pairs.pop(0)
        ti, lmi = G[i][0], G[i][1]
        tj, lmj = G[j][0], G[j][1]
        si, sj = l - lmi, l - lmj
        sp: Dict[int, Fraction] = {}
        for k, a in ti.items():
            sp[k + si] = sp.get(k + si, 0) + a
        for k, a in tj.items():
            kk = k + sj
            nv = sp.get(kk, 0) - a
            if nv:
                sp[kk] = nv
            else:
                sp.pop(kk, None)
        sp = {k: a for k, a in sp.items() if a}
        if not sp:
            continue
        live = [(g[0], g[1]) for g in G if g[3]]
        r = _reduce(sp, live, order, guard)
        if not r:
            continue
        rlm = order.lead(r)
        if rlm == 0:
            return [ring.one()]
        update(_monic(r, rlm), rlm, s)

    # interreduce the minimal basis
    minimal = [(g[0], g[1]) for g in G if g[3]]
    reduced = []
    for idx, (t, lm) in enumerate(minimal):
        others = [e for j, e in enumerate(minimal) if j != idx]
        rest = {k: a for k, a in t.items() if k != lm}
        r = _reduce(rest, others, order, guard)
        r[lm] = Fraction(1)
        reduced.append((r, lm))
    reduced.sort(key=lambda e: order_key(e[1]))
    out = []
    for t, lm in reduced:
        p = Polynomial(ring, t).primitive_integer()
        if p.terms[lm] < 0:
            p = -p
        out.append(p)
    return out


def zero_dimensional(F: Iterable[Polynomial], variables: Sequence, order: MonomialOrder | None = None) -> bool:
    """True iff the ideal has finitely many solutions in the given variables.

    Every generator must only involve ``variables``; the check looks for a
    pure power leading monomial of each variable in a graded basis.
    """
    F = [p for p in F if p]
    if not F:
        return False
    ring = F[0].ring
    idx = [ring.position(v) for v in variables]
    allowed = set(idx)
    for p in F:
        if not set(p.variables()) <= allowed:
            raise ValueError("generator involves a variable outside the given set")
    gb = groebner_basis(F, order or MonomialOrder("grevlex", ring))
    if len(gb) == 1 and gb[0].is_constant():
        return True
    lms = [(order or MonomialOrder("grevlex", ring)).lead(g.terms) for g in gb]
    for i in idx:
        sh = BITS * i
        if not any(lm and lm == ((lm >> sh) & FIELD) << sh for lm in lms):
            return False
    return True
