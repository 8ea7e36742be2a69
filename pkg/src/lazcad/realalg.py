"""Real root isolation, real algebraic sample coordinates and exact signs.

A sample coordinate is either a ``Fraction`` or a :class:`RealRoot`.  A
``RealRoot`` for variable ``k`` is the unique root in ``(lo, hi)`` of its
polynomial ``poly`` after substituting the earlier coordinates ``prefix``.
``poly`` has main variable ``k`` and otherwise only involves earlier
algebraic coordinates, so signs at a sample point can be decided exactly by
interval evaluation plus a zero test that works over the tower of fields
generated by the coordinates.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .poly import dense
from .poly.recursive import from_rec, rprem, rprem_quo, to_rec
from .poly.ring import BITS, FIELD, Polynomial, VarOrder

_LOCK = threading.RLock()

Coord = Union[Fraction, "RealRoot"]

# bound on (degree of the residue) * (product of tower degrees) for the
# resultant route in roots_over_sample
RESULTANT_ROUTE_LIMIT = 48


class Interval:
    """Closed rational interval."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("interval with lo > hi")
        self.lo, self.hi = lo, hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __iter__(self):
        return iter((self.lo, self.hi))

    def __eq__(self, other):
        return isinstance(other, Interval) and (self.lo, self.hi) == (other.lo, other.hi)

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """Rational with the smallest denominator (then numerator) in [a, b]."""
    a, b = Fraction(a), Fraction(b)
    if a > b:
        a, b = b, a
    if a <= 0 <= b:
        return Fraction(0)
    if b < 0:
        return -simplest_between(-b, -a)
    fl = math.floor(a)
    if fl == a:
        return a
    if fl + 1 <= b:
        return Fraction(fl + 1)
    return fl + 1 / simplest_between(1 / (b - fl), 1 / (a - fl))


class RealRoot:
    """A real algebraic coordinate: the root of ``poly`` over ``prefix`` in (lo, hi)."""

    __slots__ = ("poly", "var", "prefix", "lo", "hi", "value", "slo", "_dense", "_defcache")

    def __init__(self, poly: Polynomial, var: int, prefix: Sequence[Coord], lo, hi, value=None, slo=None):
        self.poly = poly
        self.var = var
        self.prefix = tuple(prefix)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.value = None if value is None else Fraction(value)
        self._dense = None
        self._defcache = None
        if self.value is not None:
            self.lo = self.hi = self.value
            self.slo = 0
            return
        if all(not isinstance(c, RealRoot) or c.value is not None for c in self.prefix):
            self._dense = _to_dense(poly.substitute_many(_rationals(self.prefix)), var)
        self.slo = slo if slo is not None else self._sign(self.lo)
        if self.slo == 0:
            raise ValueError("isolating interval endpoint is a root")

    @classmethod
    def rational(cls, ring: VarOrder, var: int, q, prefix=()) -> "RealRoot":
        q = Fraction(q)
        p = (ring.var(var) * q.denominator - q.numerator)
        return cls(p, var, prefix, q, q, value=q)

    # ----- evaluation of the defining polynomial --------------------------

    def _sign(self, x: Fraction) -> int:
        if self._dense is not None:
            return dense.sign_at(self._dense, x)
        return sign_at(self.poly, self.prefix + (x,))

    def is_exact(self) -> bool:
        return self.value is not None

    def bounds(self) -> Tuple[Fraction, Fraction]:
        with _LOCK:
            return self.lo, self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self) -> None:
        """Halve (roughly) the isolating interval; may discover an exact value."""
        with _LOCK:
            if self.value is not None:
                return
            lo, hi = self.lo, self.hi
            w = hi - lo
            m = simplest_between(lo + w * Fraction(3, 8), hi - w * Fraction(3, 8))
            s = self._sign(m)
            if s == 0:
                self.value = m
                self.lo = self.hi = m
                self.slo = 0
            elif s == self.slo:
                self.lo = m
            else:
                self.hi = m

    def refine_to(self, width) -> None:
        width = Fraction(width)
        while self.value is None and self.hi - self.lo > width:
            self.refine()

    def defining_polynomial(self) -> Polynomial:
        """``poly`` with the rational coordinates of the prefix substituted."""
        known = sum(1 for c in self.prefix if not isinstance(c, RealRoot) or c.value is not None)
        cache = self._defcache
        if cache is not None and cache[0] == known:
            return cache[1]
        p = self.poly.substitute_many(_rationals(self.prefix))
        self._defcache = (known, p)
        return p

    def minimal_rational_polynomial(self) -> List[int]:
        """Square-free integer polynomial in one variable vanishing at this number."""
        if self.value is not None:
            return [-self.value.numerator, self.value.denominator]
        p = self.defining_polynomial()
        for j in reversed(range(self.var)):
            c = self.prefix[j]
            if isinstance(c, RealRoot) and c.value is None and p.has_var(j):
                from .elim import resultant

                p = resultant(p, c.defining_polynomial(), j)
        return dense.squarefree_part(_to_dense(p, self.var))

    # ----- presentation ----------------------------------------------------

    def __float__(self):
        if self.value is not None:
            return float(self.value)
        self.refine_to(Fraction(1, 1 << 60) * max(1, abs(self.lo)))
        return float((self.lo + self.hi) / 2)

    def approx(self, digits: int = 6) -> str:
        if self.value is not None:
            return _fmt_fraction(self.value)
        self.refine_to(Fraction(1, 10 ** (digits + 1)))
        if self.value is not None:
            return _fmt_fraction(self.value)
        return f"{float((self.lo + self.hi) / 2):.{digits}g}"

    def to_json(self) -> dict:
        if self.value is not None:
            return {"value": str(self.value)}
        return {
            "poly": str(self.poly),
            "var": self.poly.ring.names[self.var],
            "interval": [str(self.lo), str(self.hi)],
        }

    def __repr__(self):
        if self.value is not None:
            return f"RealRoot({self.value})"
        return f"RealRoot({self.poly}, ({self.lo}, {self.hi}))"


AlgebraicNumber = RealRoot


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def coord_value(c) -> Optional[Fraction]:
    """Exact rational value of a coordinate, or None if irrational/unknown."""
    if isinstance(c, RealRoot):
        return c.value
    return Fraction(c)


def coord_to_json(c) -> dict:
    if isinstance(c, RealRoot):
        return c.to_json()
    return {"value": str(Fraction(c))}


def coord_str(c, digits: int = 6) -> str:
    if isinstance(c, RealRoot):
        return c.approx(digits)
    return _fmt_fraction(Fraction(c))


def simplify_coord(c):
    """Replace exactly known roots by their rational value."""
    if isinstance(c, RealRoot) and c.value is not None:
        return c.value
    return c


class SamplePoint(tuple):
    """Coordinates (Fraction or RealRoot) for the first ``len`` variables."""

    def __new__(cls, coords: Iterable = ()):
        return super().__new__(cls, tuple(c if isinstance(c, RealRoot) else Fraction(c) for c in coords))

    @property
    def level(self) -> int:
        return len(self)

    def extend(self, c) -> "SamplePoint":
        return SamplePoint(tuple(self) + (c,))

    def is_rational(self) -> bool:
        return all(coord_value(c) is not None for c in self)

    def to_json(self) -> list:
        return [coord_to_json(c) for c in self]

    def __str__(self):
        return "(" + ", ".join(coord_str(c) for c in self) + ")"


# ----- helpers -------------------------------------------------------------


def _rationals(point: Sequence) -> Dict[int, Fraction]:
    out = {}
    for i, c in enumerate(point):
        if isinstance(c, RealRoot):
            if c.value is not None:
                out[i] = c.value
        else:
            out[i] = c
    return out


def _to_dense(p: Polynomial, var: int) -> List[int]:
    shift = BITS * var
    coeffs: Dict[int, Fraction] = {}
    for k, c in p.terms.items():
        if k & ~(FIELD << shift):
            raise ValueError("polynomial is not univariate in the given variable")
        coeffs[k >> shift] = c
    if not coeffs:
        return []
    return dense.from_rationals([coeffs.get(d, 0) for d in range(max(coeffs) + 1)])


def _from_dense(ring: VarOrder, var: int, p: Sequence[int]) -> Polynomial:
    return Polynomial.from_univariate(ring, var, list(p))


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _imul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


def _ipow(iv, e):
    lo, hi = iv
    if e % 2 == 0:
        if lo <= 0 <= hi:
            return Fraction(0), max(lo ** e, hi ** e)
        if hi < 0:
            return hi ** e, lo ** e
    return lo ** e, hi ** e


def enclose(q: Polynomial, point: Sequence) -> Tuple[Fraction, Fraction]:
    """Interval containing q(point); rational coordinates are used exactly."""
    ivs = {}
    for j in q.variables():
        c = point[j]
        if isinstance(c, RealRoot):
            with _LOCK:
                ivs[j] = (c.lo, c.hi) if c.value is None else (c.value, c.value)
        else:
            ivs[j] = (c, c)
    pows: Dict[Tuple[int, int], Tuple[Fraction, Fraction]] = {}
    lo = hi = Fraction(0)
    for k, c in q.terms.items():
        t = (Fraction(c), Fraction(c))
        for j, iv in ivs.items():
            e = (k >> (BITS * j)) & FIELD
            if e:
                pw = pows.get((j, e))
                if pw is None:
                    pw = _ipow(iv, e)
                    pows[(j, e)] = pw
                t = _imul(t, pw)
        lo += t[0]
        hi += t[1]
    return lo, hi


def _algebraic_vars(q: Polynomial, point: Sequence) -> List[int]:
    n = len(point)
    return [j for j in q.variables() if j < n and isinstance(point[j], RealRoot) and point[j].value is None]


def _check_point(p: Polynomial, point: Sequence) -> None:
    if p.main_var() >= len(point):
        raise ValueError(
            f"sample point of length {len(point)} does not cover {p.ring.names[p.main_var()]}")


# ----- exact signs -----------------------------------------------------------


def sign_at(p: Polynomial, point: Sequence) -> int:
    """Exact sign of ``p`` at a sample point covering its variables."""
    _check_point(p, point)
    q = p.substitute_many(_rationals(point))
    if q.is_constant():
        return _sgn(q.constant_value())
    for rounds in range(3):
        lo, hi = enclose(q, point)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        for j in _algebraic_vars(q, point):
            point[j].refine()
        q = q.substitute_many(_rationals(point))
        if q.is_constant():
            return _sgn(q.constant_value())
    if is_zero_at(q, point):
        return 0
    while True:
        lo, hi = enclose(q, point)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        for j in _algebraic_vars(q, point):
            point[j].refine()
        q = q.substitute_many(_rationals(point))
        if q.is_constant():
            return _sgn(q.constant_value())


def is_zero_at(p: Polynomial, point: Sequence) -> bool:
    """Exact test p(point) == 0, working over the tower of the algebraic coordinates."""
    _check_point(p, point)
    q = p.substitute_many(_rationals(point))
    if q.is_constant():
        return not q
    lo, hi = enclose(q, point)
    if lo > 0 or hi < 0:
        return False
    k = q.main_var()
    alpha = point[k]
    t = alpha.defining_polynomial()
    r = q
    if r.degree(k) >= t.degree(k):
        r = _prem(r, t, k)
    r = _reduce_tower(r, k, point)
    r = _strip(r, k, point)
    if not r:
        return True
    if r.degree(k) == 0:
        return is_zero_at(r, point)
    g = _gcd_over(t, r, k, point)
    if g.degree(k) <= 0:
        return False
    lo, hi = alpha.bounds()
    if alpha.value is not None:
        return is_zero_at(g, tuple(point[:k]) + (alpha.value,))
    base = tuple(point[:k])
    return sign_at(g, base + (lo,)) != sign_at(g, base + (hi,))


def _prem(a: Polynomial, b: Polynomial, k: int) -> Polynomial:
    return from_rec(rprem(to_rec(a, k), to_rec(b, k)), k, a.ring)


def _strip(p: Polynomial, k: int, point: Sequence) -> Polynomial:
    """Drop leading coefficients in ``k`` that vanish at the point."""
    while p and p.degree(k) > 0:
        d = p.degree(k)
        lc = p.coeff(k, d)
        if lc.is_constant() or not is_zero_at(lc, point):
            return p
        p = p - lc.mul_var(k, d)
    return p


def _reduce_tower(p: Polynomial, k: int, point: Sequence, track_sign: bool = False):
    """Reduce the coefficients of ``p`` modulo the defining polynomials below ``k``.

    Each step multiplies by a power of a leading coefficient that is nonzero
    at the point; with ``track_sign`` the result keeps the sign of ``p``.
    """
    for j in reversed(range(k)):
        c = point[j]
        if not isinstance(c, RealRoot) or c.value is not None or not p.has_var(j):
            continue
        t = c.defining_polynomial()
        dt = t.degree(j)
        dp = p.degree(j)
        if dp < dt:
            continue
        p = _prem(p, t, j)
        if track_sign:
            e = dp - dt + 1
            if e % 2 and sign_at(t.coeff(j, dt), point) < 0:
                p = -p
    return p.primitive_integer() if p else p


def _gcd_over(a: Polynomial, b: Polynomial, k: int, point: Sequence) -> Polynomial:
    """A gcd in ``k`` over the field generated by the algebraic coordinates below ``k``."""
    a = _strip(a, k, point)
    b = _strip(b, k, point)
    if b.degree(k) > a.degree(k):
        a, b = b, a
    while True:
        if not b or (b.degree(k) == 0 and is_zero_at(b, point)):
            return a.primitive_integer()
        if b.degree(k) == 0:
            return a.ring.one()
        r = _prem(a, b, k)
        r = _reduce_tower(r, k, point)
        r = _strip(r, k, point)
        a, b = b, r


# ----- univariate isolation over Q ---------------------------------------------


def _descartes_positive(p: List[int]) -> List[Tuple[Fraction, Fraction]]:
    """Isolate the positive roots of a square-free integer polynomial with p(0) != 0."""
    if len(p) <= 1:
        return []
    bound = dense.cauchy_bound(p)
    B = 1
    while B < bound:
        B *= 2
    q = dense.scale_arg(p, B, 1)
    out = []
    stack = [(q, Fraction(0), Fraction(B))]
    while stack:
        q, lo, hi = stack.pop()
        v = dense.sign_variations(dense.taylor_shift(dense.reverse(q), 1))
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        ql = dense.scale_arg(q, 1, 2)
        qr = dense.taylor_shift(ql, 1)
        if qr[0] == 0:
            out.append((mid, mid))
            qr = qr[1:]
            ql = _deflate_at_one(ql)
        stack.append((ql, lo, mid))
        stack.append((qr, mid, hi))
    return out


def _deflate_at_one(p: List[int]) -> List[int]:
    """Quotient of p by (x - 1), assuming p(1) == 0."""
    n = len(p) - 1
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = acc + p[i]
        q[i - 1] = acc
    return q


def _tighten(p: List[int], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink (lo, hi), holding exactly one simple root, until endpoints are not roots."""
    slo = dense.sign_at(p, lo)
    shi = dense.sign_at(p, hi)
    if slo and shi:
        return lo, hi
    dp = dense.derivative(p)
    right_of_lo = slo if slo else dense.sign_at(dp, lo)
    while True:
        m = (lo + hi) / 2
        sm = dense.sign_at(p, m)
        if sm == 0:
            return m, m
        if sm != right_of_lo:
            hi = m
        else:
            lo = m
            right_of_lo = sm
        if dense.sign_at(p, lo) and dense.sign_at(p, hi):
            return lo, hi


def isolate_dense(p: Sequence[int]) -> List[Tuple[Fraction, Fraction]]:
    """Isolating intervals of the real roots of an integer polynomial, increasing.

    Exact rational roots found along the way are returned as (r, r); other
    intervals are open, hold exactly one root, and have non-root endpoints.
    """
    p = dense.squarefree_part(dense.trim(p))
    if len(p) <= 1:
        return []
    full = p
    roots: List[Tuple[Fraction, Fraction]] = []
    if p[0] == 0:
        roots.append((Fraction(0), Fraction(0)))
        p = p[1:]
    for lo, hi in _descartes_positive(p):
        roots.append((lo, hi))
    neg = [c if i % 2 == 0 else -c for i, c in enumerate(p)]
    for lo, hi in _descartes_positive(neg):
        roots.append((-hi, -lo))
    out = []
    for lo, hi in roots:
        if lo != hi:
            lo, hi = _tighten(full, lo, hi)
        if lo != hi:
            lo, hi = _rational_root_check(full, lo, hi)
        out.append((lo, hi))
    out.sort()
    return out


def _rational_root_check(p: List[int], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Detect a rational root in (lo, hi); its denominator must divide lc(p)."""
    lc = abs(p[-1])
    slo = dense.sign_at(p, lo)
    while (hi - lo) * lc >= 1:
        m = (lo + hi) / 2
        sm = dense.sign_at(p, m)
        if sm == 0:
            return m, m
        if sm == slo:
            lo = m
        else:
            hi = m
    for a in (math.floor(lo * lc), math.ceil(hi * lc)):
        r = Fraction(a, lc)
        if lo < r < hi and dense.sign_at(p, r) == 0:
            return r, r
    return lo, hi


def sturm_sequence(p: Sequence[int]) -> List[List[int]]:
    seq = [dense.trim(p), dense.derivative(dense.trim(p))]
    while len(seq[-1]) > 1:
        r = dense.prem(seq[-2], seq[-1])
        lc = seq[-1][-1]
        e = len(seq[-2]) - len(seq[-1]) + 1
        if lc < 0 and e % 2:
            r = dense.neg(r)
        r = dense.trim(r)
        if not r:
            break
        g = dense.content(r)
        seq.append([-c // g for c in r])
    return seq


def sturm_count(p: Sequence[int], a=None, b=None) -> int:
    """Distinct real roots of p in (a, b] (None means infinite)."""
    seq = sturm_sequence(p)

    def var_at(x):
        if x is None:
            return None
        return dense.sign_variations([dense.sign_at(s, x) for s in seq])

    def var_inf(sign):
        signs = []
        for s in seq:
            d = len(s) - 1
            signs.append(_sgn(s[-1]) * (sign ** d))
        return dense.sign_variations(signs)

    va = var_inf(-1) if a is None else var_at(a)
    vb = var_inf(1) if b is None else var_at(b)
    return va - vb


def isolate_roots(f: Polynomial) -> List[RealRoot]:
    """Real roots of a univariate polynomial over Q, increasing."""
    if not f:
        raise ValueError("cannot isolate the roots of the zero polynomial")
    vs = f.variables()
    if len(vs) > 1:
        raise ValueError("isolate_roots expects a univariate polynomial")
    if not vs:
        return []
    v = vs[0]
    p = dense.squarefree_part(_to_dense(f, v))
    poly = _from_dense(f.ring, v, p)
    out = []
    for lo, hi in isolate_dense(p):
        if lo == hi:
            out.append(RealRoot.rational(f.ring, v, lo))
        else:
            out.append(RealRoot(poly, v, (), lo, hi))
    return out


# ----- comparison ------------------------------------------------------------------


def _enclosure(c) -> Tuple[Fraction, Fraction, bool]:
    if isinstance(c, RealRoot):
        with _LOCK:
            if c.value is not None:
                return c.value, c.value, True
            return c.lo, c.hi, False
    c = Fraction(c)
    return c, c, True


def _cmp_exact_root(x: Fraction, r: RealRoot) -> int:
    """Compare rational x with a root r strictly by exact sign reasoning."""
    lo, hi = r.bounds()
    if r.value is not None:
        return _sgn(x - r.value)
    if x <= lo:
        return -1
    if x >= hi:
        return 1
    s = r._sign(x)
    if s == 0:
        return 0
    return -1 if s == r.slo else 1


def compare_in_fibre(a, b, max_rounds: int = 12) -> int:
    """Order two coordinates of the same variable over the same prefix."""
    for _ in range(max_rounds):
        alo, ahi, aex = _enclosure(a)
        blo, bhi, bex = _enclosure(b)
        if aex and bex:
            return _sgn(alo - blo)
        if aex:
            return _cmp_exact_root(alo, b)
        if bex:
            return -_cmp_exact_root(blo, a)
        if ahi <= blo:
            return -1
        if bhi <= alo:
            return 1
        a.refine()
        b.refine()
    if _same_root(a, b):
        return 0
    while True:
        a.refine()
        b.refine()
        r = _disjoint_order(a, b)
        if r is not None:
            return r


def _disjoint_order(a, b) -> Optional[int]:
    alo, ahi, aex = _enclosure(a)
    blo, bhi, bex = _enclosure(b)
    if aex and bex:
        return _sgn(alo - blo)
    if aex:
        return _cmp_exact_root(alo, b)
    if bex:
        return -_cmp_exact_root(blo, a)
    if ahi <= blo:
        return -1
    if bhi <= alo:
        return 1
    return None


def _same_root(a: RealRoot, b: RealRoot) -> bool:
    """Exact equality of two roots in the same fibre."""
    if a.var != b.var:
        raise ValueError("roots of different variables")
    point = tuple(b.prefix) + (a,)
    if a.prefix != b.prefix:
        raise ValueError("roots over different sample points")
    if not is_zero_at(b.poly, point):
        return False
    # a is a root of b.poly; it is b iff it lies in b's isolating interval
    while True:
        alo, ahi, aex = _enclosure(a)
        blo, bhi, bex = _enclosure(b)
        if bex:
            return a.value is not None and a.value == b.value
        if aex:
            return blo < alo < bhi
        if blo < alo and ahi < bhi:
            return True
        if ahi <= blo or bhi <= alo:
            return False
        a.refine()


def compare(a, b) -> int:
    """Exact order of two real algebraic numbers: -1, 0 or 1.

    Standalone numbers (no prefix) are compared through the gcd of their
    defining polynomials; coordinates of a common fibre by exact zero tests.
    """
    if isinstance(a, RealRoot) and isinstance(b, RealRoot) and not a.prefix and not b.prefix:
        return _compare_standalone(a, b)
    if not isinstance(a, RealRoot) and not isinstance(b, RealRoot):
        return _sgn(Fraction(a) - Fraction(b))
    if not isinstance(a, RealRoot):
        return _cmp_exact_root(Fraction(a), b) if b.value is None else _sgn(Fraction(a) - b.value)
    if not isinstance(b, RealRoot):
        return -compare(b, a)
    return compare_in_fibre(a, b)


def _compare_standalone(a: RealRoot, b: RealRoot) -> int:
    for _ in range(8):
        r = _disjoint_order(a, b)
        if r is not None:
            return r
        a.refine()
        b.refine()
    pa = a.minimal_rational_polynomial()
    pb = b.minimal_rational_polynomial()
    g = dense.gcd(pa, pb)
    if len(g) > 1:
        alo, ahi, _ = _enclosure(a)
        blo, bhi, _ = _enclosure(b)
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo < hi and dense.sign_at(g, lo) * dense.sign_at(g, hi) < 0:
            return 0
    while True:
        a.refine()
        b.refine()
        r = _disjoint_order(a, b)
        if r is not None:
            return r


# ----- roots over a sample point ---------------------------------------------------


def roots_over_sample(f: Polynomial, point: Sequence) -> List[Coord]:
    """Real roots in the next variable of the Lazard residue of f over ``point``.

    Returns coordinates in increasing order: Fractions for roots found to be
    rational, RealRoot objects otherwise.
    """
    from .valuation import residue_at

    if not f:
        raise ValueError("roots of the zero polynomial")
    k = len(point)
    if f.main_var() > k:
        raise ValueError("polynomial involves variables beyond the next level")
    residue, _ = residue_at(f, point)
    return roots_of_residue(residue, point)


def roots_of_residue(F: Polynomial, point: Sequence) -> List[Coord]:
    """Roots of F(point, x_k) where F is not identically zero over the point."""
    k = len(point)
    point = tuple(point)
    F = F.substitute_many(_rationals(point))
    F = _strip(F, k, point)
    if F.degree(k) <= 0:
        return []
    if not _algebraic_vars(F, point):
        p = _to_dense(F, k)
        sq = dense.squarefree_part(p)
        poly = _from_dense(F.ring, k, sq)
        out = []
        for lo, hi in isolate_dense(sq):
            out.append(lo if lo == hi else RealRoot(poly, k, point, lo, hi))
        return out
    q = _squarefree_over(F, k, point)
    if q.degree(k) == 1:
        return _linear_root(q, k, point)
    tower = 1
    for j in _algebraic_vars(q, point):
        tower *= point[j].defining_polynomial().degree(j)
    if tower * q.degree(k) <= RESULTANT_ROUTE_LIMIT:
        roots = _roots_by_resultant(q, k, point)
        if roots is not None:
            return roots
    return _roots_by_sturm(q, k, point)


def _squarefree_over(F: Polynomial, k: int, point) -> Polynomial:
    F = _reduce_tower(F, k, point)
    F = _strip(F, k, point)
    g = _gcd_over(F, F.derivative(k), k, point)
    if g.degree(k) <= 0:
        return F
    q, _ = rprem_quo(to_rec(F, k), to_rec(g, k))
    q = from_rec(q, k, F.ring)
    q = _reduce_tower(q, k, point)
    return _strip(q, k, point)


def _linear_root(q: Polynomial, k: int, point) -> List[Coord]:
    """Root of a ∙ x + b over the point; exact when a and b are rational there."""
    a = q.coeff(k, 1)
    b = q.coeff(k, 0)
    if not _algebraic_vars(a, point) and not _algebraic_vars(b, point):
        rat = _rationals(point)
        return [-Fraction(b.substitute_many(rat).constant_value()) / Fraction(a.substitute_many(rat).constant_value())]
    # enclose -b/a and widen until the endpoints have opposite signs
    while True:
        alo, ahi = enclose(a, point)
        blo, bhi = enclose(b, point)
        if alo > 0 or ahi < 0:
            cands = [-x / y for x in (blo, bhi) for y in (alo, ahi)]
            lo, hi = min(cands), max(cands)
            w = max(hi - lo, Fraction(1, 1 << 20))
            lo, hi = lo - w, hi + w
            slo = sign_at(q, point + (lo,))
            shi = sign_at(q, point + (hi,))
            if slo and shi and slo != shi:
                return [RealRoot(q, k, point, lo, hi, slo=slo)]
        for j in set(_algebraic_vars(a, point)) | set(_algebraic_vars(b, point)):
            point[j].refine()


def _roots_by_resultant(q: Polynomial, k: int, point) -> Optional[List[Coord]]:
    from .elim import resultant

    R = q
    for j in reversed(range(k)):
        c = point[j]
        if isinstance(c, RealRoot) and c.value is None and R.has_var(j):
            R = resultant(R, c.defining_polynomial(), j)
            if not R:
                return None
    R = R.substitute_many(_rationals(point))
    if not R or _algebraic_vars(R, point):
        return None
    out: List[Coord] = []
    for lo, hi in isolate_dense(_to_dense(R, k)):
        if lo == hi:
            if is_zero_at(q, point + (lo,)):
                out.append(lo)
            continue
        slo = sign_at(q, point + (lo,))
        shi = sign_at(q, point + (hi,))
        if slo != shi:
            out.append(RealRoot(q, k, point, lo, hi, slo=slo))
    return out


def _sturm_over(q: Polynomial, k: int, point) -> List[Polynomial]:
    seq = [q, _strip(q.derivative(k), k, point)]
    while seq[-1].degree(k) > 0:
        a, b = seq[-2], seq[-1]
        r = _prem(a, b, k)
        e = a.degree(k) - b.degree(k) + 1
        if e % 2 and sign_at(b.coeff(k, b.degree(k)), point) < 0:
            r = -r
        r = _reduce_tower(r, k, point, track_sign=True)
        r = _strip(r, k, point)
        if not r or (r.degree(k) == 0 and is_zero_at(r, point)):
            break
        seq.append(-r)
    return seq


def _root_bound(q: Polynomial, k: int, point) -> Fraction:
    d = q.degree(k)
    lc = q.coeff(k, d)
    while True:
        lo, hi = enclose(lc, point)
        if lo > 0 or hi < 0:
            break
        for j in _algebraic_vars(lc, point):
            point[j].refine()
    low = min(abs(lo), abs(hi))
    top = Fraction(0)
    for i in range(d):
        clo, chi = enclose(q.coeff(k, i), point)
        top = max(top, abs(clo), abs(chi))
    return Fraction(math.ceil(1 + top / low))


def _roots_by_sturm(q: Polynomial, k: int, point) -> List[Coord]:
    seq = _sturm_over(q, k, point)

    def variations(x):
        return dense.sign_variations([sign_at(s, point + (x,)) for s in seq])

    B = _root_bound(q, k, point)
    out: List[Coord] = []
    todo = [(-B, B, variations(-B), variations(B))]
    while todo:
        a, b, va, vb = todo.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            slo = sign_at(q, point + (a,))
            if sign_at(q, point + (b,)) == 0:
                out.append(b)
            else:
                out.append(RealRoot(q, k, point, a, b, slo=slo))
            continue
        w = b - a
        m = simplest_between(a + w * Fraction(3, 8), b - w * Fraction(3, 8))
        step = 1
        while sign_at(q, point + (m,)) == 0:
            m = a + w * Fraction(step, step + 2)
            step += 1
        vm = variations(m)
        todo.append((a, m, va, vm))
        todo.append((m, b, vm, vb))
    out.sort(key=lambda c: _enclosure(c)[0])
    return out


def sort_roots(roots: List[Coord]) -> List[Coord]:
    """Sort coordinates of one fibre, merging equal ones."""
    from functools import cmp_to_key

    merged: List[Coord] = []
    for r in sorted(roots, key=cmp_to_key(compare_in_fibre)):
        if merged and compare_in_fibre(merged[-1], r) == 0:
            if isinstance(r, Fraction) or (isinstance(r, RealRoot) and r.value is not None):
                merged[-1] = simplify_coord(r)
            continue
        merged.append(simplify_coord(r))
    return merged


def separate(roots: List[Coord]) -> None:
    """Refine sorted distinct roots until consecutive enclosures are disjoint."""
    for i in range(len(roots) - 1):
        a, b = roots[i], roots[i + 1]
        while True:
            alo, ahi, aex = _enclosure(a)
            blo, bhi, bex = _enclosure(b)
            if ahi < blo or (ahi == blo and not aex and not bex):
                break
            if not aex:
                a.refine()
            if not bex:
                b.refine()


def sector_samples(roots: List[Coord]) -> List[Fraction]:
    """Rational samples below, between and above sorted distinct roots."""
    if not roots:
        return [Fraction(0)]
    separate(roots)
    encl = [_enclosure(r) for r in roots]
    out = [Fraction(math.floor(encl[0][0]) - 1)]
    for (alo, ahi, aex), (blo, bhi, bex) in zip(encl, encl[1:]):
        lo, hi = ahi, blo
        if lo == hi:
            out.append(lo)
            continue
        w = hi - lo
        out.append(simplest_between(lo + (w / 4 if aex else 0), hi - (w / 4 if bex else 0)))
    out.append(Fraction(math.ceil(encl[-1][1]) + 1))
    return out
