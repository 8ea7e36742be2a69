"""Sparse multivariate polynomials with exact rational coefficients.

Exponent vectors are packed into a single Python int, ``BITS`` bits per
variable, with variable 0 (the least variable) in the lowest field.  Integer
comparison of packed keys is then lexicographic order with the greatest
variable most significant, which is the recursive order used throughout CAD.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

BITS = 24
FIELD = (1 << BITS) - 1
GUARD = 1 << (BITS - 1)

Coeff = Union[int, Fraction]


def _as_coeff(c) -> Coeff:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _as_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class VarOrder:
    """Ordered variables; position 0 is the least variable."""

    __slots__ = ("names", "n", "_index", "guard")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("variable order must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not isinstance(name, str) or not name.isidentifier():
                raise ValueError(f"invalid variable name {name!r}")
        self.names = names
        self.n = len(names)
        self._index = {name: i for i, name in enumerate(names)}
        self.guard = sum(GUARD << (BITS * i) for i in range(self.n))

    def __eq__(self, other):
        return isinstance(other, VarOrder) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"VarOrder({' < '.join(self.names)})"

    def position(self, v: Union[str, int]) -> int:
        """Index of a variable given by name or index."""
        if isinstance(v, int):
            if not 0 <= v < self.n:
                raise IndexError(f"variable index {v} out of range")
            return v
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown variable {v!r} (order is {self.names})") from None

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        for i, e in enumerate(exps):
            if e:
                if not 0 < e < GUARD:
                    raise ValueError(f"exponent {e} out of range")
                key |= e << (BITS * i)
        return key

    def unpack(self, key: int) -> Tuple[int, ...]:
        return tuple((key >> (BITS * i)) & FIELD for i in range(self.n))

    def var(self, v: Union[str, int]) -> "Polynomial":
        i = self.position(v)
        return Polynomial(self, {1 << (BITS * i): 1})

    def const(self, c) -> "Polynomial":
        c = _as_coeff(c)
        return Polynomial(self, {0: c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.n))

    def parse(self, text: str) -> "Polynomial":
        from .parse import parse_polynomial

        return parse_polynomial(text, self)


def exp_of(key: int, i: int) -> int:
    """Exponent of variable ``i`` in a packed key."""
    return (key >> (BITS * i)) & FIELD


class Polynomial:
    """Immutable sparse polynomial over the rationals.

    ``terms`` maps packed exponent keys to nonzero int/Fraction coefficients.
    """

    __slots__ = ("ring", "terms", "_hash", "_mask")

    def __init__(self, ring: VarOrder, terms: Mapping[int, Coeff] | None = None):
        self.ring = ring
        clean = {}
        if terms:
            for k, c in terms.items():
                c = _as_coeff(c)
                if c:
                    clean[k] = c
        self.terms = clean
        self._hash = None
        self._mask = None

    @classmethod
    def _raw(cls, ring: VarOrder, terms: Dict[int, Coeff]) -> "Polynomial":
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        p._mask = None
        return p

    @classmethod
    def from_dict(cls, ring: VarOrder, data: Mapping[Tuple[int, ...], Coeff]) -> "Polynomial":
        return cls(ring, {ring.pack(e): c for e, c in data.items()})

    @classmethod
    def from_univariate(cls, ring: VarOrder, v, coeffs: Sequence) -> "Polynomial":
        """Build from coefficients listed from degree 0 upwards."""
        i = ring.position(v)
        if coeffs and isinstance(coeffs[0], Polynomial):
            out: Dict[int, Coeff] = {}
            for d, c in enumerate(coeffs):
                shift = d << (BITS * i)
                for k, a in c.terms.items():
                    out[k + shift] = a
            return cls._raw(ring, out)
        return cls(ring, {d << (BITS * i): c for d, c in enumerate(coeffs)})

    # ----- basic queries -------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and 0 in t)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, 0)

    def mask(self) -> int:
        m = self._mask
        if m is None:
            m = 0
            for k in self.terms:
                m |= k
            self._mask = m
        return m

    def variables(self) -> Tuple[int, ...]:
        m = self.mask()
        return tuple(i for i in range(self.ring.n) if (m >> (BITS * i)) & FIELD)

    def has_var(self, i: int) -> bool:
        return bool((self.mask() >> (BITS * i)) & FIELD)

    def main_var(self) -> int:
        """Index of the greatest variable present, -1 for constants."""
        m = self.mask()
        if not m:
            return -1
        return (m.bit_length() - 1) // BITS

    def level(self) -> int:
        """1-based level of the main variable, 0 for constants."""
        return self.main_var() + 1

    def degree(self, v=None) -> int:
        """Degree in ``v`` (default: main variable); 0 for constants, -1 for zero."""
        if not self.terms:
            return -1
        i = self.main_var() if v is None else self.ring.position(v)
        if i < 0:
            return 0
        shift = BITS * i
        return max((k >> shift) & FIELD for k in self.terms)

    def degrees(self) -> Tuple[int, ...]:
        n = self.ring.n
        out = [0] * n
        for k in self.terms:
            for i in range(n):
                e = (k >> (BITS * i)) & FIELD
                if e > out[i]:
                    out[i] = e
        return tuple(out)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        n = self.ring.n
        return max(sum((k >> (BITS * i)) & FIELD for i in range(n)) for k in self.terms)

    def lead_key(self) -> int:
        return max(self.terms)

    def lead_coeff_scalar(self) -> Coeff:
        """Coefficient of the lexicographically leading term."""
        return self.terms[max(self.terms)]

    # ----- recursive view --------------------------------------------------

    def coeffs(self, v) -> Dict[int, "Polynomial"]:
        """Map degree -> coefficient polynomial when viewed in ``v``."""
        i = self.ring.position(v)
        shift = BITS * i
        groups: Dict[int, Dict[int, Coeff]] = {}
        for k, c in self.terms.items():
            d = (k >> shift) & FIELD
            groups.setdefault(d, {})[k & ~(FIELD << shift)] = c
        ring = self.ring
        return {d: Polynomial._raw(ring, t) for d, t in groups.items()}

    def coeff_list(self, v) -> list:
        """Dense list of coefficient polynomials in ``v``, degree 0 first."""
        cs = self.coeffs(v)
        if not cs:
            return []
        zero = Polynomial._raw(self.ring, {})
        return [cs.get(d, zero) for d in range(max(cs) + 1)]

    def coeff(self, v, d: int) -> "Polynomial":
        i = self.ring.position(v)
        shift = BITS * i
        out = {k & ~(FIELD << shift): c for k, c in self.terms.items() if (k >> shift) & FIELD == d}
        return Polynomial._raw(self.ring, out)

    def leading_coeff(self, v=None) -> "Polynomial":
        if not self.terms:
            return self
        i = self.main_var() if v is None else self.ring.position(v)
        if i < 0:
            return self
        return self.coeff(i, self.degree(i))

    def trailing_coeff(self, v=None) -> "Polynomial":
        if not self.terms:
            return self
        i = self.main_var() if v is None else self.ring.position(v)
        if i < 0:
            return self
        return self.coeff(i, 0)

    lc = leading_coeff
    tc = trailing_coeff

    # ----- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials belong to different variable orders")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self.ring.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {k: -c for k, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self.ring.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) - c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial._raw(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = _as_coeff(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial._raw(self.ring, {})
            return Polynomial._raw(self.ring, {k: a * c for k, a in self.terms.items()})
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[int, Coeff] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Polynomial._raw(self.ring, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.is_constant() and other:
                other = other.constant_value()
            else:
                q = divide_exact(self, other)
                if q is None:
                    raise ArithmeticError("inexact polynomial division")
                return q
        c = _as_coeff(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        out = {}
        for k, a in self.terms.items():
            if isinstance(a, int) and isinstance(c, int) and a % c == 0:
                out[k] = a // c
            else:
                out[k] = _as_coeff(Fraction(a) / c)
        return Polynomial._raw(self.ring, out)

    def scale(self, c) -> "Polynomial":
        return self * c

    def mul_term(self, key: int, c: Coeff) -> "Polynomial":
        return Polynomial._raw(self.ring, {k + key: a * c for k, a in self.terms.items()})

    def mul_var(self, i: int, e: int = 1) -> "Polynomial":
        return self.mul_term(e << (BITS * i), 1)

    # ----- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms and self.ring == other.ring
        try:
            c = _as_coeff(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            self._hash = h
        return h

    def sort_key(self):
        """Deterministic ordering key: level, degree, size, then terms."""
        items = tuple(sorted(((k, (c.numerator, c.denominator) if isinstance(c, Fraction) else (c, 1))
                              for k, c in self.terms.items()), reverse=True))
        return (self.main_var(), self.degree(), self.total_degree(), len(self.terms), items)

    # ----- calculus and substitution --------------------------------------

    def derivative(self, v, order: int = 1) -> "Polynomial":
        i = self.ring.position(v)
        shift = BITS * i
        out: Dict[int, Coeff] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & FIELD
            if e >= order:
                f = 1
                for j in range(order):
                    f *= e - j
                out[k - (order << shift)] = c * f
        return Polynomial._raw(self.ring, out)

    def taylor_coeff(self, v, order: int) -> "Polynomial":
        """The ``order``-th derivative divided by ``order!``."""
        i = self.ring.position(v)
        shift = BITS * i
        out: Dict[int, Coeff] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & FIELD
            if e >= order:
                out[k - (order << shift)] = c * _binom(e, order)
        return Polynomial._raw(self.ring, out)

    def substitute(self, v, value) -> "Polynomial":
        """Replace variable ``v`` by a rational number or a polynomial."""
        i = self.ring.position(v)
        shift = BITS * i
        fmask = FIELD << shift
        if isinstance(value, Polynomial):
            if value == self.ring.var(i):
                return self
            if value.is_constant():
                value = value.constant_value()
            else:
                result = self.ring.zero()
                for d, c in self.coeffs(i).items():
                    result = result + c * value ** d
                return result
        value = _as_coeff(value)
        out: Dict[int, Coeff] = {}
        cache: Dict[int, Coeff] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & FIELD
            if e:
                p = cache.get(e)
                if p is None:
                    p = value ** e
                    cache[e] = p
                if not p:
                    continue
                c = c * p
                k &= ~fmask
            nv = out.get(k, 0) + c
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return Polynomial._raw(self.ring, {k: _as_coeff(c) for k, c in out.items()})

    def substitute_many(self, values: Mapping[int, Coeff]) -> "Polynomial":
        """Substitute several variables (by index) with rationals at once."""
        if not values:
            return self
        items = [(BITS * i, FIELD << (BITS * i), _as_coeff(c)) for i, c in values.items()]
        clear = 0
        for _, fm, _ in items:
            clear |= fm
        out: Dict[int, Coeff] = {}
        for k, c in self.terms.items():
            for shift, fm, val in items:
                e = (k >> shift) & FIELD
                if e:
                    c = c * val ** e
                    if not c:
                        break
            if not c:
                continue
            k &= ~clear
            nv = out.get(k, 0) + c
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return Polynomial._raw(self.ring, {k: _as_coeff(c) for k, c in out.items()})

    def evaluate(self, point: Mapping[int, Coeff] | Sequence[Coeff]) -> Coeff:
        """Evaluate at a full rational assignment."""
        if not isinstance(point, Mapping):
            point = dict(enumerate(point))
        p = self.substitute_many(point)
        if not p.is_constant():
            raise ValueError("evaluation point does not cover all variables")
        return p.constant_value()

    def change_ring(self, ring: VarOrder) -> "Polynomial":
        """Re-express in another order containing all variables by name."""
        if ring == self.ring:
            return self
        src = self.ring
        used = self.variables()
        perm = {i: ring.position(src.names[i]) for i in used}
        out = {}
        for k, c in self.terms.items():
            nk = 0
            for i in used:
                e = (k >> (BITS * i)) & FIELD
                if e:
                    nk |= e << (BITS * perm[i])
            out[nk] = c
        return Polynomial._raw(ring, out)

    # ----- normalization ---------------------------------------------------

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def integer_content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            if isinstance(c, int):
                num = igcd(num, c)
            else:
                num = igcd(num, c.numerator)
                den = den * c.denominator // igcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_integer(self) -> "Polynomial":
        """Integral primitive associate (sign unchanged)."""
        if not self.terms:
            return self
        c = self.integer_content()
        if c == 1:
            return self
        if c.denominator == 1:
            n = c.numerator
            return Polynomial._raw(self.ring, {k: a // n for k, a in self.terms.items()})
        return Polynomial._raw(self.ring, {k: _as_coeff(a / c) for k, a in self.terms.items()})

    def normalized(self) -> "Polynomial":
        """Canonical associate: integral, primitive, positive leading coefficient."""
        if not self.terms:
            return self
        p = self.primitive_integer()
        if p.terms[max(p.terms)] < 0:
            p = -p
        return p

    def monic(self) -> "Polynomial":
        return self / self.terms[max(self.terms)]

    # ----- printing --------------------------------------------------------

    def monomial_str(self, key: int) -> str:
        parts = []
        for i, name in enumerate(self.ring.names):
            e = (key >> (BITS * i)) & FIELD
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mono = self.monomial_str(k)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __iter__(self) -> Iterator[Tuple[Tuple[int, ...], Coeff]]:
        unpack = self.ring.unpack
        for k in sorted(self.terms, reverse=True):
            yield unpack(k), self.terms[k]


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def divides_monomial(ring: VarOrder, a: int, b: int) -> bool:
    """True iff monomial ``b`` divides monomial ``a``."""
    d = a - b
    return d >= 0 and not (d & ring.guard)


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """Quotient a/b if b divides a exactly over Q, else None."""
    if not b.terms:
        raise ZeroDivisionError("division by zero polynomial")
    if not a.terms:
        return a
    ring = a.ring
    guard = ring.guard
    bt = b.terms
    bk = max(bt)
    bc = bt[bk]
    for i in b.variables():
        if a.degree(i) < b.degree(i):
            return None
    r = dict(a.terms)
    q: Dict[int, Coeff] = {}
    others = [(k - bk, c) for k, c in bt.items() if k != bk]
    while r:
        k = max(r)
        d = k - bk
        if d < 0 or d & guard:
            return None
        c = r.pop(k)
        if isinstance(c, int) and isinstance(bc, int) and c % bc == 0:
            c = c // bc
        else:
            c = _as_coeff(Fraction(c) / bc)
        q[d] = c
        for off, cb in others:
            kk = k + off
            v = r.get(kk, 0) - c * cb
            if v:
                r[kk] = v
            else:
                r.pop(kk, None)
    return Polynomial._raw(ring, q)
