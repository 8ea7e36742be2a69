"""Dense univariate integer polynomials as coefficient lists, lowest degree first."""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import List, Sequence

DensePoly = List[int]


def trim(p: Sequence[int]) -> DensePoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[int]) -> int:
    return len(p) - 1


def content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = igcd(g, c)
        if g == 1:
            break
    return g


def primitive(p: Sequence[int]) -> DensePoly:
    """Primitive part with positive leading coefficient."""
    p = trim(p)
    if not p:
        return p
    g = content(p)
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def from_rationals(coeffs: Sequence) -> DensePoly:
    """Clear denominators of a rational coefficient list."""
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // igcd(den, c.denominator)
    return [int(c * den) for c in coeffs]


def neg(p: Sequence[int]) -> DensePoly:
    return [-c for c in p]


def add(p: Sequence[int], q: Sequence[int]) -> DensePoly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def sub(p: Sequence[int], q: Sequence[int]) -> DensePoly:
    return add(p, neg(q))


def mul(p: Sequence[int], q: Sequence[int]) -> DensePoly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def derivative(p: Sequence[int]) -> DensePoly:
    return [i * p[i] for i in range(1, len(p))]


def prem(a: Sequence[int], b: Sequence[int]) -> DensePoly:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [x * lb for x in a]
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a.pop()
        a = trim(a)
        e -= 1
    if e > 0 and a:
        f = lb ** e
        a = [x * f for x in a]
    return a


def divexact(a: Sequence[int], b: Sequence[int]) -> DensePoly:
    """Exact quotient a/b over Z; raises if not exact."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        c, r = divmod(a[-1], lb)
        if r:
            raise ArithmeticError("inexact integer polynomial division")
        shift = len(a) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = trim(a)
    if a:
        raise ArithmeticError("inexact integer polynomial division")
    return q


def gcd(a: Sequence[int], b: Sequence[int]) -> DensePoly:
    """Primitive gcd over Q[x] (positive leading coefficient)."""
    a, b = primitive(a), primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = prem(a, b)
        a, b = b, primitive(r)
    return primitive(a)


def squarefree_part(p: Sequence[int]) -> DensePoly:
    p = primitive(p)
    if len(p) <= 2:
        return p
    g = gcd(p, derivative(p))
    if len(g) == 1:
        return p
    return primitive(divexact(p, g))


def eval_int(p: Sequence[int], x: int) -> int:
    r = 0
    for c in reversed(p):
        r = r * x + c
    return r


def eval_frac(p: Sequence[int], num: int, den: int) -> int:
    """den^deg(p) * p(num/den), an integer with the sign of p(num/den) when den > 0."""
    r = 0
    d = 1
    for c in reversed(p):
        r = r * num + c * d
        d *= den
    return r


def sign_at(p: Sequence[int], x: Fraction) -> int:
    x = Fraction(x)
    v = eval_frac(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def taylor_shift(p: Sequence[int], a: int = 1) -> DensePoly:
    """Coefficients of p(x + a)."""
    q = list(p)
    n = len(q)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            q[j] += a * q[j + 1]
    return q


def scale_arg(p: Sequence[int], num: int, den: int = 1) -> DensePoly:
    """Coefficients of den^deg * p(num/den * x)."""
    n = len(p) - 1
    return [c * num ** i * den ** (n - i) for i, c in enumerate(p)]


def reverse(p: Sequence[int]) -> DensePoly:
    return list(reversed(p))


def sign_variations(p: Sequence[int]) -> int:
    v = 0
    last = 0
    for c in p:
        if c:
            if last and (c > 0) != (last > 0):
                v += 1
            last = c
    return v


def cauchy_bound(p: Sequence[int]) -> Fraction:
    """Bound B with every complex root of p satisfying |z| < B."""
    lc = abs(p[-1])
    return 1 + Fraction(max((abs(c) for c in p[:-1]), default=0), lc)
