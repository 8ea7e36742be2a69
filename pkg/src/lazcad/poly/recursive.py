"""Polynomials viewed as univariate in one variable over the remaining ones.

A recursive polynomial is a list of coefficient ``Polynomial`` objects, lowest
degree first, none of which involve the distinguished variable.
"""

from __future__ import annotations

from typing import List

from .ring import BITS, Polynomial, divide_exact

RecPoly = List[Polynomial]


def to_rec(p: Polynomial, v: int) -> RecPoly:
    return p.coeff_list(v)


def from_rec(r: RecPoly, v: int, ring) -> Polynomial:
    out = {}
    shift = BITS * v
    for d, c in enumerate(r):
        off = d << shift
        for k, a in c.terms.items():
            out[k + off] = a
    return Polynomial._raw(ring, out)


def rtrim(r: RecPoly) -> RecPoly:
    while r and not r[-1]:
        r.pop()
    return r


def rdeg(r: RecPoly) -> int:
    return len(r) - 1


def rprem(a: RecPoly, b: RecPoly) -> RecPoly:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) a mod b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    if e <= 0:
        return a
    lb_is_one = lb == 1
    while a and len(a) - 1 >= db:
        c = a[-1]
        shift = len(a) - 1 - db
        if not lb_is_one:
            a = [x * lb for x in a]
        for i in range(db):
            y = b[i]
            if y:
                a[shift + i] = a[shift + i] - c * y
        a.pop()
        rtrim(a)
        e -= 1
    if e > 0 and a and not lb_is_one:
        f = lb ** e
        a = [x * f for x in a]
    return a


def rprem_quo(a: RecPoly, b: RecPoly):
    """Pseudo-division: returns (q, r) with lc(b)^(da-db+1) a = q b + r."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    ring_zero = lb * 0
    if e <= 0:
        return [], a
    q = [ring_zero] * e
    while a and len(a) - 1 >= db:
        c = a[-1]
        shift = len(a) - 1 - db
        q = [x * lb for x in q]
        q[shift] = q[shift] + c
        a = [x * lb for x in a]
        for i in range(db):
            y = b[i]
            if y:
                a[shift + i] = a[shift + i] - c * y
        a.pop()
        rtrim(a)
        e -= 1
    if e > 0:
        f = lb ** e
        q = [x * f for x in q]
        a = [x * f for x in a]
    return rtrim(q), a


def rdiv_scalar(a: RecPoly, d: Polynomial) -> RecPoly:
    """Divide every coefficient exactly by ``d``."""
    if d == 1:
        return a
    if d.is_constant():
        c = d.constant_value()
        return [x / c for x in a]
    out = []
    for x in a:
        q = divide_exact(x, d)
        if q is None:
            raise ArithmeticError("inexact coefficient division")
        out.append(q)
    return out


def rderivative(a: RecPoly) -> RecPoly:
    return [a[i] * i for i in range(1, len(a))]


def subresultant_gcd(a: RecPoly, b: RecPoly) -> RecPoly:
    """Last nonzero subresultant of a and b (deg a >= deg b >= 1), up to content."""
    g = None
    h = None
    while True:
        delta = len(a) - len(b)
        r = rprem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return r
        if g is None:
            a, b = b, r
            g = a[-1]
            h = g ** delta
            continue
        d = g * h ** delta
        a, b = b, rdiv_scalar(r, d)
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            hd = h ** (delta - 1)
            q = divide_exact(g ** delta, hd)
            if q is None:
                raise ArithmeticError("subresultant chain division failed")
            h = q
