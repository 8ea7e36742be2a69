"""Lex-least valuations and Lazard residues at real algebraic points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from .poly.ring import BITS, Polynomial, VarOrder
from .realalg import RealRoot, is_zero_at

Valuation = Tuple[int, ...]


def lex_compare(v: Sequence[int], w: Sequence[int]) -> int:
    """-1, 0 or 1 as v <lex w, v == w, v >lex w."""
    if len(v) != len(w):
        raise ValueError(f"valuations of different lengths {len(v)} and {len(w)}")
    for a, b in zip(v, w):
        if a != b:
            return -1 if a < b else 1
    return 0


def _vanishes_identically(G: Polynomial, i: int, point: Sequence) -> bool:
    """True iff G, with x_0..x_i at the point, is zero as a polynomial in the rest."""
    if not G:
        return True
    low = (1 << (BITS * (i + 1))) - 1
    groups: Dict[int, Dict[int, object]] = {}
    for k, c in G.terms.items():
        groups.setdefault(k & ~low, {})[k & low] = c
    ring = G.ring
    pt = tuple(point[: i + 1])
    for part in sorted(groups.values(), key=len):
        c = Polynomial._raw(ring, part)
        if c.is_constant() or not is_zero_at(c, pt):
            return False
    return True


def _order_at(F: Polynomial, i: int, point: Sequence) -> int:
    """Order of vanishing of F in x_i at point[i], over point[:i]."""
    if not F:
        raise ValueError("zero polynomial has no valuation")
    nu = 0
    d = F.degree(i)
    while nu <= d:
        G = F if nu == 0 else F.taylor_coeff(i, nu)
        if not _vanishes_identically(G, i, point):
            return nu
        nu += 1
    raise ArithmeticError("polynomial vanishes identically at the point")


def residue_at(f: Polynomial, point: Sequence) -> Tuple[Polynomial, Valuation]:
    """Lazard residue of f over a sample point of length m and its semi-valuation.

    The residue is returned with rational coordinates substituted; algebraic
    coordinates stay symbolic and are evaluated through the point.
    """
    if not f:
        raise ValueError("Lazard residue of the zero polynomial")
    F = f
    nus = []
    for i, c in enumerate(point):
        if not F.has_var(i):
            nus.append(0)
            continue
        nu = _order_at(F, i, point)
        nus.append(nu)
        if nu:
            F = F.taylor_coeff(i, nu)
        if not isinstance(c, RealRoot) or c.value is not None:
            F = F.substitute(i, c.value if isinstance(c, RealRoot) else c)
    return F, tuple(nus)


@dataclass(frozen=True)
class ResidueResult:
    residue: Polynomial
    semivaluation: Valuation
    point: tuple


def _align(f: Polynomial, alpha, ord: VarOrder | None):
    if ord is not None and ord != f.ring:
        f = f.change_ring(ord)
    ring = f.ring
    if isinstance(alpha, Mapping):
        missing = [v for v in ring.names if v not in alpha]
        extra = [v for v in alpha if v not in ring.names]
        if extra:
            raise ValueError(f"unknown variables in point: {extra}")
        alpha = [alpha[v] for v in ring.names if v in alpha]
        if missing and len(alpha) < ring.n - len(missing):
            raise ValueError("point does not cover a prefix of the variable order")
    pt = tuple(c if isinstance(c, RealRoot) else Fraction(c) for c in alpha)
    return f, pt


def valuation_at(f: Polynomial, alpha, ord: VarOrder | None = None) -> Valuation:
    """Lex-least valuation of f at a point of R^n (coordinates aligned with the order)."""
    if not f:
        raise ValueError("valuation of the zero polynomial")
    f, pt = _align(f, alpha, ord)
    if len(pt) != f.ring.n:
        raise ValueError(f"point has {len(pt)} coordinates, expected {f.ring.n}")
    F, nus = residue_at(f, pt[:-1])
    n = f.ring.n - 1
    if not F.has_var(n):
        return nus + (0,)
    return nus + (_order_at(F, n, pt),)


def lazard_residue(f: Polynomial, beta, ord: VarOrder | None = None) -> ResidueResult:
    """Lazard residue f_beta and semi-valuation over beta in R^(n-1)."""
    if not f:
        raise ValueError("Lazard residue of the zero polynomial")
    f, pt = _align(f, beta, ord)
    if len(pt) != f.ring.n - 1:
        raise ValueError(f"point has {len(pt)} coordinates, expected {f.ring.n - 1}")
    F, nus = residue_at(f, pt)
    return ResidueResult(F, nus, pt)


def nullifies(f: Polynomial, point: Sequence) -> bool:
    """True iff f vanishes identically on the fibre above the point."""
    if not f or f.is_constant():
        return not f
    return any(residue_at(f, point)[1])
