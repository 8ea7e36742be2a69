import time

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import P, from_sympy, polys, to_sympy
from lazcad.poly import VarOrder
from lazcad.realalg import isolate_roots
from lazcad.valuation import lazard_residue, lex_compare, nullifies, valuation_at

R = VarOrder(["x", "y", "z"])
W = VarOrder(["x", "y", "z", "w"])
F216 = "x^2 + y^2*z - 2*y*z^2 + z*w"
points = st.lists(st.integers(-1, 1), min_size=3, max_size=3)


def sympy_valuation(f, alpha):
    syms = [sympy.Symbol(v) for v in f.ring.names]
    shifted = sympy.expand(to_sympy(f).subs({s: s + a for s, a in zip(syms, alpha)}, simultaneous=True))
    return min(sympy.Poly(shifted, *syms).monoms())


def sympy_residue(f, beta):
    syms = [sympy.Symbol(v) for v in f.ring.names]
    g = to_sympy(f)
    nus = []
    for s, b in zip(syms, beta):
        k = 0
        while sympy.rem(g, s - b, s) == 0:
            g = sympy.quo(g, s - b, s)
            k += 1
        nus.append(k)
        g = sympy.expand(g.subs(s, b))
    return tuple(nus), g


def test_univariate_valuations():
    X = VarOrder(["x"])
    f = P("x^3 - 2*x^2 + x", X)
    assert valuation_at(f, [0]) == (1,)
    assert valuation_at(f, [1]) == (2,)
    assert valuation_at(f, [5]) == (0,)


def test_bivariate_valuations():
    f = P("x*(y - 1)^2", VarOrder(["x", "y"]))
    assert valuation_at(f, [0, 0]) == (1, 0)
    assert valuation_at(f, [2, 1]) == (0, 2)
    assert valuation_at(f, [0, 1]) == (1, 2)
    assert valuation_at(f, [3, 3]) == (0, 0)


def test_order_dependence():
    f = P(F216, W)
    assert valuation_at(f, [0, 1, 0, 1]) == (0, 0, 1, 0)
    assert valuation_at(f, [0, 0, 1, 0]) == (0, 0, 0, 1)
    g = f.change_ring(VarOrder(["x", "z", "y", "w"]))
    assert valuation_at(g, {"x": 0, "y": 1, "z": 0, "w": 1}) == (0, 1, 0, 0)
    assert valuation_at(g, {"x": 0, "y": 0, "z": 1, "w": 0}) == (0, 0, 0, 1)


def test_residues():
    f = P(F216, W)
    r = lazard_residue(f, [0, 1, 0])
    assert r.semivaluation == (0, 0, 1) and r.residue == P("w + 1", W)
    g = f.change_ring(VarOrder(["x", "y", "w", "z"]))
    r = lazard_residue(g, [0, 1, 0])
    assert r.semivaluation == (0, 0, 0)
    assert r.residue == P("z - 2*z^2", g.ring)


def test_constant_and_zero():
    assert valuation_at(P("5", R), [1, 2, 3]) == (0, 0, 0)
    with pytest.raises(ValueError):
        valuation_at(P("0", R), [1, 2, 3])
    with pytest.raises(ValueError):
        valuation_at(P("x", R), [1, 2])


def test_nullification():
    f = P("x*z + y", R)
    assert nullifies(f, [0, 0])
    assert not nullifies(f, [0, 1])


def test_algebraic_point():
    s2 = isolate_roots(P("x^2 - 2", R))[1]
    f = P("(x^2 - 2)^2*y + (x^2 - 2)*z", R)
    assert valuation_at(f, [s2, 0, 0]) == (1, 0, 1)


def test_runtime():
    t = time.time()
    test_order_dependence()
    test_residues()
    assert time.time() - t < 1


@settings(max_examples=100)
@given(polys(R, max_deg=3, max_terms=4), points)
def test_valuation_matches_sympy(f, alpha):
    assert valuation_at(f, alpha) == sympy_valuation(f, alpha)


@settings(max_examples=100)
@given(polys(R, max_deg=3, max_terms=4), st.lists(st.integers(-1, 1), min_size=2, max_size=2))
def test_residue_matches_sympy(f, beta):
    r = lazard_residue(f, beta)
    nus, g = sympy_residue(f, beta)
    assert r.semivaluation == nus
    assert r.residue == from_sympy(g, R)


@settings(max_examples=200)
@given(polys(R, max_deg=3, max_terms=4), polys(R, max_deg=3, max_terms=4), points)
def test_valuation_is_multiplicative(f, g, alpha):
    vf, vg = valuation_at(f, alpha), valuation_at(g, alpha)
    assert valuation_at(f * g, alpha) == tuple(a + b for a, b in zip(vf, vg))


@settings(max_examples=200)
@given(polys(R, max_deg=3, max_terms=4), polys(R, max_deg=3, max_terms=4), points)
def test_valuation_is_superadditive(f, g, alpha):
    if not f + g:
        return
    lo = min(valuation_at(f, alpha), valuation_at(g, alpha))
    assert lex_compare(valuation_at(f + g, alpha), lo) >= 0
