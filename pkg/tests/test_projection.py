import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import P, polys, random_poly
from lazcad.poly import PolySet, VarOrder, content, divide_exact, gcd, squarefree_part
from lazcad.projection import (auxiliary_chain, choose_ec, derive_ecs, project_brown,
                               project_brown_mccallum, project_lazard, project_mccallum, project_multi_ec,
                               project_single_ec, projection_chain, propagate_ecs, test_T as nullification_points)

R = VarOrder(["x", "y", "z"])
S = VarOrder(["u", "v", "y", "z", "x"])
SURFACE = [P(s, S) for s in ("v*x - y", "u*v - x", "u*x - v*z")]


def ps(*texts, ring=S):
    return PolySet(P(t, ring) for t in texts)


def test_circle_projection():
    C = VarOrder(["x", "y"])
    f = P("x^2 + y^2 - 1", C)
    assert project_mccallum([f]).polys == ps("x^2 - 1", ring=C)
    assert project_brown_mccallum([f]).polys == ps("x^2 - 1", ring=C)


def test_T_point_curtains():
    pts = nullification_points(P("x^2 + z*y^2 - z", R))
    assert sorted(g.coords for g in pts) == [(0, -1), (0, 1)]


def test_T_no_nullification_and_bottom():
    assert nullification_points(P("z^2 + x", R)) == []
    assert nullification_points(P("(x - 1)*(y^2 - z)", R)) is None


def test_T_other_order():
    f = P("x^2 + y*z", VarOrder(["x", "z", "y"]))
    assert [g.coords for g in nullification_points(f)] == [(0, 0)]


def test_brown_mccallum_records_points():
    out = project_brown_mccallum([P("x*z + y", R)])
    assert out.polys == ps("x", ring=R)
    assert [g.coords for g in out.points] == [(0, 0)]


def test_brown_mccallum_adds_trailing_coefficient_when_T_fails():
    Q = VarOrder(["x", "y", "z", "w"])
    out = project_brown_mccallum([P("x*w + y*z", Q)])
    assert out.polys == ps("x", "y", "z", ring=Q)
    assert out.points == []


def test_brown_on_surface():
    assert project_brown(SURFACE).polys == ps("u", "v", "y - u*v^2", "z - u^2", "v^2*z - u*y")


def test_multi_ec_chain():
    chain = projection_chain(SURFACE, SURFACE, "brown_mccallum", "multi")
    assert PolySet(chain.polys_at(4)) == ps("z - u^2", "v^2*z - u*y")
    assert PolySet(chain.polys_at(3)) == ps("y - u*v^2")
    assert PolySet(chain.polys_at(2)) == ps("v")
    assert PolySet(chain.polys_at(1)) == ps("u")


def test_single_ec_lazard_chain_keeps_y():
    chain = projection_chain(SURFACE, SURFACE, "lazard", "single")
    assert PolySet(chain.polys_at(3)) == ps("y", "y - u*v^2")
    multi = projection_chain(SURFACE, SURFACE, "brown_mccallum", "multi")
    assert P("y", S) not in PolySet(multi.polys_at(3))


def test_choose_ec_is_smallest():
    assert choose_ec([P("u*x - v*z", S), P("x - u*v", S), P("v*x - y", S)]) == P("u*x - v*z", S)
    assert choose_ec([P("x^2 - u", S), P("v*x - y", S)]) == P("v*x - y", S)


def test_derived_ecs():
    chosen = P("u*x - v*z", S)
    assert PolySet(derive_ecs(chosen, SURFACE, 4)) == ps("v*z - u^2*v", "v^2*z - u*y")
    picked, derived = propagate_ecs(SURFACE, 4)
    assert picked == chosen
    assert PolySet(derived) == ps("z - u^2", "v^2*z - u*y")


def test_single_ec_projection_drops_non_ec_pairs():
    E = [P("x - y*z", R)]
    A = E + [P("z - x", R), P("z - y", R)]
    out = project_single_ec(A, E)
    assert {P("x", R), P("y - 1", R), P("y^2 - x", R)} <= set(out.polys)
    assert P("x - y", R) not in out.polys
    assert P("x - y", R) in project_brown_mccallum(A).polys


def test_multi_ec_projection():
    out = project_multi_ec(SURFACE, SURFACE, v=4)
    assert P("z - u^2", S) in out.polys


def test_auxiliary_chain():
    aux = auxiliary_chain(SURFACE[:2])
    assert aux[3] == ps("y", "y - u*v^2")
    assert aux[2] == ps("v") and aux[1] == ps("u")


def test_chain_levels_are_consistent():
    chain = projection_chain(SURFACE, SURFACE, "brown_mccallum", "multi")
    for k in range(1, chain.n + 1):
        assert all(p.level() == k for p in chain.polys_at(k))


def random_sets(seed, count, ring, size=3, deg=2):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = [random_poly(rng, ring, deg) for _ in range(rng.randint(1, size))]
        A = [f for f in A if f.degree(ring.n - 1) > 0]
        if A:
            out.append(A)
    return out


def covered(p, S):
    """Every real zero of p is a zero of some element of S."""
    rest = squarefree_part(p)
    for q in S:
        rest = divide_exact(rest, gcd(rest, q)) or rest
    return rest.is_constant()


def contents(A, v):
    return PolySet(content(f, v) for f in A)


@pytest.mark.parametrize("seed", range(10))
def test_inclusions(seed):
    for A in random_sets(seed, 10, R):
        mc = project_mccallum(A).polys
        assert all(covered(p, mc) for p in project_brown(A).polys)
        lz = project_lazard(A).polys | contents(A, 2)
        assert all(covered(p, lz) for p in project_brown_mccallum(A).polys)


@settings(max_examples=40)
@given(st.lists(polys(R, max_deg=2, max_terms=3), min_size=1, max_size=3))
def test_outputs_are_normalized_and_lower(A):
    A = [f for f in A if f.degree("z") > 0]
    if not A:
        return
    for op in (project_mccallum, project_brown, project_lazard):
        for p in op(A).polys:
            assert p == p.normalized()
            assert not p.has_var(2)
