import sympy
from hypothesis import given, settings, strategies as st

from conftest import P, from_sympy, polys, to_sympy
from lazcad.elim import MonomialOrder, discriminant, groebner_basis, normal_form, resultant, sylvester_matrix, zero_dimensional
from lazcad.poly import PolySet, VarOrder

R = VarOrder(["x", "y", "z"])
z = sympy.Symbol("z")


def same_up_to_sign(a, b):
    return a == b or a == -b


def test_resultant_examples():
    f = P("x - y*z", R)
    r1 = resultant(f, P("z - x", R), "z")
    r2 = resultant(f, P("z - y", R), "z")
    assert same_up_to_sign(r1, P("x*y - x", R))
    assert same_up_to_sign(r2, P("y^2 - x", R))
    assert same_up_to_sign(resultant(r1, r2, "y"), P("x^2*(1 - x)", R))
    assert same_up_to_sign(resultant(P("x^2 + y^2 - 1", R), P("z - x - 1", R), "z"), P("x^2 + y^2 - 1", R))


def test_resultant_with_constant_and_zero():
    assert resultant(P("3", R), P("z^2 + x", R), "z") == P("9", R)
    assert not resultant(P("(z - x)*(z + 1)", R), P("(z - x)*y", R), "z")


def sylvester_det(f, g, v):
    M = sylvester_matrix(f, g, v)
    return sympy.Matrix([[to_sympy(e) for e in row] for row in M]).det()


@settings(max_examples=200)
@given(polys(R, max_deg=3, max_terms=4), polys(R, max_deg=3, max_terms=4))
def test_resultant_equals_sylvester_determinant(f, g):
    if f.degree("z") < 1 or g.degree("z") < 1:
        return
    r = resultant(f, g, "z")
    assert r == from_sympy(sylvester_det(f, g, "z"), R)
    assert same_up_to_sign(r, from_sympy(sympy.resultant(to_sympy(f), to_sympy(g), z), R))


def low(c, deg):
    """Keep only the terms of c with z-degree below deg."""
    out = P("0", R)
    for d, co in c.coeffs("z").items():
        if d < deg:
            out = out + co * P("z", R) ** d
    return out


@settings(max_examples=100)
@given(st.integers(1, 2), polys(R, max_deg=2, max_terms=3, nonzero=False),
       st.integers(1, 2), polys(R, max_deg=2, max_terms=3, nonzero=False))
def test_discriminant_of_product(df, cf, dg, cg):
    f = P(f"z^{df}", R) + low(cf, df)
    g = P(f"z^{dg}", R) + low(cg, dg)
    lhs = discriminant(f * g, "z")
    rhs = discriminant(f, "z") * discriminant(g, "z") * resultant(f, g, "z") ** 2
    want = from_sympy(sympy.discriminant(to_sympy(f * g), z), R)
    assert lhs == want == rhs


@given(polys(R, max_deg=3, max_terms=4))
def test_discriminant_matches_sympy(f):
    if f.degree("z") < 2:
        return
    assert same_up_to_sign(discriminant(f, "z"), from_sympy(sympy.discriminant(to_sympy(f), z), R))


def reduced_sympy_basis(F, ring, order):
    gens = [sympy.Symbol(v) for v in reversed(ring.names)]
    G = sympy.groebner([to_sympy(f) for f in F], *gens, order=order)
    return PolySet(from_sympy(g, ring) for g in G.exprs)


def test_groebner_surface_basis():
    S = VarOrder(["u", "v", "y", "z", "x"])
    F = [P("x - u*v", S), P("y - u*v^2", S), P("z - u^2", S)]
    G = PolySet(groebner_basis(F, MonomialOrder("grevlex", S)))
    for want in ("v*x - y", "u*v - x", "u*x - v*z"):
        assert P(want, S) in G
    assert G == reduced_sympy_basis(F, S, "grevlex")


@settings(max_examples=30)
@given(st.lists(polys(R, max_deg=2, max_terms=3), min_size=1, max_size=3), st.sampled_from(["lex", "grevlex"]))
def test_groebner_matches_sympy(F, kind):
    F = [f for f in F if not f.is_constant()]
    if not F:
        return
    G = groebner_basis(F, MonomialOrder(kind, R))
    assert PolySet(G) == reduced_sympy_basis(F, R, kind)
    for f in F:
        assert not normal_form(f, G, MonomialOrder(kind, R))


def test_zero_dimensional():
    assert zero_dimensional([P("x^2 - 1", R), P("y - x", R)], [0, 1])
    assert not zero_dimensional([P("x*y", R)], [0, 1])
