import pytest

from conftest import P
from lazcad.cad import ProblemSpec, run
from lazcad.lifting import WellOrientednessError, classify_curtain, lift_all
from lazcad.poly import VarOrder
from lazcad.projection import projection_chain
from lazcad.realalg import coord_value

C = VarOrder(["x", "y"])
R = VarOrder(["x", "y", "z"])
S = VarOrder(["u", "v", "y", "z", "x"])
QUINTIC = ("-x^3*y^3*z - x*y^4*z + x*y^3*z^2 + x^4 + 2*x^3*z + x^2*y - x^2*z + 2*x*y*z - 2*x*z^2")


def circle_tree():
    return lift_all(projection_chain([P("x^2 + y^2 - 1", C)]))


def test_circle_counts():
    tree = circle_tree()
    assert tree.counts() == [5, 13]
    assert [c.kind for c in tree.levels[1]] == ["sector", "section", "sector", "section", "sector"]


def test_stacks_alternate_and_are_numbered():
    tree = circle_tree()
    for base in tree.levels[1]:
        kinds = [c.kind for c in base.children]
        assert kinds[0] == kinds[-1] == "sector"
        assert all(a != b for a, b in zip(kinds, kinds[1:]))
        assert [c.index for c in base.children] == [base.index + (i,) for i in range(1, len(kinds) + 1)]


def test_cell_dimensions():
    tree = circle_tree()
    dims = sorted(c.dim for c in tree.levels[2])
    assert dims.count(0) == 2 and dims.count(1) == 6 and dims.count(2) == 5


def test_mccallum_rejects_nullification():
    Q = VarOrder(["x", "y", "z", "w"])
    chain = projection_chain([P("x*w + y*z", Q)], operator="mccallum")
    with pytest.raises(WellOrientednessError, match="not well-oriented"):
        lift_all(chain, "mccallum")


def test_brown_mccallum_lifts_over_gamma_point():
    chain = projection_chain([P("x*z + y", R)], operator="brown_mccallum")
    assert [g.coords for g in chain.levels[2].gamma] == [(0, 0)]
    tree = lift_all(chain)
    origin = [c for c in tree.levels[2] if all(coord_value(v) == 0 for v in c.sample)]
    assert len(origin) == 1 and origin[0].kind == "point"
    assert len(origin[0].children) == 1


def curtains_of(text):
    f = P(text, R)
    return run(ProblemSpec([f], R, [f], "brown_mccallum", "single")).curtains


def test_point_curtains():
    cs = curtains_of("x^2 + z*y^2 - z")
    assert sorted(tuple(coord_value(v) for v in c.foot.sample) for c in cs) == [(0, -1), (0, 1)]
    assert {c.kind for c in cs} == {"point"}


def test_nonpoint_curtain_on_line():
    cs = curtains_of(QUINTIC)
    assert cs and {c.kind for c in cs} == {"nonpoint"}
    assert all(coord_value(c.foot.sample[0]) == 0 for c in cs)
    assert any(c.foot.dim == 1 for c in cs)


def test_classify_directly():
    f = P(QUINTIC, R)
    tree = lift_all(projection_chain([f]))
    line = [c for c in tree.levels[2] if c.dim == 1 and coord_value(c.sample[0]) == 0]
    assert classify_curtain(f, line[0], 3).kind == "nonpoint"


def test_surface_curtain_feet():
    A = [P(t, S) for t in ("v*x - y", "u*v - x", "u*x - v*z")]
    res = run(ProblemSpec(A, S, [A[2]], "lazard", "single"))
    feet = {tuple(coord_value(v) for v in c.foot.sample) for c in res.curtains}
    assert feet
    for u, v, y, z in feet:
        assert u == 0 and (v == 0 or z == 0)
    assert any(v == 0 for _, v, _, _ in feet) and any(z == 0 for _, _, _, z in feet)
