import json
import random

import pytest

from conftest import P, random_poly
from lazcad.cad import (CADResult, ProblemSpec, _decorate, cad_full, cad_with_ecs, groebner_preprocess,
                        md_growth_check, run, verify_sign_invariance)
from lazcad.lifting import lift_all
from lazcad.poly import PolySet, VarOrder
from lazcad.projection import projection_chain

C = VarOrder(["x", "y"])
S = VarOrder(["u", "v", "y", "z", "x"])
SURFACE = ("v*x - y", "u*v - x", "u*x - v*z")


def circle():
    return cad_full(ProblemSpec([P("x^2 + y^2 - 1", C)], C))


def test_circle_cells_and_signs():
    res = circle()
    assert res.total_cells == 13
    assert res.cell_counts() == [5, 13]
    signs = sorted(c.signs for c in res.tree.levels[2])
    assert signs.count((0,)) == 4 and signs.count((-1,)) == 1 and signs.count((1,)) == 8


def test_circle_verifies():
    rep = verify_sign_invariance(circle(), 10, seed=1)
    assert rep["violations"] == []
    assert rep["samples"] > 0 and len(rep["lines"]) == 5


def test_negative_control_detects_missing_projection():
    f = P("x^2 + y^2 - 1", C)
    chain = projection_chain([f])
    chain.levels[1].polys = PolySet()
    tree = lift_all(chain)
    _decorate(tree, [f])
    res = CADResult(ProblemSpec([f], C), [f], [], chain, tree)
    assert verify_sign_invariance(res, 10, seed=0)["violations"]


def test_groebner_basis_of_surface():
    F = [P(t, S) for t in ("x - u*v", "y - u*v^2", "z - u^2")]
    gb = PolySet(groebner_preprocess(F))
    assert PolySet(P(t, S) for t in SURFACE) <= gb


def test_surface_multi_not_larger_than_single():
    A = [P(t, S) for t in SURFACE]
    multi = cad_with_ecs(ProblemSpec(A, S, A, "brown_mccallum", "multi"))
    single = cad_with_ecs(ProblemSpec(A, S, [A[2]], "lazard", "single"))
    assert multi.total_cells <= single.total_cells
    for res in (multi, single):
        assert verify_sign_invariance(res, 3)["violations"] == []


def test_summary_and_json():
    res = circle()
    s = res.summary()
    assert s["cell_counts"] == [5, 13] and s["total"] == 13
    data = json.loads(json.dumps(res.to_json()))
    assert len(data["levels"][1]) == 13


def test_cad_full_rejects_ecs():
    f = P("x^2 + y^2 - 1", C)
    with pytest.raises(ValueError):
        cad_full(ProblemSpec([f], C, [f], ec_mode="single"))


def test_deterministic_verification():
    a = verify_sign_invariance(circle(), 5, seed=7)
    b = verify_sign_invariance(circle(), 5, seed=7)
    assert a == b


@pytest.mark.parametrize("seed", range(6))
def test_random_plane_systems(seed):
    rng = random.Random(seed)
    A = [random_poly(rng, C, 3) for _ in range(rng.randint(1, 3))]
    A = [f for f in A if not f.is_constant()] or [P("x - y", C)]
    res = run(ProblemSpec(A, C))
    assert verify_sign_invariance(res, 5, seed=seed)["violations"] == []


@pytest.mark.parametrize("column", ["original", "single_ec", "multi_ec"])
def test_growth_check(column):
    R = VarOrder(["x", "y", "z"])
    A = [[P("x*z^2 + y", R)], [P("z - x*y", R)], [P("y*z + 1", R)]]
    rep = md_growth_check([f for part in A for f in part], A, 2, "brown_mccallum", column)
    assert rep["ok"], rep
