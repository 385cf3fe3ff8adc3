import json

import pytest
from hypothesis import given, settings, strategies as st

from wkbqp.surface import (
    BoundaryEdge,
    Degenerate,
    IdealTriangulation,
    InvalidSurface,
    MarkedSurface,
    SelfFoldedFlip,
    Signing,
    annulus,
    closed_surface,
    dual_cellulation,
    fixture,
    flip,
    flippable_edges,
    is_glfs_admissible,
    random_flip_walk,
    rank_formula,
    torus,
    validate,
)

from oracles import marked_point_count

CLOSED = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 2)]


def test_torus_two_punctures_counts():
    T = torus(2)
    rep = validate(T)
    assert rep.passed
    assert len(T.interior_edges) == 6 and T.n_triangles == 4
    # independent vertex count from the corner gluing
    assert marked_point_count(T) == 2
    assert T.n_vertices - len(T.edges) + T.n_triangles == 0


def test_duplicated_slot_is_self_folded():
    T = IdealTriangulation((((0, 1), (0, -1), (1, 1)),))
    rep = validate(T)
    assert not rep.nondegenerate
    assert any(c.name == "self-folded" and not c.passed for c in rep.checks)


def test_annulus_fan_has_three_interior_edges():
    T = annulus(1, 2)
    assert validate(T).passed
    assert len(T.interior_edges) == 3
    assert T.surface == MarkedSurface(0, 0, (1, 2))


@pytest.mark.parametrize("g,d", CLOSED)
def test_closed_counts(g, d):
    T = closed_surface(g, d) if g > 1 else torus(d)
    assert validate(T).valid
    assert len(T.interior_edges) == 6 * g - 6 + 3 * d
    assert T.n_triangles == 4 * g - 4 + 2 * d
    assert sum(T.valency.values()) == 2 * len(T.edges)
    assert T.surface == MarkedSurface(g, d)
    assert marked_point_count(T) == d


def test_flip_of_square_swaps_diagonal():
    T = torus(1)
    e = flippable_edges(T)[0]
    U = flip(T, e)
    before = set(T.edge_endpoints[e])
    assert validate(U).valid
    assert U.edge_endpoints[e] != T.edge_endpoints[e] or before == set(U.edge_endpoints[e])


@pytest.mark.parametrize("name", ["torus_d2", "genus2_d2", "annulus_1_2", "annulus_2_2"])
def test_flip_is_an_involution(name):
    T = fixture(name)
    for e in flippable_edges(T):
        assert flip(flip(T, e), e).is_isomorphic(T)


def test_flip_rejects_boundary_and_folded_edges():
    with pytest.raises(BoundaryEdge):
        flip(annulus(1, 2), annulus(1, 2).boundary_edges[0])
    folded = IdealTriangulation((((0, 1), (0, -1), (1, 1)), ((1, -1), (2, 1), (3, 1))))
    with pytest.raises(SelfFoldedFlip):
        flip(folded, 0)


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_walk_preserves_invariants(seed):
    T0 = torus(2)
    T, path = random_flip_walk(T0, 50, seed)
    assert len(path) == 50
    assert validate(T).valid
    assert T.surface == T0.surface
    assert len(T.edges) == len(T0.edges)


def test_canonical_form_ignores_labels():
    T = torus(2)
    relabel = {e: (5 * e + 3) % 6 for e in T.edges}
    assert T.relabel_edges(relabel).is_isomorphic(T)
    assert not T.is_isomorphic(closed_surface(2, 2))


def test_glfs_conditions_reported_separately():
    ok, reasons = is_glfs_admissible(torus(2))
    assert set(reasons) == {"no-self-folded", "no-loops", "valency>=4", "no-double-arrows"}
    assert ok == all(r[0] for r in reasons.values())
    assert not is_glfs_admissible(annulus(1, 2))[0]
    # a valency-3 puncture violates the valency hypothesis
    T = closed_surface(2, 2)
    assert 3 in T.valency.values()
    assert not is_glfs_admissible(T)[1]["valency>=4"][0]


def test_dual_of_torus():
    D = dual_cellulation(torus(2))
    assert D.n_vertices == 4 and len(D.edges) == 6 and len(D.faces) == 2
    assert all(v == 3 for v in D.valencies())
    assert 2 * len(D.edges) == sum(D.valencies())


def test_dual_of_annulus_has_a_face_per_marked_point():
    T = annulus(1, 2)
    D = dual_cellulation(T)
    assert len(D.faces) == 3 and not D.closed_faces
    assert len(D.legs) == 3


@pytest.mark.parametrize("name", ["torus_d2", "genus2_d2", "annulus_2_2"])
def test_double_dual_recovers_triangulation(name):
    T = fixture(name)
    assert dual_cellulation(T).to_triangulation().is_isomorphic(T)


def test_self_folded_has_no_dual():
    folded = IdealTriangulation((((0, 1), (0, -1), (1, 1)), ((1, -1), (2, 1), (3, 1))))
    with pytest.raises(Degenerate):
        dual_cellulation(folded)


def test_small_spheres_rejected():
    with pytest.raises(InvalidSurface):
        MarkedSurface(0, 4)
    MarkedSurface(0, 5)


def test_rank_formula_examples():
    assert rank_formula(MarkedSurface(1, 2)) == 6
    assert rank_formula((0, [2, 4])) == 2
    assert rank_formula(MarkedSurface(2, 2)) == 12
    assert rank_formula(annulus(1, 2)) == 3


def test_signing_must_be_total():
    T = torus(2)
    Signing.constant(T).check_total(T)
    with pytest.raises(ValueError):
        Signing.from_map({0: 1}).check_total(T)
    with pytest.raises(ValueError):
        Signing.from_map({0: 2})


def test_json_round_trip_and_sign_strings():
    T = closed_surface(2, 2)
    data = json.loads(json.dumps(T.to_json()))
    assert IdealTriangulation.from_json(data) == T
    data["triangles"] = [[[e, "+" if s > 0 else "-"] for e, s in t] for t in data["triangles"]]
    assert IdealTriangulation.from_json(data) == T


def test_dot_export_lists_every_edge():
    dot = dual_cellulation(torus(2)).to_dot()
    assert dot.startswith("graph") and dot.count("--") == 6
