from fractions import Fraction

import pytest

from wkbqp.ainfty import build_category
from wkbqp.floer import (
    NonPositiveArea,
    WKBAlgebraSpec,
    assemble_floer_potential,
    clockwise_words,
    compare_with_quiver,
    graded_hom_table,
    homology_check,
    intersection_indices,
    poincare_duality_holds,
    twist_sign,
)
from wkbqp.novikov import NovikovScalar
from wkbqp.quiver import Potential, face_words, puncture_words, qp_from_triangulation
from wkbqp.surface import Signing, dual_cellulation, fixture

CELLULATED = ["torus_d1", "torus_d2", "genus2_d2", "annulus_1_2", "annulus_2_2"]


@pytest.mark.parametrize("name", CELLULATED)
def test_hom_table_matches_quiver_category(name):
    T = fixture(name)
    cel = dual_cellulation(T)
    C = build_category(qp_from_triangulation(T))
    table = graded_hom_table(cel)
    for (e, f), dims in table.items():
        assert dims == C.hom_dims(e, f)
    assert poincare_duality_holds(cel)


def test_indices_take_values_one_and_two():
    idx = intersection_indices(dual_cellulation(fixture("torus_d2")))
    assert set(idx.values()) == {1, 2}
    assert sum(1 for i in idx.values() if i == 1) == 12


def test_twist_sign():
    assert [twist_sign(d) for d in range(4)] == [1, -1, 1, -1]


def test_torus_potential_coefficients():
    T = fixture("torus_d2")
    W = assemble_floer_potential(WKBAlgebraSpec(dual_cellulation(T))).W
    lam = NovikovScalar.monomial(2, 1)
    assert all(W[w] == 1 for w in face_words(T).values())
    assert all(W[w] == -lam for w in puncture_words(T).values())
    assert clockwise_words(W, T)


def test_areas_enter_the_exponent():
    T = fixture("torus_d2")
    p = T.punctures[0]
    spec = WKBAlgebraSpec(dual_cellulation(T), areas={p: Fraction(3, 2)})
    W = assemble_floer_potential(spec).W
    assert W[puncture_words(T)[p]] == -NovikovScalar.monomial(2, Fraction(3, 2))
    with pytest.raises(NonPositiveArea):
        assemble_floer_potential(WKBAlgebraSpec(dual_cellulation(T), areas={p: 0}))


def test_background_toggle_zeroes_puncture_terms():
    T = fixture("genus2_d2")
    cel = dual_cellulation(T)
    on = assemble_floer_potential(WKBAlgebraSpec(cel, "b0")).W
    off = assemble_floer_potential(WKBAlgebraSpec(cel, "none")).W
    cycles = set(puncture_words(T).values())
    assert off == Potential({w: c for w, c in on.items() if w not in cycles}, on.order)
    with pytest.raises(ValueError):
        WKBAlgebraSpec(cel, "b1")


@pytest.mark.parametrize("name", CELLULATED)
def test_comparison_with_quiver_potential(name):
    T = fixture(name)
    eps = Signing.from_map({p: (-1) ** i for i, p in enumerate(T.punctures)})
    floer = assemble_floer_potential(WKBAlgebraSpec(dual_cellulation(T), signing=eps))
    rep = compare_with_quiver(floer, T, eps)
    assert rep.passed, rep.diagnostics


def test_comparison_reports_the_offending_face():
    T = fixture("torus_d2")
    floer = assemble_floer_potential(WKBAlgebraSpec(dual_cellulation(T)))
    f, w = next(iter(face_words(T).items()))
    bad = floer.with_potential(floer.W + Potential({w: 1}, floer.order))
    rep = compare_with_quiver(bad, T)
    assert not rep.passed
    assert any(d.startswith(f"face {f} ") and "coefficient 2" in d for d in rep.diagnostics)


@pytest.mark.parametrize("name,rank,kernel", [("torus_d2", 6, 2), ("genus2_d2", 12, 2), ("annulus_1_2", 3, 1)])
def test_homology_check(name, rank, kernel):
    T = fixture(name)
    rep = homology_check(T, qp_from_triangulation(T))
    assert rep.passed and rep.rank == rank and rep.kernel_rank == kernel
