from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wkbqp.novikov import NovikovScalar
from wkbqp.quiver import (
    EndpointMismatch,
    LoopAtVertex,
    NonInvertibleLinearPart,
    Potential,
    Quiver,
    QuiverWithPotential,
    SelfFolded,
    TwoCycleAtVertex,
    apply_substitution,
    are_cyclically_equivalent,
    canonical_rotation,
    cyclic_derivative,
    disjoint,
    face_words,
    glfs_decompose,
    make_qp,
    mutate_quiver,
    potential_from_text,
    premutate_qp,
    puncture_words,
    qp_from_triangulation,
    quiver_of_triangulation,
    reduce_qp,
)
from wkbqp.surface import IdealTriangulation, Signing, annulus, fixture, flip, flippable_edges, torus

import oracles
from qps import three_cycle

A3 = Quiver.build([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])

words = st.lists(st.sampled_from("abcde"), min_size=1, max_size=8).map(tuple)


@given(words, st.integers(min_value=0, max_value=7))
def test_canonical_rotation_is_rotation_invariant(w, k):
    k %= len(w)
    assert canonical_rotation(w[k:] + w[:k]) == canonical_rotation(w)
    assert sorted(canonical_rotation(w)) == sorted(w)


def test_cyclic_derivative_matches_oracle():
    W = Potential({("a", "b", "c"): 1, ("a", "b", "a", "b"): 2})
    d = cyclic_derivative(W, "a")
    ref = oracles.cyclic_derivative({("a", "b", "c"): 1, ("a", "b", "a", "b"): 2}, "a")
    assert {w: c for w, c in d.items()} == {w: NovikovScalar.coerce(c) for w, c in ref.items()}
    assert d == {("b", "c"): NovikovScalar.coerce(1), ("b", "a", "b"): NovikovScalar.coerce(4)}


def test_cyclic_equivalence_and_disjointness():
    W1 = Potential({("b", "c", "a"): 1})
    W2 = Potential({("a", "b", "c"): 1})
    assert are_cyclically_equivalent(W1, W2)
    assert not are_cyclically_equivalent(W1, W2.scale(2))
    assert disjoint(W1, [("d", "e")])
    assert not disjoint(W1, [("c", "a", "b")])


def test_potential_text_parses_novikov_coefficients():
    W = potential_from_text({"a.b.c": "2*q^{1/2}", "c.a.b": "1"})
    assert W[("a", "b", "c")] == NovikovScalar.monomial(2, Fraction(1, 2)) + 1


def test_mutation_of_a3_creates_a_shortcut():
    M = mutate_quiver(A3, 2)
    assert M.multiplicity(2, 1) == 1 and M.multiplicity(3, 2) == 1 and M.multiplicity(1, 3) == 1
    assert mutate_quiver(M, 2).is_isomorphic(A3)
    assert oracles.vf2_isomorphic(mutate_quiver(M, 2), A3)


def test_mutation_cancels_two_cycles():
    M = mutate_quiver(three_cycle().quiver, 2)
    # the composite 1 -> 3 cancels against c: 3 -> 1
    assert len(M.arrows) == 2 and not M.two_cycles()


def test_mutation_rejects_loops_and_two_cycles():
    with pytest.raises(LoopAtVertex):
        mutate_quiver(Quiver.build([1], [("a", 1, 1)]), 1)
    with pytest.raises(TwoCycleAtVertex):
        mutate_quiver(Quiver.build([1, 2], [("a", 1, 2), ("b", 2, 1)]), 1)


@pytest.mark.parametrize("name", ["torus_d2", "annulus_2_2"])
def test_canonical_form_agrees_with_vf2(name):
    Q = quiver_of_triangulation(fixture(name))
    perm = {v: (3 * v + 1) % len(Q.vertices) for v in Q.vertices}
    if sorted(perm.values()) != sorted(perm):
        perm = {v: v for v in Q.vertices}
    R = Q.relabel(perm)
    assert Q.is_isomorphic(R) == oracles.vf2_isomorphic(Q, R) is True
    for e in flippable_edges(fixture(name))[:3]:
        M = mutate_quiver(Q, e)
        assert Q.is_isomorphic(M) == oracles.vf2_isomorphic(Q, M)


def test_premutation_potential_and_reduction():
    qp = three_cycle()
    P = premutate_qp(qp, 2)
    assert P.W[("[a,b]", "b'", "a'")] == 1
    assert P.W[("[a,b]", "c")] == 1
    red, rep = reduce_qp(P)
    assert rep.cancelled_pairs == 1
    assert len(red.quiver.arrows) == 2 and not red.W


def test_reduction_removes_term_through_cancelled_pair():
    qp = make_qp(
        [1, 2, 3],
        [("a", 1, 2), ("b", 2, 1), ("c", 2, 3), ("d", 3, 1)],
        {("a", "b"): 1, ("a", "c", "d"): 1},
    )
    red, rep = reduce_qp(qp)
    assert rep.removed == [("a", "b")]
    assert {a.id for a in red.quiver.arrows} == {"c", "d"}
    assert not red.W


def test_apply_substitution_examples():
    qp = three_cycle()
    out = apply_substitution(qp, {"a": {("a",): 2}})
    assert out.W[("a", "b", "c")] == 2
    with pytest.raises(EndpointMismatch):
        apply_substitution(qp, {"a": {("b",): 1}})
    with pytest.raises(NonInvertibleLinearPart):
        apply_substitution(qp, {"a": {("a",): 0}})


def test_qp_of_torus_two_punctures():
    T = torus(2)
    qp = qp_from_triangulation(T)
    assert len(qp.quiver.vertices) == 6 and len(qp.quiver.arrows) == 12
    faces, cycles = face_words(T), puncture_words(T)
    assert len(faces) == 4
    assert sum(len(w) for w in cycles.values()) == 12
    assert all(qp.W[w] == 1 for w in faces.values())
    assert all(qp.W[w] == -1 for w in cycles.values())
    assert glfs_decompose(qp.W, T).success


def test_qp_of_torus_one_puncture():
    T = torus(1)
    qp = qp_from_triangulation(T)
    assert len(qp.quiver.vertices) == 3 and len(qp.quiver.arrows) == 6
    assert len(face_words(T)) == 2
    assert [len(w) for w in puncture_words(T).values()] == [6]
    assert all(qp.quiver.is_cycle(w) for w in qp.W.support())


def test_signing_flips_the_puncture_coefficients():
    T = torus(2)
    eps = Signing.from_map({p: -1 for p in T.punctures})
    qp = qp_from_triangulation(T, eps)
    assert all(qp.W[w] == 1 for w in puncture_words(T).values())


def test_annulus_quiver_is_an_affine_cycle_without_potential():
    qp = qp_from_triangulation(annulus(1, 2))
    assert len(qp.quiver.vertices) == 3 and len(qp.quiver.arrows) == 3
    assert not qp.W


def test_self_folded_rejected():
    folded = IdealTriangulation((((0, 1), (0, -1), (1, 1)), ((1, -1), (2, 1), (3, 1))))
    with pytest.raises(SelfFolded):
        qp_from_triangulation(folded)


@pytest.mark.parametrize("e", [0, 2, 4])
def test_flip_matches_mutation_on_torus(e):
    T = torus(2)
    lhs = quiver_of_triangulation(flip(T, e))
    rhs = mutate_quiver(quiver_of_triangulation(T), e)
    assert lhs.is_isomorphic(rhs) and oracles.vf2_isomorphic(lhs, rhs)


def test_json_round_trip():
    qp = qp_from_triangulation(torus(2))
    back = QuiverWithPotential.from_json(qp.to_json())
    assert back.quiver == qp.quiver and back.W == qp.W


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(1, 3))
def test_scaling_commutes_with_derivative(i, t):
    W = three_cycle().W
    a = "abc"[i]
    assert cyclic_derivative(W.scale(t), a) == {w: c * t for w, c in cyclic_derivative(W, a).items()}
