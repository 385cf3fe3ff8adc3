import pytest
from hypothesis import given, settings, strategies as st

from wkbqp.ginzburg import GradedQuiver, apply_d, check_d_squared, dual, jacobian_dims, loop, multiply
from wkbqp.novikov import ONE, NovikovScalar
from wkbqp.quiver import make_qp, qp_from_triangulation
from wkbqp.surface import annulus, torus

import oracles
from qps import three_cycle

ARROWS = [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)]


def test_differential_on_generators():
    G = GradedQuiver(three_cycle())
    d = G.differential
    assert d["a"] == {}
    assert d[dual("a")] == {("b", "c"): ONE}
    assert d[loop(1)] == {("a", "a*"): ONE, ("c*", "c"): -ONE}
    assert G.degree(("a", "a*", "t<2>")) == -3


def test_leibniz_rule_sign():
    G = GradedQuiver(three_cycle())
    x, y = {("a*",): ONE}, {("a",): ONE}
    lhs = apply_d(G, multiply(G, x, y))
    rhs = {("b", "c", "a"): ONE}  # d(a*) a, and d(a) = 0
    assert lhs == rhs


def test_d_squared_on_loop_by_hand():
    G = GradedQuiver(three_cycle())
    assert apply_d(G, apply_d(G, {(loop(1),): ONE})) == {}


@pytest.mark.parametrize("qp", [three_cycle(), qp_from_triangulation(torus(2)), qp_from_triangulation(torus(1))])
def test_d_squared_vanishes(qp):
    rep = check_d_squared(qp, n_words=200, max_length=8, seed=3)
    assert rep.passed and rep.generators_checked == 2 * len(qp.quiver.arrows) + len(qp.quiver.vertices)


def test_three_cycle_jacobian_stabilizes_at_six():
    J = jacobian_dims(three_cycle(), 6)
    assert J.totals == [3, 6, 6, 6, 6, 6]
    assert J.stabilized_at == 2
    assert J.totals == oracles.monomial_quotient_dims(ARROWS, [1, 2, 3], [("a", "b"), ("b", "c"), ("c", "a")], 6)
    assert J.totals == oracles.jacobian_dims(ARROWS, [1, 2, 3], {("a", "b", "c"): 1}, 6)


def test_zero_potential_counts_paths():
    qp = qp_from_triangulation(annulus(1, 2))
    J = jacobian_dims(qp, 6)
    arrows = [(a.id, a.src, a.tgt) for a in qp.quiver.arrows]
    counts = [len(oracles.paths_of_length(arrows, qp.quiver.vertices, n)) for n in range(6)]
    cumulative = [sum(counts[: j + 1]) for j in range(6)]
    assert J.path_counts == cumulative == [3, 6, 7, 7, 7, 7]
    assert J.totals == cumulative


def test_scaled_potential_has_same_jacobian():
    qp = qp_from_triangulation(torus(1))
    J = jacobian_dims(qp, 6).totals
    for t in (2, NovikovScalar.monomial(3, 1)):
        assert jacobian_dims(qp.with_potential(qp.W.scale(t)), 6).totals == J


# a 3-cycle with a doubled first arrow and random cubic and sextic terms
DOUBLED = [("a", 1, 2), ("x", 1, 2), ("b", 2, 3), ("c", 3, 1)]
CYCLES = [("a", "b", "c"), ("x", "b", "c"), ("a", "b", "c", "x", "b", "c")]


@settings(max_examples=8, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_jacobian_matches_brute_force(coefs):
    W = {w: c for w, c in zip(CYCLES, coefs) if c}
    qp = make_qp([1, 2, 3], DOUBLED, W)
    assert jacobian_dims(qp, 5).totals == oracles.jacobian_dims(DOUBLED, [1, 2, 3], W, 5)
