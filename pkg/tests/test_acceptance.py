"""Acceptance criteria, one check per criterion.

Each check returns ``(passed, detail)``; wall time is measured around it and
compared with the budget.  Run with pytest, or directly as a script for a
compact pass/fail table.
"""

from __future__ import annotations

import cmath
import math
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from qps import SURFACE_FIXTURES, all_qps, three_cycle  # noqa: E402

from wkbqp.ainfty import (  # noqa: E402
    build_category,
    euler_form,
    euler_kernel_rank,
    rescale_action,
    rescaled_potential,
    same_structure,
    verify_ainfty,
)
from wkbqp.floer import (  # noqa: E402
    WKBAlgebraSpec,
    assemble_floer_potential,
    graded_hom_table,
    intersection_indices,
    twist_sign,
)
from wkbqp.ginzburg import check_d_squared, jacobian_dims  # noqa: E402
from wkbqp.novikov import NovikovScalar  # noqa: E402
from wkbqp.quiver import (  # noqa: E402
    Potential,
    SelfFolded,
    make_qp,
    mutate_quiver,
    premutate_qp,
    puncture_words,
    qp_from_triangulation,
    quiver_of_triangulation,
    reduce_qp,
)
from wkbqp.surface import (  # noqa: E402
    annulus,
    closed_surface,
    dual_cellulation,
    fixture,
    flip,
    flippable_edges,
    random_flip_walk,
)
from wkbqp.wkb import (  # noqa: E402
    NoTrivalentCellulation,
    QuadraticDifferential,
    SaddleConnectionPresent,
    TracerParams,
    TracingInconclusive,
    check_cellulation_possible,
    launch_angles,
    phase_and_period,
    residue_at_double_pole,
    separatrices,
    wkb_triangulation,
)

CELLULATION_FIXTURES = ["torus_d1", "torus_d2", "torus_d3", "genus2_d1", "genus2_d2", "annulus_1_2", "annulus_2_2"]


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    budget: float | None
    detail: str

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        budget = f" / {self.budget:g} s" if self.budget else ""
        return f"[{tag}] acceptance {self.number:2d} {self.title} ({self.seconds:.2f} s{budget}): {self.detail}"


RESULTS: dict[int, Outcome] = {}


# -- criteria ------------------------------------------------------------------


def rank_formulas():
    bad = []
    n = 0
    for g, d in [(1, 2), (2, 2), (1, 3)]:
        T0 = closed_surface(g, d)
        Ts = [T0] + [random_flip_walk(T0, 20, seed)[0] for seed in range(3)]
        for T in Ts:
            n += 1
            edges = len(T.interior_edges)
            k = euler_kernel_rank(euler_form(quiver_of_triangulation(T))[1])
            if edges != 6 * g - 6 + 3 * d or k != d:
                bad.append(f"(g={g},d={d}): {edges} edges, kernel {k}")
    return not bad, "; ".join(bad) or f"{n} triangulations: edges 6g-6+3d and kernel rank d"


def two_vertex_example():
    rng = random.Random(20240)
    ok, skipped, folded, bad = 0, 0, 0, []
    while ok < 20 and ok + skipped + folded < 200:
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        d = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        phi = QuadraticDifferential((d, c, 1), (0, 0, 1))
        try:
            res = wkb_triangulation(phi, 0.0)
        except (SaddleConnectionPresent, TracingInconclusive):
            skipped += 1
            continue
        half = separatrices(phi, 0.0, TracerParams().halved())
        for s, t in zip(res.separatrices, half):
            a, b = s.trajectory, t.trajectory
            same = (a.terminal, a.target, a.direction_index) == (b.terminal, b.target, b.direction_index)
            if not same or abs(a.length - b.length) > 1e-4 * abs(b.length):
                bad.append(f"c={c:.3f} d={d:.3f}: separatrix ({s.zero},{s.k}) unstable")
        if res.triangulation.self_folded_triangles():
            # flagged degenerate and refused downstream
            folded += 1
            try:
                qp_from_triangulation(res.triangulation, res.signing)
                bad.append(f"c={c:.3f} d={d:.3f}: self-folded triangulation accepted")
            except SelfFolded:
                pass
            if res.nondegenerate:
                bad.append(f"c={c:.3f} d={d:.3f}: self-folded but flagged non-degenerate")
            continue
        ok += 1
        red, _ = reduce_qp(qp_from_triangulation(res.triangulation, res.signing))
        if len(red.quiver.vertices) != 2 or red.quiver.arrows or red.W:
            bad.append(f"c={c:.3f} d={d:.3f}: {len(red.quiver.vertices)} vertices, {len(red.quiver.arrows)} arrows")
    if ok < 20:
        bad.append(f"only {ok} non-degenerate saddle-free draws")
    note = (
        f"20 non-degenerate draws give 2 vertices, 0 arrows, W = 0; {folded} self-folded draws flagged "
        f"and refused; {skipped} skipped; all classifications stable under halving"
    )
    return not bad, "; ".join(bad[:3]) or note


def annulus_example():
    bad = []
    for p, q in [(1, 1), (1, 2), (2, 2)]:
        qp = qp_from_triangulation(annulus(p, q))
        Q = qp.quiver
        n = p + q
        G = nx.MultiGraph()
        G.add_nodes_from(Q.vertices)
        G.add_edges_from((a.src, a.tgt) for a in Q.arrows)
        cycle = len(Q.vertices) == n and len(Q.arrows) == n and nx.is_connected(G) and all(deg == 2 for _, deg in G.degree())
        D = nx.MultiDiGraph()
        D.add_nodes_from(Q.vertices)
        D.add_edges_from((a.src, a.tgt) for a in Q.arrows)
        acyclic = nx.is_directed_acyclic_graph(D)
        # orientation split along the cycle
        order = [Q.vertices[0]]
        if n > 2:
            while len(order) < n:
                nxt = [v for v in G.neighbors(order[-1]) if v not in order]
                order.append(nxt[0])
        pos = {v: i for i, v in enumerate(order)}
        fwd = sum(1 for a in Q.arrows if (pos[a.tgt] - pos[a.src]) % n == 1) if n > 2 else len(Q.arrows)
        split = sorted([fwd, n - fwd]) if n > 2 else [0, 2]
        want = sorted([p, q]) if n > 2 else [0, 2]
        if not (cycle and acyclic and split == want and not qp.W):
            bad.append(f"annulus({p},{q}): cycle={cycle} acyclic={acyclic} split={split} W={qp.W}")
    return not bad, "; ".join(bad) or "acyclic affine A_{p+q-1} with W = 0 for (1,1), (1,2), (2,2)"


def _jac(qp, order=8):
    return jacobian_dims(qp, order).totals


def _flip_case(T, e):
    F = flip(T, e)
    lhs = quiver_of_triangulation(F)
    rhs = mutate_quiver(quiver_of_triangulation(T), e)
    two_cycles = bool(lhs.two_cycles())
    iso = lhs.without_two_cycles().is_isomorphic(rhs) if two_cycles else lhs.is_isomorphic(rhs)
    red, _ = reduce_qp(premutate_qp(qp_from_triangulation(T), e))
    dims = _jac(red) == _jac(qp_from_triangulation(F))
    return iso, dims, two_cycles


def flip_mutation():
    bad, n, caveat = [], 0, 0
    cases = []
    for name in ["torus_d2", "genus2_d2"]:
        T = fixture(name)
        cases += [(name, T, e) for e in flippable_edges(T)]
    for name, seed in [("torus_d2", 1), ("genus2_d2", 2)]:
        rng = random.Random(seed)
        T = fixture(name)
        steps = 0
        while steps < 50:
            e = rng.choice(flippable_edges(T))
            F = flip(T, e)
            if not F.is_nondegenerate():
                continue
            cases.append((f"{name} walk", T, e))
            T, steps = F, steps + 1
    for name, T, e in cases:
        n += 1
        iso, dims, two = _flip_case(T, e)
        caveat += two
        if not (iso and dims):
            bad.append(f"{name} edge {e}: iso={iso} jacobian={dims}")
    note = f"{n} flips ({caveat} compared after cancelling the valency-2 puncture 2-cycle)"
    return not bad, "; ".join(bad[:3]) or note


def ginzburg():
    bad = []
    for name, qp in all_qps().items():
        rep = check_d_squared(qp, n_words=1000, max_length=10, seed=7)
        if not rep.passed:
            bad.append(f"{name}: {len(rep.failures)} failures")
    return not bad, "; ".join(bad) or f"d^2 = 0 on generators and 1000 words for {len(all_qps())} QPs"


def ainfty():
    bad = []
    for name, qp in all_qps().items():
        rep = verify_ainfty(build_category(qp, 8), 8)
        if not rep.passed:
            bad.append(f"{name}: {len(rep.failures)} failures")
    return not bad, "; ".join(bad) or f"relations up to 8 inputs hold for {len(all_qps())} QPs"


def jacobian_oracle():
    arrows = [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)]
    J = jacobian_dims(three_cycle(), 8)
    mono = oracles.monomial_quotient_dims(arrows, [1, 2, 3], [("a", "b"), ("b", "c"), ("c", "a")], 8)
    ok = J.totals == mono and J.totals[-1] == 6 and J.stabilized_at is not None
    zero = make_qp([1, 2, 3, 4], [("x", 1, 2), ("y", 2, 3), ("z", 2, 4), ("w", 4, 3)])
    Jz = jacobian_dims(zero, 6)
    counts = [len(oracles.paths_of_length([("x", 1, 2), ("y", 2, 3), ("z", 2, 4), ("w", 4, 3)], [1, 2, 3, 4], n)) for n in range(6)]
    cumulative = [sum(counts[: j + 1]) for j in range(6)]
    ok2 = Jz.totals == cumulative
    return ok and ok2, f"W = abc dims {J.totals}; W = 0 dims {Jz.totals} vs path counts {cumulative}"


def grading_rule():
    bad = []
    for name in CELLULATION_FIXTURES:
        T = fixture(name)
        cel = dual_cellulation(T)
        Q = quiver_of_triangulation(T)
        for (e, f), dims in graded_hom_table(cel).items():
            want = (int(e == f), Q.multiplicity(e, f), Q.multiplicity(f, e), int(e == f))
            if dims != want:
                bad.append(f"{name} ({e},{f}): {dims} vs {want}")
        idx = intersection_indices(cel)
        if any(i + idx[(t, f, e)] != 3 for (t, e, f), i in idx.items()):
            bad.append(f"{name}: i + i' != 3")
    return not bad, "; ".join(bad[:3]) or f"{len(CELLULATION_FIXTURES)} cellulations match Q(T); i + i' = 3 at every corner"


def background_toggle():
    bad = []
    for name in CELLULATION_FIXTURES:
        T = fixture(name)
        cel = dual_cellulation(T)
        on = assemble_floer_potential(WKBAlgebraSpec(cel, "b0")).W
        off = assemble_floer_potential(WKBAlgebraSpec(cel, "none")).W
        cycles = set(puncture_words(T).values())
        zeroed = Potential({w: c for w, c in on.items() if w not in cycles}, on.order)
        if off != zeroed:
            bad.append(name)
    signs = [twist_sign(d) for d in range(4)]
    if signs != [(-1) ** d for d in range(4)]:
        bad.append(f"twist signs {signs}")
    return not bad, "; ".join(bad) or "b = 0 equals b0 with C(p) zeroed; twist signs (-1)^d"


def rescaling():
    bad = []
    lams = [NovikovScalar.coerce(3), NovikovScalar.monomial(-2, 1), NovikovScalar.monomial(1, "1/2")]
    for name, qp in all_qps().items():
        C = build_category(qp, 8)
        for lam in lams:
            D = build_category(qp.with_potential(rescaled_potential(qp.W, lam)), 8)
            if not same_structure(rescale_action(C, lam), D):
                bad.append(f"{name} lambda={lam}")
    for name in ["three_cycle", "torus_d1", "annulus_1_2"]:
        qp = all_qps()[name]
        for t in lams:
            if _jac(qp, 6) != _jac(qp.with_potential(qp.W.scale(t)), 6):
                bad.append(f"{name}: Jacobian of tW differs")
    return not bad, "; ".join(bad[:3]) or "term-by-term agreement on all fixture QPs; Jacobian dims of tW unchanged"


def numerical_oracles():
    errs = []
    for m in [1, -1, 2.5 - 0.7j, 1j]:
        errs.append(abs(residue_at_double_pole(QuadraticDifferential((m,), (0, 0, 1)), 0) - m))
    res_err = max(errs)
    per = phase_and_period(QuadraticDifferential((-1, 0, 1)), [-1, 1]).period
    per_err = abs(per - 1j * math.pi / 2)
    gap_err = 0.0
    phi = QuadraticDifferential((-0.8 + 0.6j, 0.5 + 0.3j, 1), (0, 0, 1))
    seps = separatrices(phi, 0.0)
    for z in range(len(phi.zeros)):
        for angles in (launch_angles(phi, z, 0.0), [s.launch_angle for s in seps if s.zero == z]):
            u = [cmath.exp(1j * a) for a in angles]
            for k in range(3):
                gap_err = max(gap_err, abs(u[(k + 1) % 3] / u[k] - cmath.exp(2j * math.pi / 3)))
    ok = res_err < 1e-9 and per_err < 1e-6 and gap_err < 1e-8
    return ok, f"residue error {res_err:.1e}, period error {per_err:.1e}, launch spacing error {gap_err:.1e}"


def degree_obstruction():
    msgs = []
    for g in (1, 2, 3):
        try:
            check_cellulation_possible(g, 4 * g - 4, [])
        except NoTrivalentCellulation as exc:
            msgs.append(str(exc))
        else:
            return False, f"genus {g} accepted"
    ok = all("V - E + F" in m and "F = 0" in m for m in msgs)
    return ok, msgs[-1]


CRITERIA = [
    (1, "rank formulas", rank_formulas, 1.0),
    (2, "two-vertex example", two_vertex_example, 30.0),
    (3, "annulus example", annulus_example, 1.0),
    (4, "flip and mutation", flip_mutation, 60.0),
    (5, "Ginzburg d^2 = 0", ginzburg, 30.0),
    (6, "A-infinity relations", ainfty, 60.0),
    (7, "Jacobian oracle", jacobian_oracle, 1.0),
    (8, "grading rule", grading_rule, None),
    (9, "background toggle", background_toggle, None),
    (10, "rescaling", rescaling, None),
    (11, "numerical oracles", numerical_oracles, None),
    (12, "degree obstruction", degree_obstruction, None),
]


def run_criterion(number: int) -> Outcome:
    _, title, fn, budget = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, reported on the line
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if budget is not None and dt > budget:
        passed = False
        detail += f" [over budget: {dt:.2f} s > {budget:g} s]"
    out = Outcome(number, title, passed, dt, budget, detail)
    RESULTS[number] = out
    print(out.line())
    return out


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_acceptance(number):
    out = run_criterion(number)
    assert out.passed, out.line()


if __name__ == "__main__":
    outs = [run_criterion(c[0]) for c in CRITERIA]
    print(f"{sum(o.passed for o in outs)}/{len(outs)} criteria passed")
    raise SystemExit(0 if all(o.passed for o in outs) else 1)
