"""Floer-side assembly from a trivalent cellulation.

Objects are the edges of the cellulation.  Two edges meeting at a trivalent
vertex intersect there with index 1 when the second follows the first
clockwise, and index 2 otherwise.  The potential has a constant triangle for
every face of the triangulation and, with the background class switched on,
a term ``-eps(p) 2 q^{A_p} C(p)`` around each puncture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .ainfty import euler_form, euler_kernel_rank
from .novikov import ONE, ZERO, NovikovScalar
from .quiver import (
    Potential,
    QuiverWithPotential,
    Word,
    are_cyclically_equivalent,
    face_words,
    glfs_decompose,
    puncture_words,
    qp_from_triangulation,
    quiver_of_triangulation,
)
from .surface import (
    Degenerate,
    DualCellulation,
    IdealTriangulation,
    MarkedSurface,
    Signing,
    rank_formula,
)

BACKGROUNDS = ("b0", "none")


class NonPositiveArea(ValueError):
    pass


def _corners(cel: DualCellulation):
    """``(vertex, e, f)`` for each ordered pair of ends with ``f`` clockwise after ``e``."""
    out = []
    for t, ends in enumerate(cel.ends):
        if len(set(ends)) < 3:
            raise Degenerate(f"vertex {t} meets an edge twice")
        for k in range(3):
            e, f = ends[k], ends[(k + 2) % 3]
            if e in cel.interior and f in cel.interior:
                out.append((t, e, f))
    return out


def intersection_indices(cel: DualCellulation) -> dict[tuple[int, int, int], int]:
    """``(vertex, e, f) -> i(L_e, L_f; vertex)``."""
    idx = {}
    for t, e, f in _corners(cel):
        idx[(t, e, f)] = 1
        idx[(t, f, e)] = 2
    return idx


def graded_hom_table(cel: DualCellulation) -> dict[tuple[int, int], tuple[int, int, int, int]]:
    """Dimensions of ``Hom(L_e, L_f)`` in degrees 0..3 for every ordered pair."""
    edges = cel.edges
    table = {(e, f): [0, 0, 0, 0] for e in edges for f in edges}
    for e in edges:
        table[(e, e)][0] = table[(e, e)][3] = 1
    for (_, e, f), i in intersection_indices(cel).items():
        table[(e, f)][i] += 1
    return {k: tuple(v) for k, v in sorted(table.items())}


def poincare_duality_holds(cel: DualCellulation) -> bool:
    idx = intersection_indices(cel)
    return all(i + idx[(t, f, e)] == 3 for (t, e, f), i in idx.items())


def twist_sign(d: int) -> int:
    """Sign change of a disc meeting the background cycle ``d`` times."""
    return -1 if int(d) % 2 else 1


@dataclass(frozen=True)
class WKBAlgebraSpec:
    cellulation: DualCellulation
    background: str = "b0"
    areas: Mapping[int, Fraction] = field(default_factory=dict)  # puncture -> area, default 1
    signing: Signing | None = None

    def __post_init__(self):
        if self.background not in BACKGROUNDS:
            raise ValueError(f"background must be one of {BACKGROUNDS}")

    @property
    def triangulation(self) -> IdealTriangulation:
        return self.cellulation.to_triangulation()

    def area(self, p: int) -> Fraction:
        a = Fraction(self.areas.get(p, 1))
        if a <= 0:
            raise NonPositiveArea(f"area at puncture {p} is {a}")
        return a


def floer_lambda(eps: int, area) -> NovikovScalar:
    return NovikovScalar.monomial(2 * eps, Fraction(area))


def assemble_floer_potential(spec: WKBAlgebraSpec, order: int = 12) -> QuiverWithPotential:
    T = spec.triangulation
    _corners(spec.cellulation)
    eps = spec.signing or Signing.constant(T)
    eps.check_total(T)
    for p in T.punctures:
        spec.area(p)
    Q = quiver_of_triangulation(T)
    terms: list = [(w, ONE) for w in face_words(T).values()]
    if spec.background == "b0":
        for p, w in puncture_words(T).items():
            terms.append((w, -floer_lambda(eps[p], spec.area(p))))
    order = max(order, max((len(w) for w, _ in terms), default=0))
    meta = {
        "background": spec.background,
        "areas": {str(p): str(spec.area(p)) for p in T.punctures},
        "signing": {str(p): s for p, s in eps.signs},
        "normal_form": "multiply-covered and multi-cell terms set to zero; "
        "agreement with the quiver potential holds up to weak right equivalence",
        "sign_choice": "lambda_p = eps(p) * 2 * q^A_p; the opposite global sign is weakly right equivalent",
        "outside_hypotheses": T.surface.is_closed and T.surface.n_marked == 1,
    }
    return QuiverWithPotential(Q, Potential(terms, order), order, meta)


def clockwise_words(W: Potential, T: IdealTriangulation) -> bool:
    """Every term is a closed walk of corner arrows, each a clockwise turn."""
    Q = quiver_of_triangulation(T)
    names = {a.id for a in Q.arrows}
    return all(set(w) <= names and Q.is_cycle(w) for w in W.support())


@dataclass
class ComparisonReport:
    passed: bool
    lambdas: dict[int, NovikovScalar]
    diagnostics: list[str]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "passed": self.passed,
            "lambdas": {str(p): str(c) for p, c in sorted(self.lambdas.items())},
            "diagnostics": self.diagnostics,
            "equivalence": "weak right equivalence",
        }


def compare_with_quiver(
    floer: QuiverWithPotential,
    T: IdealTriangulation,
    eps: Signing | None = None,
    areas: Mapping[int, Fraction] | None = None,
) -> ComparisonReport:
    """Decompose the Floer potential, check ``lambda_p = eps(p) 2 q^{A_p}``,
    replace each ``lambda_p`` by ``eps(p)`` and compare with ``W(T, eps)``."""
    eps = eps or Signing.constant(T)
    areas = areas or {}
    dec = glfs_decompose(floer.W, T)
    diags = list(dec.diagnostics)
    for p, lam in dec.lambdas.items():
        want = floer_lambda(eps[p], areas.get(p, 1))
        if lam != want:
            diags.append(f"puncture {p}: lambda = {lam}, expected {want}")
    if dec.remainder:
        diags.append(f"non-zero remainder with {len(dec.remainder)} terms")
    cycles = puncture_words(T)
    terms = {w: c for w, c in floer.W.items()}
    for p, w in cycles.items():
        if w in terms:
            terms[w] = NovikovScalar.const(-eps[p])
    substituted = Potential(terms, floer.W.order)
    target = qp_from_triangulation(T, eps, floer.order).W
    if not are_cyclically_equivalent(substituted, target):
        missing = [w for w in target.support() if substituted[w] != target[w]]
        extra = [w for w in substituted.support() if w not in target.support()]
        faces = {w: f for f, w in face_words(T).items()}
        for w in missing + extra:
            where = f"face {faces[w]}" if w in faces else "term"
            diags.append(f"{where} {'.'.join(w)}: {substituted[w]} vs {target[w]}")
        if not (missing or extra):
            diags.append("potentials differ")
    return ComparisonReport(not diags, dec.lambdas, diags)


@dataclass
class HomologyReport:
    passed: bool
    rank: int
    n_vertices: int
    kernel_rank: int
    expected_kernel: int | None
    diagnostics: list[str]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "passed": self.passed,
            "rank": self.rank,
            "vertices": self.n_vertices,
            "kernel_rank": self.kernel_rank,
            "expected_kernel": self.expected_kernel,
            "diagnostics": self.diagnostics,
        }


def homology_check(data, qp: QuiverWithPotential) -> HomologyReport:
    """Vertex count against the rank formula and, for closed surfaces, the
    kernel of the Euler form against the puncture count."""
    n = rank_formula(data)
    _, B = euler_form(qp)
    k = euler_kernel_rank(B)
    expected = None
    if isinstance(data, IdealTriangulation):
        data = data.surface
    if isinstance(data, MarkedSurface) and data.is_closed:
        expected = data.punctures
    diags = []
    nv = len(qp.quiver.vertices)
    if nv != n:
        diags.append(f"{nv} vertices but rank {n}")
    if expected is not None and k != expected:
        diags.append(f"kernel rank {k}, expected {expected}")
    return HomologyReport(not diags, n, nv, k, expected, diags)
