"""Quivers with potential: cyclic calculus, mutation, reduction, substitution.

Paths are tuples of arrow ids read left to right (``t(a_i) = s(a_{i+1})``).
A *path sum* is a ``dict`` from non-empty paths to :class:`NovikovScalar`.
A potential stores each cyclic word in its canonical rotation, the
lexicographically least rotation of its arrow-id tuple.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .iso import canonical_matrix
from .novikov import ONE, ZERO, NovikovScalar, parse
from .surface import IdealTriangulation, Signing, corner_arrows

Word = tuple[str, ...]
PathSum = dict[Word, NovikovScalar]

DEFAULT_ORDER = 12


class QuiverError(ValueError):
    pass


class LoopAtVertex(QuiverError):
    pass


class TwoCycleAtVertex(QuiverError):
    pass


class NotMutable(QuiverError):
    pass


class TruncationTooSmall(QuiverError):
    pass


class EndpointMismatch(QuiverError):
    pass


class NonInvertibleLinearPart(QuiverError):
    pass


class SelfFolded(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    src: int
    tgt: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows, key=lambda a: a.id)))
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow ids")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise QuiverError(f"arrow {a.id} has an endpoint outside the vertex set")

    @classmethod
    def build(cls, vertices: Iterable[int], arrows: Iterable[tuple[str, int, int]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(i, s, t) for i, s, t in arrows))

    @cached_property
    def arrow(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    def src(self, a: str) -> int:
        return self.arrow[a].src

    def tgt(self, a: str) -> int:
        return self.arrow[a].tgt

    def out_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def in_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tgt == v]

    def multiplicity(self, i: int, j: int) -> int:
        return sum(1 for a in self.arrows if a.src == i and a.tgt == j)

    def is_path(self, w: Word) -> bool:
        return all(self.tgt(w[k]) == self.src(w[k + 1]) for k in range(len(w) - 1))

    def is_cycle(self, w: Word) -> bool:
        return self.is_path(w) and self.tgt(w[-1]) == self.src(w[0])

    def path_ends(self, w: Word) -> tuple[int, int]:
        return self.src(w[0]), self.tgt(w[-1])

    def has_loops(self) -> bool:
        return any(a.src == a.tgt for a in self.arrows)

    def two_cycles(self) -> list[tuple[int, int]]:
        pairs = Counter((a.src, a.tgt) for a in self.arrows)
        return sorted((i, j) for (i, j) in pairs if i < j and (j, i) in pairs)

    def without_two_cycles(self) -> "Quiver":
        """Cancel opposite arrows in maximal pairs (sorted id order)."""
        keep = list(self.arrows)
        for i, j in self.two_cycles():
            fwd = [a for a in keep if a.src == i and a.tgt == j]
            bwd = [a for a in keep if a.src == j and a.tgt == i]
            k = min(len(fwd), len(bwd))
            drop = {a.id for a in fwd[:k] + bwd[:k]}
            keep = [a for a in keep if a.id not in drop]
        return Quiver(self.vertices, tuple(keep))

    def canonical_form(self) -> tuple:
        return canonical_matrix(self.vertices, [(a.src, a.tgt) for a in self.arrows])

    def is_isomorphic(self, other: "Quiver") -> bool:
        if len(self.vertices) != len(other.vertices) or len(self.arrows) != len(other.arrows):
            return False
        return self.canonical_form() == other.canonical_form()

    def relabel(self, vmap: Mapping[int, int] | None = None, amap: Mapping[str, str] | None = None) -> "Quiver":
        vmap = vmap or {}
        amap = amap or {}
        return Quiver(
            tuple(vmap.get(v, v) for v in self.vertices),
            tuple(Arrow(amap.get(a.id, a.id), vmap.get(a.src, a.src), vmap.get(a.tgt, a.tgt)) for a in self.arrows),
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        return cls.build(data["vertices"], [(a["id"], a["src"], a["tgt"]) for a in data["arrows"]])

    def to_dot(self) -> str:
        lines = ["digraph quiver {"]
        lines += [f"  {v};" for v in self.vertices]
        lines += [f'  {a.src} -> {a.tgt} [label="{a.id}"];' for a in self.arrows]
        return "\n".join(lines + ["}"]) + "\n"


# ---------------------------------------------------------------------------
# cyclic words and potentials
# ---------------------------------------------------------------------------


def canonical_rotation(w: Iterable[str]) -> Word:
    w = tuple(w)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


class Potential:
    """Finitely supported map from canonical cyclic words to scalars."""

    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping[Iterable[str], object] | Iterable = (), order: int = DEFAULT_ORDER):
        acc: dict[Word, NovikovScalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            w = canonical_rotation(w)
            if len(w) < 1:
                raise QuiverError("potential words must be non-empty")
            if len(w) > order:
                continue
            acc[w] = acc.get(w, ZERO) + NovikovScalar.coerce(c)
        self.terms = {w: c for w, c in sorted(acc.items()) if c}
        self.order = order

    def __getitem__(self, w) -> NovikovScalar:
        return self.terms.get(canonical_rotation(w), ZERO)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    def support(self) -> frozenset[Word]:
        return frozenset(self.terms)

    def __add__(self, other: "Potential") -> "Potential":
        return Potential(list(self.items()) + list(other.items()), min(self.order, other.order))

    def __neg__(self) -> "Potential":
        return Potential({w: -c for w, c in self.items()}, self.order)

    def __sub__(self, other: "Potential") -> "Potential":
        return self + (-other)

    def scale(self, t) -> "Potential":
        t = NovikovScalar.coerce(t)
        return Potential({w: t * c for w, c in self.items()}, self.order)

    def scale_by_length(self, factor) -> "Potential":
        """Multiply each length-``l`` word by ``factor(l)``."""
        return Potential({w: NovikovScalar.coerce(factor(len(w))) * c for w, c in self.items()}, self.order)

    def truncate(self, order: int) -> "Potential":
        return Potential(self.terms, min(order, self.order))

    def homogeneous(self, n: int) -> dict[Word, NovikovScalar]:
        return {w: c for w, c in self.items() if len(w) == n}

    def lengths(self) -> list[int]:
        return sorted({len(w) for w in self.terms})

    def is_reduced(self) -> bool:
        return all(len(w) >= 3 for w in self.terms)

    def map_coefficients(self, f) -> "Potential":
        return Potential({w: f(c) for w, c in self.items()}, self.order)

    def __eq__(self, other):
        return isinstance(other, Potential) and self.terms == other.terms

    def __repr__(self):
        return f"Potential({self}, order={self.order})"

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{'.'.join(w)}" for w, c in self.items())

    def to_json(self) -> list:
        return [{"word": list(w), "coef": str(c)} for w, c in self.items()]

    @classmethod
    def from_json(cls, data: list, order: int = DEFAULT_ORDER) -> "Potential":
        return cls([(t["word"], NovikovScalar.from_json(t["coef"])) for t in data], order)


@dataclass(frozen=True)
class QuiverWithPotential:
    quiver: Quiver
    potential: Potential
    order: int = DEFAULT_ORDER
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.potential.order != self.order:
            object.__setattr__(self, "potential", Potential(self.potential.terms, self.order))
        for w, _ in self.potential.items():
            for a in w:
                if a not in self.quiver.arrow:
                    raise QuiverError(f"potential uses unknown arrow {a}")
            if not self.quiver.is_cycle(w):
                raise QuiverError(f"word {'.'.join(w)} is not a cycle")

    @property
    def W(self) -> Potential:
        return self.potential

    def with_potential(self, W: Potential) -> "QuiverWithPotential":
        return QuiverWithPotential(self.quiver, W, self.order, dict(self.meta))

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "order": self.order,
            "quiver": self.quiver.to_json(),
            "potential": self.potential.to_json(),
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuiverWithPotential":
        order = int(data.get("order", DEFAULT_ORDER))
        return cls(
            Quiver.from_json(data["quiver"]),
            Potential.from_json(data.get("potential", []), order),
            order,
            dict(data.get("meta", {})),
        )


def make_qp(vertices, arrows, potential: Mapping | Iterable = (), order: int = DEFAULT_ORDER) -> QuiverWithPotential:
    """Convenience constructor: ``arrows`` as ``(id, src, tgt)`` triples."""
    return QuiverWithPotential(Quiver.build(vertices, arrows), Potential(potential, order), order)


# ---------------------------------------------------------------------------
# path sums
# ---------------------------------------------------------------------------


def ps_add(*sums: Mapping[Word, NovikovScalar]) -> PathSum:
    acc: PathSum = {}
    for s in sums:
        for w, c in s.items():
            acc[w] = acc.get(w, ZERO) + c
    return {w: c for w, c in sorted(acc.items()) if c}


def ps_scale(s: Mapping[Word, NovikovScalar], t) -> PathSum:
    t = NovikovScalar.coerce(t)
    return {w: t * c for w, c in s.items() if t * c}


def ps_mul(x: Mapping[Word, NovikovScalar], y: Mapping[Word, NovikovScalar], Q: Quiver, order: int | None = None) -> PathSum:
    acc: PathSum = {}
    for u, cu in x.items():
        for v, cv in y.items():
            if Q.tgt(u[-1]) != Q.src(v[0]):
                continue
            w = u + v
            if order is not None and len(w) > order:
                continue
            acc[w] = acc.get(w, ZERO) + cu * cv
    return {w: c for w, c in sorted(acc.items()) if c}


# ---------------------------------------------------------------------------
# cyclic calculus
# ---------------------------------------------------------------------------


def cyclic_derivative(W: Potential, a: str) -> PathSum:
    acc: PathSum = {}
    for w, c in W.items():
        for i, x in enumerate(w):
            if x == a:
                p = w[i + 1 :] + w[:i]
                if p:
                    acc[p] = acc.get(p, ZERO) + c
    return {w: c for w, c in sorted(acc.items()) if c}


def are_cyclically_equivalent(W1: Potential, W2: Potential, order: int | None = None) -> bool:
    n = min(W1.order, W2.order) if order is None else order
    return W1.truncate(n).terms == W2.truncate(n).terms


def disjoint(W1: Potential | Iterable, W2: Potential | Iterable) -> bool:
    s1 = W1.support() if isinstance(W1, Potential) else {canonical_rotation(w) for w in W1}
    s2 = W2.support() if isinstance(W2, Potential) else {canonical_rotation(w) for w in W2}
    return not (s1 & s2)


# ---------------------------------------------------------------------------
# construction from a triangulation
# ---------------------------------------------------------------------------


def face_words(T: IdealTriangulation) -> dict[int, Word]:
    """Clockwise 3-cycle ``T(f)`` of every face whose sides are all interior."""
    out = {}
    for t, tri in enumerate(T.triangles):
        if all(T.is_interior(e) for e, _ in tri):
            out[t] = canonical_rotation((f"t{t}c0", f"t{t}c2", f"t{t}c1"))
    return out


def puncture_words(T: IdealTriangulation) -> dict[int, Word]:
    """Anticlockwise cycle ``C(p)`` of corner arrows around each puncture."""
    return {
        p: canonical_rotation(tuple(f"t{h // 3}c{h % 3}" for h in T.corners[p]))
        for p in T.punctures
    }


def quiver_of_triangulation(T: IdealTriangulation) -> Quiver:
    return Quiver.build(T.interior_edges, [(n, s, t) for n, s, t, _ in corner_arrows(T)])


def qp_from_triangulation(
    T: IdealTriangulation,
    eps: Signing | Mapping[int, int] | None = None,
    order: int = DEFAULT_ORDER,
) -> QuiverWithPotential:
    """``W(T, eps) = sum_f T(f) - sum_p eps(p) C(p)`` on ``Q(T)``.

    The quiver is returned as constructed; at a puncture of valency 2 it has
    a 2-cycle (use :func:`reduce_qp` to remove it).
    """
    folded = T.self_folded_triangles()
    if folded:
        raise SelfFolded(f"self-folded triangles {folded} are not supported")
    if eps is None:
        eps = Signing.constant(T)
    elif not isinstance(eps, Signing):
        eps = Signing.from_map(eps)
    eps.check_total(T)
    Q = quiver_of_triangulation(T)
    terms: list = [(w, ONE) for w in face_words(T).values()]
    for p, w in puncture_words(T).items():
        terms.append((w, NovikovScalar.const(-eps[p])))
    order = max(order, max((len(w) for w, _ in terms), default=0))
    return QuiverWithPotential(Q, Potential(terms, order), order, {"signing": eps.as_dict()})


@dataclass
class GLFSDecomposition:
    success: bool
    lambdas: dict[int, NovikovScalar]
    remainder: Potential | None
    diagnostics: list[str]


def glfs_decompose(W: Potential, T: IdealTriangulation) -> GLFSDecomposition:
    """Split ``W = sum T(f) - sum lambda_p C(p) + W'`` with ``W'`` disjoint."""
    diags = []
    faces = face_words(T)
    cycles = puncture_words(T)
    rest = dict(W.terms)
    for f, w in faces.items():
        c = rest.pop(w, ZERO)
        if c != ONE:
            diags.append(f"face {f} ({'.'.join(w)}) has coefficient {c}, expected 1")
    lambdas = {}
    for p, w in cycles.items():
        c = rest.pop(w, ZERO)
        if not c:
            diags.append(f"puncture {p} cycle ({'.'.join(w)}) is missing")
        else:
            lambdas[p] = -c
    remainder = Potential(rest, W.order)
    if not disjoint(remainder, list(faces.values()) + list(cycles.values())):
        diags.append("remainder is not disjoint from the face and puncture cycles")
    return GLFSDecomposition(not diags, lambdas, remainder, diags)


# ---------------------------------------------------------------------------
# mutation
# ---------------------------------------------------------------------------


def reversed_name(a: str) -> str:
    return a[:-1] if a.endswith("'") else a + "'"


def composite_name(a: str, b: str) -> str:
    return f"[{a},{b}]"


def _check_mutable(Q: Quiver, k: int) -> None:
    if k not in Q.vertices:
        raise NotMutable(f"no vertex {k}")
    if any(a.src == k and a.tgt == k for a in Q.arrows):
        raise LoopAtVertex(f"loop at vertex {k}")
    ins = {a.src for a in Q.in_arrows(k)}
    outs = {a.tgt for a in Q.out_arrows(k)}
    if ins & outs:
        raise TwoCycleAtVertex(f"2-cycle through vertex {k} (via {sorted(ins & outs)})")


def _premutated_quiver(Q: Quiver, k: int) -> tuple[Quiver, list[tuple[Arrow, Arrow]]]:
    _check_mutable(Q, k)
    pairs = [(a, b) for a in Q.in_arrows(k) for b in Q.out_arrows(k)]
    arrows = []
    for x in Q.arrows:
        if x.src == k or x.tgt == k:
            arrows.append(Arrow(reversed_name(x.id), x.tgt, x.src))
        else:
            arrows.append(x)
    arrows += [Arrow(composite_name(a.id, b.id), a.src, b.tgt) for a, b in pairs]
    return Quiver(Q.vertices, tuple(arrows)), pairs


def mutate_quiver(Q: Quiver, k: int) -> Quiver:
    """Fomin-Zelevinsky mutation at ``k``.

    Cancelled 2-cycles prefer composite arrows first, then sorted ids.
    """
    P, _ = _premutated_quiver(Q, k)
    keep = list(P.arrows)
    for i, j in P.two_cycles():
        def key(a):
            return (not a.id.startswith("["), a.id)

        fwd = sorted((a for a in keep if a.src == i and a.tgt == j), key=key)
        bwd = sorted((a for a in keep if a.src == j and a.tgt == i), key=key)
        m = min(len(fwd), len(bwd))
        drop = {a.id for a in fwd[:m] + bwd[:m]}
        keep = [a for a in keep if a.id not in drop]
    return Quiver(P.vertices, tuple(keep))


def premutate_qp(qp: QuiverWithPotential, k: int) -> QuiverWithPotential:
    """``(mu~_k Q, [W] + Delta)`` with ``Delta = sum [ab] b' a'`` (coefficient +1)."""
    Q = qp.quiver
    P, pairs = _premutated_quiver(Q, k)
    terms: list = []
    for w, c in qp.potential.items():
        if len(w) > 1 and all(Q.tgt(x) == k for x in w):
            raise LoopAtVertex("potential has a loop at the mutation vertex")
        # rotate so the word does not start at k
        r = next((i for i in range(len(w)) if Q.src(w[i]) != k), None)
        if r is None:
            raise LoopAtVertex("potential has a loop at the mutation vertex")
        u = w[r:] + w[:r]
        out = []
        i = 0
        while i < len(u):
            if Q.tgt(u[i]) == k:
                out.append(composite_name(u[i], u[i + 1]))
                i += 2
            else:
                out.append(u[i])
                i += 1
        terms.append((tuple(out), c))
    for a, b in pairs:
        terms.append(((composite_name(a.id, b.id), reversed_name(b.id), reversed_name(a.id)), ONE))
    return QuiverWithPotential(P, Potential(terms, qp.order), qp.order, dict(qp.meta))


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def _det(m: list[list[NovikovScalar]]) -> NovikovScalar:
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    total = ZERO
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def _check_substitution(Q: Quiver, sigma: Mapping[str, Mapping[Word, object]]) -> None:
    for a, image in sigma.items():
        if a not in Q.arrow:
            raise EndpointMismatch(f"substitution for unknown arrow {a}")
        ends = (Q.src(a), Q.tgt(a))
        for w in image:
            if not w or not Q.is_path(w) or Q.path_ends(w) != ends:
                raise EndpointMismatch(f"image term {'.'.join(w)} of {a} does not run {ends[0]}->{ends[1]}")
    blocks: dict[tuple[int, int], list[str]] = {}
    for x in Q.arrows:
        blocks.setdefault((x.src, x.tgt), []).append(x.id)
    for ids in blocks.values():
        mat = []
        for a in ids:
            image = sigma.get(a, {(a,): ONE})
            mat.append([NovikovScalar.coerce(image.get((b,), ZERO)) for b in ids])
        if not _det(mat):
            raise NonInvertibleLinearPart(f"linear part on arrows {ids} is singular")


def expand_word(w: Word, sigma: Mapping[str, Mapping[Word, object]], order: int) -> PathSum:
    """Image of the path ``w`` under ``sigma``, dropping words longer than ``order``."""
    acc: dict[Word, NovikovScalar] = {(): ONE}
    remaining = len(w)
    for a in w:
        remaining -= 1
        image = sigma.get(a, {(a,): ONE})
        nxt: dict[Word, NovikovScalar] = {}
        for u, cu in acc.items():
            for v, cv in image.items():
                x = u + tuple(v)
                if len(x) + remaining > order:
                    continue
                nxt[x] = nxt.get(x, ZERO) + cu * NovikovScalar.coerce(cv)
        acc = {x: c for x, c in nxt.items() if c}
    return acc


def apply_substitution(qp: QuiverWithPotential, sigma: Mapping[str, Mapping[Word, object]]) -> QuiverWithPotential:
    """Transport the potential through the algebra map ``a -> sigma(a)``."""
    sigma = {a: {tuple(w): NovikovScalar.coerce(c) for w, c in im.items()} for a, im in sigma.items()}
    _check_substitution(qp.quiver, sigma)
    terms = []
    for w, c in qp.potential.items():
        for u, cu in expand_word(w, sigma, qp.order).items():
            terms.append((u, c * cu))
    return qp.with_potential(Potential(terms, qp.order))


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


@dataclass
class ReductionReport:
    cancelled_pairs: int
    removed: list[tuple[str, str]]
    substitutions: list[dict[str, PathSum]]
    order: int


def _invertible(c: NovikovScalar) -> bool:
    return c.is_monomial()


def _substitute_terms(terms: dict[Word, NovikovScalar], sigma: dict[str, PathSum], order: int) -> dict[Word, NovikovScalar]:
    acc: dict[Word, NovikovScalar] = {}
    for w, c in terms.items():
        if not any(a in sigma for a in w):
            acc[w] = acc.get(w, ZERO) + c
            continue
        for u, cu in expand_word(w, sigma, order).items():
            u = canonical_rotation(u)
            acc[u] = acc.get(u, ZERO) + c * cu
    return {w: c for w, c in acc.items() if c}


def _split_pair(terms, Q, order, substitutions):
    """Find a quadratic term ``c x y`` and isolate it in the quadratic part."""
    quad = [(w, c) for w, c in sorted(terms.items()) if len(w) == 2]
    for w, c in quad:
        x, y = w
        if x == y or Q.src(x) == Q.tgt(x):
            raise TruncationTooSmall(f"quadratic loop term {x}.{y} cannot be split")
    for w, c in quad:
        if not _invertible(c):
            continue
        x, y = w
        # make x pair only with y
        sigma = {}
        for w2, c2 in quad:
            if w2 == w:
                continue
            rot = [w2[i:] + w2[:i] for i in range(2)]
            for u in rot:
                if u[0] == x and u[1] != y:
                    sigma.setdefault(y, {(y,): ONE})[(u[1],)] = -(c2 / c)
        if sigma:
            substitutions.append(sigma)
            terms = _substitute_terms(terms, sigma, order)
        quad = [(w2, c2) for w2, c2 in sorted(terms.items()) if len(w2) == 2]
        c = terms[canonical_rotation((x, y))]
        sigma = {}
        for w2, c2 in quad:
            rot = [w2[i:] + w2[:i] for i in range(2)]
            for u in rot:
                if u[1] == y and u[0] != x:
                    sigma.setdefault(x, {(x,): ONE})[(u[0],)] = -(c2 / c)
        if sigma:
            substitutions.append(sigma)
            terms = _substitute_terms(terms, sigma, order)
        return terms, x, y
    raise TruncationTooSmall("quadratic part has no invertible coefficient to split off")


def reduce_qp(qp: QuiverWithPotential) -> tuple[QuiverWithPotential, ReductionReport]:
    """Split off the trivial part: remove every 2-cycle of the potential.

    Each cancelled pair ``(x, y)`` is isolated by linear changes of arrows,
    then every other term through ``x`` (or ``y``) is removed by
    ``y -> y - c^{-1} coef U`` (or ``x -> ...``), which only creates longer
    terms; the loop stops once these exceed the truncation order.
    """
    order = qp.order
    if order < 3:
        raise TruncationTooSmall("reduction needs truncation order >= 3")
    Q = qp.quiver
    terms = dict(qp.potential.terms)
    removed: list[tuple[str, str]] = []
    substitutions: list[dict[str, PathSum]] = []
    while any(len(w) == 2 for w in terms):
        terms, x, y = _split_pair(terms, Q, order, substitutions)
        c = terms[canonical_rotation((x, y))]
        while True:
            cands = []
            for w, cw in terms.items():
                if len(w) <= 2 or (x not in w and y not in w):
                    continue
                cands.append((len(w), w, cw))
            if not cands:
                break
            _, w, cw = min(cands)
            if x in w:
                i = w.index(x)
                U = w[i + 1 :] + w[:i]
                sigma = {y: {(y,): ONE, U: -(cw / c)}}
            else:
                i = w.index(y)
                V = w[i + 1 :] + w[:i]
                sigma = {x: {(x,): ONE, V: -(cw / c)}}
            substitutions.append(sigma)
            terms = _substitute_terms(terms, sigma, order)
        terms.pop(canonical_rotation((x, y)), None)
        leftover = [w for w in terms if x in w or y in w]
        if leftover:
            raise TruncationTooSmall(f"terms {leftover} still involve {x},{y}")
        removed.append((x, y))
        Q = Quiver(Q.vertices, tuple(a for a in Q.arrows if a.id not in (x, y)))
    red = QuiverWithPotential(Q, Potential(terms, order), order, dict(qp.meta))
    return red, ReductionReport(len(removed), removed, substitutions, order)


def mutate_qp(qp: QuiverWithPotential, k: int) -> QuiverWithPotential:
    return reduce_qp(premutate_qp(qp, k))[0]


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def potential_from_text(spec: Mapping[str, str | int | Fraction], order: int = DEFAULT_ORDER) -> Potential:
    """``{"a.b.c": "1", ...}`` to a potential."""
    return Potential(
        [(tuple(k.split(".")), parse(str(v)) if isinstance(v, str) else v) for k, v in spec.items()],
        order,
    )
