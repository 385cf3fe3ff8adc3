"""Ginzburg dg algebra of a quiver with potential and truncated Jacobian algebras."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .linalg import Echelon, ScalarEvaluator
from .novikov import ONE, ZERO, NovikovScalar
from .quiver import PathSum, QuiverWithPotential, Word, cyclic_derivative

Element = dict[Word, NovikovScalar]


def dual(a: str) -> str:
    return a + "*"


def loop(i: int) -> str:
    return f"t<{i}>"


@dataclass(frozen=True)
class GradedQuiver:
    """Arrows (degree 0), their duals ``a*`` (degree -1) and loops ``t<i>`` (degree -2)."""

    qp: QuiverWithPotential

    @cached_property
    def generators(self) -> dict[str, tuple[int, int, int]]:
        """``name -> (source, target, degree)``."""
        Q = self.qp.quiver
        gens = {}
        for a in Q.arrows:
            gens[a.id] = (a.src, a.tgt, 0)
            gens[dual(a.id)] = (a.tgt, a.src, -1)
        for v in Q.vertices:
            gens[loop(v)] = (v, v, -2)
        return gens

    def degree(self, w: Word) -> int:
        g = self.generators
        return sum(g[x][2] for x in w)

    def src(self, x: str) -> int:
        return self.generators[x][0]

    def tgt(self, x: str) -> int:
        return self.generators[x][1]

    def is_path(self, w: Word) -> bool:
        return all(self.tgt(w[k]) == self.src(w[k + 1]) for k in range(len(w) - 1))

    @cached_property
    def differential(self) -> dict[str, Element]:
        """``d`` on generators: ``d(a) = 0``, ``d(a*) = da W``,
        ``d(t_i) = sum e_i (a a* - a* a) e_i``."""
        Q = self.qp.quiver
        rules: dict[str, Element] = {}
        for a in Q.arrows:
            rules[a.id] = {}
            rules[dual(a.id)] = dict(cyclic_derivative(self.qp.potential, a.id))
        for v in Q.vertices:
            acc: Element = {}
            for a in Q.arrows:
                if a.src == v:
                    w = (a.id, dual(a.id))
                    acc[w] = acc.get(w, ZERO) + ONE
                if a.tgt == v:
                    w = (dual(a.id), a.id)
                    acc[w] = acc.get(w, ZERO) - ONE
            rules[loop(v)] = {w: c for w, c in acc.items() if c}
        return rules


def ginzburg_differential(qp: QuiverWithPotential) -> dict[str, Element]:
    return GradedQuiver(qp).differential


def apply_d(G: GradedQuiver, x: Element, order: int | None = None) -> Element:
    """Extend ``d`` by ``d(xy) = d(x) y + (-1)^{|x|} x d(y)``, dropping words longer than ``order``."""
    order = G.qp.order if order is None else order
    rules = G.differential
    gens = G.generators
    acc: Element = {}
    for w, c in x.items():
        sign = 1
        for i, g in enumerate(w):
            img = rules[g]
            if img:
                pre, post = w[:i], w[i + 1 :]
                for u, cu in img.items():
                    nw = pre + u + post
                    if len(nw) > order:
                        continue
                    val = c * cu if sign > 0 else -(c * cu)
                    acc[nw] = acc.get(nw, ZERO) + val
            if gens[g][2] % 2:
                sign = -sign
    return {w: c for w, c in sorted(acc.items()) if c}


def multiply(G: GradedQuiver, x: Element, y: Element, order: int | None = None) -> Element:
    acc: Element = {}
    for u, cu in x.items():
        for v, cv in y.items():
            if G.tgt(u[-1]) != G.src(v[0]):
                continue
            w = u + v
            if order is not None and len(w) > order:
                continue
            acc[w] = acc.get(w, ZERO) + cu * cv
    return {w: c for w, c in sorted(acc.items()) if c}


def random_word(G: GradedQuiver, length: int, rng: random.Random) -> Word | None:
    out_of: dict[int, list[str]] = {}
    for g, (s, _, _) in sorted(G.generators.items()):
        out_of.setdefault(s, []).append(g)
    v = rng.choice(sorted(out_of))
    w = []
    for _ in range(length):
        g = rng.choice(out_of[v])
        w.append(g)
        v = G.tgt(g)
    return tuple(w)


@dataclass
class DSquaredReport:
    passed: bool
    generators_checked: int
    words_checked: int
    failures: list[tuple[Word, Element]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "passed": self.passed,
            "generators_checked": self.generators_checked,
            "words_checked": self.words_checked,
            "failures": [
                {"word": list(w), "residual": {".".join(u): str(c) for u, c in r.items()}}
                for w, r in self.failures[:10]
            ],
        }


def check_d_squared(
    qp: QuiverWithPotential,
    order: int | None = None,
    n_words: int = 1000,
    max_length: int = 10,
    seed: int = 0,
) -> DSquaredReport:
    """``d^2 = 0`` on every generator and on random words.

    ``d`` never shortens a word, so truncation above ``order`` cannot hide a
    non-zero low-length term.
    """
    G = GradedQuiver(qp)
    order = max(qp.order, max_length) if order is None else order
    failures = []
    for g in sorted(G.generators):
        r = apply_d(G, apply_d(G, {(g,): ONE}, order), order)
        if r:
            failures.append(((g,), r))
    rng = random.Random(seed)
    for _ in range(n_words):
        w = random_word(G, rng.randint(1, max_length), rng)
        r = apply_d(G, apply_d(G, {w: ONE}, order), order)
        if r:
            failures.append((w, r))
    return DSquaredReport(not failures, len(G.generators), n_words, failures)


# ---------------------------------------------------------------------------
# truncated Jacobian algebra
# ---------------------------------------------------------------------------


@dataclass
class JacobianDims:
    order: int
    totals: list[int]
    per_pair: dict[tuple[int, int], list[int]]
    path_counts: list[int]
    stabilized_at: int | None
    generic_evaluation: bool = False

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "order": self.order,
            "dims": self.totals,
            "path_counts": self.path_counts,
            "stabilized_at": self.stabilized_at,
            "generic_evaluation": self.generic_evaluation,
            "per_pair": [
                {"source": i, "target": j, "dims": d} for (i, j), d in sorted(self.per_pair.items())
            ],
        }


def _paths(Q, max_len: int) -> dict[int, dict[int, list[Word]]]:
    """``paths[v][l]``: paths of length ``l`` starting at ``v``."""
    out_of: dict[int, list] = {v: [] for v in Q.vertices}
    for a in Q.arrows:
        out_of[a.src].append(a)
    paths = {v: {0: [()]} for v in Q.vertices}
    for v in Q.vertices:
        layer = [((), v)]
        for l in range(1, max_len + 1):
            nxt = []
            for w, end in layer:
                for a in out_of[end]:
                    nxt.append((w + (a.id,), a.tgt))
            paths[v][l] = [w for w, _ in nxt]
            layer = nxt
    return paths


def jacobian_dims(qp: QuiverWithPotential, order: int = 8, q_value=None) -> JacobianDims:
    """Dimensions of ``J / m^j`` for ``j = 1..order``.

    The span ``S`` of all truncated products ``u (da W) v`` is put in echelon
    form with pivots at the shortest path; then ``dim (I + m^j)/m^j`` is the
    number of pivots of length ``< j``, so one elimination per vertex pair
    gives every order.
    """
    Q = qp.quiver
    N = order
    paths = _paths(Q, N - 1)
    rels: dict[str, PathSum] = {}
    for a in Q.arrows:
        r = {w: c for w, c in cyclic_derivative(qp.potential, a.id).items() if len(w) < N}
        if r:
            rels[a.id] = r
    ev = ScalarEvaluator([c for r in rels.values() for c in r.values()], q_value=q_value)
    frels = {a: {w: ev(c) for w, c in r.items()} for a, r in rels.items()}

    ending_at: dict[int, dict[int, list[Word]]] = {v: {} for v in Q.vertices}
    for v in Q.vertices:
        for l, ws in paths[v].items():
            for w in ws:
                end = Q.tgt(w[-1]) if w else v
                ending_at[end].setdefault(l, []).append((w, v))

    echelons: dict[tuple[int, int], Echelon] = {}
    for a, r in frels.items():
        ta, sa = Q.tgt(a), Q.src(a)
        m = min(len(w) for w in r)
        for lu in range(0, N - m):
            for u, start in ending_at[ta].get(lu, []):
                for lv in range(0, N - m - lu):
                    for v in paths[sa][lv]:
                        end = Q.tgt(v[-1]) if v else sa
                        row = {}
                        for w, c in r.items():
                            full = u + w + v
                            if len(full) < N:
                                row[(len(full), full)] = c
                        if row:
                            echelons.setdefault((start, end), Echelon()).add(row)

    per_pair: dict[tuple[int, int], list[int]] = {}
    totals = [0] * N
    path_counts = [0] * N
    for i in Q.vertices:
        counts: dict[int, list[int]] = {}
        for l, ws in paths[i].items():
            for w in ws:
                j = Q.tgt(w[-1]) if w else i
                counts.setdefault(j, [0] * N)[l] += 1
        for j, by_len in counts.items():
            ech = echelons.get((i, j))
            piv = [0] * N
            if ech is not None:
                for (l, _) in ech.pivots:
                    piv[l] += 1
            dims = []
            cp = cpiv = 0
            for jj in range(1, N + 1):
                cp += by_len[jj - 1]
                cpiv += piv[jj - 1]
                dims.append(cp - cpiv)
            per_pair[(i, j)] = dims
            for k in range(N):
                totals[k] += dims[k]
        for l in range(N):
            path_counts[l] += len(paths[i][l])
    cum = []
    run = 0
    for c in path_counts:
        run += c
        cum.append(run)
    # smallest j with dim J/m^j = dim J/m^(j+1)
    stab = next((j for j in range(1, N) if totals[j] == totals[j - 1]), None)
    return JacobianDims(N, totals, per_pair, cum, stab, ev.used_generic)
