"""The cyclic minimal A-infinity category of a quiver with potential.

Objects are the vertices.  ``Hom(i, j)`` has basis

* ``("e", i)``  unit, degree 0 (only if ``i == j``),
* ``("a", x)``  an arrow ``x: i -> j``, degree 1,
* ``("d", x)``  the dual of an arrow ``x: j -> i``, degree 2,
* ``("c", i)``  the counit, degree 3 (only if ``i == j``).

Conventions.  Operations are stored in bar form ``b_k(x_1, ..., x_k)`` with
inputs in path order (``x_1 in Hom(i_0, i_1)``, ``x_2 in Hom(i_1, i_2)``...),
of degree ``2 - k`` in the unshifted grading.  The relations read

    sum (-1)^{|x_1|' + ... + |x_i|'} b(x_1..x_i, b(x_{i+1}..x_{i+j}), ..) = 0

with ``|x|' = |x| - 1``.  ``b_2(x, y) = (-1)^{|x|'} x.y`` where ``.`` is the
graded Frobenius product (``a.b = sum W_3(a,b,c) c^``, ``a.a^ = e^``,
``a^.a = e^``, units act trivially).  For ``k >= 3``, ``b_k`` is non-zero only
on arrows: ``b_k(a_1..a_k) = sum_c W_{k+1}(a_1..a_k, c) c^`` where ``W_n`` is
the cyclically symmetrised length-``n`` part of the potential.  In the
reversed (right-to-left) notation ``m_k(f_k, ..., f_1) = b_k(f_1, ..., f_k)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .linalg import kernel_rank
from .novikov import ONE, ZERO, NovikovScalar
from .quiver import Potential, QuiverWithPotential

Basis = tuple[str, object]
Vector = dict[Basis, NovikovScalar]

DEGREE = {"e": 0, "a": 1, "d": 2, "c": 3}


class NotReduced(ValueError):
    pass


class ObjectMismatch(ValueError):
    pass


class ZeroScalar(ValueError):
    pass


def _add(acc: dict, key, c: NovikovScalar) -> None:
    v = acc.get(key, ZERO) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@dataclass
class CyclicAInfinity:
    qp: QuiverWithPotential
    ops: dict[int, dict[tuple[Basis, ...], Vector]]
    ends: dict[Basis, tuple[int, int]] = field(default_factory=dict)

    @property
    def objects(self) -> tuple[int, ...]:
        return self.qp.quiver.vertices

    def degree(self, x: Basis) -> int:
        return DEGREE[x[0]]

    def src(self, x: Basis) -> int:
        return self.ends[x][0]

    def tgt(self, x: Basis) -> int:
        return self.ends[x][1]

    def hom_basis(self, i: int, j: int) -> list[Basis]:
        return sorted(x for x, (s, t) in self.ends.items() if s == i and t == j)

    def hom_dims(self, i: int, j: int) -> tuple[int, int, int, int]:
        dims = [0, 0, 0, 0]
        for x in self.hom_basis(i, j):
            dims[self.degree(x)] += 1
        return tuple(dims)

    def b(self, *xs: Basis) -> Vector:
        if any(self.tgt(xs[k]) != self.src(xs[k + 1]) for k in range(len(xs) - 1)):
            return {}
        return dict(self.ops.get(len(xs), {}).get(tuple(xs), {}))

    def m(self, *fs: Basis) -> Vector:
        """Right-to-left notation: ``m_k(f_k, ..., f_1) = b_k(f_1, ..., f_k)``."""
        return self.b(*reversed(fs))

    def cyclic_tensor(self, *fs: Basis) -> NovikovScalar:
        """``c_n(f_n, ..., f_1) = <b_{n-1}(f_1..f_{n-1}), f_n>``."""
        xs = tuple(reversed(fs))
        out = self.b(*xs[:-1])
        total = ZERO
        for y, c in out.items():
            total = total + c * pairing(self, y, xs[-1])
        return total

    def structure_constants(self) -> list[dict]:
        rows = []
        for k in sorted(self.ops):
            for ins, out in sorted(self.ops[k].items(), key=lambda kv: [str(x) for x in kv[0]]):
                for y, c in sorted(out.items(), key=lambda kv: str(kv[0])):
                    rows.append(
                        {
                            "k": k,
                            "inputs": [f"{x[0]}:{x[1]}" for x in ins],
                            "output": f"{y[0]}:{y[1]}",
                            "coef": str(c),
                        }
                    )
        return rows


def symmetrised_tensor(W: Potential, n: int) -> dict[tuple[str, ...], NovikovScalar]:
    """``W_n(seq) = sum_w c_w * #{rotations of w equal to seq}``."""
    out: dict[tuple[str, ...], NovikovScalar] = {}
    for w, c in W.items():
        if len(w) != n:
            continue
        for r in range(n):
            _add(out, w[r:] + w[:r], c)
    return out


def _frobenius(qp: QuiverWithPotential, W3: dict) -> dict[tuple[Basis, Basis], Vector]:
    """Non-zero graded products ``x.y`` (units included)."""
    Q = qp.quiver
    prod: dict[tuple[Basis, Basis], Vector] = defaultdict(dict)
    for (a, b, c), coef in W3.items():
        _add(prod[(("a", a), ("a", b))], ("d", c), coef)
    for x in Q.arrows:
        prod[(("a", x.id), ("d", x.id))] = {("c", x.src): ONE}
        prod[(("d", x.id), ("a", x.id))] = {("c", x.tgt): ONE}
    return {k: v for k, v in prod.items() if v}


def build_category(qp: QuiverWithPotential, n_max: int | None = None) -> CyclicAInfinity:
    W = qp.potential
    if not W.is_reduced():
        raise NotReduced("potential has words of length < 3; reduce it first")
    Q = qp.quiver
    ends: dict[Basis, tuple[int, int]] = {}
    for v in Q.vertices:
        ends[("e", v)] = (v, v)
        ends[("c", v)] = (v, v)
    for x in Q.arrows:
        ends[("a", x.id)] = (x.src, x.tgt)
        ends[("d", x.id)] = (x.tgt, x.src)
    top = max(W.lengths(), default=3) - 1
    if n_max is not None:
        top = min(top, n_max)
    ops: dict[int, dict[tuple[Basis, ...], Vector]] = {}

    b2: dict[tuple[Basis, ...], Vector] = {}
    for (x, y), val in _frobenius(qp, symmetrised_tensor(W, 3)).items():
        sign = 1 if (DEGREE[x[0]] - 1) % 2 == 0 else -1
        b2[(x, y)] = {k: v if sign > 0 else -v for k, v in val.items()}
    for x, (s, t) in ends.items():
        sx = 1 if (DEGREE[x[0]] - 1) % 2 == 0 else -1
        b2[(("e", s), x)] = {x: -ONE}
        key = (x, ("e", t))
        if key in b2 and x[0] == "e":
            continue
        b2[key] = {x: ONE if sx > 0 else -ONE}
    ops[2] = b2

    for k in range(3, top + 1):
        Wn = symmetrised_tensor(W, k + 1)
        bk: dict[tuple[Basis, ...], Vector] = {}
        for seq, coef in Wn.items():
            key = tuple(("a", a) for a in seq[:-1])
            bk.setdefault(key, {})
            _add(bk[key], ("d", seq[-1]), coef)
        ops[k] = {key: v for key, v in bk.items() if v}
    return CyclicAInfinity(qp, ops, ends)


def pairing(C: CyclicAInfinity, x: Basis, y: Basis) -> NovikovScalar:
    """Perfect pairing into degree 3: ``<e, e^> = <a, a^> = 1`` (and symmetric)."""
    if C.tgt(x) != C.src(y) or C.tgt(y) != C.src(x):
        raise ObjectMismatch(f"{x} and {y} do not pair")
    kinds = {x[0], y[0]}
    if x[1] == y[1] and (kinds == {"e", "c"} or kinds == {"a", "d"}):
        return ONE
    return ZERO


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class AInfinityReport:
    passed: bool
    n_max: int
    tuples_checked: int
    degree_violations: list
    failures: list

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "passed": self.passed,
            "n_max": self.n_max,
            "tuples_checked": self.tuples_checked,
            "degree_violations": [str(v) for v in self.degree_violations[:10]],
            "failures": [str(f) for f in self.failures[:10]],
        }


def _shifted(x: Basis) -> int:
    return DEGREE[x[0]] - 1


def relation(C: CyclicAInfinity, xs: tuple[Basis, ...]) -> Vector:
    """Left side of the A-infinity relation on the input tuple ``xs``."""
    k = len(xs)
    acc: Vector = {}
    prefix = [0]
    for x in xs:
        prefix.append(prefix[-1] + _shifted(x))
    for j in range(2, k + 1):
        outer_len = k - j + 1
        if outer_len < 2 or outer_len not in C.ops or j not in C.ops:
            continue
        for i in range(0, k - j + 1):
            inner = C.ops[j].get(xs[i : i + j])
            if not inner:
                continue
            sign = -1 if prefix[i] % 2 else 1
            for y, cy in inner.items():
                outer = C.ops[outer_len].get(xs[:i] + (y,) + xs[i + j :])
                if not outer:
                    continue
                for z, cz in outer.items():
                    _add(acc, z, cy * cz if sign > 0 else -(cy * cz))
    return acc


def verify_ainfty(C: CyclicAInfinity, n_max: int = 8) -> AInfinityReport:
    """Check every A-infinity relation with at most ``n_max`` inputs.

    Only tuples on which some composite ``b(.., b(..), ..)`` is non-zero can
    violate a relation; they are enumerated by joining inner outputs with
    outer inputs, so the check is exhaustive.
    """
    degree_violations = []
    for k, table in C.ops.items():
        for ins, out in table.items():
            for y in out:
                if C.degree(y) != sum(C.degree(x) for x in ins) + 2 - k:
                    degree_violations.append((ins, y))
                if C.src(y) != C.src(ins[0]) or C.tgt(y) != C.tgt(ins[-1]):
                    degree_violations.append((ins, y, "endpoints"))

    by_input: dict[Basis, list[tuple[int, tuple[Basis, ...], int]]] = defaultdict(list)
    for k, table in C.ops.items():
        for ins in table:
            for p, x in enumerate(ins):
                by_input[x].append((k, ins, p))

    candidates: set[tuple[Basis, ...]] = set()
    for j, table in C.ops.items():
        for ins, out in table.items():
            for y in out:
                for k, outer, p in by_input.get(y, ()):
                    if k + j - 1 <= n_max:
                        candidates.add(outer[:p] + ins + outer[p + 1 :])
    failures = []
    for xs in sorted(candidates, key=lambda t: (len(t), [str(x) for x in t])):
        r = relation(C, xs)
        if r:
            failures.append((xs, r))
    ok = not failures and not degree_violations
    return AInfinityReport(ok, n_max, len(candidates), degree_violations, failures)


# ---------------------------------------------------------------------------
# rescaling and K-theory
# ---------------------------------------------------------------------------


def rescale_action(C: CyclicAInfinity, lam) -> CyclicAInfinity:
    """``b_k -> lam^{k-2} b_k``."""
    lam = NovikovScalar.coerce(lam)
    if not lam:
        raise ZeroScalar("rescaling needs an invertible scalar")
    ops = {}
    for k, table in C.ops.items():
        f = lam ** (k - 2)
        ops[k] = {ins: {y: f * c for y, c in out.items()} for ins, out in table.items()}
    return CyclicAInfinity(C.qp, ops, dict(C.ends))


def rescaled_potential(W: Potential, lam) -> Potential:
    """Potential whose category is ``rescale_action(C(W), lam)``: the length-``l``
    part is multiplied by ``lam^{l-3}``."""
    lam = NovikovScalar.coerce(lam)
    return W.scale_by_length(lambda l: lam ** (l - 3))


def transport_by_degree(C: CyclicAInfinity, factors: dict[int, NovikovScalar]) -> CyclicAInfinity:
    """Transport the structure along ``f(x) = factors[|x|] * x``.

    Factors must be monomials (exactly invertible).
    """
    fac = {d: NovikovScalar.coerce(v) for d, v in factors.items()}
    ops = {}
    for k, table in C.ops.items():
        new = {}
        for ins, out in table.items():
            scale = ONE
            for x in ins:
                scale = scale / fac.get(C.degree(x), ONE)
            new[ins] = {y: fac.get(C.degree(y), ONE) * scale * c for y, c in out.items()}
        ops[k] = new
    return CyclicAInfinity(C.qp, ops, dict(C.ends))


def same_structure(C1: CyclicAInfinity, C2: CyclicAInfinity) -> bool:
    """Term-by-term equality of all structure constants."""
    keys = set(C1.ops) | set(C2.ops)
    for k in keys:
        t1 = {i: o for i, o in C1.ops.get(k, {}).items() if o}
        t2 = {i: o for i, o in C2.ops.get(k, {}).items() if o}
        if t1 != t2:
            return False
    return C1.ends == C2.ends


def euler_form(qp: QuiverWithPotential) -> tuple[list[int], list[list[int]]]:
    """``B[i][j] = #arrows(j -> i) - #arrows(i -> j)`` in vertex order."""
    Q = qp.quiver if isinstance(qp, QuiverWithPotential) else qp
    vs = list(Q.vertices)
    idx = {v: n for n, v in enumerate(vs)}
    B = [[0] * len(vs) for _ in vs]
    for a in Q.arrows:
        B[idx[a.tgt]][idx[a.src]] += 1
        B[idx[a.src]][idx[a.tgt]] -= 1
    return vs, B


def euler_kernel_rank(B: Iterable[Iterable[int]]) -> int:
    B = [list(r) for r in B]
    if not B:
        return 0
    return kernel_rank(B)
