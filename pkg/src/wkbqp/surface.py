"""Marked bordered surfaces, ideal triangulations and flips.

A triangulation is stored as a list of triangles, each a triple of *sides*
``(edge, sign)`` listed anticlockwise with respect to the surface
orientation.  Side ``j`` of triangle ``t`` is the half-edge ``h = 3*t + j``;
it runs from vertex ``origin(h)`` to ``origin(next(h))`` with the triangle on
its left.  An interior edge occurs in exactly two sides with opposite signs
(orientation-preserving gluing); a boundary edge occurs once.

Everything else (twins, marked points, boundary components, genus) is
derived, so a triangulation is fully described by its triangle list.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

__all__ = [
    "BoundaryEdge",
    "Check",
    "Degenerate",
    "DualCellulation",
    "IdealTriangulation",
    "InvalidSurface",
    "MarkedSurface",
    "SelfFoldedFlip",
    "Signing",
    "SurfaceError",
    "ValidationReport",
    "annulus",
    "closed_surface",
    "corner_arrows",
    "dual_cellulation",
    "flip",
    "fixture",
    "flippable_edges",
    "is_glfs_admissible",
    "one_vertex_surface",
    "random_flip_walk",
    "rank_formula",
    "torus",
    "validate",
]


class SurfaceError(ValueError):
    pass


class InvalidSurface(SurfaceError):
    pass


class BoundaryEdge(SurfaceError):
    pass


class SelfFoldedFlip(SurfaceError):
    pass


class Degenerate(SurfaceError):
    pass


@dataclass(frozen=True)
class MarkedSurface:
    """Topological type ``(genus, #punctures, marked points per boundary circle)``."""

    genus: int
    punctures: int
    boundary: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(int(m) for m in self.boundary))
        if self.genus < 0 or self.punctures < 0:
            raise InvalidSurface("genus and puncture count must be non-negative")
        if any(m < 1 for m in self.boundary):
            raise InvalidSurface("every boundary component needs a marked point")
        if self.n_marked < 1:
            raise InvalidSurface("a marked surface needs at least one marked point")
        if self.genus == 0 and not self.boundary and self.punctures < 5:
            raise InvalidSurface("spheres need at least five marked points")

    @property
    def n_marked(self) -> int:
        return self.punctures + sum(self.boundary)

    @property
    def is_closed(self) -> bool:
        return not self.boundary

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.boundary)

    def pole_orders(self) -> list[int]:
        """Pole orders of a differential realising the surface.

        A puncture is a double pole; a boundary circle with ``m`` marked
        points is a pole of order ``m + 2``.
        """
        return [2] * self.punctures + [m + 2 for m in self.boundary]

    def meets_closed_assumptions(self) -> bool:
        return self.is_closed and self.genus > 0 and self.punctures >= 2


def rank_formula(data) -> int:
    """``6g - 6 + sum(ord(p) + 1)`` over poles.

    ``data`` is a :class:`MarkedSurface`, an :class:`IdealTriangulation`, or a
    pair ``(genus, pole_orders)``.  For a closed surface with ``d`` punctures
    this is ``6g - 6 + 3d``.
    """
    if isinstance(data, IdealTriangulation):
        data = data.surface
    if isinstance(data, MarkedSurface):
        genus, orders = data.genus, data.pole_orders()
    else:
        genus, orders = data
    return 6 * genus - 6 + sum(o + 1 for o in orders)


# ---------------------------------------------------------------------------
# triangulations
# ---------------------------------------------------------------------------

Side = tuple[int, int]


def _nxt(h: int) -> int:
    return h - h % 3 + (h + 1) % 3


def _prv(h: int) -> int:
    return h - h % 3 + (h + 2) % 3


@dataclass(frozen=True)
class IdealTriangulation:
    """An ideal triangulation given by its anticlockwise triangle list."""

    triangles: tuple[tuple[Side, Side, Side], ...]
    declared: MarkedSurface | None = field(default=None, compare=False)

    def __post_init__(self):
        tris = tuple(tuple((int(e), 1 if int(s) > 0 else -1) for e, s in t) for t in self.triangles)
        if any(len(t) != 3 for t in tris):
            raise SurfaceError("every triangle needs exactly three sides")
        object.__setattr__(self, "triangles", tris)

    # -- half-edge structure --------------------------------------------
    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_half_edges(self) -> int:
        return 3 * len(self.triangles)

    def side(self, h: int) -> Side:
        return self.triangles[h // 3][h % 3]

    def edge_of(self, h: int) -> int:
        return self.triangles[h // 3][h % 3][0]

    next = staticmethod(_nxt)
    prev = staticmethod(_prv)

    @cached_property
    def occurrences(self) -> dict[int, list[int]]:
        occ: dict[int, list[int]] = {}
        for h in range(self.n_half_edges):
            occ.setdefault(self.edge_of(h), []).append(h)
        return occ

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.occurrences))

    @cached_property
    def interior_edges(self) -> tuple[int, ...]:
        return tuple(e for e in self.edges if len(self.occurrences[e]) == 2)

    @cached_property
    def boundary_edges(self) -> tuple[int, ...]:
        return tuple(e for e in self.edges if len(self.occurrences[e]) == 1)

    def is_interior(self, e: int) -> bool:
        return len(self.occurrences.get(e, ())) == 2

    @cached_property
    def twin(self) -> tuple[int | None, ...]:
        tw: list[int | None] = [None] * self.n_half_edges
        for hs in self.occurrences.values():
            if len(hs) == 2:
                a, b = hs
                tw[a], tw[b] = b, a
        return tuple(tw)

    @cached_property
    def origin(self) -> tuple[int, ...]:
        """Marked-point label of the start vertex of every half-edge."""
        parent = list(range(self.n_half_edges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for h, t in enumerate(self.twin):
            if t is not None:
                union(h, _nxt(t))
        labels: dict[int, int] = {}
        out = []
        for h in range(self.n_half_edges):
            r = find(h)
            if r not in labels:
                labels[r] = len(labels)
            out.append(labels[r])
        return tuple(out)

    def end(self, h: int) -> int:
        return self.origin[_nxt(h)]

    @cached_property
    def n_vertices(self) -> int:
        return len(set(self.origin)) if self.triangles else 0

    @cached_property
    def edge_endpoints(self) -> dict[int, tuple[int, int]]:
        """Endpoints of each edge in its reference direction."""
        out = {}
        for e, hs in self.occurrences.items():
            h = hs[0]
            a, b = self.origin[h], self.end(h)
            out[e] = (a, b) if self.side(h)[1] > 0 else (b, a)
        return out

    @cached_property
    def valency(self) -> dict[int, int]:
        """Number of edge ends at each marked point (loops count twice)."""
        val: Counter = Counter()
        for a, b in self.edge_endpoints.values():
            val[a] += 1
            val[b] += 1
        return dict(sorted(val.items()))

    @cached_property
    def boundary_cycles(self) -> tuple[tuple[int, ...], ...]:
        """Boundary components as cycles of boundary half-edges."""
        out_of: dict[int, list[int]] = {}
        for e in self.boundary_edges:
            h = self.occurrences[e][0]
            out_of.setdefault(self.origin[h], []).append(h)
        if any(len(v) != 1 for v in out_of.values()):
            raise SurfaceError("a boundary marked point must have one outgoing boundary edge")
        seen: set[int] = set()
        cycles = []
        for e in self.boundary_edges:
            h0 = self.occurrences[e][0]
            if h0 in seen:
                continue
            cyc = []
            h = h0
            while h not in seen:
                seen.add(h)
                cyc.append(h)
                nxt = out_of.get(self.end(h))
                if nxt is None:
                    raise SurfaceError("boundary does not close up")
                h = nxt[0]
            cycles.append(tuple(cyc))
        return tuple(cycles)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(self.origin[h] for cyc in self.boundary_cycles for h in cyc)

    @cached_property
    def punctures(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n_vertices) if v not in self.boundary_vertices)

    @cached_property
    def surface(self) -> MarkedSurface:
        b = len(self.boundary_cycles)
        chi = self.n_vertices - len(self.edges) + self.n_triangles
        twice_g = 2 - b - chi
        if twice_g < 0 or twice_g % 2:
            raise SurfaceError(f"Euler characteristic {chi} is inconsistent with {b} boundary circles")
        boundary = tuple(sorted(len(c) for c in self.boundary_cycles))
        return MarkedSurface.__new__(MarkedSurface)._init_unchecked(
            twice_g // 2, len(self.punctures), boundary
        )

    # -- marked-point rotation ------------------------------------------
    def rotate(self, h: int) -> int | None:
        """Next outgoing half-edge anticlockwise around ``origin(h)``."""
        return self.twin[_prv(h)]

    @cached_property
    def corners(self) -> dict[int, tuple[int, ...]]:
        """Half-edges ``h`` (corner between ``h`` and ``prev(h)``) around each
        marked point, in anticlockwise order.

        For boundary points the sequence starts at the outgoing boundary
        half-edge and ends at the corner touching the incoming one.
        """
        out: dict[int, tuple[int, ...]] = {}
        for cyc in self.boundary_cycles:
            for h0 in cyc:
                seq = [h0]
                h = h0
                while self.twin[_prv(h)] is not None:
                    h = self.twin[_prv(h)]
                    seq.append(h)
                out[self.origin[h0]] = tuple(seq)
        done: set[int] = set()
        for h0 in range(self.n_half_edges):
            v = self.origin[h0]
            if v in out or h0 in done:
                continue
            seq = []
            h = h0
            while h not in done:
                done.add(h)
                seq.append(h)
                h = self.twin[_prv(h)]
            out[v] = tuple(seq)
        return dict(sorted(out.items()))

    # -- predicates -------------------------------------------------------
    def self_folded_triangles(self) -> list[int]:
        return [t for t, tri in enumerate(self.triangles) if len({e for e, _ in tri}) < 3]

    def loops(self) -> list[int]:
        return [e for e, (a, b) in self.edge_endpoints.items() if a == b]

    def is_nondegenerate(self) -> bool:
        if self.self_folded_triangles():
            return False
        return all(self.valency.get(p, 0) >= 3 for p in self.punctures)

    # -- canonical form -----------------------------------------------------
    def _code_from(self, h0: int):
        tri_id = {h0 // 3: 0}
        entry = [h0]
        edge_id: dict[int, int] = {}
        edge_dir: dict[int, int] = {}
        code = []
        i = 0
        while i < len(entry):
            start = entry[i]
            row = []
            for k in range(3):
                h = start - start % 3 + (start + k) % 3
                e, s = self.side(h)
                if e not in edge_id:
                    edge_id[e] = len(edge_id)
                    edge_dir[e] = s
                row.append((edge_id[e], 1 if s == edge_dir[e] else -1))
                tw = self.twin[h]
                if tw is not None and tw // 3 not in tri_id:
                    tri_id[tw // 3] = len(entry)
                    entry.append(tw)
            code.append(tuple(row))
            i += 1
        return tuple(code)

    def canonical_code(self) -> tuple:
        """Lexicographically least relabelling over all starting half-edges.

        Two connected triangulations are orientation-preservingly isomorphic
        iff their canonical codes agree.
        """
        if not self.triangles:
            return ()
        return min(self._code_from(h) for h in range(self.n_half_edges))

    def canonical(self) -> "IdealTriangulation":
        return IdealTriangulation(self.canonical_code())

    def is_isomorphic(self, other: "IdealTriangulation") -> bool:
        return (
            self.n_triangles == other.n_triangles
            and len(self.edges) == len(other.edges)
            and self.canonical_code() == other.canonical_code()
        )

    def relabel_edges(self, mapping: dict[int, int]) -> "IdealTriangulation":
        return IdealTriangulation(tuple(tuple((mapping[e], s) for e, s in t) for t in self.triangles))

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        s = self.surface
        return {
            "schema_version": 1,
            "genus": s.genus,
            "punctures": s.punctures,
            "boundary": list(s.boundary),
            "triangles": [[[e, sg] for e, sg in t] for t in self.triangles],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IdealTriangulation":
        tris = []
        for t in data["triangles"]:
            row = []
            for e, s in t:
                if isinstance(s, str):
                    s = -1 if s.strip() == "-" else 1
                row.append((int(e), int(s)))
            tris.append(tuple(row))
        declared = None
        if "genus" in data:
            declared = MarkedSurface(
                int(data["genus"]), int(data.get("punctures", 0)), tuple(data.get("boundary", ()))
            )
        return cls(tuple(tris), declared)


def _init_unchecked(self, genus, punctures, boundary):
    object.__setattr__(self, "genus", genus)
    object.__setattr__(self, "punctures", punctures)
    object.__setattr__(self, "boundary", tuple(boundary))
    return self


# derived surfaces of small triangulations may violate the "sphere >= 5" rule
# (e.g. a single triangle); validation reports that separately.
MarkedSurface._init_unchecked = _init_unchecked


@dataclass(frozen=True)
class Signing:
    """A sign ``+1`` or ``-1`` at each puncture."""

    signs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        items = tuple(sorted((int(p), int(s)) for p, s in dict(self.signs).items()))
        if any(s not in (1, -1) for _, s in items):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", items)

    @classmethod
    def constant(cls, T: IdealTriangulation, value: int = 1) -> "Signing":
        return cls(tuple((p, value) for p in T.punctures))

    @classmethod
    def from_map(cls, m: dict) -> "Signing":
        return cls(tuple(m.items()))

    def __getitem__(self, p: int) -> int:
        return dict(self.signs)[p]

    def as_dict(self) -> dict[int, int]:
        return dict(self.signs)

    def check_total(self, T: IdealTriangulation) -> None:
        if set(dict(self.signs)) != set(T.punctures):
            raise ValueError(
                f"signing must be defined exactly on the punctures {list(T.punctures)}"
            )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    kind: str = "structure"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    counts: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        """All structural checks pass (degeneracy is reported separately)."""
        return all(c.passed for c in self.checks if c.kind == "structure")

    @property
    def nondegenerate(self) -> bool:
        return all(c.passed for c in self.checks if c.kind == "degeneracy")

    @property
    def passed(self) -> bool:
        return self.valid and self.nondegenerate

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "passed": self.passed,
            "valid": self.valid,
            "nondegenerate": self.nondegenerate,
            "checks": [
                {"name": c.name, "kind": c.kind, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "counts": self.counts,
        }


def validate(T: IdealTriangulation) -> ValidationReport:
    """Check every triangulation invariant; never raises."""
    checks: list[Check] = []
    counts: dict = {}

    bad_mult = {e: len(hs) for e, hs in T.occurrences.items() if len(hs) > 2}
    checks.append(
        Check(
            "edge-multiplicity",
            not bad_mult,
            "" if not bad_mult else f"edges used more than twice: {bad_mult}",
        )
    )
    bad_orient = [
        e
        for e, hs in T.occurrences.items()
        if len(hs) == 2 and T.side(hs[0])[1] == T.side(hs[1])[1]
    ]
    checks.append(
        Check(
            "orientation",
            not bad_orient,
            "" if not bad_orient else f"edges glued with equal signs: {bad_orient}",
        )
    )
    ids_ok = list(T.edges) == list(range(len(T.edges)))
    checks.append(Check("edge-ids", ids_ok, "" if ids_ok else "edge ids are not 0..E-1"))
    if bad_mult or bad_orient:
        return ValidationReport(tuple(checks), counts)

    # connectivity
    seen = {0} if T.triangles else set()
    stack = list(seen)
    while stack:
        t = stack.pop()
        for k in range(3):
            tw = T.twin[3 * t + k]
            if tw is not None and tw // 3 not in seen:
                seen.add(tw // 3)
                stack.append(tw // 3)
    connected = len(seen) == T.n_triangles and T.n_triangles > 0
    checks.append(Check("connected", connected, "" if connected else f"reached {len(seen)} triangles"))

    try:
        surf = T.surface
        checks.append(Check("boundary", True))
    except SurfaceError as exc:
        checks.append(Check("boundary", False, str(exc)))
        return ValidationReport(tuple(checks), counts)

    chi = T.n_vertices - len(T.edges) + T.n_triangles
    checks.append(
        Check(
            "euler-characteristic",
            chi == surf.euler_characteristic,
            f"V-E+F = {T.n_vertices}-{len(T.edges)}+{T.n_triangles} = {chi}",
        )
    )
    counts.update(
        genus=surf.genus,
        punctures=surf.punctures,
        boundary=list(surf.boundary),
        interior_edges=len(T.interior_edges),
        boundary_edges=len(T.boundary_edges),
        triangles=T.n_triangles,
        marked_points=T.n_vertices,
    )
    if surf.is_closed:
        d = surf.punctures
        g = surf.genus
        ok_e = len(T.interior_edges) == 6 * g - 6 + 3 * d
        ok_t = T.n_triangles == 4 * g - 4 + 2 * d
        checks.append(
            Check("closed-edge-count", ok_e, f"{len(T.interior_edges)} edges, expected {6*g-6+3*d}")
        )
        checks.append(
            Check("closed-triangle-count", ok_t, f"{T.n_triangles} triangles, expected {4*g-4+2*d}")
        )
    ok_rank = len(T.interior_edges) == rank_formula(surf)
    checks.append(
        Check("rank-formula", ok_rank, f"{len(T.interior_edges)} interior edges, formula {rank_formula(surf)}")
    )
    if T.declared is not None:
        same = T.declared == surf
        checks.append(
            Check("declared-surface", same, "" if same else f"declared {T.declared}, derived {surf}")
        )
    try:
        MarkedSurface(surf.genus, surf.punctures, surf.boundary)
        checks.append(Check("surface-type", True))
    except InvalidSurface as exc:
        checks.append(Check("surface-type", False, str(exc)))

    folded = T.self_folded_triangles()
    checks.append(
        Check(
            "self-folded",
            not folded,
            "" if not folded else f"self-folded triangles: {folded}",
            kind="degeneracy",
        )
    )
    low = {p: T.valency.get(p, 0) for p in T.punctures if T.valency.get(p, 0) < 3}
    checks.append(
        Check(
            "valency",
            not low,
            "" if not low else f"punctures of valency < 3: {low}",
            kind="degeneracy",
        )
    )
    return ValidationReport(tuple(checks), counts)


# ---------------------------------------------------------------------------
# flips
# ---------------------------------------------------------------------------


def flip(T: IdealTriangulation, e: int) -> IdealTriangulation:
    """Replace edge ``e`` by the other diagonal of its quadrilateral.

    The new diagonal keeps the identifier ``e``; the two affected triangles
    keep their positions in the triangle list.
    """
    hs = T.occurrences.get(e)
    if hs is None:
        raise KeyError(f"no edge {e}")
    if len(hs) != 2:
        raise BoundaryEdge(f"edge {e} is a boundary edge")
    h, hp = hs
    t1, t2 = h // 3, hp // 3
    if t1 == t2:
        raise SelfFoldedFlip(f"edge {e} is the folded side of a self-folded triangle")
    n1, p1 = T.side(_nxt(h)), T.side(_prv(h))
    n2, p2 = T.side(_nxt(hp)), T.side(_prv(hp))
    tris = list(T.triangles)
    tris[t1] = ((e, 1), p2, n1)
    tris[t2] = (p1, n2, (e, -1))
    return IdealTriangulation(tuple(tris))


def flippable_edges(T: IdealTriangulation) -> list[int]:
    return [e for e in T.interior_edges if T.occurrences[e][0] // 3 != T.occurrences[e][1] // 3]


def random_flip_walk(
    T: IdealTriangulation,
    steps: int,
    seed: int = 0,
    accept: Callable[[IdealTriangulation], bool] | None = None,
) -> tuple[IdealTriangulation, list[int]]:
    """Seeded random walk in the flip graph.

    With ``accept`` given, only flips whose result satisfies it are taken.
    Returns the final triangulation and the flipped edge sequence.
    """
    rng = random.Random(seed)
    path = []
    for _ in range(steps):
        options = flippable_edges(T)
        rng.shuffle(options)
        for e in options:
            U = flip(T, e)
            if accept is None or accept(U):
                T = U
                path.append(e)
                break
        else:
            break
    return T, path


# ---------------------------------------------------------------------------
# quiver arrows and admissibility
# ---------------------------------------------------------------------------


def corner_arrows(T: IdealTriangulation) -> list[tuple[str, int, int, int]]:
    """Arrows of ``Q(T)``: one per corner whose two sides are interior.

    The corner at half-edge ``h`` lies between ``h`` and ``prev(h)``; its
    arrow runs from ``edge(h)`` to ``edge(prev(h))``, i.e. to the clockwise
    next side, so the three arrows in a face form a clockwise 3-cycle.
    Returns ``(name, source_edge, target_edge, h)`` tuples; names are
    ``"t{triangle}c{corner}"``.
    """
    out = []
    for h in range(T.n_half_edges):
        a, b = T.edge_of(h), T.edge_of(_prv(h))
        if T.is_interior(a) and T.is_interior(b):
            out.append((f"t{h // 3}c{h % 3}", a, b, h))
    return out


def is_glfs_admissible(T: IdealTriangulation) -> tuple[bool, dict[str, tuple[bool, str]]]:
    """The four finite-determinacy hypotheses, each reported separately.

    No self-folded triangles, no loops, valency at least 4 at every marked
    point, and no double arrows in ``Q(T)``.
    """
    reasons: dict[str, tuple[bool, str]] = {}
    folded = T.self_folded_triangles()
    reasons["no-self-folded"] = (not folded, f"self-folded: {folded}" if folded else "")
    loops = T.loops()
    reasons["no-loops"] = (not loops, f"loops: {loops}" if loops else "")
    low = {v: n for v, n in T.valency.items() if n < 4}
    reasons["valency>=4"] = (not low, f"low valency: {low}" if low else "")
    pairs = Counter((a, b) for _, a, b, _ in corner_arrows(T))
    doubles = sorted(k for k, n in pairs.items() if n > 1)
    reasons["no-double-arrows"] = (not doubles, f"double arrows: {doubles}" if doubles else "")
    return all(ok for ok, _ in reasons.values()), reasons


# ---------------------------------------------------------------------------
# dual cellulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualCellulation:
    """Trivalent ribbon graph dual to a non-degenerate triangulation.

    Vertex ``t`` sits inside triangle ``t``; its three *ends* are the sides of
    the triangle in anticlockwise order.  An end on an interior side is half
    of a dual edge (named by the triangulation edge it crosses); an end on a
    boundary side is a *leg* running out to the boundary.  ``faces`` maps each
    marked point to the anticlockwise sequence of corners ``h`` around it,
    and ``closed_faces`` records which faces are complete cycles.
    """

    ends: tuple[tuple[int, int, int], ...]
    interior: frozenset[int]
    faces: dict[int, tuple[int, ...]]
    closed_faces: frozenset[int]

    @property
    def n_vertices(self) -> int:
        return len(self.ends)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.interior))

    @property
    def legs(self) -> tuple[int, ...]:
        return tuple(sorted({e for t in self.ends for e in t} - self.interior))

    def edge_vertices(self, e: int) -> tuple[int, int]:
        vs = [t for t, ends in enumerate(self.ends) for x in ends if x == e]
        return tuple(vs)

    def valencies(self) -> list[int]:
        return [sum(1 for x in ends if x in self.interior) for ends in self.ends]

    def face_edge_cycle(self, p: int) -> tuple[int, ...]:
        """Dual edges crossed, in order, when circling marked point ``p``."""
        return tuple(self.ends[h // 3][h % 3] for h in self.faces[p])

    def to_triangulation(self) -> IdealTriangulation:
        """Rebuild the triangulation this graph is dual to.

        Edge orientation signs are recomputed: the first end met for an edge
        gets ``+1``.
        """
        first: set[int] = set()
        tris = []
        for ends in self.ends:
            row = []
            for e in ends:
                row.append((e, -1 if e in first else 1))
                first.add(e)
            tris.append(tuple(row))
        return IdealTriangulation(tuple(tris))

    def to_dot(self) -> str:
        lines = ["graph cellulation {"]
        for t in range(self.n_vertices):
            lines.append(f'  v{t} [label="z{t}"];')
        for e in self.edges:
            a, b = self.edge_vertices(e)
            lines.append(f'  v{a} -- v{b} [label="{e}"];')
        for e in self.legs:
            (a,) = self.edge_vertices(e)
            lines.append(f'  leg{e} [shape=point]; v{a} -- leg{e} [style=dashed, label="{e}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def dual_cellulation(T: IdealTriangulation) -> DualCellulation:
    if T.self_folded_triangles():
        raise Degenerate(f"self-folded triangles {T.self_folded_triangles()} have no trivalent dual")
    ends = tuple(tuple(e for e, _ in t) for t in T.triangles)
    return DualCellulation(
        ends=ends,
        interior=frozenset(T.interior_edges),
        faces=T.corners,
        closed_faces=frozenset(T.punctures),
    )


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def torus(d: int) -> IdealTriangulation:
    """Torus with ``d`` punctures from a ``d x 1`` grid of squares.

    Square ``i`` has bottom/top edge ``h_i`` (identified), left side ``v_i``
    and diagonal ``g_i`` from its bottom-left to top-right corner; edge ids
    are ``h_i = 3i``, ``v_i = 3i+1``, ``g_i = 3i+2``.
    """
    if d < 1:
        raise InvalidSurface("need at least one puncture")
    tris = []
    for i in range(d):
        h, v, g = 3 * i, 3 * i + 1, 3 * i + 2
        v_next = 3 * ((i + 1) % d) + 1
        # lower triangle: bottom (h, left->right), right side up, diagonal down
        tris.append(((h, 1), (v_next, 1), (g, -1)))
        # upper triangle: diagonal up, top (h, right->left), left side down
        tris.append(((g, 1), (h, -1), (v, -1)))
    return IdealTriangulation(tuple(tris))


def one_vertex_surface(g: int) -> IdealTriangulation:
    """Closed genus-``g`` surface with one puncture: fan of the glued ``4g``-gon.

    The polygon boundary reads ``a1 b1 a1^-1 b1^-1 ... ag bg ag^-1 bg^-1``
    anticlockwise; all diagonals start at polygon corner 0.
    """
    if g < 1:
        raise InvalidSurface("genus must be positive")
    n = 4 * g
    sides = []
    for k in range(g):
        a, b = 2 * k, 2 * k + 1
        sides += [(a, 1), (b, 1), (a, -1), (b, -1)]
    # diagonals from corner 0 to corners 2..n-2
    diag = {j: 2 * g + (j - 2) for j in range(2, n - 1)}
    tris = []
    for j in range(1, n - 1):
        # triangle with corners 0, j, j+1
        first = sides[0] if j == 1 else (diag[j], 1)
        last = sides[n - 1] if j + 1 == n - 1 else (diag[j + 1], -1)
        tris.append((first, sides[j], last))
    return IdealTriangulation(tuple(tris))


def insert_puncture(T: IdealTriangulation, t: int) -> IdealTriangulation:
    """Add a puncture inside triangle ``t`` (splitting it into three)."""
    base = max(T.edges) + 1
    s0, s1, s2 = T.triangles[t]
    # new edges base+k run from the new point to corner k (origin of side k)
    tris = list(T.triangles)
    tris[t] = (s0, (base + 1, -1), (base, 1))
    tris.append((s1, (base + 2, -1), (base + 1, 1)))
    tris.append((s2, (base, -1), (base + 2, 1)))
    return IdealTriangulation(tuple(tris))


def closed_surface(g: int, d: int) -> IdealTriangulation:
    """A non-degenerate triangulation of the closed genus-``g`` surface with
    ``d`` punctures.

    Genus one uses the :func:`torus` grid; higher genus glues a ``4g``-gon and
    inserts the remaining punctures into distinct triangles.
    """
    if g == 1:
        return torus(d)
    T = one_vertex_surface(g)
    for k in range(d - 1):
        T = insert_puncture(T, k % T.n_triangles)
    return T


def annulus(p: int, q: int) -> IdealTriangulation:
    """Fan triangulation of an annulus with ``p`` outer and ``q`` inner marked
    points.

    Interior edges ``0..p+q-1`` join the two boundary circles; outer arcs are
    ``p+q .. 2p+q-1`` and inner arcs ``2p+q .. 2p+2q-1``.  The first ``p``
    triangles have an outer arc as third side, the remaining ``q`` an inner arc.
    """
    if p < 1 or q < 1:
        raise InvalidSurface("each boundary circle needs a marked point")
    n = p + q
    tris = []
    for k in range(n):
        e0, e1 = k, (k + 1) % n
        if k < p:
            tris.append(((e0, 1), (n + k, 1), (e1, -1)))
        else:
            tris.append(((e1, -1), (n + p + (k - p), 1), (e0, 1)))
    return IdealTriangulation(tuple(tris))


def fixture(name: str) -> IdealTriangulation:
    """Named triangulations used across tests and the CLI."""
    table: dict[str, Callable[[], IdealTriangulation]] = {
        "torus_d1": lambda: torus(1),
        "torus_d2": lambda: torus(2),
        "torus_d3": lambda: torus(3),
        "genus2_d1": lambda: one_vertex_surface(2),
        "genus2_d2": lambda: closed_surface(2, 2),
        "annulus_1_1": lambda: annulus(1, 1),
        "annulus_1_2": lambda: annulus(1, 2),
        "annulus_2_2": lambda: annulus(2, 2),
    }
    if name not in table:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(table)}")
    return table[name]()


def iter_sides(T: IdealTriangulation) -> Iterable[tuple[int, Side]]:
    for h in range(T.n_half_edges):
        yield h, T.side(h)


def edge_sequence_valid(seq: Sequence[int], T: IdealTriangulation) -> bool:
    return all(T.is_interior(e) for e in seq)
