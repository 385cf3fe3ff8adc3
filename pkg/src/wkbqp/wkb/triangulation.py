"""Ideal triangulation cut out by the separatrices of a saddle-free differential.

The separatrices split the sphere into horizontal strips (two zeros on the
boundary) and half-planes (one zero).  Each strip contributes an interior
edge joining the marked points at its two ends, each half-plane a boundary
arc, and each zero the triangle formed by its three sectors.  Marked points
are the double poles and, at a pole of order ``n >= 3``, its ``n - 2``
asymptotic horizontal directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..surface import (
    DualCellulation,
    IdealTriangulation,
    MarkedSurface,
    Signing,
    SurfaceError,
    dual_cellulation,
    rank_formula,
    validate,
)
from .differential import QuadraticDifferential, WKBError, check_cellulation_possible
from .tracer import (
    SaddleConnection,
    Separatrix,
    Terminal,
    TracerParams,
    detect_saddle_connections,
    separatrices,
)


class SaddleConnectionPresent(WKBError):
    pass


class SimplePolePresent(WKBError):
    pass


class TracingInconclusive(WKBError):
    pass


MarkedPoint = tuple  # ("puncture", pole) or ("boundary", pole, direction)


@dataclass(frozen=True)
class Strip:
    edge: int
    corners: tuple[tuple[int, int], tuple[int, int]]  # (zero, sector) on either side
    ends: tuple[MarkedPoint, MarkedPoint]


@dataclass(frozen=True)
class HalfPlane:
    edge: int
    corner: tuple[int, int]
    pole: int


@dataclass
class WKBResult:
    phi: QuadraticDifferential
    theta: float
    params: TracerParams
    separatrices: list[Separatrix]
    saddle_connections: list[SaddleConnection]
    strips: list[Strip]
    half_planes: list[HalfPlane]
    triangulation: IdealTriangulation
    marked_points: dict[int, MarkedPoint]
    residues: dict[int, complex]
    signing: Signing
    nondegenerate: bool
    dual: DualCellulation | None
    surface: MarkedSurface
    diagnostics: list[str] = field(default_factory=list)

    @property
    def n_edges(self) -> int:
        return len(self.triangulation.interior_edges)

    def matching_paths(self) -> dict[int, tuple[int, int]]:
        """Zeros joined by the matching path of each interior edge."""
        return {s.edge: (s.corners[0][0], s.corners[1][0]) for s in self.strips}

    def to_json(self) -> dict:
        def mp(m):
            return list(m)

        return {
            "schema_version": 1,
            "theta": self.theta,
            "params": {
                "tol": self.params.tol,
                "capture": self.params.capture,
                "zero_tol": self.params.zero_tol,
            },
            "surface": {
                "genus": self.surface.genus,
                "punctures": self.surface.punctures,
                "boundary": list(self.surface.boundary),
            },
            "triangulation": self.triangulation.to_json(),
            "marked_points": {str(v): mp(m) for v, m in sorted(self.marked_points.items())},
            "strips": [
                {"edge": s.edge, "zeros": [s.corners[0][0], s.corners[1][0]], "ends": [mp(e) for e in s.ends]}
                for s in self.strips
            ],
            "half_planes": [{"edge": h.edge, "zero": h.corner[0], "pole": h.pole} for h in self.half_planes],
            "residues": {str(p): [m.real, m.imag] for p, m in sorted(self.residues.items())},
            "signing": {str(p): s for p, s in self.signing.signs},
            "nondegenerate": self.nondegenerate,
            "separatrices": [
                {
                    "zero": s.zero,
                    "k": s.k,
                    "launch_angle": s.launch_angle,
                    "terminal": s.trajectory.terminal.value,
                    "target": s.trajectory.target,
                    "direction_index": s.trajectory.direction_index,
                    "length": s.trajectory.length,
                }
                for s in self.separatrices
            ],
            "diagnostics": self.diagnostics,
        }


def _end_point(phi: QuadraticDifferential, s: Separatrix) -> MarkedPoint:
    pole = phi.poles[s.trajectory.target]
    if pole.order == 2:
        return ("puncture", pole.index)
    return ("boundary", pole.index, s.trajectory.direction_index)


def wkb_triangulation(
    phi: QuadraticDifferential,
    theta: float = 0.0,
    params: TracerParams | None = None,
    residue_signs: dict[int, int] | None = None,
) -> WKBResult:
    """Trace the separatrices at phase ``theta`` and assemble the triangulation."""
    params = params or TracerParams()
    poles = phi.poles
    zeros = phi.zeros
    if any(p.order == 1 for p in poles):
        raise SimplePolePresent("simple poles are not supported")
    check_cellulation_possible(0, len(zeros), [p.order for p in poles])
    if not zeros:
        raise WKBError("no zeros: the separatrix graph is empty")

    seps = separatrices(phi, theta, params)
    saddles = detect_saddle_connections(phi, theta, params, seps)
    if saddles:
        desc = ", ".join(f"{c.zero_from}->{c.zero_to} (length {c.length:.6g})" for c in saddles)
        raise SaddleConnectionPresent(
            f"saddle connections at theta={theta:g}: {desc}; rotate the phase slightly and retry"
        )
    bad = [s for s in seps if s.trajectory.terminal != Terminal.POLE]
    if bad:
        desc = ", ".join(f"zero {s.zero} ray {s.k}: {s.trajectory.terminal.value}" for s in bad)
        raise TracingInconclusive(f"separatrices did not reach a pole: {desc}")

    # rotation systems: zeros by launch angle (already anticlockwise), poles by arrival angle
    by_zero: dict[int, list[Separatrix]] = {}
    for s in seps:
        by_zero.setdefault(s.zero, []).append(s)
    by_pole: dict[int, list[Separatrix]] = {}
    for s in seps:
        by_pole.setdefault(s.trajectory.target, []).append(s)
    for lst in by_pole.values():
        lst.sort(key=lambda s: s.trajectory.arrival_angle % (2 * math.pi))
    pole_pos = {(s.zero, s.k): i for lst in by_pole.values() for i, s in enumerate(lst)}

    # walk the face containing each zero sector (k, k+1)
    face_of: dict[tuple[int, int], int] = {}
    faces: list[dict] = []
    for z in sorted(by_zero):
        for k in range(3):
            if (z, k) in face_of:
                continue
            fid = len(faces)
            face = {"corners": [], "pole_corners": []}
            zc, kc = z, k
            for _ in range(4 * len(seps) + 4):
                if (zc, kc) in face_of:
                    if (zc, kc) != (z, k):
                        raise TracingInconclusive("inconsistent separatrix rotation")
                    break
                face_of[(zc, kc)] = fid
                face["corners"].append((zc, kc))
                s = by_zero[zc][kc]  # leave along the clockwise side of the sector
                lst = by_pole[s.trajectory.target]
                i = pole_pos[(s.zero, s.k)]
                s2 = lst[(i - 1) % len(lst)]  # clockwise neighbour at the pole
                face["pole_corners"].append((s, s2))
                zc, kc = s2.zero, (s2.k - 1) % 3
            else:
                raise TracingInconclusive("face walk did not close")
            faces.append(face)

    strips: list[Strip] = []
    halves: list[HalfPlane] = []
    edge_of_face: dict[int, int] = {}
    interior = [f for f, F in enumerate(faces) if len(F["corners"]) == 2]
    boundary = [f for f, F in enumerate(faces) if len(F["corners"]) == 1]
    odd = [f for f, F in enumerate(faces) if len(F["corners"]) > 2]
    if odd:
        raise TracingInconclusive(f"{len(odd)} regions with more than two zeros on their boundary")
    for f in interior:
        edge_of_face[f] = len(edge_of_face)
    for f in boundary:
        edge_of_face[f] = len(edge_of_face)

    diagnostics = []
    for f in interior:
        F = faces[f]
        ends = []
        for s, s2 in F["pole_corners"]:
            a, b = _end_point(phi, s), _end_point(phi, s2)
            if a != b:
                raise TracingInconclusive(f"strip ends disagree: {a} vs {b}")
            ends.append(a)
        strips.append(Strip(edge_of_face[f], tuple(F["corners"]), tuple(ends)))
    for f in boundary:
        F = faces[f]
        s, _ = F["pole_corners"][0]
        halves.append(HalfPlane(edge_of_face[f], F["corners"][0], s.trajectory.target))

    # triangles: the three sectors of each zero, anticlockwise
    first_side: dict[int, tuple[int, int]] = {}
    triangles = []
    for z in sorted(by_zero):
        tri = []
        for k in range(3):
            e = edge_of_face[face_of[(z, k)]]
            if e not in first_side:
                first_side[e] = (z, k)
                tri.append((e, 1))
            else:
                tri.append((e, -1))
        triangles.append(tuple(tri))

    expected = MarkedSurface.__new__(MarkedSurface)._init_unchecked(
        0,
        sum(1 for p in poles if p.order == 2),
        tuple(sorted(p.order - 2 for p in poles if p.order >= 3)),
    )
    try:
        T = IdealTriangulation(tuple(triangles), declared=None)
        report = validate(T)
        derived = T.surface
    except SurfaceError as exc:
        raise TracingInconclusive(f"assembled complex is not a surface: {exc}") from exc
    if not report.valid:
        names = ", ".join(c.name for c in report.failures() if c.kind == "structure")
        raise TracingInconclusive(f"assembled triangulation fails: {names}")
    if derived != expected:
        raise TracingInconclusive(f"surface {derived} does not match the pole data {expected}")
    n = rank_formula((0, [p.order for p in poles]))
    if len(T.interior_edges) != n:
        raise TracingInconclusive(f"{len(T.interior_edges)} edges but the rank formula gives {n}")

    # marked point carried by each vertex of T
    marked: dict[int, MarkedPoint] = {}
    for t, z in enumerate(sorted(by_zero)):
        for k in range(3):
            v = T.origin[3 * t + k]
            m = _end_point(phi, by_zero[z][k])
            if marked.setdefault(v, m) != m:
                raise TracingInconclusive(f"vertex {v} carries two marked points")
    if len(set(marked.values())) != len(marked):
        raise TracingInconclusive("two vertices carry the same marked point")

    residue_signs = residue_signs or {}
    residues = {p.index: p.lead for p in poles if p.order == 2}
    signs = {}
    for v, m in marked.items():
        if m[0] == "puncture":
            signs[v] = int(residue_signs.get(m[1], 1))
    signing = Signing.from_map(signs)

    nondeg = T.is_nondegenerate()
    if not nondeg:
        diagnostics.append("degenerate triangulation: " + ", ".join(c.name for c in report.failures()))
    try:
        dual = dual_cellulation(T)
    except SurfaceError as exc:
        dual = None
        diagnostics.append(f"no dual cellulation: {exc}")

    return WKBResult(
        phi,
        theta,
        params,
        seps,
        saddles,
        strips,
        halves,
        T,
        marked,
        residues,
        signing,
        nondeg,
        dual,
        derived,
        diagnostics,
    )
