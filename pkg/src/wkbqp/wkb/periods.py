"""Periods ``int_gamma sqrt(phi)`` along polylines."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .differential import QuadraticDifferential, WKBError


class BranchAmbiguity(WKBError):
    pass


@dataclass(frozen=True)
class PeriodResult:
    period: complex
    phase: float  # arg(period) / pi in [0, 2)
    length: float  # int |sqrt(phi)| |dz|

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "period": [self.period.real, self.period.imag],
            "phase": self.phase,
            "length": self.length,
        }


def _seg_point(a: complex, b: complex, u: float) -> complex:
    return a + (b - a) * (1 - math.cos(u)) / 2


def _dist_to_segment(p: complex, a: complex, b: complex) -> tuple[float, float]:
    d = b - a
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d)), t


def phase_and_period(
    phi: QuadraticDifferential,
    path: Sequence[complex],
    samples: int = 400,
    clearance: float = 1e-6,
) -> PeriodResult:
    """Integrate ``sqrt(R) dz`` along a polyline with a continuous branch.

    Each segment is parametrised by ``t = (1 - cos u) / 2`` so square-root
    singularities at zero endpoints are integrable.  The branch starts at the
    principal root just after the first vertex.
    """
    pts = [complex(p) for p in path]
    if len(pts) < 2:
        raise ValueError("a path needs at least two points")
    for a, b in zip(pts, pts[1:]):
        if a == b:
            raise ValueError("repeated consecutive path points")
    scale = max(1.0, max(abs(p) for p in pts))
    for z in phi.zeros:
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            d, t = _dist_to_segment(z.z, a, b)
            near_a, near_b = abs(z.z - a) < clearance * scale, abs(z.z - b) < clearance * scale
            at_end = (k == 0 and near_a) or (k == len(pts) - 2 and near_b)
            if d < clearance * scale and not at_end:
                raise BranchAmbiguity(f"path passes within {d:.2e} of the zero at {z.z:.6g}")
    for p in phi.poles:
        if p.z is None:
            continue
        for a, b in zip(pts, pts[1:]):
            if _dist_to_segment(p.z, a, b)[0] < clearance * scale:
                raise WKBError(f"path meets the pole at {p.z:.6g}")

    total = 0j
    length = 0.0
    prev = None
    for a, b in zip(pts, pts[1:]):
        us = np.linspace(0.0, math.pi, samples + 1)
        refs = []
        for u in us:
            uu = min(max(u, 1e-9), math.pi - 1e-9)
            r = cmath.sqrt(phi.R(_seg_point(a, b, uu)))
            if prev is None:
                prev = r
            if (r * prev.conjugate()).real < 0:
                r = -r
            if abs(r) > 0:
                prev = r
            refs.append(r)
        step = math.pi / samples
        D = b - a

        def f(u: float) -> complex:
            r = cmath.sqrt(phi.R(_seg_point(a, b, u)))
            ref = refs[min(samples, max(0, int(round(u / step))))]
            if (r * ref.conjugate()).real < 0:
                r = -r
            return r * D * math.sin(u) / 2

        re = quad(lambda u: f(u).real, 0, math.pi, limit=200, epsabs=1e-13, epsrel=1e-12)[0]
        im = quad(lambda u: f(u).imag, 0, math.pi, limit=200, epsabs=1e-13, epsrel=1e-12)[0]
        total += complex(re, im)
        length += quad(lambda u: abs(f(u)), 0, math.pi, limit=200, epsabs=1e-13, epsrel=1e-12)[0]
    phase = (cmath.phase(total) / math.pi) % 2.0 if total != 0 else 0.0
    return PeriodResult(total, phase, length)


def constant_triangle_index(i02: int, i01: int, i12: int) -> int:
    """Index of a constant holomorphic triangle: ``i02 - i01 - i12``."""
    return int(i02) - int(i01) - int(i12)
