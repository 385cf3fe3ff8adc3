"""Rational quadratic differentials ``phi = P(z)/Q(z) dz^2`` on the Riemann sphere."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np


class WKBError(ValueError):
    pass


class NonSimpleZero(WKBError):
    pass


class DegenerateInput(WKBError):
    pass


class NotDoublePole(WKBError):
    pass


class ZeroResidue(WKBError):
    pass


class NoTrivalentCellulation(WKBError):
    pass


INF = None  # location of the point at infinity


def _trim(coeffs: Sequence[complex]) -> tuple[complex, ...]:
    c = [complex(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def horner(coeffs: Sequence[complex], z: complex) -> complex:
    """Evaluate ``sum coeffs[k] z^k``."""
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _cluster(roots: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    out: list[list] = []
    for r in sorted(roots, key=lambda x: (x.real, x.imag)):
        for grp in out:
            if abs(grp[0] - r) < tol * max(1.0, abs(r)):
                grp[1].append(r)
                break
        else:
            out.append([r, [r]])
    return [(complex(np.mean(g[1])), len(g[1])) for g in out]


@dataclass(frozen=True)
class Zero:
    index: int
    z: complex
    derivative: complex  # R'(z) at the zero


@dataclass(frozen=True)
class Pole:
    index: int
    z: complex | None  # None is the point at infinity
    order: int
    lead: complex  # c in phi ~ c * t^{-order} dt^2 in the local chart

    @property
    def at_infinity(self) -> bool:
        return self.z is None

    def label(self) -> str:
        return "inf" if self.z is None else f"{self.z.real:.6g}{self.z.imag:+.6g}j"


@dataclass(frozen=True)
class QuadraticDifferential:
    """``R(z) dz^2`` with ``R = P/Q``; coefficient lists are in ascending powers."""

    P: tuple[complex, ...]
    Q: tuple[complex, ...] = (1,)
    tol: float = 1e-10
    cluster_tol: float = 1e-5

    def __post_init__(self):
        object.__setattr__(self, "P", _trim(self.P))
        object.__setattr__(self, "Q", _trim(self.Q))
        if all(c == 0 for c in self.P):
            raise DegenerateInput("P is identically zero")
        if all(c == 0 for c in self.Q):
            raise DegenerateInput("Q is identically zero")

    # -- evaluation -------------------------------------------------------
    @property
    def degP(self) -> int:
        return len(self.P) - 1

    @property
    def degQ(self) -> int:
        return len(self.Q) - 1

    def R(self, z: complex) -> complex:
        return horner(self.P, z) / horner(self.Q, z)

    def dR(self, z: complex) -> complex:
        p, q = horner(self.P, z), horner(self.Q, z)
        dp = horner([k * c for k, c in enumerate(self.P)][1:] or [0], z)
        dq = horner([k * c for k, c in enumerate(self.Q)][1:] or [0], z)
        return (dp * q - p * dq) / (q * q)

    def R_inf(self, w: complex) -> complex:
        """Coefficient of ``dw^2`` in the chart ``w = 1/z``."""
        prev = horner(tuple(reversed(self.P)), w)
        qrev = horner(tuple(reversed(self.Q)), w)
        return w ** (self.degQ - self.degP - 4) * prev / qrev

    def rotated(self, theta: float) -> "QuadraticDifferential":
        """``e^{-2 i theta} phi``: its phase-0 foliation is the phase-``theta`` one of ``phi``."""
        f = cmath.exp(-2j * theta)
        return QuadraticDifferential(tuple(f * c for c in self.P), self.Q, self.tol, self.cluster_tol)

    def scaled(self, c: complex) -> "QuadraticDifferential":
        return QuadraticDifferential(tuple(c * x for x in self.P), self.Q, self.tol, self.cluster_tol)

    # -- divisor ----------------------------------------------------------
    @property
    def order_at_infinity(self) -> int:
        """Pole order at infinity (negative for a zero there)."""
        return self.degP - self.degQ + 4

    @cached_property
    def _roots_P(self) -> list[tuple[complex, int]]:
        if self.degP == 0:
            return []
        return _cluster(np.roots(list(reversed(self.P))), self.cluster_tol)

    @cached_property
    def _roots_Q(self) -> list[tuple[complex, int]]:
        if self.degQ == 0:
            return []
        return _cluster(np.roots(list(reversed(self.Q))), self.cluster_tol)

    @cached_property
    def zeros(self) -> tuple[Zero, ...]:
        out = []
        for r, m in self._roots_P:
            for s, _ in self._roots_Q:
                if abs(r - s) < self.cluster_tol * max(1.0, abs(r)):
                    raise DegenerateInput(f"P and Q share the root {r:.6g}")
            if m > 1:
                raise NonSimpleZero(f"zero of multiplicity {m} at {r:.6g}")
            out.append((r, m))
        out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
        zs = []
        for k, (r, _) in enumerate(out):
            zs.append(Zero(k, r, self.dR(r)))
        if self.order_at_infinity < 0:
            raise DegenerateInput("zero at infinity; move it to a finite point by a Mobius change")
        for a in range(len(zs)):
            for b in range(a + 1, len(zs)):
                if abs(zs[a].z - zs[b].z) <= self.tol:
                    raise NonSimpleZero("zeros closer than the root tolerance")
        return tuple(zs)

    @cached_property
    def poles(self) -> tuple[Pole, ...]:
        lead_q = self.Q[-1]
        roots = sorted(self._roots_Q, key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
        out = []
        for k, (p, m) in enumerate(roots):
            denom = lead_q
            for s, ms in roots:
                if s != p:
                    denom *= (p - s) ** ms
            out.append(Pole(k, p, m, horner(self.P, p) / denom))
        if self.order_at_infinity > 0:
            out.append(Pole(len(out), None, self.order_at_infinity, self.P[-1] / self.Q[-1]))
        return tuple(out)

    def divisor_degree(self) -> int:
        return len(self.zeros) - sum(p.order for p in self.poles)

    @cached_property
    def scale(self) -> float:
        pts = [abs(z.z) for z in self.zeros] + [abs(p.z) for p in self.poles if p.z is not None]
        return max([1.0] + pts)

    def singular_points(self) -> list[complex]:
        return [z.z for z in self.zeros] + [p.z for p in self.poles if p.z is not None]

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "P": [[c.real, c.imag] for c in self.P],
            "Q": [[c.real, c.imag] for c in self.Q],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticDifferential":
        def conv(v):
            if isinstance(v, (list, tuple)):
                return complex(v[0], v[1] if len(v) > 1 else 0.0)
            if isinstance(v, str):
                return complex(v.replace("i", "j").replace(" ", ""))
            return complex(v)

        return cls(tuple(conv(v) for v in data["P"]), tuple(conv(v) for v in data.get("Q", [1])))


@dataclass
class Classification:
    zeros: list[Zero]
    poles: list[Pole]
    divisor_degree: int
    simple_poles: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "zeros": [{"index": z.index, "z": [z.z.real, z.z.imag]} for z in self.zeros],
            "poles": [
                {
                    "index": p.index,
                    "z": None if p.z is None else [p.z.real, p.z.imag],
                    "order": p.order,
                }
                for p in self.poles
            ],
            "divisor_degree": self.divisor_degree,
        }


def classify_points(phi: QuadraticDifferential) -> Classification:
    zs, ps = list(phi.zeros), list(phi.poles)
    return Classification(zs, ps, phi.divisor_degree(), [p.index for p in ps if p.order == 1])


def find_pole(phi: QuadraticDifferential, p) -> Pole:
    if isinstance(p, Pole):
        return p
    if p is None or (isinstance(p, str) and p.lower() in ("inf", "infinity")):
        for q in phi.poles:
            if q.z is None:
                return q
        raise NotDoublePole("infinity is not a pole")
    p = complex(p)
    best = min((q for q in phi.poles if q.z is not None), key=lambda q: abs(q.z - p), default=None)
    if best is None or abs(best.z - p) > 1e-6 * max(1.0, abs(p)):
        raise NotDoublePole(f"{p} is not a pole")
    return best


def residue_at_double_pole(phi: QuadraticDifferential, p) -> complex:
    """``m = lim (z-p)^2 R(z)``: the coefficient of the local form ``m dt^2 / t^2``."""
    pole = find_pole(phi, p)
    if pole.order != 2:
        raise NotDoublePole(f"pole {pole.label()} has order {pole.order}")
    if abs(pole.lead) < 1e-12:
        raise ZeroResidue(f"vanishing residue at {pole.label()}")
    return pole.lead


@dataclass(frozen=True)
class SignedResidue:
    pole: int
    m: complex
    sign: int
    root: complex  # sign * principal sqrt(m)
    period: complex  # integral of sqrt(phi) around the pole: 2 pi i * root


def sign_residue(phi: QuadraticDifferential, p, sign: int = 1) -> SignedResidue:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    pole = find_pole(phi, p)
    m = residue_at_double_pole(phi, pole)
    r = sign * cmath.sqrt(m)
    return SignedResidue(pole.index, m, sign, r, 2j * math.pi * r)


def asymptotic_directions(phi: QuadraticDifferential, pole: Pole, theta: float = 0.0) -> list[float]:
    """Arguments (in the pole's chart) of the ``n - 2`` horizontal directions
    at a pole of order ``n >= 3``."""
    n = pole.order
    if n < 3:
        return []
    base = cmath.phase(pole.lead) - 2 * theta
    return [((base + 2 * math.pi * k) / (n - 2)) % (2 * math.pi) for k in range(n - 2)]


def cellulation_face_count(genus: int, n_zeros: int) -> float:
    """Faces of a trivalent cellulation with the zeros as vertices: ``chi - V + 3V/2``."""
    return 2 - 2 * genus - n_zeros + 1.5 * n_zeros


def check_cellulation_possible(genus: int, n_zeros: int, pole_orders: Sequence[int]) -> None:
    """Reject pole-free data: a trivalent cellulation would have no faces."""
    faces = cellulation_face_count(genus, n_zeros)
    if not pole_orders:
        raise NoTrivalentCellulation(
            f"no trivalent cellulation: genus {genus}, {n_zeros} zeros gives "
            f"V - E + F = {n_zeros} - {1.5 * n_zeros:g} + F = {2 - 2 * genus}, so F = {faces:g}; "
            "a cellulation with one face per pole needs at least one pole"
        )
    if all(o == 2 for o in pole_orders) and faces != len(pole_orders):
        raise NoTrivalentCellulation(
            f"Euler characteristic mismatch: {faces:g} faces for {len(pole_orders)} poles"
        )
