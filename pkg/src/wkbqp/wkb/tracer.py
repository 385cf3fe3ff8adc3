"""Horizontal trajectories of ``e^{-2 i theta} phi``.

A trajectory solves ``dz/ds = e^{i theta} / sqrt(R(z))`` (``s`` the phi-arc
length).  Numerically we follow the unit-speed reparametrisation in the
current chart, ``dz/dt = e^{i theta} conj(r) / |r|`` with ``r = sqrt(R)``,
integrating ``ds/dt = |r|`` alongside.  Steps are classical RK4 with
step-doubling error control, capped by a fraction of the distance to the
nearest singular point.  The square-root branch is continued by taking the
root whose direction is nearest the previous one; a step whose stages turn
by more than ``max_turn`` is rejected.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .differential import Pole, QuadraticDifferential, WKBError, asymptotic_directions


class StartAtSingularity(WKBError):
    pass


class Terminal(str, Enum):
    POLE = "pole_capture"
    ZERO = "zero_hit"
    ESCAPED = "escaped"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class TracerParams:
    tol: float = 1e-9  # local error per step, relative to the distance to the nearest singularity
    kappa: float = 0.08  # step cap as a fraction of that distance
    capture: float = 0.05  # capture radius as a fraction of the distance to the nearest other singularity
    zero_tol: float = 1e-6  # phi-distance counted as hitting a zero
    max_steps: int = 40000
    launch: float = 1e-3  # separatrix launch distance, relative
    max_turn: float = math.pi / 4

    def halved(self) -> "TracerParams":
        return TracerParams(
            self.tol / 2, self.kappa, self.capture, self.zero_tol, self.max_steps * 2, self.launch, self.max_turn
        )


@dataclass
class Trajectory:
    theta: float
    points: list[complex]
    length: float
    terminal: Terminal
    target: int | None = None
    arrival_angle: float | None = None
    direction_index: int | None = None
    residual: float = 0.0
    steps: int = 0
    params: TracerParams = field(default_factory=TracerParams)

    def to_json(self, stride: int = 1) -> dict:
        pts = self.points[::stride]
        if self.points and pts[-1] != self.points[-1]:
            pts.append(self.points[-1])
        return {
            "theta": self.theta,
            "terminal": self.terminal.value,
            "target": self.target,
            "direction_index": self.direction_index,
            "length": self.length,
            "arrival_angle": self.arrival_angle,
            "residual": self.residual,
            "steps": self.steps,
            "points": [[p.real, p.imag] for p in pts],
        }


class _Field:
    """Both charts of a differential with their singular points."""

    def __init__(self, phi: QuadraticDifferential, theta: float, params: TracerParams):
        self.phi = phi
        self.rot = cmath.exp(1j * theta)
        self.theta = theta
        self.params = params
        S = phi.scale
        self.z_out = 4.0 * S  # leave the z-chart beyond this modulus
        self.w_out = 1.0 / (2.0 * S)  # leave the w-chart beyond this modulus
        self.P = phi.P
        self.Q = phi.Q
        self.Pr = tuple(reversed(phi.P))
        self.Qr = tuple(reversed(phi.Q))
        self.wpow = phi.degQ - phi.degP - 4
        self.zeros = [(z.index, z.z, abs(z.derivative) ** 0.5) for z in phi.zeros]
        finite = phi.singular_points()
        self.sing = {"z": list(finite), "w": [1 / s for s in finite if s != 0]}
        # poles: (pole, chart, location, capture radius)
        self.poles = []
        for p in phi.poles:
            if p.z is None:
                others = [abs(1 / s) for s in finite if s != 0]
                d = min(others) if others else 1.0 / S
                self.poles.append((p, "w", 0j, params.capture * min(d, 1.0 / S)))
                self.sing["w"].append(0j)
            else:
                others = [abs(p.z - s) for s in finite if abs(p.z - s) > 0]
                d = min(others) if others else S
                self.poles.append((p, "z", p.z, params.capture * d))

    def R(self, chart: str, x: complex) -> complex:
        if chart == "z":
            p = q = 0j
            for c in reversed(self.P):
                p = p * x + c
            for c in reversed(self.Q):
                q = q * x + c
            return p / q
        p = q = 0j
        for c in reversed(self.Pr):
            p = p * x + c
        for c in reversed(self.Qr):
            q = q * x + c
        return x**self.wpow * p / q

    def direction(self, chart: str, x: complex, ref: complex) -> tuple[complex, float]:
        r = cmath.sqrt(self.R(chart, x))
        a = abs(r)
        if a == 0:
            return ref, 0.0
        u = self.rot * r.conjugate() / a
        if (u * ref.conjugate()).real < 0:
            u = -u
        return u, a

    def dist(self, chart: str, x: complex) -> float:
        ds = [abs(x - s) for s in self.sing[chart]]
        if chart == "z":
            ds.append(self.z_out - abs(x) + self.phi.scale)
        else:
            ds.append(self.w_out * 2 - abs(x) + self.w_out)
        return max(min(ds), 1e-300)

    def to_z(self, chart: str, x: complex) -> complex:
        if chart == "z":
            return x
        return complex(math.inf, math.inf) if x == 0 else 1 / x


def _rk4(F: _Field, chart: str, x: complex, ref: complex, h: float):
    k1, a1 = F.direction(chart, x, ref)
    k2, a2 = F.direction(chart, x + 0.5 * h * k1, k1)
    k3, a3 = F.direction(chart, x + 0.5 * h * k2, k1)
    k4, a4 = F.direction(chart, x + h * k3, k1)
    turn = max(abs(cmath.phase(k * k1.conjugate())) for k in (k2, k3, k4))
    xn = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    ln = h / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
    return xn, ln, k1, turn


def _step(F: _Field, chart: str, x: complex, ref: complex, h: float, dist: float):
    """One adaptive step; returns (x_new, dl, direction, h_used, h_next)."""
    p = F.params
    while True:
        x1, l1, k1, t1 = _rk4(F, chart, x, ref, h)
        xm, lm, _, t2 = _rk4(F, chart, x, ref, h / 2)
        refm, _ = F.direction(chart, xm, k1)
        x2, l2, _, t3 = _rk4(F, chart, xm, refm, h / 2)
        if max(t1, t2, t3) > p.max_turn:
            h /= 2
            if h < 1e-14 * dist:
                raise WKBError("step size underflow")
            continue
        err = abs(x2 - x1)
        tol = p.tol * dist
        if err <= tol:
            xn = x2 + (x2 - x1) / 15
            dl = lm + l2 + ((lm + l2) - l1) / 15
            grow = 2.0 if err == 0 else min(2.0, 0.9 * (tol / err) ** 0.2)
            dirn, _ = F.direction(chart, xn, k1)
            return xn, dl, dirn, h, h * grow
        h *= max(0.2, 0.9 * (tol / err) ** 0.2)


def _trace(
    F: _Field,
    start: complex,
    ref: complex,
    length0: float = 0.0,
    skip_zero: int | None = None,
) -> Trajectory:
    p = F.params
    chart = "z"
    x = start
    if abs(x) > F.z_out:
        chart, x, ref = "w", 1 / x, -ref / (x * x)
        ref /= abs(ref)
    dirn, _ = F.direction(chart, x, ref)
    length = length0
    pts = [F.to_z(chart, x)]
    h = p.kappa * F.dist(chart, x) * 0.1
    state = {}  # pole index -> [inside, last distance, monotone]
    leaving = skip_zero is not None
    for n in range(p.max_steps):
        d = F.dist(chart, x)
        h = min(h, p.kappa * d)
        x_old, l_old, dir_old = x, length, dirn
        x, dl, dirn, h_used, h = _step(F, chart, x, dirn, h, d)
        length += dl
        # chart switch
        if chart == "z" and abs(x) > F.z_out:
            chart, dirn = "w", -dirn / (x * x)
            dirn /= abs(dirn)
            x = 1 / x
        elif chart == "w" and abs(x) > F.w_out * 2:
            chart, dirn = "z", -dirn / (x * x)
            dirn /= abs(dirn)
            x = 1 / x
        pts.append(F.to_z(chart, x))
        # zeros
        if chart == "z":
            for k, z1, rd in F.zeros:
                dz = abs(x - z1)
                dphi = (2.0 / 3.0) * rd * dz**1.5
                if k == skip_zero and leaving:
                    continue
                if dphi < p.zero_tol:
                    pts[-1] = z1
                    return Trajectory(F.theta, pts, length + dphi, Terminal.ZERO, k, steps=n + 1, params=p)
            if leaving and skip_zero is not None:
                z1 = F.zeros[skip_zero][1]
                # leave the launch zero's neighbourhood before watching it again
                if abs(x - z1) > 10 * abs(start - z1):
                    leaving = False
        # poles
        for pole, pchart, loc, rc in F.poles:
            if pchart != chart:
                state.pop(pole.index, None)
                continue
            dp = abs(x - loc)
            st = state.get(pole.index)
            if dp >= rc:
                state.pop(pole.index, None)
                continue
            if st is None:
                st = state[pole.index] = [dp, True]
            else:
                if dp > st[0]:
                    st[1] = False
                st[0] = dp
            if st[1] and dp < rc / 10:
                xf, lf = _land(F, chart, x_old, l_old, dir_old, h_used, loc, rc / 10)
                pts[-1] = F.to_z(chart, xf)
                ang = cmath.phase(xf - loc)
                traj = Trajectory(F.theta, pts, lf, Terminal.POLE, pole.index, ang, steps=n + 1, params=p)
                if pole.order >= 3:
                    traj.direction_index = _nearest_direction(F.phi, pole, F.theta, ang)
                return traj
        if not (math.isfinite(x.real) and math.isfinite(x.imag)):
            return Trajectory(F.theta, pts, length, Terminal.ESCAPED, steps=n + 1, params=p)
    return Trajectory(F.theta, pts, length, Terminal.STEP_LIMIT, steps=p.max_steps, params=p)


def _land(F: _Field, chart, x0, l0, dir0, h, loc, radius):
    """Point (and length) where the last step crosses ``|x - loc| = radius``."""
    lo, hi = 0.0, h
    xl, ll = x0, l0
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        xm, lm, _, _ = _rk4(F, chart, x0, dir0, mid)
        if abs(xm - loc) > radius:
            lo = mid
        else:
            hi = mid
        xl, ll = xm, l0 + lm
        if hi - lo < 1e-13 * max(h, 1e-300):
            break
    return xl, ll


def _nearest_direction(phi, pole: Pole, theta: float, ang: float) -> int:
    dirs = asymptotic_directions(phi, pole, theta)
    diffs = [abs(cmath.phase(cmath.exp(1j * (ang - a)))) for a in dirs]
    return int(np.argmin(diffs))


def horizontality_residual(phi: QuadraticDifferential, theta: float, pts: list[complex]) -> float:
    """``max |Im(e^{-i theta} int sqrt(phi))| / length`` along a polyline (trapezoid rule)."""
    finite = [p for p in pts if math.isfinite(p.real) and abs(p) < 1e6]
    if len(finite) < 2:
        return 0.0
    rot = cmath.exp(-1j * theta)
    prev = None
    acc = 0j
    length = 0.0
    worst = 0.0
    for a, b in zip(finite, finite[1:]):
        m = 0.5 * (a + b)
        r = cmath.sqrt(phi.R(m))
        if prev is not None and (r * prev.conjugate()).real < 0:
            r = -r
        prev = r
        inc = r * (b - a)
        acc += inc
        length += abs(inc)
        worst = max(worst, abs((rot * acc).imag))
    return worst / length if length else 0.0


def trace_trajectory(
    phi: QuadraticDifferential,
    z0: complex,
    theta: float = 0.0,
    params: TracerParams | None = None,
    direction: complex | None = None,
) -> Trajectory:
    """Trace from a regular point ``z0``.

    Without ``direction`` the principal square root fixes the orientation.
    """
    params = params or TracerParams()
    z0 = complex(z0)
    for s in phi.singular_points():
        if abs(z0 - s) < 1e-9 * max(1.0, phi.scale):
            raise StartAtSingularity(f"{z0} is a zero or pole")
    F = _Field(phi, theta, params)
    if direction is None:
        r = cmath.sqrt(phi.R(z0))
        direction = F.rot * r.conjugate() / abs(r)
    traj = _trace(F, z0, direction)
    traj.residual = horizontality_residual(phi, theta, traj.points)
    return traj


# ---------------------------------------------------------------------------
# separatrices
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def local_period(phi: QuadraticDifferential, z0: complex, z1: complex) -> complex:
    """``int_{z0}^{z1} sqrt(phi)`` on a short segment from a simple zero ``z0``.

    Uses ``z = z0 + tau^2 (z1 - z0)`` which removes the square-root singularity.
    """
    D = z1 - z0
    ref = cmath.sqrt(phi.dR(z0) * D)
    total = 0j
    for xg, wg in zip(_GL_X, _GL_W):
        tau = 0.5 * (xg + 1)
        if tau == 0:
            continue
        g = cmath.sqrt(phi.R(z0 + tau * tau * D) / (tau * tau))
        if (g * ref.conjugate()).real < 0:
            g = -g
        total += 0.5 * wg * g * 2 * tau * tau * D
    return total


def launch_angles(phi: QuadraticDifferential, zero_index: int, theta: float = 0.0) -> list[float]:
    """The three directions ``(2 theta - arg R'(z0) + 2 pi k) / 3`` in ``[0, 2 pi)``."""
    z = phi.zeros[zero_index]
    base = 2 * theta - cmath.phase(z.derivative)
    return sorted(((base + 2 * math.pi * k) / 3) % (2 * math.pi) for k in range(3))


@dataclass
class Separatrix:
    zero: int
    k: int
    launch_angle: float
    start: complex
    trajectory: Trajectory


def _refine_launch(phi, z0: complex, delta: float, alpha: float, theta: float) -> tuple[float, complex]:
    rot = cmath.exp(-1j * theta)

    def F(a):
        zeta = local_period(phi, z0, z0 + delta * cmath.exp(1j * a))
        return (rot * zeta).imag / max(abs(zeta), 1e-300), zeta

    a0, a1 = alpha, alpha + 1e-4
    f0, _ = F(a0)
    f1, zeta = F(a1)
    for _ in range(30):
        if f1 == f0:
            break
        a2 = a1 - f1 * (a1 - a0) / (f1 - f0)
        a0, f0 = a1, f1
        a1 = a2
        f1, zeta = F(a1)
        if abs(f1) < 1e-15:
            break
    if abs(a1 - alpha) > 0.5:
        a1 = alpha
        _, zeta = F(a1)
    return a1, zeta


def separatrices(phi: QuadraticDifferential, theta: float = 0.0, params: TracerParams | None = None) -> list[Separatrix]:
    params = params or TracerParams()
    F = _Field(phi, theta, params)
    out = []
    for z in phi.zeros:
        others = [abs(z.z - s) for s in phi.singular_points() if s != z.z]
        delta = params.launch * (min(others) if others else 1.0)
        for k, alpha in enumerate(launch_angles(phi, z.index, theta)):
            a, zeta = _refine_launch(phi, z.z, delta, alpha, theta)
            start = z.z + delta * cmath.exp(1j * a)
            traj = _trace(F, start, cmath.exp(1j * a), abs(zeta), skip_zero=z.index)
            traj.points.insert(0, z.z)
            traj.residual = horizontality_residual(phi, theta, traj.points)
            out.append(Separatrix(z.index, k, alpha, start, traj))
    return out


@dataclass(frozen=True)
class SaddleConnection:
    zero_from: int
    zero_to: int
    length: float
    phase: float


def detect_saddle_connections(
    phi: QuadraticDifferential,
    theta: float = 0.0,
    params: TracerParams | None = None,
    seps: list[Separatrix] | None = None,
) -> list[SaddleConnection]:
    seps = separatrices(phi, theta, params) if seps is None else seps
    found = []
    seen = set()
    for s in seps:
        t = s.trajectory
        if t.terminal != Terminal.ZERO:
            continue
        key = (min(s.zero, t.target), max(s.zero, t.target), round(t.length, 4))
        if key in seen:
            continue
        seen.add(key)
        phase = (theta / math.pi) % 1.0
        found.append(SaddleConnection(s.zero, t.target, t.length, phase))
    return found
