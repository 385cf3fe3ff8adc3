"""Command line front end.

Exit codes: 0 success, 2 validation failure, 3 numerically inconclusive,
64 usage error.
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import io
from .ainfty import build_category, euler_form, euler_kernel_rank, verify_ainfty
from .config import PipelineConfig
from .floer import WKBAlgebraSpec, assemble_floer_potential, compare_with_quiver, homology_check
from .ginzburg import check_d_squared, jacobian_dims
from .quiver import QuiverError, mutate_qp, qp_from_triangulation, reduce_qp
from .surface import Signing, SurfaceError, dual_cellulation, flip, random_flip_walk, validate
from .wkb import (
    QuadraticDifferential,
    Terminal,
    TracingInconclusive,
    WKBError,
    classify_points,
    separatrices,
    trace_trajectory,
    wkb_triangulation,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class Failed(Exception):
    """Raised after printing a report that did not pass."""


def _emit(obj, args) -> None:
    text = io.write_json(obj, getattr(args, "out", None))
    if getattr(args, "out", None) is None:
        sys.stdout.write(text)


def _config(args) -> PipelineConfig:
    areas = {}
    if getattr(args, "areas", None):
        areas = {int(k): Fraction(str(v)) for k, v in io.read_json(args.areas).items()}
    return PipelineConfig(
        order=getattr(args, "order", 12),
        tol=getattr(args, "tol", 1e-9),
        capture=getattr(args, "capture", 0.05),
        theta=getattr(args, "theta", 0.0),
        background=getattr(args, "background", "b0"),
        areas=areas,
        seed=getattr(args, "seed", 0),
    )


def _signing(args, T):
    if getattr(args, "signing", None):
        return Signing.from_map({int(k): int(v) for k, v in io.read_json(args.signing).items()})
    return Signing.constant(T)


def _parse_complex(text: str) -> complex:
    if "," in text:
        re, im = text.split(",")
        return complex(float(re), float(im))
    return complex(text.replace("i", "j").replace(" ", ""))


# -- surface -------------------------------------------------------------


def cmd_surface_validate(args) -> int:
    T = io.load_triangulation(args.triangulation)
    rep = validate(T)
    _emit(rep.to_json(), args)
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_surface_flip(args) -> int:
    T = io.load_triangulation(args.triangulation)
    R = flip(T, args.edge)
    if args.canonical:
        R = R.canonical()
    _emit(R.to_json(), args)
    return EXIT_OK


def cmd_surface_random(args) -> int:
    T = io.load_triangulation(args.triangulation)
    R, path = random_flip_walk(T, args.steps, args.seed)
    out = R.to_json()
    out["flips"] = list(path)
    _emit(out, args)
    return EXIT_OK


# -- qp ------------------------------------------------------------------


def cmd_qp_build(args) -> int:
    T = io.load_triangulation(args.surface)
    qp = qp_from_triangulation(T, _signing(args, T), args.order)
    if args.reduce:
        qp, _ = reduce_qp(qp)
    _emit(qp.to_json(), args)
    return EXIT_OK


def cmd_qp_mutate(args) -> int:
    qp = io.load_qp(args.qp)
    _emit(mutate_qp(qp, args.vertex).to_json(), args)
    return EXIT_OK


def cmd_qp_jacobian(args) -> int:
    qp = io.load_qp(args.qp)
    _emit(jacobian_dims(qp, args.order).to_json(), args)
    return EXIT_OK


def cmd_qp_dsquared(args) -> int:
    qp = io.load_qp(args.qp)
    rep = check_d_squared(qp, n_words=args.words, max_length=args.max_length, seed=args.seed)
    _emit(rep.to_json(), args)
    return EXIT_OK if rep.passed else EXIT_INVALID


# -- ainfty --------------------------------------------------------------


def cmd_ainfty_verify(args) -> int:
    qp = io.load_qp(args.qp)
    if not qp.W.is_reduced():
        qp, _ = reduce_qp(qp)
    C = build_category(qp, args.nmax)
    rep = verify_ainfty(C, args.nmax)
    out = rep.to_json()
    if args.dump:
        out["structure_constants"] = C.structure_constants()
    _emit(out, args)
    return EXIT_OK if rep.passed else EXIT_INVALID


def cmd_ainfty_euler(args) -> int:
    qp = io.load_qp(args.qp)
    vs, B = euler_form(qp)
    _emit({"schema_version": 1, "vertices": vs, "matrix": B, "kernel_rank": euler_kernel_rank(B)}, args)
    return EXIT_OK


# -- wkb -----------------------------------------------------------------


def cmd_wkb_classify(args) -> int:
    phi = io.load_differential(args.differential)
    _emit(classify_points(phi).to_json(), args)
    return EXIT_OK


def cmd_wkb_trace(args) -> int:
    cfg = _config(args)
    phi = io.load_differential(args.differential)
    t = trace_trajectory(phi, _parse_complex(args.z0), cfg.theta, cfg.tracer())
    out = t.to_json(stride=args.stride)
    out["schema_version"] = 1
    _emit(out, args)
    return EXIT_OK if t.terminal in (Terminal.POLE, Terminal.ZERO) else EXIT_INCONCLUSIVE


def cmd_wkb_triangulate(args) -> int:
    cfg = _config(args)
    phi = io.load_differential(args.differential)
    res = wkb_triangulation(phi, cfg.theta, cfg.tracer())
    _emit(res.to_json(), args)
    return EXIT_OK


def svg_separatrices(phi: QuadraticDifferential, theta: float, params, radius: float | None = None) -> str:
    seps = separatrices(phi, theta, params)
    R = radius or 2.5 * phi.scale
    size = 600

    def xy(z: complex) -> tuple[float, float]:
        return (size / 2 + z.real / R * size / 2, size / 2 - z.imag / R * size / 2)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for s in seps:
        pts = [p for p in s.trajectory.points if math.isfinite(p.real) and abs(p) < 1.5 * R]
        if len(pts) < 2:
            continue
        d = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(xy, pts))
        lines.append(f'<polyline points="{d}" fill="none" stroke="black" stroke-width="1"/>')
    for z in phi.zeros:
        x, y = xy(z.z)
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="red"/>')
    for p in phi.poles:
        if p.z is not None:
            x, y = xy(p.z)
            lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="blue"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def cmd_wkb_plot(args) -> int:
    cfg = _config(args)
    phi = io.load_differential(args.differential)
    svg = svg_separatrices(phi, cfg.theta, cfg.tracer())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# -- floer ---------------------------------------------------------------


def cmd_floer_assemble(args) -> int:
    cfg = _config(args)
    T = io.load_triangulation(args.cellulation)
    spec = WKBAlgebraSpec(dual_cellulation(T), cfg.background, cfg.areas, _signing(args, T))
    qp = assemble_floer_potential(spec, cfg.order)
    out = qp.to_json()
    out["provenance"] = {"cellulation": args.cellulation, "background": cfg.background}
    _emit(out, args)
    return EXIT_OK


def cmd_floer_compare(args) -> int:
    cfg = _config(args)
    T = io.load_triangulation(args.triangulation)
    rep = compare_with_quiver(io.load_qp(args.qp), T, _signing(args, T), cfg.areas)
    _emit(rep.to_json(), args)
    return EXIT_OK if rep.passed else EXIT_INVALID


# -- pipeline ------------------------------------------------------------


def cmd_pipeline(args) -> int:
    cfg = _config(args)
    out: dict = {"schema_version": 1}
    if args.differential:
        phi = io.load_differential(args.differential)
        res = wkb_triangulation(phi, cfg.theta, cfg.tracer())
        T, eps = res.triangulation, res.signing
        out["wkb"] = {
            "surface": res.to_json()["surface"],
            "edges": res.n_edges,
            "nondegenerate": res.nondegenerate,
            "residues": res.to_json()["residues"],
        }
        data = (0, [p.order for p in phi.poles])
    elif args.triangulation:
        T = io.load_triangulation(args.triangulation)
        eps = _signing(args, T)
        data = T
    else:
        raise UsageError("pipeline needs --differential or --triangulation")
    qp = qp_from_triangulation(T, eps, cfg.order)
    red, report = reduce_qp(qp)
    out["triangulation"] = T.to_json()
    out["qp"] = red.to_json()
    out["cancelled_pairs"] = report.cancelled_pairs
    out["homology"] = homology_check(data, qp).to_json()
    if args.verify:
        out["d_squared"] = check_d_squared(red, n_words=200, max_length=8, seed=cfg.seed).passed
        out["ainfty"] = verify_ainfty(build_category(red, 6), 6).passed
    _emit(out, args)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def _common(p, *names):
    if "order" in names:
        p.add_argument("--order", type=int, default=12)
    if "wkb" in names:
        p.add_argument("--theta", type=float, default=0.0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--capture", type=float, default=0.05)
    if "floer" in names:
        p.add_argument("--background", choices=["b0", "none"], default="b0")
        p.add_argument("--areas")
    if "seed" in names:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wkbqp", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = top.add_parser("surface").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("validate")
    p.add_argument("--triangulation", required=True)
    _common(p)
    p.set_defaults(func=cmd_surface_validate)
    p = g.add_parser("flip")
    p.add_argument("--triangulation", required=True)
    p.add_argument("--edge", type=int, required=True)
    p.add_argument("--canonical", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_surface_flip)
    p = g.add_parser("random")
    p.add_argument("--triangulation", required=True)
    p.add_argument("--steps", type=int, default=50)
    _common(p, "seed")
    p.set_defaults(func=cmd_surface_random)

    g = top.add_parser("qp").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("build")
    p.add_argument("--surface", required=True)
    p.add_argument("--signing")
    p.add_argument("--reduce", action="store_true")
    _common(p, "order")
    p.set_defaults(func=cmd_qp_build)
    p = g.add_parser("mutate")
    p.add_argument("--qp", required=True)
    p.add_argument("--vertex", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_qp_mutate)
    p = g.add_parser("jacobian")
    p.add_argument("--qp", required=True)
    _common(p, "order")
    p.set_defaults(func=cmd_qp_jacobian)
    p = g.add_parser("dsquared")
    p.add_argument("--qp", required=True)
    p.add_argument("--words", type=int, default=1000)
    p.add_argument("--max-length", type=int, default=10)
    _common(p, "seed")
    p.set_defaults(func=cmd_qp_dsquared)

    g = top.add_parser("ainfty").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("verify")
    p.add_argument("--qp", required=True)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--dump", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_ainfty_verify)
    p = g.add_parser("euler")
    p.add_argument("--qp", required=True)
    _common(p)
    p.set_defaults(func=cmd_ainfty_euler)

    g = top.add_parser("wkb").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, func in [
        ("classify", cmd_wkb_classify),
        ("trace", cmd_wkb_trace),
        ("triangulate", cmd_wkb_triangulate),
        ("plot", cmd_wkb_plot),
    ]:
        p = g.add_parser(name)
        p.add_argument("--differential", required=True)
        if name == "trace":
            p.add_argument("--z0", required=True, help="start point, 're,im' or '1+2j'")
            p.add_argument("--stride", type=int, default=1)
        _common(p, "wkb")
        p.set_defaults(func=func)

    g = top.add_parser("floer").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("assemble")
    p.add_argument("--cellulation", required=True, help="triangulation file or fixture whose dual is used")
    p.add_argument("--signing")
    _common(p, "order", "floer")
    p.set_defaults(func=cmd_floer_assemble)
    p = g.add_parser("compare")
    p.add_argument("--qp", required=True)
    p.add_argument("--triangulation", required=True)
    p.add_argument("--signing")
    _common(p, "floer")
    p.set_defaults(func=cmd_floer_compare)

    p = top.add_parser("pipeline")
    p.add_argument("--differential")
    p.add_argument("--triangulation")
    p.add_argument("--signing")
    p.add_argument("--verify", action="store_true")
    _common(p, "order", "wkb", "seed")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TracingInconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (SurfaceError, QuiverError, WKBError, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
