"""Truncated Jacobian dimensions of the fixture quivers with potential."""

import argparse
import time

from wkbqp.ginzburg import jacobian_dims
from wkbqp.quiver import qp_from_triangulation
from wkbqp.surface import fixture

NAMES = ["torus_d1", "torus_d2", "torus_d3", "genus2_d1", "genus2_d2", "annulus_1_2", "annulus_2_2"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=8)
    args = ap.parse_args()
    for name in NAMES:
        t0 = time.perf_counter()
        J = jacobian_dims(qp_from_triangulation(fixture(name)), args.order)
        dt = time.perf_counter() - t0
        print(f"{name:12s} {J.totals} stabilized_at={J.stabilized_at} ({dt:.2f} s)")


if __name__ == "__main__":
    main()
