"""Random flip walk: compare each flip with mutation of the quiver."""

import argparse
import random

from wkbqp.ginzburg import jacobian_dims
from wkbqp.quiver import mutate_quiver, premutate_qp, qp_from_triangulation, quiver_of_triangulation, reduce_qp
from wkbqp.surface import fixture, flip, flippable_edges


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixture", default="torus_d2")
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--order", type=int, default=6)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    T = fixture(args.fixture)
    step = 0
    while step < args.steps:
        e = rng.choice(flippable_edges(T))
        F = flip(T, e)
        if not F.is_nondegenerate():
            continue
        iso = quiver_of_triangulation(F).is_isomorphic(mutate_quiver(quiver_of_triangulation(T), e))
        red, rep = reduce_qp(premutate_qp(qp_from_triangulation(T), e))
        lhs = jacobian_dims(red, args.order).totals
        rhs = jacobian_dims(qp_from_triangulation(F), args.order).totals
        print(f"step {step:3d} edge {e:2d} iso={iso} cancelled={rep.cancelled_pairs} dims={lhs} match={lhs == rhs}")
        T, step = F, step + 1


if __name__ == "__main__":
    main()
