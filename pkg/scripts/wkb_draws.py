"""Random draws of (z^2 + c z + d)/z^2 dz^2 and the shape of their WKB triangulations."""

import argparse
import random
from collections import Counter

from wkbqp.quiver import qp_from_triangulation, reduce_qp
from wkbqp.wkb import QuadraticDifferential, SaddleConnectionPresent, TracingInconclusive, wkb_triangulation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--radius", type=float, default=2.0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally = Counter()
    r = args.radius
    for _ in range(args.draws):
        c = complex(rng.uniform(-r, r), rng.uniform(-r, r))
        d = complex(rng.uniform(-r, r), rng.uniform(-r, r))
        try:
            res = wkb_triangulation(QuadraticDifferential((d, c, 1), (0, 0, 1)))
        except SaddleConnectionPresent:
            tally["saddle"] += 1
            continue
        except TracingInconclusive:
            tally["inconclusive"] += 1
            continue
        if res.triangulation.self_folded_triangles():
            tally["self-folded"] += 1
            continue
        red, _ = reduce_qp(qp_from_triangulation(res.triangulation, res.signing))
        tally[f"{len(red.quiver.vertices)} vertices, {len(red.quiver.arrows)} arrows"] += 1
    for k, v in sorted(tally.items()):
        print(f"{v:4d}  {k}")


if __name__ == "__main__":
    main()
