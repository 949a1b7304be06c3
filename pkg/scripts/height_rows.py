"""Height of the dual torus along seeded directions: five points around t = 0.

    python scripts/height_rows.py E8 --directions 3
"""

import argparse

from latzeta.catalog import catalog_lattice
from latzeta.lattice import dual, rescale_to_covolume_one
from latzeta.tangent import random_directions
from latzeta.zeta import height_compare


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("name")
    ap.add_argument("--directions", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--step", type=float, default=1e-2)
    args = ap.parse_args()
    L = dual(rescale_to_covolume_one(catalog_lattice(args.name)))
    rows = height_compare(L, random_directions(L.gram, args.directions, args.seed), args.step)
    print("dir,t,height,err")
    for k, r in enumerate(rows):
        for t, v, e in zip(r.ts, r.values, r.errs):
            print(f"{k},{t:.3e},{float(v):.15e},{float(e):.2e}")
    for k, r in enumerate(rows):
        print(f"# dir {k}: strict min at 0: {r.strict_min_at_zero}; curvature {r.curvature:.6e}; tau/(n+2) {r.tau / (L.n + 2):.6e}")


if __name__ == "__main__":
    main()
