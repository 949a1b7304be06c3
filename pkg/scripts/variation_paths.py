"""Second-variation fits along seeded directions, with the sampled path.

    python scripts/variation_paths.py E8 --s 2 --s 5 --directions 3
"""

import argparse

from latzeta.catalog import catalog_lattice
from latzeta.extremality import path_csv, random_directions, zeta_path_sums, zeta_second_variation_fit
from latzeta.lattice import rescale_to_covolume_one


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("name")
    ap.add_argument("--s", type=float, action="append", required=True)
    ap.add_argument("--directions", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--csv", action="store_true", help="also print each sampled path")
    args = ap.parse_args()
    L = rescale_to_covolume_one(catalog_lattice(args.name))
    for k, H in enumerate(random_directions(L.gram, args.directions, args.seed)):
        sums = zeta_path_sums(L, H, args.s, args.step)
        for s in args.s:
            r = zeta_second_variation_fit(L, s, H, args.step, sums=sums)
            print(f"dir {k} s={s:g}: fitted {r.quadratic:.10e} predicted {r.predicted:.10e} gap {r.gap:.2e} linear {r.linear:.1e} (bound {r.linear_bound:.1e})")
            if args.csv:
                print(path_csv(r), end="")


if __name__ == "__main__":
    main()
