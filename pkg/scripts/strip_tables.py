"""Write strip-scan CSVs (s, zeta, err, sign) for covolume-one lattices.

    python scripts/strip_tables.py D4 E8 --out tables/
"""

import argparse
from pathlib import Path

from latzeta.catalog import catalog_lattice
from latzeta.lattice import rescale_to_covolume_one
from latzeta.zeta import strip_scan, zeta_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("names", nargs="+")
    ap.add_argument("--points", type=int, default=37)
    ap.add_argument("--budget", type=int, default=10**9)
    ap.add_argument("--out", default=".")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.names:
        L = rescale_to_covolume_one(catalog_lattice(name))
        scan = strip_scan(L, args.points, 1e-8, args.budget)
        (out / f"strip_{name}.csv").write_text(zeta_csv(scan.values))
        print(f"{name}: {scan.summary}; zeros bracketed: {len(scan.zeros)}")


if __name__ == "__main__":
    main()
