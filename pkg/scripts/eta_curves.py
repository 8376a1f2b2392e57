"""Critical efficiency against the entanglement parameter for every named set.

Writes one CSV per set to the output directory (default ./out/eta).
"""

import argparse
from pathlib import Path

from steering_loophole.cli import main

SETS = ("square", "octahedron", "custom4", "custom5", "icosahedron", "dodecahedron", "continuum")


def run(outdir: Path, points: int) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for label in SETS:
        code = main(["eta", "--set", label, "--grid", f"0.001:1.5708:{points}", "-o", str(outdir / f"eta_{label}.csv")])
        if code:
            raise SystemExit(code)
        print(f"wrote {outdir / f'eta_{label}.csv'}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("out/eta"))
    ap.add_argument("--points", type=int, default=200)
    args = ap.parse_args()
    run(args.outdir, args.points)
