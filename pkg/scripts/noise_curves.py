"""Critical efficiency under colored and white noise for the six-direction set.

One CSV per noise kind holds a column per epsilon; the minima and the
maximal-entanglement reference C_n are written as '#' metadata lines.
"""

import argparse
from pathlib import Path

from steering_loophole.cli import main

EPSILONS = ("0", "0.01", "0.05", "0.1", "0.2", "0.3")


def run(outdir: Path, label: str, points: int) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for kind in ("colored", "white"):
        path = outdir / f"noise_{label}_{kind}.csv"
        argv = ["noise", "--set", label, "--kind", kind, "--grid", f"0.001:1.5708:{points}", "-o", str(path)]
        for e in EPSILONS:
            argv += ["--epsilon", e]
        if kind == "colored":
            argv.append("--crossover")
        code = main(argv)
        if code:
            raise SystemExit(code)
        print(f"wrote {path}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("out/noise"))
    ap.add_argument("--set", dest="label", default="icosahedron")
    ap.add_argument("--points", type=int, default=200)
    args = ap.parse_args()
    run(args.outdir, args.label, args.points)
