#!/usr/bin/env python3
"""Plot CSV files emitted by the mtspectral CLI.

Usage:
    mtspectral decay --function runge --N 64 --out runge.csv
    python3 docs/plot.py runge.csv

Picks the layout from the header: coefficient tables
(n,abs_coeff,...) become semilog stem plots, comparison curves
(x,error_mt,error_hermite) become semilog overlays, and advection
sweeps (N,norm_drift,shift_error) become loglog convergence plots.
"""

import csv
import sys

import matplotlib.pyplot as plt


def main(path: str) -> None:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = [[float(cell) for cell in row] for row in reader]

    cols = {name: [row[i] for row in rows] for i, name in enumerate(header)}
    fig, ax = plt.subplots(figsize=(7, 4.5))

    if header[:2] == ["n", "abs_coeff"]:
        ax.semilogy(cols["n"], [max(v, 1e-20) for v in cols["abs_coeff"]], ".")
        ax.set_xlabel("n")
        ax.set_ylabel("|coefficient|")
    elif header == ["x", "error_mt", "error_hermite"]:
        ax.semilogy(cols["x"], [max(v, 1e-20) for v in cols["error_mt"]], label="MT")
        ax.semilogy(
            cols["x"], [max(v, 1e-20) for v in cols["error_hermite"]], label="Hermite"
        )
        ax.set_xlabel("x")
        ax.set_ylabel("pointwise error")
        ax.legend()
    elif header == ["N", "norm_drift", "shift_error"]:
        ax.loglog(cols["N"], cols["shift_error"], "o-", label="shift error")
        ax.loglog(cols["N"], [max(v, 1e-18) for v in cols["norm_drift"]], "s--", label="norm drift")
        ax.set_xlabel("N")
        ax.legend()
    elif header == ["rho", "center_im", "radius"]:
        ax.plot(cols["rho"], cols["radius"], "o-", label="radius")
        ax.plot(cols["rho"], cols["center_im"], "s--", label="Im center")
        ax.set_xlabel("rho")
        ax.legend()
    else:
        sys.exit(f"unrecognized header: {header}")

    ax.set_title(path)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    out = path.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(sys.argv[1])
