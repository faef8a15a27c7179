#!/usr/bin/env python3
"""Log-log plot of a sweep.csv written by `screenbie-cli sweep` or `validate`.

Optional dev tooling; needs matplotlib, which the build does not.
"""
import argparse
import csv

import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+", help="sweep CSV files (k,quantity,bound,ratio)")
    ap.add_argument("-o", "--output", help="write the figure here instead of showing it")
    args = ap.parse_args()

    fig, ax = plt.subplots()
    for path in args.csv:
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        k = [float(r["k"]) for r in rows]
        ax.loglog(k, [float(r["quantity"]) for r in rows], "o-", label=path)
        bound = [float(r["bound"]) for r in rows]
        if any(bound):
            ax.loglog(k, bound, "--", color="grey")
    ax.set_xlabel("k")
    ax.set_ylabel("quantity")
    ax.legend(fontsize="small")
    if args.output:
        fig.savefig(args.output, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
