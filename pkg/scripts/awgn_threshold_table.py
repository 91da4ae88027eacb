#!/usr/bin/env python3
"""AWGN threshold table over t for a built-in subcode.

Computes the single-Gaussian (GA) and Gaussian-mixture (GMA) thresholds for a
grid of GC fractions and, optionally, the full quantized-DE threshold with
Monte-Carlo GC densities (slow; N = 2e5 samples per iteration by default).
"""

import argparse
from pathlib import Path

import numpy as np

from gldpc.de_awgn import McConfig, awgn_threshold_de
from gldpc.gauss_approx import ga_threshold, gma_threshold
from gldpc.subcodes import EnsembleSpec, get_subcode


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--code", default="C1")
    ap.add_argument("--t-grid", default="0,0.1,0.3,0.5,0.7,0.9,1")
    ap.add_argument("--tol", type=float, default=1e-4)
    ap.add_argument("--with-de", action="store_true", help="also run quantized DE")
    ap.add_argument("--de-tol", type=float, default=2e-3)
    ap.add_argument("--mc-samples", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("awgn_thresholds.csv"))
    args = ap.parse_args()

    code = get_subcode(args.code)
    rows = []
    for t in (float(v) for v in args.t_grid.split(",")):
        spec = EnsembleSpec(code, 2, code.length, t)
        ga = ga_threshold(spec, tol=args.tol).value
        gma = gma_threshold(spec, tol=args.tol).value
        de = ""
        if args.with_de:
            de = awgn_threshold_de(
                spec,
                tol=args.de_tol,
                mc=McConfig(samples=args.mc_samples, seed=args.seed),
                sigma_lo=0.3 * max(1.0, ga),
                sigma_hi=1.6 * max(ga, gma),
            ).value
        rows.append((t, ga, gma, de))
        print(f"t = {t:.2f}: sigma_GA = {ga:.4f}, sigma_GMA = {gma:.4f}"
              + (f", sigma_DE = {de:.4f}" if de != "" else ""))

    with open(args.out, "w", newline="\n") as fh:
        fh.write("t,sigma_ga,sigma_gma,sigma_de\n")
        for t, ga, gma, de in rows:
            de_s = f"{de:.10g}" if de != "" else ""
            fh.write(f"{t:.10g},{ga:.10g},{gma:.10g},{de_s}\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
