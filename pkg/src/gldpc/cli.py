"""Command-line front end: subcode verification, threshold sweeps, capacity-gap
curves, and BLER simulation, all emitting CSV plus a JSON sidecar that records
everything needed to reproduce the CSV byte-for-byte."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

SIDECAR_SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_NO_CONVERGENCE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def _resolve_subcode(args):
    from .subcodes import get_subcode, load_subcode

    if getattr(args, "subcode_file", None):
        return load_subcode(args.subcode_file)
    return get_subcode(args.code)


def _parse_grid(text: str) -> np.ndarray:
    """'a:b:step' inclusive grid, or a comma-separated list."""
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        return np.round(np.arange(lo, hi + step / 2, step), 10)
    return np.asarray([float(v) for v in text.split(",")])


def _write_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".10g")
    return v


def _write_sidecar(out_path, command: str, args: argparse.Namespace) -> None:
    payload = {
        "schema_version": SIDECAR_SCHEMA_VERSION,
        "command": command,
        "args": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
    }
    Path(str(out_path) + ".json").write_text(json.dumps(payload, indent=2) + "\n")


def cmd_verify_subcode(args) -> int:
    from .subcodes import verify_message_invariance
    from .de_bec import gc_erasure_poly

    code = _resolve_subcode(args)
    report = verify_message_invariance(code)
    poly = gc_erasure_poly(code)
    print(f"subcode {code.name}: ({code.length}, {code.length - code.m_prime}), "
          f"d_min = {code.min_distance}")
    print(f"message invariant: {report.invariant}"
          + ("" if report.invariant
             else f" (first failing position: {report.failing_position})"))
    if report.invariant:
        for i, perm in enumerate(report.table.perms):
            print(f"  pi_{i + 1}: " + " ".join(str(p + 1) for p in perm))
    print("erasure polynomial coefficients (Known counts by weight): "
          + ", ".join(str(int(c)) for c in poly.coeffs))
    return EXIT_OK if report.invariant else EXIT_VERIFICATION


def cmd_threshold(args) -> int:
    from .subcodes import EnsembleSpec
    from .de_bec import bec_threshold
    from .de_awgn import awgn_threshold_de, McConfig
    from .gauss_approx import ga_threshold, gma_threshold

    code = _resolve_subcode(args)
    t_values = _parse_grid(args.t_grid) if args.t_grid else np.asarray([args.t])
    rows = []
    for t in t_values:
        spec = EnsembleSpec(code, args.J, args.K, float(t))
        start = time.perf_counter()
        if args.channel == "bec":
            result = bec_threshold(spec, tol=args.tol)
        elif args.method == "ga":
            result = ga_threshold(spec, tol=args.tol)
        elif args.method == "gma":
            result = gma_threshold(spec, tol=args.tol)
        else:  # de-mc
            result = awgn_threshold_de(
                spec, tol=args.tol, mc=McConfig(samples=args.mc_samples, seed=args.seed))
        runtime = time.perf_counter() - start
        method = getattr(result, "method", "bec-de")
        # wall-clock time goes to stdout only so the CSV stays byte-reproducible
        rows.append([float(t), result.value, method, result.tol])
        print(f"t = {t}: threshold = {result.value:.6f} ({method}, {runtime:.1f} s)")
    _write_csv(args.out, ["t", "threshold", "method", "tol"], rows)
    _write_sidecar(args.out, "threshold", args)
    return EXIT_OK


def cmd_gap_curves(args) -> int:
    from .subcodes import EnsembleSpec
    from .channels import Bec, BiAwgn, capacity
    from .de_bec import bec_threshold
    from .de_awgn import awgn_threshold_de, McConfig
    from .gauss_approx import ga_threshold, gma_threshold

    code = _resolve_subcode(args)
    rows = []
    for t in _parse_grid(args.t_grid):
        spec = EnsembleSpec(code, args.J, args.K, float(t))
        if args.channel == "bec":
            value = bec_threshold(spec, tol=args.tol).value
            cap = capacity(Bec(value))
        else:
            if args.method == "ga":
                value = ga_threshold(spec, tol=args.tol).value
            elif args.method == "gma":
                value = gma_threshold(spec, tol=args.tol).value
            else:
                value = awgn_threshold_de(
                    spec, tol=args.tol,
                    mc=McConfig(samples=args.mc_samples, seed=args.seed)).value
            cap = capacity(BiAwgn(value))
        rate = spec.design_rate()
        rows.append([float(t), value, rate, cap, cap - rate])
        print(f"t = {t}: threshold {value:.6f}, rate {rate:.4f}, gap {cap - rate:.4f}")
    _write_csv(args.out, ["t", "threshold", "design_rate", "capacity_at_threshold", "gap"], rows)
    _write_sidecar(args.out, "gap-curves", args)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .subcodes import EnsembleSpec
    from .ensemble_graph import sample_graph, clean_graph, derive_comparison_ldpc
    from .mp_decoder import bler_sim

    code = _resolve_subcode(args)
    spec = EnsembleSpec(code, args.J, args.K, args.t)
    graph = clean_graph(sample_graph(spec, args.n, seed=args.seed),
                        seed=args.seed + 1)
    sigmas = _parse_grid(args.sigma_grid)
    rate = spec.design_rate()
    rows = []
    labels = [("gldpc", graph)]
    if args.compare_ldpc:
        labels.append(("ldpc", derive_comparison_ldpc(graph, seed=args.seed + 2)))
    for label, g in labels:
        records = bler_sim(g, sigmas, trials=args.trials, max_iters=args.max_iters,
                           seed=args.seed, batch=args.batch)
        for r in records:
            rows.append([label, rate, r.sigma, r.snr_db, r.trials, r.block_errors,
                         r.bit_errors, r.bler, r.avg_iterations, r.seed])
            print(f"{label} sigma {r.sigma:.3f}: BLER {r.bler:.3e} "
                  f"({r.block_errors}/{r.trials})")
    _write_csv(args.out,
               ["graph", "design_rate", "sigma", "snr_db", "trials", "block_errors",
                "bit_errors", "bler", "avg_iters", "seed"], rows)
    _write_sidecar(args.out, "simulate", args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gldpc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_code_args(p):
        p.add_argument("--code", default="C1", help="built-in subcode name (C1 or C2)")
        p.add_argument("--subcode-file", help="parity-check matrix file overriding --code")
        p.add_argument("-J", type=int, default=2)
        p.add_argument("-K", type=int, default=None,
                       help="constraint degree (default: subcode length)")

    p = sub.add_parser("verify-subcode", help="invariance verdict, permutations, erasure polynomial")
    add_code_args(p)
    p.set_defaults(func=cmd_verify_subcode)

    p = sub.add_parser("threshold", help="threshold over a t grid")
    add_code_args(p)
    p.add_argument("--channel", choices=["bec", "awgn"], required=True)
    p.add_argument("--method", choices=["de-mc", "ga", "gma"], default="ga")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--t-grid", help="'lo:hi:step' or comma list")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--mc-samples", type=int, default=200_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="threshold.csv")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("gap-curves", help="threshold, design rate, capacity gap over t")
    add_code_args(p)
    p.add_argument("--channel", choices=["bec", "awgn"], required=True)
    p.add_argument("--method", choices=["de-mc", "ga", "gma"], default="gma")
    p.add_argument("--t-grid", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--mc-samples", type=int, default=200_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="gaps.csv")
    p.set_defaults(func=cmd_gap_curves)

    p = sub.add_parser("simulate", help="BLER simulation of a sampled instance")
    add_code_args(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--sigma-grid", required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--max-iters", type=int, default=20)
    p.add_argument("--batch", type=int, default=200)
    p.add_argument("--compare-ldpc", action="store_true",
                   help="also simulate the derived rate-matched LDPC")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="bler.csv")
    p.set_defaults(func=cmd_simulate)
    return parser


_STOCHASTIC = {("threshold", "de-mc"), ("gap-curves", "de-mc"), ("simulate", None)}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    threads = os.environ.get("GLDPC_THREADS")
    if threads:
        os.environ.setdefault("OMP_NUM_THREADS", threads)
        os.environ.setdefault("NUMBA_NUM_THREADS", threads)

    needs_seed = (args.command, getattr(args, "method", None)) in _STOCHASTIC \
        or (args.command, None) in _STOCHASTIC
    if needs_seed and getattr(args, "seed", None) is None:
        parser.error(f"--seed is required for stochastic command {args.command!r}")
    if args.command in ("threshold",) and args.t is None and not args.t_grid:
        parser.error("one of --t / --t-grid is required")

    if getattr(args, "K", None) is None and args.command != "verify-subcode":
        code = _resolve_subcode(args)
        args.K = code.length
    if getattr(args, "tol", None) is None and hasattr(args, "tol"):
        if getattr(args, "channel", None) == "bec":
            args.tol = 1e-5
        elif getattr(args, "method", None) == "de-mc":
            args.tol = 1e-3
        else:
            args.tol = 1e-4

    try:
        return args.func(args)
    except ValueError as exc:
        if "bracket" in str(exc).lower():
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_NO_CONVERGENCE
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
