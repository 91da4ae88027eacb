"""Acceptance suite: one test per acceptance criterion, one PASS line each.

Criteria whose published reference values proved irreproducible are split out
as strict xfail tests so the discrepancy stays visible without being gamed;
the analysis lives in the project notes, not in this repository.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS lines and
timings. The full suite (Monte-Carlo DE thresholds, BLER simulation) takes a
few hours; everything else finishes in minutes.
"""

import time

import numpy as np
import pytest
from scipy.stats import norm

from gldpc.channels import BiAwgn, channel_l_density
from gldpc.de_awgn import McConfig, awgn_threshold_de, de_step_awgn, ldpc_threshold_de
from gldpc.de_bec import bec_threshold, gc_erasure_poly, sweep_t_bec
from gldpc.densities import LLRGrid
from gldpc.ensemble_graph import clean_graph, derive_comparison_ldpc, sample_graph
from gldpc.gauss_approx import (
    ga_ldpc_threshold,
    ga_threshold,
    gma_ldpc_threshold,
    gma_threshold,
)
from gldpc.gc_app import app_message, app_message_via_permutation
from gldpc.mp_decoder import bler_sim
from gldpc.subcodes import EnsembleSpec, builtin_c1, builtin_c2, spc_code

C1 = builtin_c1()
C2 = builtin_c2()

# Reference threshold tables (sigma): per t, (monte, ga, gma)
TABLE_I = {
    "C1": {0.0: (0.5754, 0.5857, 0.5857), 0.1: (0.5957, 0.6885, 0.6060),
           0.3: (0.6539, 0.9461, 0.6641), 0.5: (0.7665, 1.3487, 0.7732),
           0.7: (1.1574, 1.8537, 1.1382), 0.9: (2.1478, 2.2346, 2.1605),
           1.0: (2.3550, 2.4046, 2.4060)},
    "C2": {0.0: (0.5464, 0.5556, 0.5556), 0.1: (0.5636, 0.6377, 0.5729),
           0.3: (0.6116, 0.8444, 0.6209), 0.5: (0.7006, 1.1076, 0.7047),
           0.7: (0.9627, 1.3142, 0.9151), 0.9: (1.5101, 1.4592, 1.4959),
           1.0: (1.6106, 1.5497, 1.6448)},
}
# Per rho3: (de, ga, gma) for d_v=3, check degrees {3: rho3, 5: 1-rho3}
TABLE_II = {0.0: (1.0059, 0.9983, 0.9983), 0.5: (1.3926, 1.2570, 1.3691),
            0.9: (1.9551, 1.4870, 1.9324)}

GA_IRREPRODUCIBLE = {("C2", 0.7), ("C2", 0.9), ("C2", 1.0)}


def spec_for(code, t):
    return EnsembleSpec(code, 2, code.length, float(t))


def report(line):
    print(f"\n{line}")


# --------------------------------------------------------------------------
# 1. Erasure-polynomial exactness


def test_criterion_01_erasure_polynomial_exact():
    start = time.perf_counter()
    c1 = gc_erasure_poly(C1).coeffs
    c2 = gc_erasure_poly(C2).coeffs
    # Known-output counts by erasure weight (ascending); the published
    # coefficient lists read the same integers in descending-weight order
    assert c1.tolist() == [1, 5, 8, 2, 0, 0]
    assert c2.tolist() == [1, 6, 12, 4, 0, 0, 0]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(f"PASS criterion 1: erasure polynomials exact "
           f"(C1 {c1.tolist()}, C2 {c2.tolist()}, {elapsed:.2f} s)")


# --------------------------------------------------------------------------
# 2. BEC base threshold


def test_criterion_02_bec_base_threshold():
    spec = spec_for(spc_code(6), 0.0)
    bec_threshold(spec, tol=0.05, max_iters=100)  # JIT warm-up
    start = time.perf_counter()
    res = bec_threshold(spec, tol=1e-5)
    elapsed = time.perf_counter() - start
    # analytic stability condition for (J=2, K=6): 5 * eps = 1
    assert res.value == pytest.approx(0.2, abs=1e-4)
    assert elapsed < 1.0
    report(f"PASS criterion 2: BEC (J=2,K=6,t=0) threshold {res.value:.6f} "
           f"= 0.2000 +/- 1e-4 in {elapsed:.2f} s")


# --------------------------------------------------------------------------
# 3. BEC monotonicity / gap crossover


def test_criterion_03_bec_monotonicity_and_crossover():
    start = time.perf_counter()
    t_grid = np.round(np.arange(0.0, 1.0001, 0.05), 10)
    msgs = []
    for code in (C1, C2):
        rows = sweep_t_bec(code, 2, code.length, t_grid)
        eps = np.array([r["epsilon_star"] for r in rows])
        gaps = np.array([r["gap"] for r in rows])
        assert np.all(np.diff(eps) > 0), f"{code.name}: eps*(t) not increasing"
        below = t_grid[gaps < gaps[0]]
        assert below.size and below[0] <= 0.75 + 1e-9, (
            f"{code.name}: gap does not drop below the t=0 gap by t=0.75")
        assert np.all(gaps[t_grid >= 0.75] < gaps[0])
        msgs.append(f"{code.name} crossover at t={below[0]:.2f}")
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report(f"PASS criterion 3: eps*(t) strictly increasing; {'; '.join(msgs)} "
           f"({elapsed:.1f} s)")


# --------------------------------------------------------------------------
# 4. Table I, GA column


def _ga_table_entries(entries):
    diffs = {}
    for name, code in (("C1", C1), ("C2", C2)):
        for t, (_, ga_ref, _) in TABLE_I[name].items():
            if (name, t) not in entries:
                continue
            val = ga_threshold(spec_for(code, t), tol=1e-4).value
            diffs[(name, t)] = val - ga_ref
    return diffs


def test_criterion_04_table1_ga():
    start = time.perf_counter()
    entries = {(n, t) for n in TABLE_I for t in TABLE_I[n]} - GA_IRREPRODUCIBLE
    diffs = _ga_table_entries(entries)
    worst = max(diffs.items(), key=lambda kv: abs(kv[1]))
    for key, d in diffs.items():
        assert abs(d) <= 0.02, f"sigma_GA off by {d:+.4f} at {key}"
    elapsed = time.perf_counter() - start
    report(f"PASS criterion 4: sigma_GA within +/-0.02 at {len(diffs)}/14 "
           f"entries (worst {worst[1]:+.4f} at {worst[0]}; 3 entries tracked "
           f"separately as irreproducible) ({elapsed:.0f} s)")


@pytest.mark.xfail(
    strict=True,
    reason="published GA values for C2 at t>=0.7 are not reproducible: at t=1 "
    "the GA and GMA recursions are identical yet the published GA (1.5497) "
    "disagrees with the published GMA (1.6448); our GA matches the latter",
)
def test_criterion_04_table1_ga_c2_high_t():
    diffs = _ga_table_entries(GA_IRREPRODUCIBLE)
    report("criterion 4 (irreproducible entries): "
           + ", ".join(f"{k}: {d:+.4f}" for k, d in sorted(diffs.items())))
    for key, d in diffs.items():
        assert abs(d) <= 0.02, f"sigma_GA off by {d:+.4f} at {key}"


# --------------------------------------------------------------------------
# 5. Table I, GMA column


def test_criterion_05_table1_gma():
    start = time.perf_counter()
    worst = (None, 0.0)
    for name, code in (("C1", C1), ("C2", C2)):
        for t, (_, _, gma_ref) in TABLE_I[name].items():
            val = gma_threshold(spec_for(code, t), tol=1e-4).value
            tol = 0.05 if t >= 0.9 else 0.03
            d = val - gma_ref
            if abs(d) > abs(worst[1]):
                worst = ((name, t), d)
            assert abs(d) <= tol, f"sigma_GMA off by {d:+.4f} at ({name}, {t})"
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    report(f"PASS criterion 5: sigma_GMA within tolerance at all 14 entries "
           f"(worst {worst[1]:+.4f} at {worst[0]}) ({elapsed:.0f} s)")


# --------------------------------------------------------------------------
# 6. Table I, Monte (quantized DE) column


# narrow brackets seeded from wide-bracket runs (see project notes); the
# bisection re-validates both endpoints, so drift fails loudly
MONTE_BRACKETS = {
    ("C1", 0.0): (0.545, 0.575), ("C2", 0.0): (0.517, 0.545),
    ("C1", 0.5): (0.728, 0.758), ("C2", 0.5): (0.668, 0.698),
    ("C1", 1.0): (2.310, 2.370), ("C2", 1.0): (1.575, 1.625),
}


@pytest.mark.slow
def test_criterion_06_table1_monte_de():
    start = time.perf_counter()
    results = {}
    for name, code in (("C1", C1), ("C2", C2)):
        for t in (0.0, 0.5, 1.0):
            lo, hi = MONTE_BRACKETS[(name, t)]
            res = awgn_threshold_de(
                spec_for(code, t), tol=6e-3,
                mc=McConfig(samples=200_000, seed=77),
                sigma_lo=lo, sigma_hi=hi)
            ref = TABLE_I[name][t][0]
            results[(name, t)] = res.value - ref
            assert abs(res.value - ref) <= 0.03, (
                f"sigma_Monte off by {res.value - ref:+.4f} at ({name}, {t})")
    elapsed = time.perf_counter() - start
    report("PASS criterion 6: quantized-DE thresholds within +/-0.03 at "
           + ", ".join(f"{k}={d:+.3f}" for k, d in results.items())
           + f" ({elapsed / 60:.0f} min)")


# --------------------------------------------------------------------------
# 7. Table II (irregular LDPC)


def _degrees(rho3):
    degs = {5: 1.0 - rho3}
    if rho3 > 0:
        degs[3] = rho3
    return degs


@pytest.mark.slow
def test_criterion_07_table2_de_and_gma():
    start = time.perf_counter()
    lines = []
    for rho3, (de_ref, _, gma_ref) in TABLE_II.items():
        de = ldpc_threshold_de(3, _degrees(rho3), tol=2e-3,
                               sigma_lo=0.8, sigma_hi=2.3).value
        gma = gma_ldpc_threshold(3, _degrees(rho3), tol=1e-4,
                                 sigma_lo=0.5, sigma_hi=3.0).value
        assert abs(de - de_ref) <= 0.03, f"sigma_DE off at rho3={rho3}"
        assert abs(gma - gma_ref) <= 0.03, f"sigma_GMA off at rho3={rho3}"
        lines.append(f"rho3={rho3}: DE {de - de_ref:+.4f}, GMA {gma - gma_ref:+.4f}")
    elapsed = time.perf_counter() - start
    report(f"PASS criterion 7 (DE, GMA): {'; '.join(lines)} ({elapsed / 60:.0f} min)")


def test_criterion_07_table2_ga_rho0():
    ga = ga_ldpc_threshold(3, _degrees(0.0), tol=1e-4,
                           sigma_lo=0.5, sigma_hi=3.0).value
    d = ga - TABLE_II[0.0][1]
    assert abs(d) <= 0.03
    report(f"PASS criterion 7 (GA, rho3=0): diff {d:+.4f}")


@pytest.mark.xfail(
    strict=True,
    reason="published single-Gaussian values for mixed check degrees are not "
    "reproducible under any averaging scheme tried; our GA tracks quantized "
    "DE far more closely than the published column",
)
def test_criterion_07_table2_ga_mixed_degrees():
    diffs = {}
    for rho3 in (0.5, 0.9):
        ga = ga_ldpc_threshold(3, _degrees(rho3), tol=1e-4,
                               sigma_lo=0.5, sigma_hi=3.0).value
        diffs[rho3] = ga - TABLE_II[rho3][1]
    report("criterion 7 (irreproducible GA entries): "
           + ", ".join(f"rho3={k}: {d:+.4f}" for k, d in diffs.items()))
    for rho3, d in diffs.items():
        assert abs(d) <= 0.03, f"sigma_GA off by {d:+.4f} at rho3={rho3}"


# --------------------------------------------------------------------------
# 8. APP correctness properties


def test_criterion_08_app_properties():
    rng = np.random.default_rng(2024)
    for code in (C1, C2):
        k = code.length
        for _ in range(1000):
            l = rng.normal(0.0, 4.0, k - 1)
            i = int(rng.integers(k))
            direct = app_message(code, i, l)
            assert abs(app_message_via_permutation(code, i, l) - direct) <= 1e-9
            # symmetry: a codeword sign vector factors out of the message map
            cw = code.codewords[rng.integers(len(code.codewords))]
            b = 1.0 - 2.0 * cw
            others = np.delete(np.arange(k), i)
            flipped = app_message(code, i, b[others] * l)
            assert abs(flipped - b[i] * direct) <= 1e-9
    spc = spc_code(6)
    for _ in range(1000):
        l = rng.normal(0.0, 3.0, 5)
        tanh_rule = 2.0 * np.arctanh(np.prod(np.tanh(l / 2.0)))
        assert abs(app_message(spc, 0, l) - tanh_rule) <= 1e-9
    report("PASS criterion 8: permutation path, symmetry condition, and SPC "
           "tanh rule all within 1e-9 over 1000 random vectors per check")


# --------------------------------------------------------------------------
# 9. Symmetry preservation through DE


def test_criterion_09_de_symmetry_preservation():
    start = time.perf_counter()
    grid = LLRGrid()
    cases = {  # sigma just below the measured threshold
        ("C1", 0.0): 0.54, ("C1", 0.5): 0.73, ("C1", 1.0): 2.30,
        ("C2", 0.0): 0.51, ("C2", 0.5): 0.67, ("C2", 1.0): 1.57,
    }
    lines = []
    for (name, t), sigma in cases.items():
        code = C1 if name == "C1" else C2
        n_mc = 100_000 if t > 0 else 0
        mc = McConfig(samples=max(n_mc, 1), seed=5)
        spec = spec_for(code, t)
        p0 = channel_l_density(BiAwgn(sigma), grid)
        p = p0
        worst = 0.0
        for it in range(20):
            p = de_step_awgn(p, p0, spec, mc, iteration=it)
            worst = max(worst, p.symmetry_residual())
        mc_sigma = np.sqrt(grid.size / n_mc) if n_mc else 0.0
        bound = 0.01 + 3.0 * mc_sigma
        assert worst < bound, (
            f"{name} t={t}: residual {worst:.4f} >= bound {bound:.4f}")
        lines.append(f"{name}/t={t}: {worst:.3f} < {bound:.3f}")
    elapsed = time.perf_counter() - start
    report(f"PASS criterion 9: DE symmetry residuals within bounds "
           f"({'; '.join(lines)}) ({elapsed / 60:.0f} min)")


# --------------------------------------------------------------------------
# 10. Near-Gaussian GC output density


def test_criterion_10_gc_output_near_gaussian():
    from gldpc.gc_app import app_message_batch

    rng = np.random.default_rng(42)
    lines = []
    for code in (C1, C2):
        draws = rng.normal(3.0, np.sqrt(6.0), size=(1_000_000, code.length - 1))
        out = np.sort(app_message_batch(code, draws))
        cdf = norm.cdf(out, out.mean(), out.std())
        emp = np.arange(1, out.size + 1) / out.size
        ks = float(np.max(np.maximum(np.abs(cdf - emp),
                                     np.abs(cdf - (emp - 1.0 / out.size)))))
        assert ks < 0.02, f"{code.name}: KS distance {ks:.4f} >= 0.02"
        lines.append(f"{code.name}: KS {ks:.4f}")
    report(f"PASS criterion 10: GC output near-Gaussian ({'; '.join(lines)})")


# --------------------------------------------------------------------------
# 11. BLER gains at desk scale


def _bler_crossing(records, target):
    pts = sorted((r.snr_db, r.bler, r.block_errors) for r in records if r.bler > 0)
    for (s1, b1, e1), (s2, b2, e2) in zip(pts, pts[1:]):
        if (b1 - target) * (b2 - target) <= 0 and b1 != b2:
            assert min(e1, e2) >= 200, "crossing bracketed by under-sampled points"
            w = (np.log(target) - np.log(b1)) / (np.log(b2) - np.log(b1))
            return s1 + w * (s2 - s1)
    raise AssertionError(f"BLER curve does not cross {target}")


@pytest.mark.slow
def test_criterion_11_bler_desk_scale():
    start = time.perf_counter()
    lines = []
    for code, t, n, iters, sigmas, trials, min_gain in [
        (C1, 0.8, 600, 20, [1.1, 1.2, 1.3, 1.4, 1.5], 120_000, 0.7),
        (C2, 0.85, 700, 50, [1.10, 1.15, 1.25], 350_000, 0.2),
    ]:
        spec = spec_for(code, t)
        graph = clean_graph(sample_graph(spec, n, seed=1), seed=2)
        ldpc = derive_comparison_ldpc(graph, seed=3)
        kwargs = dict(trials=trials, max_iters=iters, seed=10,
                      max_block_errors=200)
        g_recs = bler_sim(graph, sigmas, **kwargs)
        l_recs = bler_sim(ldpc, sigmas, **kwargs)
        g_cross = _bler_crossing(g_recs, 1e-2)
        l_cross = _bler_crossing(l_recs, 1e-2)
        gain = l_cross - g_cross
        assert gain >= min_gain, (
            f"{code.name} t={t}: gain {gain:.2f} dB < {min_gain} dB")
        lines.append(f"{code.name}/t={t}: {gain:.2f} dB (need {min_gain})")
    elapsed = time.perf_counter() - start
    assert elapsed < 7200.0
    report(f"PASS criterion 11: GLDPC beats rate-matched LDPC at BLER 1e-2 "
           f"({'; '.join(lines)}) ({elapsed / 60:.0f} min)")


# --------------------------------------------------------------------------
# 12. Byte-level determinism


def test_criterion_12_determinism(tmp_path):
    from gldpc.cli import main

    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--t", "0.5", "-n", "120", "--sigma-grid", "0.9,1.1",
            "--trials", "300", "--max-iters", "10", "--seed", "5"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert (tmp_path / "a.csv.json").exists()

    out3, out4 = tmp_path / "c.csv", tmp_path / "d.csv"
    args = ["threshold", "--channel", "awgn", "--method", "gma",
            "--t-grid", "0,0.5", "--tol", "1e-3"]
    assert main(args + ["--out", str(out3)]) == 0
    assert main(args + ["--out", str(out4)]) == 0
    assert out3.read_bytes() == out4.read_bytes()
    report("PASS criterion 12: stochastic pipelines byte-reproducible "
           "(simulate and threshold CSVs identical across runs)")
