"""Quantized density evolution on the BI-AWGN channel.

Variable/check convolutions come from :mod:`gldpc.densities`; the GC-node
output density is estimated by Monte Carlo sampling of the APP message map.
Threshold searches bisect on the noise standard deviation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gc_app
from .channels import BiAwgn, channel_l_density
from .densities import (
    LLRGrid,
    QuantizedLDensity,
    chk_convolve,
    density_from_samples,
    error_probability,
    mix,
    sample_density,
    var_convolve,
)
from .subcodes import EnsembleSpec, LinearSubcode

DEFAULT_TARGET_PE = 1e-6
DEFAULT_MAX_ITERS = 500
MC_SAMPLES_SEARCH = 200_000
MC_SAMPLES_CONFIRM = 1_000_000


@dataclass
class ThresholdResult:
    value: float
    method: str
    tol: float
    max_iters: int
    bracket: tuple[float, float]
    trace: list = field(default_factory=list)
    uncertain: bool = False


@dataclass
class McConfig:
    samples: int = MC_SAMPLES_SEARCH
    seed: int = 0
    block: int = 250_000

    def rng_for(self, iteration: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence((self.seed, iteration)))


def spc_out_density(p: QuantizedLDensity, k: int) -> QuantizedLDensity:
    """(k-1)-fold check convolution power by binary exponentiation."""
    if k < 2:
        raise ValueError("SPC degree must be at least 2")
    e = k - 1
    result = None
    base = p
    while e:
        if e & 1:
            result = base if result is None else chk_convolve(result, base)
        e >>= 1
        if e:
            base = chk_convolve(base, base)
    return result.copy() if result is p else result


def gc_out_density_mc(
    code: LinearSubcode,
    p: QuantizedLDensity,
    samples: int,
    rng: np.random.Generator,
    block: int = 250_000,
) -> QuantizedLDensity:
    """Monte-Carlo density of the position-0 APP output under i.i.d. inputs."""
    if samples < 10_000:
        warnings.warn(f"N={samples} gives a coarse GC output histogram")
    outs = []
    left = samples
    while left > 0:
        b = min(block, left)
        draws = sample_density(p, (b, code.length - 1), rng)
        outs.append(gc_app.app_message_batch(code, draws))
        left -= b
    out = np.concatenate(outs)
    return density_from_samples(p.grid, out)


def de_step_awgn(
    p_l: QuantizedLDensity,
    p0: QuantizedLDensity,
    spec: EnsembleSpec,
    mc: McConfig,
    iteration: int = 0,
) -> QuantizedLDensity:
    """One density-evolution update of the variable-node output density."""
    parts, weights = [], []
    if spec.t < 1.0:
        parts.append(spc_out_density(p_l, spec.K))
        weights.append(1.0 - spec.t)
    if spec.t > 0.0:
        gc = gc_out_density_mc(spec.subcode, p_l, mc.samples, mc.rng_for(iteration))
        parts.append(gc)
        weights.append(spec.t)
    c2v = parts[0] if len(parts) == 1 else mix(parts, weights)
    out = p0
    for _ in range(spec.J - 1):
        out = var_convolve(out, c2v)
    return out


def _pe_converges(
    p0: QuantizedLDensity,
    spec: EnsembleSpec,
    mc: McConfig,
    target_pe: float,
    max_iters: int,
    stall_window: int = 40,
    trace: list | None = None,
) -> bool:
    p = p0
    best = np.inf
    since_improve = 0
    for it in range(max_iters):
        p = de_step_awgn(p, p0, spec, mc, iteration=it)
        pe = error_probability(p)
        if trace is not None:
            trace.append(pe)
        if pe < target_pe:
            return True
        if pe < best * (1.0 - 1e-4):
            best = pe
            since_improve = 0
        else:
            since_improve += 1
            # a clearly stuck fixed point far from the target cannot recover
            if since_improve >= stall_window and pe > 100.0 * target_pe:
                return False
    return False


def awgn_threshold_de(
    spec: EnsembleSpec,
    tol: float = 1e-3,
    max_iters: int = DEFAULT_MAX_ITERS,
    target_pe: float = DEFAULT_TARGET_PE,
    mc: McConfig | None = None,
    sigma_lo: float = 0.3,
    sigma_hi: float = 3.0,
    grid: LLRGrid | None = None,
) -> ThresholdResult:
    """Bisection on sigma for the full quantized-DE success region."""
    grid = grid or LLRGrid()
    mc = mc or McConfig()
    trace = []

    def succeeds(sigma: float) -> bool:
        p0 = channel_l_density(BiAwgn(sigma), grid)
        ok = _pe_converges(p0, spec, mc, target_pe, max_iters)
        trace.append((sigma, ok))
        return ok

    lo, hi = sigma_lo, sigma_hi
    if not succeeds(lo):
        raise ValueError(f"sigma_lo={lo} already fails; widen the bracket")
    if succeeds(hi):
        raise ValueError(f"sigma_hi={hi} already succeeds; widen the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if succeeds(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(
        value=0.5 * (lo + hi),
        method="de-mc" if spec.t > 0 else "de",
        tol=tol,
        max_iters=max_iters,
        bracket=(lo, hi),
        trace=trace,
    )


def ldpc_threshold_de(
    d_v: int,
    check_degrees: dict[int, float],
    tol: float = 1e-3,
    max_iters: int = DEFAULT_MAX_ITERS,
    target_pe: float = DEFAULT_TARGET_PE,
    sigma_lo: float = 0.3,
    sigma_hi: float = 3.0,
    grid: LLRGrid | None = None,
) -> ThresholdResult:
    """Quantized DE threshold for an LDPC ensemble with regular variable degree
    and an edge-perspective check-degree distribution {d_c: rho}."""
    if abs(sum(check_degrees.values()) - 1.0) > 1e-12:
        raise ValueError("check-degree fractions must sum to 1")
    grid = grid or LLRGrid()
    trace = []

    def succeeds(sigma: float) -> bool:
        p0 = channel_l_density(BiAwgn(sigma), grid)
        p = p0
        best = np.inf
        since = 0
        for _ in range(max_iters):
            parts = [spc_out_density(p, d) for d in check_degrees]
            c2v = mix(parts, list(check_degrees.values()))
            p = p0
            for _ in range(d_v - 1):
                p = var_convolve(p, c2v)
            pe = error_probability(p)
            if pe < target_pe:
                trace.append((sigma, True))
                return True
            if pe < best * (1.0 - 1e-4):
                best, since = pe, 0
            else:
                since += 1
                if since >= 40 and pe > 100.0 * target_pe:
                    break
        trace.append((sigma, False))
        return False

    lo, hi = sigma_lo, sigma_hi
    if not succeeds(lo):
        raise ValueError(f"sigma_lo={lo} already fails; widen the bracket")
    if succeeds(hi):
        raise ValueError(f"sigma_hi={hi} already succeeds; widen the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if succeeds(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(
        value=0.5 * (lo + hi),
        method="de",
        tol=tol,
        max_iters=max_iters,
        bracket=(lo, hi),
        trace=trace,
    )
