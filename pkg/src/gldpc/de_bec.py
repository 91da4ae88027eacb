"""Exact density evolution on the binary erasure channel.

The GC-node erasure behaviour is summarized by a polynomial derived by brute
force over all erasure patterns; the scalar recursion then gives thresholds
and gap-to-capacity sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from numba import njit

from .gc_app import app_erasure_output
from .subcodes import EnsembleSpec, LinearSubcode

SUCCESS_EPS = 1e-10
# near the threshold the contraction factor approaches 1, so convergence to
# SUCCESS_EPS can take ~1e5 iterations; the jitted recursion keeps this cheap
DEFAULT_MAX_ITERS = 1_000_000
DEFAULT_TOL = 1e-5


@dataclass
class ErasurePolynomial:
    """Known-output counts per erasure weight among the other K-1 positions.

    coeffs[w] for w = 0..K-1; e(eps) = 1 - sum_w coeffs[w] * eps^w * (1-eps)^(K-1-w).
    """

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)

    @property
    def k(self) -> int:
        return self.coeffs.size

    def __call__(self, eps):
        eps = np.asarray(eps, dtype=float)
        w = np.arange(self.coeffs.size)
        known = (self.coeffs * eps[..., None] ** w * (1.0 - eps[..., None]) ** (w[::-1])).sum(
            axis=-1
        )
        return 1.0 - known


def spc_erasure_poly(k: int) -> ErasurePolynomial:
    """SPC node: output known iff nothing else is erased."""
    coeffs = np.zeros(k, dtype=np.int64)
    coeffs[0] = 1
    return ErasurePolynomial(coeffs)


def gc_erasure_poly(code: LinearSubcode, target: int = 0) -> ErasurePolynomial:
    """Tally Known outputs over all 2^(K-1) erasure patterns of the other positions."""
    k = code.length
    if k > 20:
        raise ValueError(f"K={k} too large for 2^(K-1) pattern enumeration")
    others = [j for j in range(k) if j != target]
    coeffs = np.zeros(k, dtype=np.int64)
    for pattern in range(1 << (k - 1)):
        erased = {others[b] for b in range(k - 1) if (pattern >> b) & 1}
        if not app_erasure_output(code, target, erased):
            coeffs[len(erased)] += 1
    for w, c in enumerate(coeffs):
        assert 0 <= c <= comb(k - 1, w)
    return ErasurePolynomial(coeffs)


@dataclass
class BecDeState:
    epsilon0: float
    epsilon_l: float
    iteration: int = 0


def bec_de_step(state: BecDeState, spec: EnsembleSpec, gc_poly: ErasurePolynomial) -> BecDeState:
    """eps_{l+1} = eps0 * (t*e_C(eps_l) + (1-t)*e_S(eps_l))^(J-1)."""
    e_gc = float(gc_poly(state.epsilon_l)) if spec.t > 0 else 0.0
    e_spc = 1.0 - (1.0 - state.epsilon_l) ** (spec.K - 1)
    mixture = spec.t * e_gc + (1.0 - spec.t) * e_spc
    nxt = state.epsilon0 * mixture ** (spec.J - 1)
    return BecDeState(state.epsilon0, nxt, state.iteration + 1)


@njit(cache=True)
def _iterate_bec(eps0, t, j, k, coeffs, max_iters, success_eps):  # pragma: no cover
    eps = eps0
    for _ in range(max_iters):
        e_gc = 0.0
        if t > 0.0:
            known = 0.0
            for w in range(coeffs.size):
                known += coeffs[w] * eps**w * (1.0 - eps) ** (coeffs.size - 1 - w)
            e_gc = 1.0 - known
        e_spc = 1.0 - (1.0 - eps) ** (k - 1)
        nxt = eps0 * (t * e_gc + (1.0 - t) * e_spc) ** (j - 1)
        if nxt < success_eps:
            return True
        if nxt > eps - 1e-16:  # stuck at a positive fixed point
            return False
        eps = nxt
    return False


def _bec_converges(
    eps0: float, spec: EnsembleSpec, gc_poly: ErasurePolynomial | None, max_iters: int
) -> bool:
    coeffs = (
        gc_poly.coeffs.astype(np.float64) if gc_poly is not None else np.zeros(1)
    )
    return bool(
        _iterate_bec(eps0, spec.t, spec.J, spec.K, coeffs, max_iters, SUCCESS_EPS)
    )


@dataclass
class BecThresholdResult:
    value: float
    tol: float
    max_iters: int
    bracket: tuple[float, float]
    trace: list = field(default_factory=list)


def bec_threshold(
    spec: EnsembleSpec,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    gc_poly: ErasurePolynomial | None = None,
) -> BecThresholdResult:
    """Bisection over eps0 in [0, 1] for the DE success region boundary."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if gc_poly is None and spec.t > 0:
        gc_poly = gc_erasure_poly(spec.subcode)
    lo, hi = 0.0, 1.0
    trace = []
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok = _bec_converges(mid, spec, gc_poly, max_iters)
        trace.append((mid, ok))
        if ok:
            lo = mid
        else:
            hi = mid
    return BecThresholdResult(0.5 * (lo + hi), tol, max_iters, (lo, hi), trace)


def sweep_t_bec(
    subcode: LinearSubcode,
    j: int,
    k: int,
    t_grid: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> list[dict]:
    """Per t: threshold, design rate, BEC capacity at threshold, and gap."""
    gc_poly = gc_erasure_poly(subcode)
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        spec = EnsembleSpec(subcode, j, k, float(t))
        thr = bec_threshold(spec, tol=tol, max_iters=max_iters, gc_poly=gc_poly)
        rate = spec.design_rate()
        cap = 1.0 - thr.value
        rows.append(
            {
                "t": float(t),
                "epsilon_star": thr.value,
                "design_rate": rate,
                "capacity": cap,
                "gap": cap - rate,
            }
        )
    return rows
