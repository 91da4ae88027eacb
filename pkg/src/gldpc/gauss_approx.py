"""One-dimensional surrogates for AWGN density evolution.

Tracks message means through the phi function (exact integral or the classic
piecewise fit), single-Gaussian recursions, and the two-component
Gaussian-mixture recursion that keeps separate means for the GC and SPC
branches. Includes the mixture extension to irregular-check LDPC ensembles.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from .subcodes import EnsembleSpec, LinearSubcode

GA_MAX_ITERS = 2000
DEFAULT_SIGMA_TOL = 1e-4

_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(301)


def phi_exact(x: float) -> float:
    """1 - E[tanh(U/2)] with U ~ N(x, 2x), by Gauss-Hermite quadrature."""
    if x < 0:
        raise ValueError("phi domain is x >= 0")
    if x == 0:
        return 1.0
    u = x + 2.0 * np.sqrt(x) * _GH_NODES
    return float(1.0 - (_GH_WEIGHTS * np.tanh(u / 2.0)).sum() / np.sqrt(np.pi))


def phi_fit(x: float) -> float:
    """Piecewise fit: exp branch below 10, asymptotic tail branch above."""
    if x < 0:
        raise ValueError("phi domain is x >= 0")
    if x == 0:
        return 1.0
    if x < 10.0:
        return min(1.0, float(np.exp(-0.4527 * x**0.86 + 0.0218)))
    return float(np.sqrt(np.pi / x) * np.exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x)))


@dataclass(frozen=True)
class PhiEvaluator:
    """phi and its inverse, in 'exact' (quadrature) or 'fit' (piecewise) mode."""

    mode: str = "fit"

    def __post_init__(self):
        if self.mode not in ("exact", "fit"):
            raise ValueError(f"unknown phi mode {self.mode!r}")

    def phi(self, x: float) -> float:
        return phi_exact(x) if self.mode == "exact" else phi_fit(x)

    def phi_inv(self, y: float) -> float:
        """Inverse on (0, 1]; out-of-domain inputs are clamped with a warning."""
        if not 0.0 < y <= 1.0:
            warnings.warn(f"phi_inv argument {y} clamped into (0, 1]")
            if y <= 0.0:
                y = 1e-300
            else:
                return 0.0
        if y >= 1.0:
            return 0.0
        hi = 1.0
        while self.phi(hi) > y:
            hi *= 2.0
            if hi > 1e9:
                return hi
        return float(brentq(lambda x: self.phi(x) - y, 0.0, hi, xtol=1e-10, rtol=1e-14))

    def phi_s_map(self, m_v: float, k: int) -> float:
        """Single-Gaussian SPC mean map phi^-1(1 - [1 - phi(m)]^(k-1))."""
        if m_v == 0.0:
            return 0.0
        return self.phi_inv(1.0 - (1.0 - self.phi(m_v)) ** (k - 1))


def _fit_c1(m: np.ndarray) -> np.ndarray:
    return np.piecewise(
        m,
        [m <= 1.0, (m > 1.0) & (m <= 2.0), (m > 2.0) & (m <= 5.0), m > 5.0],
        [
            lambda x: -0.22 * x**3 + 0.86 * x**2 + 0.022 * x,
            lambda x: 0.20 * x**2 + 0.75 * x - 0.28,
            lambda x: 0.042 * x**2 + 1.4 * x - 1.0,
            lambda x: 1.9 * x - 3.0,
        ],
    )


def _fit_c2(m: np.ndarray) -> np.ndarray:
    return np.piecewise(
        m,
        [m <= 1.0, (m > 1.0) & (m <= 2.0), (m > 2.0) & (m <= 5.0), m > 5.0],
        [
            lambda x: -0.183 * x**4 + 0.375 * x**3 + 0.149 * x**2 - 0.015 * x,
            lambda x: -0.013 * x**4 + 0.013 * x**3 + 0.3634 * x**2 - 0.038,
            lambda x: 0.0024 * x**4 - 0.051 * x**3 + 0.421 * x**2 + 0.064 * x - 0.11,
            lambda x: 0.0025 * x**2 + 1.71 * x - 2.889,
        ],
    )


_GC_FITS = {"C1": _fit_c1, "C2": _fit_c2}


@dataclass
class GcMeanMap:
    """Mean map of a GC node: either a built-in piecewise fit or an
    interpolated Monte-Carlo table (linear extrapolation past the last knot)."""

    code_name: str
    source: str  # "fit" | "mc"
    grid: np.ndarray | None = None
    values: np.ndarray | None = None
    sample_count: int = 0

    def __call__(self, m_v):
        m = np.maximum(np.asarray(m_v, dtype=float), 0.0)
        if self.source == "fit":
            out = _GC_FITS[self.code_name](m)
        else:
            slope = (self.values[-1] - self.values[-2]) / (self.grid[-1] - self.grid[-2])
            out = np.where(
                m <= self.grid[-1],
                np.interp(m, self.grid, self.values),
                self.values[-1] + slope * (m - self.grid[-1]),
            )
        return np.maximum(out, 0.0) if out.ndim else float(max(out, 0.0))

    def to_csv(self, path) -> None:
        if self.source != "mc":
            raise ValueError("only Monte-Carlo tables can be persisted")
        with open(path, "w", newline="\n") as fh:
            fh.write("input_mean,output_mean,sample_count\n")
            for x, y in zip(self.grid, self.values):
                fh.write(f"{float(x)!r},{float(y)!r},{self.sample_count}\n")

    @classmethod
    def from_csv(cls, path, code_name: str = "custom") -> "GcMeanMap":
        data = np.genfromtxt(path, delimiter=",", names=True)
        return cls(
            code_name,
            "mc",
            grid=np.asarray(data["input_mean"], dtype=float),
            values=np.asarray(data["output_mean"], dtype=float),
            sample_count=int(data["sample_count"][0]),
        )


def paper_fit_map(code_name: str) -> GcMeanMap:
    if code_name.upper() not in _GC_FITS:
        raise KeyError(f"no built-in mean-map fit for {code_name!r}")
    return GcMeanMap(code_name.upper(), "fit")


DEFAULT_MEAN_GRID = np.concatenate([np.arange(0.0, 12.01, 0.1), np.arange(14.0, 30.01, 2.0)])


def fit_gc_mean_map(
    code: LinearSubcode,
    mean_grid: np.ndarray | None = None,
    samples: int = 100_000,
    seed: int = 0,
) -> GcMeanMap:
    """Sample-mean table of the APP output for N(m, 2m) inputs over a mean grid."""
    from .gc_app import app_message_batch

    grid = np.asarray(DEFAULT_MEAN_GRID if mean_grid is None else mean_grid, dtype=float)
    rng = np.random.default_rng(seed)
    values = np.empty_like(grid)
    for i, m in enumerate(grid):
        if m == 0.0:
            values[i] = 0.0
            continue
        draws = rng.normal(m, np.sqrt(2.0 * m), size=(samples, code.length - 1))
        values[i] = float(app_message_batch(code, draws).mean())
    # reject decreases beyond MC noise, then enforce monotonicity for interp
    decreases = np.diff(values)
    if (decreases < -0.2).any():
        raise ValueError("GC mean map decreased beyond Monte-Carlo noise")
    values = np.maximum.accumulate(values)
    return GcMeanMap(code.name, "mc", grid=grid, values=values, sample_count=samples)


@dataclass
class GaThresholdResult:
    value: float
    method: str
    tol: float
    max_iters: int
    bracket: tuple[float, float]
    trace: list = field(default_factory=list)


def _bisect_sigma(succeeds, lo: float, hi: float, tol: float, method: str, max_iters: int):
    trace = []
    if not succeeds(lo):
        raise ValueError(f"sigma_lo={lo} already fails; widen the bracket")
    if succeeds(hi):
        raise ValueError(f"sigma_hi={hi} already succeeds; widen the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok = succeeds(mid)
        trace.append((mid, ok))
        if ok:
            lo = mid
        else:
            hi = mid
    return GaThresholdResult(0.5 * (lo + hi), method, tol, max_iters, (lo, hi), trace)


def ga_threshold(
    spec: EnsembleSpec,
    gc_map: GcMeanMap | None = None,
    tol: float = DEFAULT_SIGMA_TOL,
    phi: PhiEvaluator | None = None,
    max_iters: int = GA_MAX_ITERS,
    sigma_lo: float = 0.2,
    sigma_hi: float = 4.0,
    target_pe: float = 1e-6,
) -> GaThresholdResult:
    """Single-Gaussian mean recursion threshold.

    Success means the implied error probability of the variable-message
    Gaussian falls below ``target_pe`` — the same statistic the mixture
    recursion uses, so the two coincide exactly at t in {0, 1}. A pure
    mean-divergence rule understates the threshold for degree-2 variables,
    where the recursion can stall at a finite fixed point whose error
    probability is already negligible.
    """
    phi = phi or PhiEvaluator("fit")
    if gc_map is None and spec.t > 0:
        gc_map = paper_fit_map(spec.subcode.name)

    def succeeds(sigma: float) -> bool:
        m0 = 2.0 / sigma**2
        m = m0
        for _ in range(max_iters):
            if _q(np.sqrt(m / 2.0)) < target_pe:
                return True
            mixed = (1.0 - spec.t) * phi.phi_s_map(m, spec.K) if spec.t < 1 else 0.0
            if spec.t > 0:
                mixed += spec.t * gc_map(m)
            prev, m = m, m0 + (spec.J - 1) * mixed
            if m > 1e7:
                return True
            if abs(m - prev) < 1e-10:  # finite fixed point
                break
        return _q(np.sqrt(m / 2.0)) < target_pe

    return _bisect_sigma(succeeds, sigma_lo, sigma_hi, tol, "ga", max_iters)


@dataclass
class GaussianMixtureState:
    """Component means of the V2C mixture minus the channel mean."""

    m_v0: float
    mean_gc: float
    mean_spc: float
    weight_t: float
    iteration: int = 1


def gma_init(m_v0: float, spec: EnsembleSpec, gc_map, phi: PhiEvaluator) -> GaussianMixtureState:
    """First iteration from the plain channel Gaussian (the mixture is
    degenerate at l = 0, so both components start from single-Gaussian maps)."""
    return GaussianMixtureState(
        m_v0=m_v0,
        mean_gc=gc_map(m_v0) if spec.t > 0 else 0.0,
        mean_spc=phi.phi_s_map(m_v0, spec.K),
        weight_t=spec.t,
    )


def gma_step(
    state: GaussianMixtureState,
    spec: EnsembleSpec,
    gc_map,
    phi: PhiEvaluator,
    compose_gc_inside: bool = True,
) -> GaussianMixtureState:
    """One Gaussian-mixture update of the (GC, SPC) component means.

    ``compose_gc_inside`` keeps the GC mean map composed inside phi for the
    GC-branch factors (the as-printed form); disable for sensitivity checks.
    """
    t, k = spec.t, spec.K
    m0 = state.m_v0
    mg = state.mean_gc + m0
    ms = state.mean_spc + m0

    bracket = 1.0 - t * phi.phi(mg) - (1.0 - t) * phi.phi(ms)
    next_spc = phi.phi_inv(_clamp01(1.0 - _clamp01(bracket) ** (k - 1)))

    if spec.t > 0:
        arg_g = gc_map(mg) if compose_gc_inside else mg
        arg_s = gc_map(ms) if compose_gc_inside else ms
        f1 = (1.0 - phi.phi(arg_g)) ** (1.0 / (k - 1))
        f2 = (1.0 - phi.phi(arg_s)) ** (1.0 / (k - 1))
        next_gc = 0.0
        for alpha in range(k):
            w = comb(k - 1, alpha) * t**alpha * (1.0 - t) ** (k - 1 - alpha)
            if w == 0.0:
                continue
            inner = _clamp01(1.0 - f1**alpha * f2 ** (k - 1 - alpha))
            next_gc += w * phi.phi_inv(inner)
    else:
        next_gc = 0.0

    return GaussianMixtureState(m0, next_gc, next_spc, t, state.iteration + 1)


def _clamp01(y: float) -> float:
    if y < 0.0:
        warnings.warn(f"value {y} clamped to 0")
        return 0.0
    if y > 1.0:
        warnings.warn(f"value {y} clamped to 1")
        return 1.0
    return y


def _q(x: float) -> float:
    return float(norm.sf(x))


def gma_error_probability(state: GaussianMixtureState) -> float:
    """Error probability of the two-component V2C mixture."""
    mg = state.mean_gc + state.m_v0
    ms = state.mean_spc + state.m_v0
    t = state.weight_t
    return t * _q(np.sqrt(mg / 2.0)) + (1.0 - t) * _q(np.sqrt(ms / 2.0))


def gma_threshold(
    spec: EnsembleSpec,
    gc_map: GcMeanMap | None = None,
    tol: float = DEFAULT_SIGMA_TOL,
    phi: PhiEvaluator | None = None,
    max_iters: int = GA_MAX_ITERS,
    target_pe: float = 1e-6,
    sigma_lo: float = 0.2,
    sigma_hi: float = 4.0,
) -> GaThresholdResult:
    """Gaussian-mixture recursion threshold (mixture error-probability criterion)."""
    phi = phi or PhiEvaluator("fit")
    if gc_map is None and spec.t > 0:
        gc_map = paper_fit_map(spec.subcode.name)

    def succeeds(sigma: float) -> bool:
        m0 = 2.0 / sigma**2
        state = gma_init(m0, spec, gc_map or (lambda m: 0.0), phi)
        for _ in range(max_iters):
            if gma_error_probability(state) < target_pe:
                return True
            if state.mean_gc > 1e6 and state.mean_spc > 1e6:
                return True
            nxt = gma_step(state, spec, gc_map, phi)
            if (
                abs(nxt.mean_gc - state.mean_gc) < 1e-10
                and abs(nxt.mean_spc - state.mean_spc) < 1e-10
            ):
                state = nxt
                break  # finite fixed point
            state = nxt
        return gma_error_probability(state) < target_pe

    return _bisect_sigma(succeeds, sigma_lo, sigma_hi, tol, "gma", max_iters)


def gma_ldpc_threshold(
    d_v: int,
    check_degrees: dict[int, float],
    tol: float = DEFAULT_SIGMA_TOL,
    phi: PhiEvaluator | None = None,
    max_iters: int = GA_MAX_ITERS,
    target_pe: float = 1e-6,
    sigma_lo: float = 0.2,
    sigma_hi: float = 4.0,
) -> GaThresholdResult:
    """Gaussian-mixture threshold for LDPC with one component per check degree.

    V2C messages form a mixture over compositions of d_v - 1 component picks;
    each degree-d check enumerates the compositions of its d - 1 inputs.
    """
    phi = phi or PhiEvaluator("fit")
    degrees = sorted(check_degrees)
    rho = np.asarray([check_degrees[d] for d in degrees])
    if abs(rho.sum() - 1.0) > 1e-12:
        raise ValueError("check-degree fractions must sum to 1")

    def v2c_components(mu: np.ndarray, m0: float):
        """Means and weights of the V2C mixture for (d_v - 1) check picks."""
        comps = []
        for counts in _compositions(d_v - 1, len(degrees)):
            w = _multinomial(counts) * float(np.prod(rho**counts))
            if w == 0.0:
                continue
            comps.append((m0 + float(counts @ mu), w))
        return comps

    def succeeds(sigma: float) -> bool:
        m0 = 2.0 / sigma**2
        mu = np.asarray([phi.phi_s_map(m0, d) for d in degrees])
        for _ in range(max_iters):
            comps = v2c_components(mu, m0)
            pe = sum(w * _q(np.sqrt(m / 2.0)) for m, w in comps)
            if pe < target_pe:
                return True
            phis = np.asarray([phi.phi(m) for m, _ in comps])
            weights = np.asarray([w for _, w in comps])
            new_mu = np.empty_like(mu)
            for di, d in enumerate(degrees):
                acc = 0.0
                for counts in _compositions(d - 1, len(comps)):
                    w = _multinomial(counts) * float(np.prod(weights**counts))
                    if w == 0.0:
                        continue
                    prod = float(np.prod((1.0 - phis) ** counts))
                    acc += w * phi.phi_inv(_clamp01(1.0 - prod))
                new_mu[di] = acc
            if np.abs(new_mu - mu).max() < 1e-10:  # finite fixed point
                return False
            mu = new_mu
        return False

    return _bisect_sigma(succeeds, sigma_lo, sigma_hi, tol, "gma", max_iters)


def ga_ldpc_threshold(
    d_v: int,
    check_degrees: dict[int, float],
    tol: float = DEFAULT_SIGMA_TOL,
    phi: PhiEvaluator | None = None,
    max_iters: int = GA_MAX_ITERS,
    sigma_lo: float = 0.2,
    sigma_hi: float = 4.0,
    target_pe: float = 1e-6,
) -> GaThresholdResult:
    """Single-Gaussian threshold for LDPC with rho-averaged check maps."""
    phi = phi or PhiEvaluator("fit")

    def succeeds(sigma: float) -> bool:
        m0 = 2.0 / sigma**2
        m = m0
        for _ in range(max_iters):
            if _q(np.sqrt(m / 2.0)) < target_pe:
                return True
            avg = sum(rho * phi.phi_s_map(m, d) for d, rho in check_degrees.items())
            prev, m = m, m0 + (d_v - 1) * avg
            if m > 1e7:
                return True
            if abs(m - prev) < 1e-10:
                break
        return _q(np.sqrt(m / 2.0)) < target_pe

    return _bisect_sigma(succeeds, sigma_lo, sigma_hi, tol, "ga", max_iters)


def _compositions(total: int, parts: int):
    """All tuples of nonnegative ints of length ``parts`` summing to ``total``."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        counts = []
        for c in cuts + (total + parts - 1,):
            counts.append(c - prev - 1)
            prev = c
        yield np.asarray(counts)


def _multinomial(counts: np.ndarray) -> float:
    return factorial(int(counts.sum())) / float(np.prod([factorial(int(c)) for c in counts]))
