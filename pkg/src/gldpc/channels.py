"""BEC and BI-AWGN channel models: transmission, LLRs, capacities, dB helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ERASURE = np.nan  # erasure marker in BEC observation vectors


@dataclass(frozen=True)
class Bec:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"erasure probability {self.epsilon} outside [0, 1]")


@dataclass(frozen=True)
class BiAwgn:
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(f"noise std-dev {self.sigma} must be positive")

    @property
    def llr_mean(self) -> float:
        """Mean of the channel LLR given +1 transmitted (= 2/sigma^2)."""
        return 2.0 / self.sigma**2


ChannelModel = Bec | BiAwgn


def transmit(model: ChannelModel, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Send a +/-1 vector; BEC erases symbols (NaN marker), AWGN adds noise."""
    x = np.asarray(x, dtype=float)
    if isinstance(model, Bec):
        y = x.copy()
        y[rng.random(x.shape) < model.epsilon] = ERASURE
        return y
    return x + model.sigma * rng.standard_normal(x.shape)


def channel_llr(model: ChannelModel, y: np.ndarray) -> np.ndarray:
    """LLR ln p(y|bit 0)/p(y|bit 1); bit 0 maps to +1 under BPSK."""
    y = np.asarray(y, dtype=float)
    if isinstance(model, Bec):
        out = np.where(y > 0, np.inf, -np.inf)
        out[np.isnan(y)] = 0.0
        return out
    return 2.0 * y / model.sigma**2


_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(201)


def capacity(model: ChannelModel) -> float:
    """Channel capacity in bits per use (BPSK input for the AWGN case)."""
    if isinstance(model, Bec):
        return 1.0 - model.epsilon
    # C = 1 - E[log2(1 + e^-L)], L ~ N(m, 2m) with m = 2/sigma^2
    m = model.llr_mean
    llr = m + 2.0 * np.sqrt(m) * _GH_NODES
    val = np.logaddexp(0.0, -llr) / np.log(2.0)
    return float(1.0 - (_GH_WEIGHTS * val).sum() / np.sqrt(np.pi))


def channel_l_density(model: ChannelModel, grid) -> "QuantizedLDensity":
    """Initial L-density of channel LLRs conditioned on +1 transmitted."""
    from .densities import QuantizedLDensity, gaussian_density
    import numpy as _np

    if isinstance(model, Bec):
        pmf = _np.zeros(grid.size)
        pmf[grid.n_half] = model.epsilon
        return QuantizedLDensity(grid, pmf, pos_sat=1.0 - model.epsilon)
    m = model.llr_mean
    return gaussian_density(grid, m, 2.0 * m)


def snr_db(sigma: float, rate: float | None = None) -> float:
    """10*log10(1/sigma^2); pass a rate for the Eb/N0 variant."""
    if rate is None:
        return -20.0 * np.log10(sigma)
    return float(10.0 * np.log10(1.0 / (2.0 * rate * sigma**2)))


def sigma_from_snr_db(snr: float, rate: float | None = None) -> float:
    if rate is None:
        return float(10.0 ** (-snr / 20.0))
    return float(np.sqrt(1.0 / (2.0 * rate * 10.0 ** (snr / 10.0))))
