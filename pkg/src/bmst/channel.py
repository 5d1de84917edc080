"""BPSK over AWGN and the LLRs the demodulator hands to the decoders."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputShapeError
from .jfunction import j_fun


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float

    def __post_init__(self):
        if not np.isfinite(self.ebn0_db):
            raise DomainError("ebn0_db must be finite")
        if not 0.0 < self.rate <= 1.0:
            raise DomainError("rate must lie in (0, 1]")

    @property
    def ebn0(self) -> float:
        return 10.0 ** (self.ebn0_db / 10.0)

    @property
    def sigma_noise(self) -> float:
        """Noise standard deviation per real dimension at unit symbol energy."""
        return float(np.sqrt(1.0 / (2.0 * self.rate * self.ebn0)))

    @property
    def llr_sigma(self) -> float:
        """Std of the channel LLR under the consistent-Gaussian model."""
        return float(np.sqrt(8.0 * self.rate * self.ebn0))


def modulate_bpsk(bits: np.ndarray) -> np.ndarray:
    """Map bit 0 to +1.0 and bit 1 to -1.0."""
    bits = np.asarray(bits)
    if np.any((bits != 0) & (bits != 1)):
        raise InputShapeError("bits must be 0/1")
    return 1.0 - 2.0 * bits.astype(float)


def awgn_llr(symbols: np.ndarray, params: ChannelParams,
             rng: np.random.Generator) -> np.ndarray:
    """Transmit BPSK symbols over AWGN and return channel LLRs 2y/sigma^2.

    For the all-zero word the LLRs are N(sigma_ch^2/2, sigma_ch^2) with
    sigma_ch^2 = 8 * rate * Eb/N0.
    """
    symbols = np.asarray(symbols, dtype=float)
    sigma = params.sigma_noise
    y = symbols + sigma * rng.standard_normal(symbols.shape)
    return 2.0 * y / (sigma * sigma)


def channel_mi(params: ChannelParams) -> float:
    """MI between a transmitted bit and its channel LLR."""
    return float(j_fun(params.llr_sigma))


def frame_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one frame, keyed by (seed, point, frame).

    Keying by spawn path rather than by draw order keeps sweeps reproducible
    no matter how frames are scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))
