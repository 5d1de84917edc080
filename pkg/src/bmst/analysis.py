"""Performance analysis: basic-code error curves, the genie-aided lower bound,
memory design from a target BER, Shannon limits, and latency/complexity
accounting for the equal-latency comparison.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc

from .errors import DesignError, DomainError, ExtrapolationError, InputShapeError
from .llr import boxplus_exclusive

BMST_FAMILY = "bmst"
SCLDPC_FAMILY = "sc-ldpc"


def q_func(x):
    """Gaussian tail probability."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


# ---------------------------------------------------------------------------
# Exact Gaussian-LLR mutual information (quadrature; the oracle the J
# approximation is validated against) and the binary-input Shannon limit.

_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(128)


def gaussian_llr_mi(sigma: float) -> float:
    """MI between a bit and a consistent Gaussian LLR N(sigma^2/2, sigma^2).

    Evaluated by Gauss-Hermite quadrature of 1 - E[log2(1 + exp(-L))].
    """
    if not np.isfinite(sigma) or sigma < 0.0:
        raise DomainError("sigma must be finite and non-negative")
    if sigma == 0.0:
        return 0.0
    x = sigma * sigma / 2.0 + sigma * np.sqrt(2.0) * _GH_NODES
    integrand = np.logaddexp(0.0, -x) / np.log(2.0)
    return float(1.0 - np.dot(_GH_WEIGHTS, integrand) / np.sqrt(np.pi))


def shannon_limit(rate: float) -> float:
    """Smallest Eb/N0 (dB) at which a binary-input AWGN channel supports `rate`.

    The channel LLR std at Eb/N0 = g is sqrt(8 * rate * g); the limit solves
    capacity(g) = rate.
    """
    if not 0.0 < rate < 1.0:
        raise DomainError("rate must lie in (0, 1)")

    def gap(log10_g):
        g = 10.0 ** log10_g
        return gaussian_llr_mi(np.sqrt(8.0 * rate * g)) - rate

    lo, hi = -3.0, 3.0
    root = brentq(gap, lo, hi, xtol=1e-12)
    return float(10.0 * root)


# ---------------------------------------------------------------------------
# Basic-code performance curves f_Basic(gamma) -> BER.


def basic_ber_repetition(ebn0_db) -> np.ndarray:
    """Exact ML bit error rate of a repetition [N, 1] code over BPSK/AWGN.

    Combining N copies restores the full per-info-bit energy, so the curve
    Q(sqrt(2 * Eb/N0)) does not depend on N.
    """
    ebn0 = 10.0 ** (np.asarray(ebn0_db, dtype=float) / 10.0)
    out = q_func(np.sqrt(2.0 * ebn0))
    return out if out.ndim else float(out)


class RepetitionPerformanceCurve:
    """Analytic f_Basic for repetition codes."""

    def __init__(self, N: int):
        self.N = N
        self.rate = 1.0 / N

    def ber_at(self, ebn0_db: float) -> float:
        return float(basic_ber_repetition(ebn0_db))

    def ebn0_for(self, ber: float) -> float:
        if not 0.0 < ber < 0.5:
            raise DomainError("target ber must lie in (0, 0.5)")
        from scipy.special import ndtri
        x = -ndtri(ber)
        return float(10.0 * np.log10(x * x / 2.0))


class TabulatedPerformanceCurve:
    """f_Basic from simulation: a monotone table on an Eb/N0 grid.

    Interpolation is linear in (dB, log10 BER); queries outside the grid
    raise rather than extrapolate.
    """

    def __init__(self, ebn0_db: np.ndarray, ber: np.ndarray, rate: float):
        ebn0_db = np.asarray(ebn0_db, dtype=float)
        ber = np.asarray(ber, dtype=float)
        if ebn0_db.ndim != 1 or ebn0_db.shape != ber.shape or ebn0_db.size < 2:
            raise InputShapeError("need matching 1-d grids with at least 2 points")
        if np.any(np.diff(ebn0_db) <= 0):
            raise InputShapeError("ebn0_db grid must be strictly increasing")
        if np.any(ber <= 0.0):
            raise DomainError("tabulated ber values must be positive")
        self.ebn0_db = ebn0_db
        self.ber = np.minimum.accumulate(ber)  # enforce a monotone curve
        self.rate = rate
        self._log_ber = np.log10(self.ber)

    def ber_at(self, ebn0_db: float) -> float:
        grid = self.ebn0_db
        if ebn0_db < grid[0] or ebn0_db > grid[-1]:
            raise ExtrapolationError(
                f"{ebn0_db:.3f} dB outside tabulated range [{grid[0]:.3f}, {grid[-1]:.3f}]")
        return float(10.0 ** np.interp(ebn0_db, grid, self._log_ber))

    def ebn0_for(self, ber: float) -> float:
        lb = np.log10(ber)
        if lb > self._log_ber[0] or lb < self._log_ber[-1]:
            raise ExtrapolationError(
                f"ber {ber:.3e} outside tabulated range "
                f"[{self.ber[-1]:.3e}, {self.ber[0]:.3e}]")
        # log-BER decreases along the grid; interpolate on the flipped table.
        return float(np.interp(lb, self._log_ber[::-1], self.ebn0_db[::-1]))

    def to_rows(self):
        return [(float(g), float(b)) for g, b in zip(self.ebn0_db, self.ber)]


def simulate_spc_curve(N: int, p_floor: float = 5e-7, seed: int = 12345,
                       start_db: float = 0.0, step_db: float = 0.1,
                       min_errors: int = 100) -> TabulatedPerformanceCurve:
    """Monte Carlo f_Basic for a single-parity-check [N, N-1] code.

    Exact APP bit decoding of each block; the grid grows in `step_db`
    increments until the measured BER falls below `p_floor`.  Each point
    stops at `min_errors` bit errors or at a bit budget of
    `min_errors / p_floor` bits.
    """
    if N < 3:
        raise DomainError("single-parity-check needs N >= 3")
    rate = (N - 1) / N
    rng = np.random.default_rng(seed)
    bit_cap = int(min_errors / p_floor)
    chunk_blocks = 1 << 17
    grid, bers = [], []
    db = start_db
    while True:
        ebn0 = 10.0 ** (db / 10.0)
        sigma = np.sqrt(1.0 / (2.0 * rate * ebn0))
        errors = 0
        bits = 0
        while errors < min_errors and bits < bit_cap:
            llr = 2.0 / sigma ** 2 * (1.0 + sigma * rng.standard_normal((N, chunk_blocks)))
            mu = np.clip(llr, -38.0, 38.0)  # keep the box-plus products exact
            app = mu + boxplus_exclusive(mu)
            errors += int(np.count_nonzero(app[:-1] < 0.0))
            bits += (N - 1) * chunk_blocks
        ber = max(errors, 1) / bits
        grid.append(db)
        bers.append(ber)
        if ber < p_floor and len(grid) >= 2:
            break
        if db > start_db + 30.0:
            raise DesignError("SPC curve failed to reach the requested floor")
        db = round(db + step_db, 10)
    return TabulatedPerformanceCurve(np.array(grid), np.array(bers), rate)


# ---------------------------------------------------------------------------
# Genie-aided lower bound and memory design.


def genie_shift_db(m: int, L: int) -> float:
    """SNR shift of the superposition lower bound: 10log10(m+1) - 10log10(1+m/L)."""
    if m < 0 or L < 1:
        raise DomainError("need m >= 0 and L >= 1")
    return float(10.0 * np.log10(m + 1) - 10.0 * np.log10(1.0 + m / L))


def genie_lower_bound(curve, m: int, L: int, ebn0_db: float) -> float:
    """Lower bound on the chain BER from the genie-aided argument."""
    return curve.ber_at(ebn0_db + genie_shift_db(m, L))


def design_memory(gamma_target_db: float, gamma_lim_db: float) -> int:
    """Smallest encoding memory whose maximum coding gain covers the gap
    between the basic code's target SNR and the Shannon limit."""
    if not np.isfinite(gamma_target_db) or not np.isfinite(gamma_lim_db):
        raise DomainError("SNR inputs must be finite")
    if gamma_target_db < gamma_lim_db:
        raise DesignError("target SNR is below the Shannon limit")
    return int(np.ceil(10.0 ** ((gamma_target_db - gamma_lim_db) / 10.0) - 1.0))


def memory_design_table(curve, targets, gamma_lim_db: float):
    """Rows (target_ber, gamma_target_db, gamma_lim_db, m) for each target."""
    rows = []
    for p in targets:
        gt = curve.ebn0_for(p)
        rows.append((p, gt, gamma_lim_db, design_memory(gt, gamma_lim_db)))
    return rows


# ---------------------------------------------------------------------------
# Latency and complexity accounting for the equal-latency comparison.


def latency_bits(family: str, block_size: int, d: int) -> int:
    """Structural decoding latency in channel bits: 2 * size * (d + 1).

    `block_size` is B for the superposition chain and the lifting size M for
    the coupled-LDPC baseline.
    """
    if block_size < 1 or d < 0:
        raise DomainError("need block_size >= 1 and d >= 0")
    if family not in (BMST_FAMILY, SCLDPC_FAMILY):
        raise DomainError(f"unknown family {family!r}")
    return 2 * block_size * (d + 1)


def complexity_per_bit(family: str, d: int, avg_iters: float, m: int = 0) -> float:
    """Node operations per decoded bit.

    Superposition chain: (4m + 8) * d * I; coupled-LDPC baseline with (3,6)
    degrees: 6 * (d + 1) * I.
    """
    if avg_iters < 0 or d < 0:
        raise DomainError("need non-negative d and iteration count")
    if family == BMST_FAMILY:
        if m < 0:
            raise DomainError("memory must be non-negative")
        return (4.0 * m + 8.0) * d * avg_iters
    if family == SCLDPC_FAMILY:
        return 6.0 * (d + 1) * avg_iters
    raise DomainError(f"unknown family {family!r}")
