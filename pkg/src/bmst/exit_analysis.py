"""MI-domain analysis of the sliding-window decoder.

The chain's normal graph is evaluated in the consistent-Gaussian ensemble
(uniform random interleavers, one MI scalar per edge bank).  The window
engine mirrors the working decoder: the same + -> = -> basic -> = -> +
layer schedule, forward/backward sweeps, message retention across shifts,
and a known zero tail.  Decoding a target layer succeeds when its estimated
info-bit error probability falls strictly below the target.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analysis import q_func, shannon_limit
from .basic_codes import BasicCodeSpec, info_posterior_mi, mi_transfer_basic
from .core import BmstSpec, rate_bmst
from .errors import DomainError, NoThresholdError
from .jfunction import j_fun, j_inv, jsq_inv_safe

DEFAULT_I_MAX = 1000
_STALL_TOL = 1e-14


def posterior_mi(i_a: float, i_e: float) -> float:
    """Combine a-priori and extrinsic MI into a-posteriori MI."""
    return float(j_fun(np.sqrt(jsq_inv_safe(i_a) + jsq_inv_safe(i_e))))


def ber_estimate(i_ap: float) -> float:
    """Estimated bit error probability of a consistent Gaussian posterior."""
    return float(q_func(np.sqrt(jsq_inv_safe(i_ap)) / 2.0))


def converge_check(i_a: float, i_e: float, target_ber: float) -> bool:
    """True when the estimated info-bit BER is strictly below the target."""
    if not 0.0 < target_ber < 0.5:
        raise DomainError("target_ber must lie in (0, 0.5)")
    return ber_estimate(posterior_mi(i_a, i_e)) < target_ber


def mi_variable_update(inputs) -> float:
    """Equality-node MI rule over the given incoming values."""
    sq = jsq_inv_safe(np.asarray(inputs, dtype=float))
    return float(j_fun(np.sqrt(np.sum(sq))))


def mi_check_update(inputs) -> float:
    """Parity-node MI rule over the given incoming values."""
    inputs = np.asarray(inputs, dtype=float)
    sq = jsq_inv_safe(1.0 - inputs)
    return float(1.0 - j_fun(np.sqrt(np.sum(sq))))


class _MiChain:
    """Per-bank MI state of one chain at a fixed Eb/N0."""

    def __init__(self, spec: BmstSpec, ebn0_db: float):
        self.spec = spec
        self.basic = spec.basic
        self.m = spec.m
        self.total = spec.L + spec.m
        rate = float(rate_bmst(spec))
        ebn0 = 10.0 ** (ebn0_db / 10.0)
        self.ch_sq = 8.0 * rate * ebn0  # squared sigma of the channel LLR
        self.i_ch = float(j_fun(np.sqrt(self.ch_sq)))
        m1 = self.m + 1
        # eq_to_plus[t, i]: =(t) toward +(t+i); plus_to_eq[t, i]: the reverse.
        self.eq_to_plus = np.zeros((self.total, m1))
        self.plus_to_eq = np.zeros((self.total, m1))
        self.eq_to_basic = np.zeros(self.total)
        self.basic_to_eq = np.zeros(self.total)
        self.info_ext = np.zeros(self.total)  # extrinsic toward an info bit
        self.source_mi = np.zeros(self.total)
        self.source_mi[spec.L:] = 1.0
        self._probe = np.zeros(spec.basic.N)

    def update_layer(self, s: int, lo: int) -> None:
        """One + -> = -> basic -> = -> + pass at layer s.

        `lo` is the leftmost live layer; banks into layers below it are
        frozen and skipped.
        """
        m1 = self.m + 1
        self._update_plus(s, lo)
        # Equality node toward the basic code: all plus banks combine.
        live = self.total - s if self.total - s < m1 else m1
        bank_sq = jsq_inv_safe(self.plus_to_eq[s, :live])
        total_sq = float(np.sum(bank_sq))
        self.eq_to_basic[s] = j_fun(np.sqrt(total_sq))
        # Basic code node.
        self._probe[:] = self.eq_to_basic[s]
        out = mi_transfer_basic(self.basic, self._probe, self.source_mi[s])
        self.basic_to_eq[s] = float(np.mean(out))
        self.info_ext[s] = float(out[0])
        # Equality node toward the plus banks (extrinsic per bank).
        g_sq = jsq_inv_safe(self.basic_to_eq[s])
        self.eq_to_plus[s, :live] = j_fun(
            np.sqrt(np.maximum(g_sq + total_sq - bank_sq, 0.0)))
        self._update_plus(s, lo)

    def _update_plus(self, s: int, lo: int) -> None:
        m1 = self.m + 1
        incoming = np.ones(m1)  # banks from before the chain start are known
        first = s - m1 + 1
        if first < 0:
            incoming[:s + 1] = self.eq_to_plus[np.arange(s, -1, -1), np.arange(s + 1)]
        else:
            idx = np.arange(s, first - 1, -1)
            incoming = self.eq_to_plus[idx, np.arange(m1)]
        in_sq = jsq_inv_safe(1.0 - incoming)
        total_sq = float(np.sum(in_sq)) + jsq_inv_safe(1.0 - self.i_ch)
        out = 1.0 - j_fun(np.sqrt(np.maximum(total_sq - in_sq, 0.0)))
        for i in range(m1):
            t_src = s - i
            if t_src < lo:
                break  # messages into decided layers are never read again
            self.plus_to_eq[t_src, i] = out[i]

    def snapshot(self) -> np.ndarray:
        return np.concatenate([self.eq_to_plus.ravel(), self.plus_to_eq.ravel(),
                               self.basic_to_eq])


@dataclass
class ExitResult:
    success: bool
    failed_layer: int | None
    ber_estimates: list[float] = field(default_factory=list)


def window_exit_decode(spec: BmstSpec, d: int, ebn0_db: float, target_ber: float,
                       i_max: int = DEFAULT_I_MAX) -> ExitResult:
    """Run the windowed MI recursion over the whole chain.

    Every info layer gets a window of up to d+1 layers, i_max iterations of
    the layer schedule, then the convergence check at its basic-code node.
    The MI state is retained from one window position to the next.
    """
    if d < 0:
        raise DomainError("decoding delay d must be non-negative")
    if not 0.0 < target_ber < 0.5:
        raise DomainError("target_ber must lie in (0, 0.5)")
    chain = _MiChain(spec, ebn0_db)
    estimates = []
    for t in range(spec.L):
        hi = min(t + d, chain.total - 1)
        prev = chain.snapshot()
        for _ in range(i_max):
            for s in range(t, hi + 1):
                chain.update_layer(s, t)
            for s in range(hi, t - 1, -1):
                chain.update_layer(s, t)
            curr = chain.snapshot()
            if float(np.max(np.abs(curr - prev))) < _STALL_TOL:
                break
            prev = curr
        i_ap = posterior_mi(chain.eq_to_basic[t], chain.info_ext[t])
        p_est = ber_estimate(i_ap)
        estimates.append(p_est)
        if not p_est < target_ber:
            return ExitResult(False, t, estimates)
    return ExitResult(True, None, estimates)


@dataclass(frozen=True)
class ThresholdQuery:
    spec: BmstSpec
    d: int
    target_ber: float
    i_max: int = DEFAULT_I_MAX
    tol_db: float = 0.001


@dataclass
class ThresholdResult:
    threshold_db: float
    trace: list[tuple[float, bool]]


def bisect_threshold(evaluate, start_db: float, tol_db: float = 0.001,
                     step_db: float = 0.5, max_db: float = 15.0) -> ThresholdResult:
    """Smallest Eb/N0 (within tol) where `evaluate` reports success.

    Scans upward from `start_db` in `step_db` increments to bracket the
    transition, then bisects.  The returned value is the smallest tested
    success.
    """
    trace = []
    lo = start_db
    if evaluate(lo):
        # Already decodable at the scan start; report it.
        trace.append((lo, True))
        return ThresholdResult(lo, trace)
    trace.append((lo, False))
    hi = lo
    while True:
        hi = hi + step_db
        if hi > max_db:
            raise NoThresholdError(f"no success found below {max_db} dB")
        ok = evaluate(hi)
        trace.append((hi, ok))
        if ok:
            break
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        ok = evaluate(mid)
        trace.append((mid, ok))
        if ok:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(hi, trace)


def threshold_search(query: ThresholdQuery) -> ThresholdResult:
    """Decoding threshold of the windowed chain ensemble."""
    rate = float(rate_bmst(query.spec))

    def evaluate(db: float) -> bool:
        return window_exit_decode(query.spec, query.d, db, query.target_ber,
                                  query.i_max).success

    return bisect_threshold(evaluate, start_db=shannon_limit(rate),
                            tol_db=query.tol_db)
