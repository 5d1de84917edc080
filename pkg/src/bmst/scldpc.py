"""(3,6)-regular spatially coupled LDPC baseline with coupling width 1.

Protograph B0=[2 1], B1=[1 2] is unwrapped over L positions, lifted with
disjoint random permutations, and decoded by sliding-window flooding BP.
The EXIT threshold routine mirrors the chain analyzer but attaches the
channel at the variable nodes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import q_func
from .errors import ConfigError, InputShapeError, LiftError
from .exit_analysis import ThresholdResult, ber_estimate, bisect_threshold
from .jfunction import j_fun, jsq_inv_safe
from .llr import boxplus_exclusive, check_finite, clip_llr, entropy_stop, sum_exclusive

B0 = np.array([2, 1])
B1 = np.array([1, 2])
SC_DESIGN_RATE = 0.5


@dataclass(frozen=True)
class ProtographSpec:
    L: int
    M: int

    def __post_init__(self):
        if self.L < 1:
            raise ConfigError("coupling length L must be positive")
        if self.M < int(max(B0.max(), B1.max())):
            raise ConfigError("lifting factor M must be at least the largest base entry")

    @property
    def n_vars(self) -> int:
        return 2 * self.L * self.M

    @property
    def n_checks(self) -> int:
        return (self.L + 1) * self.M


def assemble_base(L: int) -> np.ndarray:
    """Unwrapped base matrix, (L+1) x 2L block structure of B0 over B1."""
    base = np.zeros((L + 1, 2 * L), dtype=int)
    for t in range(L):
        base[t, 2 * t:2 * t + 2] = B0
        base[t + 1, 2 * t:2 * t + 2] = B1
    return base


def lift_entry(b: int, M: int, rng, max_tries: int = 200) -> list[np.ndarray]:
    """b mutually disjoint M x M permutations, drawn with rejection."""
    if b == 0:
        return []
    if b > M:
        raise LiftError(f"cannot place {b} disjoint permutations of size {M}")
    for _ in range(max_tries):
        taken = np.full((M, M), False)
        perms = []
        for _ in range(b):
            for _ in range(max_tries):
                p = rng.permutation(M)
                if not taken[np.arange(M), p].any():
                    taken[np.arange(M), p] = True
                    perms.append(p)
                    break
            else:
                break
        if len(perms) == b:
            return perms
    raise LiftError(f"no disjoint placement found for entry {b} at M={M}")


def lift_base(base: np.ndarray, M: int, rng) -> np.ndarray:
    """Replace each base entry b by a sum of b disjoint permutations.

    Returns the dense 0/1 parity-check matrix (test scale only; the decoder
    uses the edge lists from LiftedCode, not this matrix).
    """
    rows, cols = base.shape
    H = np.zeros((rows * M, cols * M), dtype=np.uint8)
    for r in range(rows):
        for c in range(cols):
            for p in lift_entry(int(base[r, c]), M, rng):
                H[r * M + np.arange(M), c * M + p] = 1
    return H


class LiftedCode:
    """Edge-list view of a lifted code, grouped by block rows/columns.

    cols_per_position fixes how many base columns form one coupling
    position (2 for the stacked B0/B1 construction).
    """

    def __init__(self, base: np.ndarray, M: int, seed: int, cols_per_position: int = 2):
        base = np.asarray(base, dtype=int)
        if base.ndim != 2 or (base < 0).any():
            raise ConfigError("base matrix must be 2-D and non-negative")
        if base.shape[1] % cols_per_position:
            raise ConfigError("base columns not divisible by cols_per_position")
        rng = np.random.default_rng(seed)
        self.base = base
        self.M = M
        self.cols_per_position = cols_per_position
        self.n_positions = base.shape[1] // cols_per_position
        self.n_check_blocks = base.shape[0]
        self.n_vars = base.shape[1] * M
        self.n_checks = base.shape[0] * M

        edge_chk = []
        edge_var = []
        for r in range(base.shape[0]):
            for c in range(base.shape[1]):
                for p in lift_entry(int(base[r, c]), M, rng):
                    edge_chk.append(r * M + np.arange(M))
                    edge_var.append(c * M + p)
        self.edge_chk = np.concatenate(edge_chk)
        self.edge_var = np.concatenate(edge_var)
        self.n_edges = self.edge_chk.size

        self.chk_edges, self.dc = self._group(self.edge_chk, self.n_checks)
        self.var_edges, self.dv = self._group(self.edge_var, self.n_vars)
        if (self.var_edges == self.n_edges).any():
            raise ConfigError("variable degrees must be constant for this decoder")

    def _group(self, owner: np.ndarray, count: int):
        order = np.argsort(owner, kind="stable")
        degrees = np.bincount(owner, minlength=count)
        dmax = int(degrees.max())
        table = np.full((count, dmax), self.n_edges, dtype=np.int64)
        starts = np.cumsum(degrees) - degrees
        sorted_owner = owner[order]
        slot = np.arange(owner.size) - starts[sorted_owner]
        table[sorted_owner, slot] = order
        return table, dmax

    def check_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_chk, minlength=self.n_checks)

    def var_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_var, minlength=self.n_vars)

    def parity_ok(self, bits: np.ndarray) -> bool:
        syn = np.zeros(self.n_checks, dtype=np.int64)
        np.add.at(syn, self.edge_chk, bits[self.edge_var])
        return not (syn % 2).any()


class _BpState:
    def __init__(self, code: LiftedCode, channel_llr: np.ndarray):
        if channel_llr.shape != (code.n_vars,):
            raise InputShapeError(
                f"expected {code.n_vars} channel LLRs, got shape {channel_llr.shape}")
        check_finite(channel_llr, "channel_llr")
        self.code = code
        self.channel = clip_llr(np.asarray(channel_llr, dtype=float))
        self.v2c = np.zeros(code.n_edges + 1)
        self.c2v = np.zeros(code.n_edges + 1)
        self.v2c[:-1] = self.channel[code.edge_var]
        self.v2c[-1] = np.inf  # box-plus neutral for check-row padding

    def update_checks(self, checks: np.ndarray) -> None:
        edges = self.code.chk_edges[checks]
        out = boxplus_exclusive(self.v2c[edges.T])
        self.c2v[edges.T] = clip_llr(out)
        self.c2v[-1] = 0.0
        self.v2c[-1] = np.inf

    def update_vars(self, variables: np.ndarray) -> None:
        edges = self.code.var_edges[variables]
        inc = self.c2v[edges.T]
        ext = sum_exclusive(inc) + self.channel[variables][None, :]
        self.v2c[edges.T] = clip_llr(ext)

    def posteriors(self, variables: np.ndarray) -> np.ndarray:
        inc = self.c2v[self.code.var_edges[variables]]
        return self.channel[variables] + inc.sum(axis=1)


@dataclass
class ScDecodeResult:
    bits: np.ndarray
    iterations: np.ndarray

    @property
    def avg_iterations(self) -> float:
        return float(np.mean(self.iterations))


def window_bp_decode(code: LiftedCode, channel_llr: np.ndarray, d: int,
                     max_iters: int = 100,
                     entropy_threshold: float = 1e-6) -> ScDecodeResult:
    """Sliding-window flooding BP; decides one position per window shift."""
    if d < 0:
        raise ConfigError("decoding delay d must be non-negative")
    if max_iters < 1:
        raise ConfigError("max_iters must be at least 1")
    state = _BpState(code, channel_llr)
    cpp = code.cols_per_position
    M = code.M
    bits = np.empty(code.n_vars, dtype=np.uint8)
    iters = np.empty(code.n_positions, dtype=int)
    for t in range(code.n_positions):
        hi_v = min(t + d, code.n_positions - 1)
        hi_c = min(t + d, code.n_check_blocks - 1)
        variables = np.arange(t * cpp * M, (hi_v + 1) * cpp * M)
        checks = np.arange(t * M, (hi_c + 1) * M)
        prev = state.posteriors(variables)
        used = 0
        for _ in range(max_iters):
            state.update_checks(checks)
            state.update_vars(variables)
            used += 1
            curr = state.posteriors(variables)
            if entropy_stop(prev, curr, entropy_threshold):
                break
            prev = curr
        target = np.arange(t * cpp * M, (t + 1) * cpp * M)
        bits[target] = state.posteriors(target) < 0.0
        iters[t] = used
    return ScDecodeResult(bits, iters)


def bp_decode(code: LiftedCode, channel_llr: np.ndarray, max_iters: int = 100,
              entropy_threshold: float = 1e-6):
    """Plain full-graph flooding BP (uncoupled blocks, reference checks)."""
    state = _BpState(code, channel_llr)
    all_vars = np.arange(code.n_vars)
    all_checks = np.arange(code.n_checks)
    prev = state.posteriors(all_vars)
    used = 0
    for _ in range(max_iters):
        state.update_checks(all_checks)
        state.update_vars(all_vars)
        used += 1
        curr = state.posteriors(all_vars)
        if entropy_stop(prev, curr, entropy_threshold):
            break
        prev = curr
    return (state.posteriors(all_vars) < 0.0).astype(np.uint8), used


# EXIT threshold of the window decoder, channel attached at variable nodes.

_B = (B0, B1)


class _ScMiChain:
    """Per-edge-class MI state; i_vc[t, v, j] flows from column (t, v) to
    check t+j.  Updates are computed chain-wide and written through window
    masks so frozen positions keep their converged values."""

    def __init__(self, L: int, ebn0_db: float):
        self.L = L
        self.ch_sq = 8.0 * SC_DESIGN_RATE * 10.0 ** (ebn0_db / 10.0)
        self.i_vc = np.zeros((L, 2, 2))
        self.i_cv = np.zeros((L, 2, 2))
        self._b = np.stack([B0, B1]).astype(float)  # [j, v]

    def update_checks(self, lo: int, hi_c: int) -> None:
        L, b = self.L, self._b
        q = jsq_inv_safe(1.0 - self.i_vc)
        total = np.zeros(L + 1)
        total[:L] += q[:, :, 0] @ b[0]
        total[1:] += q[:, :, 1] @ b[1]
        new = np.empty_like(self.i_cv)
        for j in range(2):
            rest = total[j:j + L, None] - q[:, :, j]
            new[:, :, j] = 1.0 - j_fun(np.sqrt(np.maximum(rest, 0.0)))
        for j in range(2):
            t_lo = max(lo, lo - j)          # edge (t, v, j) sits on check t+j
            t_hi = min(hi_c - j, L - 1)
            if t_hi >= t_lo:
                self.i_cv[t_lo:t_hi + 1, :, j] = new[t_lo:t_hi + 1, :, j]

    def update_vars(self, lo: int, hi_v: int) -> None:
        b = self._b
        sq = jsq_inv_safe(self.i_cv)
        for j in range(2):
            arg = self.ch_sq + (b[j] - 1.0)[None, :] * sq[:, :, j] \
                + b[1 - j][None, :] * sq[:, :, 1 - j]
            self.i_vc[lo:hi_v + 1, :, j] = j_fun(np.sqrt(arg[lo:hi_v + 1]))

    def posterior_ber(self, t: int) -> float:
        sq = self.ch_sq + (jsq_inv_safe(self.i_cv[t]) * self._b.T).sum(axis=1)
        i_ap = j_fun(np.sqrt(sq))
        return max(ber_estimate(float(i)) for i in i_ap)

    def snapshot(self) -> np.ndarray:
        return np.concatenate([self.i_vc.ravel(), self.i_cv.ravel()])


def window_exit_decode_sc(L: int, d: int, ebn0_db: float, target_ber: float,
                          i_max: int = 1000) -> bool:
    """Density-evolution pass of the window decoder at one Eb/N0."""
    chain = _ScMiChain(L, ebn0_db)
    for t in range(L):
        hi_v = min(t + d, L - 1)
        hi_c = min(t + d, L)
        prev = chain.snapshot()
        for _ in range(i_max):
            chain.update_checks(t, hi_c)
            chain.update_vars(t, hi_v)
            curr = chain.snapshot()
            if np.max(np.abs(curr - prev)) < 1e-14:
                break
            prev = curr
        if not chain.posterior_ber(t) < target_ber:
            return False
    return True


def exit_threshold_sc(L: int, d: int, target_ber: float,
                      tol_db: float = 0.001) -> ThresholdResult:
    from .analysis import shannon_limit

    def evaluate(ebn0_db: float) -> bool:
        return window_exit_decode_sc(L, d, ebn0_db, target_ber)

    return bisect_threshold(evaluate, shannon_limit(SC_DESIGN_RATE), tol_db=tol_db)
