"""Sliding-window LLR decoder over the chain's normal graph.

Each layer owns one + node bank (channel side), one = node bank, and one
basic-code node.  A window of d+1 layers is iterated with forward/backward
sweeps in the + -> = -> basic -> = -> + schedule until the entropy stopping
rule fires, the target layer is decided, and the window shifts with all
messages retained.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basic_codes import siso_decode_basic
from .core import BmstCode, BmstSpec, deinterleave
from .errors import ConfigError, InputShapeError
from .llr import (LLR_CLIP, boxplus_exclusive, check_finite, clip_llr,
                  entropy_stop, sum_exclusive)


@dataclass(frozen=True)
class WindowConfig:
    d: int
    max_iters: int = 18
    entropy_threshold: float = 1e-6

    def __post_init__(self):
        if self.d < 0:
            raise ConfigError("decoding delay d must be non-negative")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")
        if self.entropy_threshold < 0:
            raise ConfigError("entropy_threshold must be non-negative")


class ChainDecoder:
    """Message state of one frame's chain; layers indexed 0..L+m-1."""

    def __init__(self, code: BmstCode, channel_llr: np.ndarray):
        spec = code.spec
        basic = spec.basic
        total = spec.L + spec.m
        channel_llr = np.asarray(channel_llr, dtype=float)
        if channel_llr.shape != (total, basic.n):
            raise InputShapeError(
                f"expected channel LLRs of shape ({total}, {basic.n}), "
                f"got {channel_llr.shape}")
        check_finite(channel_llr, "channel_llr")
        self.code = code
        self.spec = spec
        self.basic = basic
        self.total = total
        self.channel = clip_llr(channel_llr)
        # Source half-edges: free for info layers, pinned to zero for the tail.
        self.source = np.zeros((total, basic.k))
        self.source[spec.L:] = LLR_CLIP
        m1 = spec.m + 1
        # eq_to_plus[t, i]: =(t) toward +(t+i), stored un-interleaved.
        self.eq_to_plus = np.zeros((total, m1, basic.n))
        self.plus_to_eq = np.zeros((total, m1, basic.n))
        self.eq_to_basic = np.zeros((total, basic.n))
        self.basic_to_eq = np.zeros((total, basic.n))
        self.info_post = np.zeros((total, basic.k))
        self._stack = np.empty((m1 + 1, basic.n))

    def _live_banks(self, s: int) -> int:
        """Banks of =(s) that reach an existing + node."""
        return min(self.spec.m + 1, self.total - s)

    def update_plus_node(self, s: int, lo: int = 0) -> None:
        """Box-plus extrinsics of +(s) over channel and all incoming banks.

        Outputs toward layers below `lo` (already decided) are skipped.
        """
        m1 = self.spec.m + 1
        perms = self.code.perms
        stack = self._stack
        stack[0] = self.channel[s]
        for i in range(m1):
            t_src = s - i
            if t_src >= 0:
                stack[i + 1] = self.eq_to_plus[t_src, i][perms[i]]
            else:
                stack[i + 1] = LLR_CLIP  # blocks before the chain start are zero
        ext = boxplus_exclusive(stack)
        for i in range(m1):
            t_src = s - i
            if t_src < lo:
                break
            self.plus_to_eq[t_src, i] = clip_llr(deinterleave(ext[i + 1], perms[i]))

    def update_equal_node(self, s: int) -> None:
        """Sum-rule extrinsics of =(s) toward the basic node and each bank."""
        live = self._live_banks(s)
        rows = np.vstack([self.basic_to_eq[s][None, :], self.plus_to_eq[s, :live]])
        out = sum_exclusive(rows)
        self.eq_to_basic[s] = clip_llr(out[0])
        self.eq_to_plus[s, :live] = clip_llr(out[1:])

    def update_basic_node(self, s: int) -> None:
        ext, post = siso_decode_basic(self.basic, self.eq_to_basic[s], self.source[s])
        self.basic_to_eq[s] = ext
        self.info_post[s] = post

    def update_layer(self, s: int, lo: int = 0) -> None:
        self.update_plus_node(s, lo)
        self.update_equal_node(s)
        self.update_basic_node(s)
        self.update_equal_node(s)
        self.update_plus_node(s, lo)


def process_window(decoder: ChainDecoder, t: int, cfg: WindowConfig):
    """Iterate the window at target layer t and decide its info bits.

    Returns (hard decisions for u(t), iterations used).
    """
    if not 0 <= t < decoder.total:
        raise ConfigError(f"target layer {t} outside the chain")
    hi = min(t + cfg.d, decoder.total - 1)
    prev = decoder.info_post[t:hi + 1].copy()
    iters = 0
    for _ in range(cfg.max_iters):
        for s in range(t, hi + 1):
            decoder.update_layer(s, t)
        for s in range(hi, t - 1, -1):
            decoder.update_layer(s, t)
        iters += 1
        curr = decoder.info_post[t:hi + 1]
        if entropy_stop(prev, curr, cfg.entropy_threshold):
            break
        prev = curr.copy()
    decisions = (decoder.info_post[t] < 0.0).astype(np.uint8)
    return decisions, iters


@dataclass
class DecodeResult:
    info_bits: np.ndarray      # (L, k) hard decisions
    iterations: np.ndarray     # iterations used per window position

    @property
    def avg_iterations(self) -> float:
        return float(np.mean(self.iterations))


def decode_frame(spec: BmstSpec, channel_llr: np.ndarray,
                 cfg: WindowConfig, code: BmstCode | None = None) -> DecodeResult:
    """Decode one frame: slide the window over all L info layers."""
    if code is None:
        code = BmstCode(spec)
    decoder = ChainDecoder(code, channel_llr)
    decided = np.empty((spec.L, spec.basic.k), dtype=np.uint8)
    iters = np.empty(spec.L, dtype=int)
    for t in range(spec.L):
        decided[t], iters[t] = process_window(decoder, t, cfg)
    return DecodeResult(decided, iters)
