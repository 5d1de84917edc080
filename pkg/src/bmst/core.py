"""Block Markov superposition of a basic code.

Encoding: each info block u(t) is encoded by the basic code into v(t); the
transmitted block is c(t) = sum over i of interleaved copies of v(t-i),
i = 0..m, over GF(2), with v(t) = 0 for t < 0 and a zero tail of m info
blocks appended for termination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .basic_codes import BasicCodeSpec, REPETITION, encode_basic
from .errors import CapacityError, DomainError, InputShapeError

_DENSE_MATRIX_CELLS = 1 << 26


@dataclass(frozen=True)
class BmstSpec:
    """Parameters of one transmission chain.

    basic: the underlying basic code
    m: encoding memory (number of superimposed past blocks)
    L: number of information blocks per chain (termination adds m more)
    interleaver_seed: seeds the m+1 fixed random interleavers
    """

    basic: BasicCodeSpec
    m: int
    L: int
    interleaver_seed: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("memory m must be non-negative")
        if self.L < 1:
            raise DomainError("chain length L must be at least 1")


def generate_interleavers(seed: int, m: int, n: int) -> list[np.ndarray]:
    """m+1 fixed length-n permutations, one independent PCG64 stream each.

    Stream i is seeded with SeedSequence(seed, spawn_key=(i,)), so the set is
    reproducible and adding interleavers never disturbs existing ones.
    """
    perms = []
    for i in range(m + 1):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        perms.append(rng.permutation(n))
    return perms


def interleave(block: np.ndarray, perm: np.ndarray) -> np.ndarray:
    return block[perm]


def deinterleave(block: np.ndarray, perm: np.ndarray) -> np.ndarray:
    out = np.empty_like(block)
    out[perm] = block
    return out


class BmstCode:
    """Materialized encoder state: the spec plus its interleavers."""

    def __init__(self, spec: BmstSpec):
        self.spec = spec
        self.perms = generate_interleavers(spec.interleaver_seed, spec.m, spec.basic.n)

    def encode(self, info_blocks: np.ndarray) -> np.ndarray:
        spec = self.spec
        basic = spec.basic
        info_blocks = np.asarray(info_blocks, dtype=np.uint8)
        if info_blocks.shape != (spec.L, basic.k):
            raise InputShapeError(
                f"expected info of shape ({spec.L}, {basic.k}), got {info_blocks.shape}")
        total = spec.L + spec.m
        out = np.zeros((total, basic.n), dtype=np.uint8)
        history = np.zeros((spec.m + 1, basic.n), dtype=np.uint8)  # v(t-i) ring
        for t in range(total):
            u_t = info_blocks[t] if t < spec.L else np.zeros(basic.k, dtype=np.uint8)
            history = np.roll(history, 1, axis=0)
            history[0] = encode_basic(basic, u_t)
            c_t = out[t]
            for i in range(spec.m + 1):
                np.bitwise_xor(c_t, history[i][self.perms[i]], out=c_t)
        return out

    def generator_matrix(self) -> np.ndarray:
        spec = self.spec
        basic = spec.basic
        rows = spec.L * basic.k
        cols = (spec.L + spec.m) * basic.n
        if rows * cols > _DENSE_MATRIX_CELLS:
            raise CapacityError(
                f"dense generator of {rows}x{cols} exceeds the guarded size")
        if basic.kind == REPETITION:
            g0 = np.ones((1, basic.N), dtype=np.uint8)
        else:
            g0 = np.hstack([np.eye(basic.N - 1, dtype=np.uint8),
                            np.ones((basic.N - 1, 1), dtype=np.uint8)])
        g_basic = np.kron(np.eye(basic.B, dtype=np.uint8), g0)
        out = np.zeros((rows, cols), dtype=np.uint8)
        for j in range(spec.L):
            for i in range(spec.m + 1):
                block = g_basic[:, self.perms[i]]  # right-multiplied permutation
                r0 = j * basic.k
                c0 = (j + i) * basic.n
                out[r0:r0 + basic.k, c0:c0 + basic.n] = block
        return out


def encode_bmst(spec: BmstSpec, info_blocks: np.ndarray) -> np.ndarray:
    """Encode L info blocks into L+m channel blocks (zero tail termination)."""
    return BmstCode(spec).encode(info_blocks)


def rate_bmst(spec: BmstSpec) -> Fraction:
    """Exact code rate L*k / ((L+m)*n) as a rational number."""
    return Fraction(spec.L * spec.basic.k, (spec.L + spec.m) * spec.basic.n)


def generator_matrix_oracle(spec: BmstSpec) -> np.ndarray:
    """Dense GF(2) generator matrix of the whole chain (test-scale only)."""
    return BmstCode(spec).generator_matrix()
