"""Basic codes: B-fold Cartesian products of repetition or single-parity-check
blocks, with exact a-posteriori SISO decoding and MI transfer curves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputShapeError
from .jfunction import j_fun, jsq_inv_safe
from .llr import boxplus_exclusive, check_finite, clip_llr, sum_exclusive

REPETITION = "repetition"
SINGLE_PARITY_CHECK = "single-parity-check"
_KINDS = (REPETITION, SINGLE_PARITY_CHECK)


@dataclass(frozen=True)
class BasicCodeSpec:
    """A short block code repeated B times side by side.

    kind: repetition [N, 1] or single-parity-check [N, N-1]
    N: short block length in bits
    B: Cartesian product order (number of independent short blocks)
    """

    kind: str
    N: int
    B: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown basic code kind: {self.kind!r}")
        if self.N < 2:
            raise DomainError("short block length N must be at least 2")
        if self.B < 1:
            raise DomainError("product order B must be at least 1")

    @property
    def n(self) -> int:
        """Code length of the product code."""
        return self.N * self.B

    @property
    def k(self) -> int:
        """Dimension of the product code."""
        return self.B if self.kind == REPETITION else self.B * (self.N - 1)


def encode_basic(spec: BasicCodeSpec, info: np.ndarray) -> np.ndarray:
    """Encode k info bits into the n-bit basic codeword."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (spec.k,):
        raise InputShapeError(f"expected {spec.k} info bits, got shape {info.shape}")
    if spec.kind == REPETITION:
        return np.repeat(info, spec.N)
    blocks = info.reshape(spec.B, spec.N - 1)
    parity = np.bitwise_xor.reduce(blocks, axis=1, keepdims=True)
    return np.hstack([blocks, parity]).reshape(-1)


def siso_decode_basic(spec: BasicCodeSpec, code_priors: np.ndarray,
                      info_priors: np.ndarray):
    """Exact APP decoding of each short block.

    Returns (code_extrinsic, info_posterior).  The extrinsic on code bit j
    excludes that bit's own code prior; for repetition blocks it is the sum
    of the other priors plus the source prior, for single-parity-check
    blocks the box-plus combination of all other bits in the block.
    """
    code_priors = np.asarray(code_priors, dtype=float)
    info_priors = np.asarray(info_priors, dtype=float)
    if code_priors.shape != (spec.n,):
        raise InputShapeError(f"expected {spec.n} code priors, got shape {code_priors.shape}")
    if info_priors.shape != (spec.k,):
        raise InputShapeError(f"expected {spec.k} info priors, got shape {info_priors.shape}")
    check_finite(code_priors, "code_priors")
    check_finite(info_priors, "info_priors")
    cp = clip_llr(code_priors).reshape(spec.B, spec.N)

    if spec.kind == REPETITION:
        ip = clip_llr(info_priors)
        others = sum_exclusive(cp.T).T  # sum over the block excluding self
        ext = others + ip[:, None]
        post = ip + cp.sum(axis=1)
        return clip_llr(ext.reshape(-1)), clip_llr(post)

    ip = clip_llr(info_priors).reshape(spec.B, spec.N - 1)
    mu = cp.copy()
    mu[:, :-1] += ip  # info bits carry both a code and a source prior
    par = boxplus_exclusive(mu.T).T
    ext = par.copy()
    ext[:, :-1] += ip
    post = mu + par
    return clip_llr(ext.reshape(-1)), clip_llr(post[:, :-1].reshape(-1))


def _check_mi(values: np.ndarray, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if np.any(values < 0.0) or np.any(values > 1.0) or not np.all(np.isfinite(values)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return values


def mi_transfer_basic(spec: BasicCodeSpec, code_mi_in: np.ndarray,
                      source_mi: float) -> np.ndarray:
    """MI transfer through one node of the basic code, per code edge.

    Consistent-Gaussian convention: repetition blocks apply the equality
    (variable) rule over the other code edges plus the source half-edge;
    single-parity-check blocks apply the check rule, with the source MI
    folded into each info position.
    """
    code_mi_in = _check_mi(code_mi_in, "code_mi_in")
    if code_mi_in.shape != (spec.n,):
        raise InputShapeError(f"expected {spec.n} MI values, got shape {code_mi_in.shape}")
    _check_mi(np.asarray(source_mi), "source_mi")
    src_sq = jsq_inv_safe(source_mi)
    blocks = jsq_inv_safe(code_mi_in).reshape(spec.B, spec.N)

    if spec.kind == REPETITION:
        others = np.maximum(blocks.sum(axis=1, keepdims=True) - blocks, 0.0)
        out = j_fun(np.sqrt(others + src_sq))
        return np.asarray(out, dtype=float).reshape(-1)

    # Fold the source into each info position, then run the parity rule.
    eff = code_mi_in.reshape(spec.B, spec.N).copy()
    eff[:, :-1] = j_fun(np.sqrt(blocks[:, :-1] + src_sq))
    t = jsq_inv_safe(1.0 - eff)
    others = np.maximum(t.sum(axis=1, keepdims=True) - t, 0.0)
    par = 1.0 - np.asarray(j_fun(np.sqrt(others)), dtype=float)
    out = par.copy()
    out[:, :-1] = j_fun(np.sqrt(jsq_inv_safe(par[:, :-1]) + src_sq))
    return np.clip(out, 0.0, 1.0).reshape(-1)


def info_posterior_mi(spec: BasicCodeSpec, code_mi_in: float, source_mi: float) -> float:
    """A-posteriori MI of one info bit of the basic code.

    All code edges are assumed to carry `code_mi_in` (ensemble symmetry).
    """
    _check_mi(np.asarray(code_mi_in), "code_mi_in")
    _check_mi(np.asarray(source_mi), "source_mi")
    a_sq = jsq_inv_safe(code_mi_in)
    src_sq = jsq_inv_safe(source_mi)
    if spec.kind == REPETITION:
        return float(j_fun(np.sqrt(spec.N * a_sq + src_sq)))
    # Parity extrinsic toward an info bit: the other N-2 info positions carry
    # code+source, the parity position carries the code prior alone.
    eff = j_fun(np.sqrt(a_sq + src_sq))
    t_info = jsq_inv_safe(1.0 - eff)
    t_par = jsq_inv_safe(1.0 - code_mi_in)
    par = 1.0 - j_fun(np.sqrt((spec.N - 2) * t_info + t_par))
    return float(j_fun(np.sqrt(a_sq + src_sq + jsq_inv_safe(par))))
