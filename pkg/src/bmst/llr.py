"""Log-likelihood-ratio primitives shared by the decoders.

Convention everywhere: llr = log(P(bit=0)/P(bit=1)), so positive means 0.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericInputError

# Messages are clipped to this magnitude before/after node updates.  Large
# enough that decisions are unaffected, small enough that exp/tanh stay exact.
LLR_CLIP = 50.0


def clip_llr(x: np.ndarray) -> np.ndarray:
    return np.clip(x, -LLR_CLIP, LLR_CLIP)


def check_finite(x: np.ndarray, name: str = "llr") -> None:
    if not np.all(np.isfinite(x)):
        raise NumericInputError(f"{name} contains non-finite values")


def boxplus(a, b):
    """Exact tanh-rule combination of two LLRs, in a numerically stable form.

    Identical to 2*atanh(tanh(a/2)*tanh(b/2)) but never saturates: the
    min-magnitude term carries the result and the two log1p terms are the
    exact correction.  +inf acts as the neutral element (a known bit).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mag = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    with np.errstate(invalid="ignore"):
        corr = np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    # inf plus/minus inf above is the only nan source; the correction of an
    # infinite input is exactly zero
    both_inf = np.isinf(a) & np.isinf(b)
    if np.ndim(corr) == 0:
        return mag if both_inf else mag + corr
    return mag + np.where(both_inf, 0.0, corr)


def _prefix_suffix(rows: np.ndarray, combine, neutral: float):
    n_rows = rows.shape[0]
    pre = np.empty_like(rows)
    suf = np.empty_like(rows)
    pre[0] = neutral
    for i in range(1, n_rows):
        pre[i] = combine(pre[i - 1], rows[i - 1])
    suf[n_rows - 1] = neutral
    for i in range(n_rows - 2, -1, -1):
        suf[i] = combine(suf[i + 1], rows[i + 1])
    return pre, suf


def boxplus_exclusive(rows: np.ndarray) -> np.ndarray:
    """Row i of the result is the boxplus of all rows except i.

    Computed with prefix/suffix passes so each output never touches its own
    input (exact extrinsic exclusion, and O(rows) boxplus calls).
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    pre, suf = _prefix_suffix(rows, boxplus, np.inf)
    return boxplus(pre, suf)


def sum_exclusive(rows: np.ndarray) -> np.ndarray:
    """Row i of the result is the plain sum of all rows except i."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    pre, suf = _prefix_suffix(rows, np.add, 0.0)
    return pre + suf


def bit_entropy(llr: np.ndarray) -> np.ndarray:
    """Binary entropy (bits) of the posterior implied by each LLR."""
    p = 1.0 / (1.0 + np.exp(np.abs(np.asarray(llr, dtype=float))))
    out = np.zeros_like(p)
    mask = p > 0.0
    pm = p[mask]
    out[mask] = -pm * np.log2(pm) - (1.0 - pm) * np.log2(1.0 - pm)
    return out


def entropy_stop(prev_llr: np.ndarray, curr_llr: np.ndarray, threshold: float) -> bool:
    """True when posteriors have stopped moving, in entropy terms.

    The criterion is the mean absolute change of per-bit posterior entropy
    between consecutive iterations falling below `threshold`.
    """
    prev = np.asarray(prev_llr, dtype=float)
    curr = np.asarray(curr_llr, dtype=float)
    if prev.shape != curr.shape:
        raise ValueError("posterior arrays must have matching shapes")
    change = np.abs(bit_entropy(curr) - bit_entropy(prev))
    return float(np.mean(change)) < threshold
