"""The J function: mutual information of a consistent Gaussian LLR.

J(sigma) is the MI between a bit and an LLR drawn from N(sigma^2/2, sigma^2).
The closed-form approximation below is accurate to better than 1e-3 absolute
against the defining integral over sigma in [0.05, 10]; its algebraic inverse
is exact for the approximation itself.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError

_H1 = 0.3073
_H2 = 0.8935
_H3 = 1.1064

# Inversion guard: MI of exactly 1 maps to an unbounded sigma, so internal
# rule evaluations treat anything above this as "known bit".
_MI_CEIL = 1.0 - 1e-12


def j_fun(sigma):
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0.0) or not np.all(np.isfinite(sigma)):
        raise DomainError("sigma must be finite and non-negative")
    out = (1.0 - np.exp2(-_H1 * sigma ** (2.0 * _H2))) ** _H3
    return out if out.ndim else float(out)


def j_inv(mi):
    mi = np.asarray(mi, dtype=float)
    if np.any(mi < 0.0) or np.any(mi >= 1.0) or not np.all(np.isfinite(mi)):
        raise DomainError("mi must lie in [0, 1)")
    out = _j_inv_raw(mi)
    return out if out.ndim else float(out)


def _j_inv_raw(mi):
    return (-np.log2(1.0 - mi ** (1.0 / _H3)) / _H1) ** (1.0 / (2.0 * _H2))


def jsq_inv_safe(mi):
    """J^-1 squared, accepting MI in [0, 1] (1 maps to the guard ceiling).

    The squared form is what every MI combining rule consumes.
    """
    mi = np.minimum(np.asarray(mi, dtype=float), _MI_CEIL)
    if np.any(mi < 0.0) or not np.all(np.isfinite(mi)):
        raise DomainError("mi must lie in [0, 1]")
    return _j_inv_raw(mi) ** 2
