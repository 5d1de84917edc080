import numpy as np
import pytest

from bmst.errors import NumericInputError
from bmst.llr import (LLR_CLIP, bit_entropy, boxplus, boxplus_exclusive,
                      check_finite, clip_llr, sum_exclusive)


def _boxplus_ref(a, b):
    # tanh-rule reference, safe only for moderate magnitudes
    return 2.0 * np.arctanh(np.tanh(a / 2.0) * np.tanh(b / 2.0))


def test_boxplus_matches_tanh_rule():
    rng = np.random.default_rng(0)
    a = rng.uniform(-12, 12, size=5000)
    b = rng.uniform(-12, 12, size=5000)
    np.testing.assert_allclose(boxplus(a, b), _boxplus_ref(a, b),
                               rtol=1e-10, atol=1e-12)


def test_boxplus_infinity_semantics():
    inf = np.inf
    x = 1.7
    assert boxplus(inf, x) == pytest.approx(x)
    assert boxplus(-inf, x) == pytest.approx(-x)
    assert boxplus(inf, inf) == inf
    assert boxplus(inf, -inf) == -inf
    assert boxplus(-inf, -inf) == inf
    out = boxplus(np.array([inf, -inf, inf]), np.array([inf, inf, 0.25]))
    np.testing.assert_array_equal(np.isnan(out), False)
    np.testing.assert_allclose(out, [inf, -inf, 0.25])


def test_boxplus_exclusive_against_pairwise():
    rng = np.random.default_rng(1)
    rows = rng.uniform(-9, 9, size=(5, 40))
    out = boxplus_exclusive(rows)
    for i in range(5):
        acc = None
        for j in range(5):
            if j == i:
                continue
            acc = rows[j] if acc is None else boxplus(acc, rows[j])
        np.testing.assert_allclose(out[i], acc, rtol=1e-9, atol=1e-11)


def test_boxplus_exclusive_infinite_row_is_neutral():
    rng = np.random.default_rng(2)
    rows = rng.uniform(-6, 6, size=(3, 16))
    padded = np.vstack([rows, np.full((1, 16), np.inf)])
    out = boxplus_exclusive(padded)
    assert not np.any(np.isnan(out))
    np.testing.assert_allclose(out[:3], boxplus_exclusive(rows),
                               rtol=1e-12, atol=0)


def test_sum_exclusive():
    rows = np.array([[1.0, -2.0], [3.0, 0.5], [-4.0, 1.0]])
    out = sum_exclusive(rows)
    np.testing.assert_allclose(out[0], rows[1] + rows[2])
    np.testing.assert_allclose(out[1], rows[0] + rows[2])
    np.testing.assert_allclose(out[2], rows[0] + rows[1])


def test_clip_and_finiteness():
    np.testing.assert_allclose(clip_llr(np.array([-1e9, 0.25, 1e9])),
                               [-LLR_CLIP, 0.25, LLR_CLIP])
    with pytest.raises(NumericInputError):
        check_finite(np.array([1.0, np.nan]), "llr")


def test_bit_entropy_limits():
    assert bit_entropy(np.array([0.0]))[0] == pytest.approx(1.0)
    assert bit_entropy(np.array([60.0]))[0] == pytest.approx(0.0, abs=1e-12)
    assert bit_entropy(np.array([-60.0]))[0] == pytest.approx(0.0, abs=1e-12)
    mid = bit_entropy(np.array([2.0]))[0]
    assert 0.0 < mid < 1.0
