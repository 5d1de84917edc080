import numpy as np
import pytest

from bmst.analysis import gaussian_llr_mi, shannon_limit
from bmst.basic_codes import BasicCodeSpec
from bmst.core import BmstSpec, rate_bmst
from bmst.errors import DomainError, NoThresholdError
from bmst.exit_analysis import (ThresholdQuery, ber_estimate, bisect_threshold,
                                converge_check, mi_check_update,
                                mi_variable_update, posterior_mi,
                                threshold_search, window_exit_decode)
from bmst.jfunction import j_fun, j_inv, jsq_inv_safe


def test_j_approximation_tracks_quadrature():
    sigmas = np.linspace(0.05, 10.0, 200)
    err = max(abs(float(j_fun(s)) - gaussian_llr_mi(s)) for s in sigmas)
    assert err < 1e-3


def test_j_inverse_is_algebraically_exact():
    sigmas = np.linspace(0.05, 10.0, 200)
    mi = j_fun(sigmas)
    np.testing.assert_allclose(j_inv(mi), sigmas, rtol=1e-9)
    with pytest.raises(DomainError):
        j_inv(1.0)
    assert np.isfinite(jsq_inv_safe(1.0))
    assert jsq_inv_safe(0.0) == pytest.approx(0.0, abs=1e-30)


def test_posterior_and_ber_estimates():
    assert posterior_mi(0.0, 0.7) == pytest.approx(0.7, abs=1e-12)
    assert posterior_mi(0.5, 0.5) > 0.5
    assert ber_estimate(0.0) == pytest.approx(0.5)
    assert ber_estimate(0.999999) < 1e-6
    # monotone: better MI, lower estimated BER
    vals = [ber_estimate(i) for i in (0.2, 0.5, 0.8, 0.95)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_converge_check_is_strict():
    assert not converge_check(0.0, 0.0, 0.4)      # estimate 0.5, target 0.4
    assert converge_check(0.99, 0.99, 1e-3)
    with pytest.raises(DomainError):
        converge_check(0.5, 0.5, 0.7)


def test_node_mi_rules():
    assert mi_variable_update([0.6]) == pytest.approx(0.6, abs=1e-12)
    assert mi_check_update([0.6]) == pytest.approx(0.6, abs=1e-12)
    assert mi_variable_update([0.4, 0.4]) > 0.4
    assert mi_check_update([0.4, 0.4]) < 0.4
    assert mi_variable_update([0.3, 0.0]) == pytest.approx(0.3, abs=1e-12)
    assert mi_check_update([0.3, 1.0]) == pytest.approx(0.3, abs=1e-6)


def _small_spec():
    return BmstSpec(BasicCodeSpec("repetition", 2, 1), 2, 20, 0)


def test_window_exit_decode_brackets_the_transition():
    spec = _small_spec()
    good = window_exit_decode(spec, 6, 4.3, 1e-4)
    assert good.success and good.failed_layer is None
    assert len(good.ber_estimates) == spec.L
    assert max(good.ber_estimates) < 1e-4
    bad = window_exit_decode(spec, 6, 3.8, 1e-4)
    assert not bad.success
    assert bad.failed_layer == 0


def test_threshold_decreases_with_window_and_frozen_values():
    spec = _small_spec()
    t2 = threshold_search(ThresholdQuery(spec, 2, 1e-4)).threshold_db
    t6 = threshold_search(ThresholdQuery(spec, 6, 1e-4)).threshold_db
    assert t2 == pytest.approx(4.7782, abs=2e-3)
    assert t6 == pytest.approx(4.0711, abs=2e-3)
    assert t6 < t2
    assert t6 > shannon_limit(float(rate_bmst(spec)))


def test_threshold_rises_with_stricter_target():
    spec = _small_spec()
    loose = threshold_search(ThresholdQuery(spec, 4, 1e-2)).threshold_db
    tight = threshold_search(ThresholdQuery(spec, 4, 1e-5)).threshold_db
    assert loose < tight


def test_bisect_threshold_machinery():
    calls = []

    def evaluate(db):
        calls.append(db)
        return db >= 2.34

    res = bisect_threshold(evaluate, start_db=0.0, tol_db=0.001)
    assert res.threshold_db == pytest.approx(2.34, abs=1e-3)
    assert res.trace[0] == (0.0, False)
    assert bisect_threshold(lambda db: True, start_db=1.5).threshold_db == 1.5
    with pytest.raises(NoThresholdError):
        bisect_threshold(lambda db: False, start_db=0.0, max_db=2.0)


def test_window_exit_validation():
    spec = _small_spec()
    with pytest.raises(DomainError):
        window_exit_decode(spec, -1, 2.0, 1e-4)
    with pytest.raises(DomainError):
        window_exit_decode(spec, 2, 2.0, 0.9)
