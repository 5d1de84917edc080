import numpy as np
import pytest

from bmst.analysis import RepetitionPerformanceCurve, genie_lower_bound
from bmst.basic_codes import (REPETITION, SINGLE_PARITY_CHECK, BasicCodeSpec,
                              siso_decode_basic)
from bmst.channel import ChannelParams, awgn_llr, frame_rng, modulate_bpsk
from bmst.core import BmstCode, BmstSpec, deinterleave, rate_bmst
from bmst.errors import ConfigError, InputShapeError
from bmst.llr import boxplus
from bmst.window_decoder import (ChainDecoder, WindowConfig, decode_frame,
                                 entropy_stop, process_window)


def _random_frame(spec, ebn0_db, seed):
    code = BmstCode(spec)
    rng = frame_rng(seed, 0, 0)
    u = rng.integers(0, 2, size=(spec.L, spec.basic.k)).astype(np.uint8)
    params = ChannelParams(ebn0_db, float(rate_bmst(spec)))
    llr = awgn_llr(modulate_bpsk(code.encode(u)), params, rng)
    return code, u, llr


def test_window_config_validation():
    WindowConfig(d=0)
    with pytest.raises(ConfigError):
        WindowConfig(d=-1)
    with pytest.raises(ConfigError):
        WindowConfig(d=2, max_iters=0)
    with pytest.raises(ConfigError):
        WindowConfig(d=2, entropy_threshold=-1.0)


def test_chain_decoder_shape_check():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 3), m=1, L=4)
    code = BmstCode(spec)
    with pytest.raises(InputShapeError):
        ChainDecoder(code, np.zeros((spec.L, spec.basic.n)))


def test_plus_node_memoryless_passthrough():
    # degree-2 check node forwards the channel message unchanged
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 4), m=0, L=3, interleaver_seed=5)
    code = BmstCode(spec)
    rng = np.random.default_rng(0)
    llr = rng.normal(size=(3, 8))
    dec = ChainDecoder(code, llr)
    dec.update_plus_node(1)
    expect = deinterleave(llr[1], code.perms[0])
    np.testing.assert_allclose(dec.plus_to_eq[1, 0], expect)


def test_plus_node_zero_annihilates():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 2), m=1, L=4, interleaver_seed=5)
    code = BmstCode(spec)
    dec = ChainDecoder(code, np.zeros((5, 4)))
    dec.eq_to_plus[1, 0] = 1.7
    dec.eq_to_plus[0, 1] = -2.3
    dec.update_plus_node(1)
    np.testing.assert_allclose(dec.plus_to_eq[1, 0], 0.0)
    np.testing.assert_allclose(dec.plus_to_eq[0, 1], 0.0)


def test_plus_node_matches_brute_force_parity():
    # c = w0 xor w1 with channel evidence on c and a prior on w1;
    # exact marginal of w0 from the 2-bit enumeration
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 2), m=1, L=4, interleaver_seed=5)
    code = BmstCode(spec)
    n = spec.basic.n
    code.perms = [np.arange(n), np.arange(n)]
    rng = np.random.default_rng(3)
    ch = rng.normal(scale=2.0, size=n)
    prior_w0 = rng.normal(scale=2.0, size=n)
    llr = np.zeros((5, n))
    llr[1] = ch
    dec = ChainDecoder(code, llr)
    dec.eq_to_plus[1, 0] = prior_w0
    dec.update_plus_node(1)
    got = dec.plus_to_eq[0, 1]

    def p1(l):
        return 1.0 / (1.0 + np.exp(l))

    # P(w1=b) propto sum_{w0} P_ch(c = w0 xor b) P(w0)
    pc1, pw1 = p1(ch), p1(prior_w0)
    num0 = (1 - pc1) * (1 - pw1) + pc1 * pw1
    num1 = pc1 * (1 - pw1) + (1 - pc1) * pw1
    expect = np.log(num0) - np.log(num1)
    np.testing.assert_allclose(got, expect, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(got, boxplus(ch, prior_w0), rtol=1e-9, atol=1e-12)


def test_equal_node_sum_rule():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 2), m=1, L=4, interleaver_seed=5)
    code = BmstCode(spec)
    dec = ChainDecoder(code, np.zeros((5, 4)))
    dec.basic_to_eq[1] = 1.0
    dec.plus_to_eq[1, 0] = 2.0
    dec.plus_to_eq[1, 1] = 0.0
    dec.update_equal_node(1)
    np.testing.assert_allclose(dec.eq_to_basic[1], 2.0)
    np.testing.assert_allclose(dec.eq_to_plus[1, 0], 1.0)
    np.testing.assert_allclose(dec.eq_to_plus[1, 1], 3.0)


def test_equal_node_all_zero():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 2), m=1, L=4, interleaver_seed=5)
    code = BmstCode(spec)
    dec = ChainDecoder(code, np.zeros((5, 4)))
    dec.update_equal_node(2)
    np.testing.assert_allclose(dec.eq_to_plus[2], 0.0)
    np.testing.assert_allclose(dec.eq_to_basic[2], 0.0)


def test_equal_node_posterior_is_ml_for_repetition():
    # sum-of-inputs sign equals the exact ML decision for one bit seen
    # through several independent observations
    rng = np.random.default_rng(8)
    for _ in range(200):
        llrs = rng.normal(scale=3.0, size=4)
        p1 = 1.0 / (1.0 + np.exp(llrs))
        ml = int(np.prod(p1) > np.prod(1 - p1))
        assert int(np.sum(llrs) < 0) == ml


def test_extrinsic_exclusion_plus_and_equal():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 3), m=2, L=6, interleaver_seed=7)
    code = BmstCode(spec)
    rng = np.random.default_rng(4)
    dec = ChainDecoder(code, rng.normal(size=(8, 6)))
    dec.eq_to_plus[...] = rng.normal(size=dec.eq_to_plus.shape)
    s = 3
    dec.update_plus_node(s)
    base = dec.plus_to_eq[s, 0].copy()
    dec.eq_to_plus[s, 0] += 5.0  # perturb only the edge under test
    dec.update_plus_node(s)
    np.testing.assert_allclose(dec.plus_to_eq[s, 0], base)

    dec.basic_to_eq[s] = rng.normal(size=6)
    dec.update_equal_node(s)
    base = dec.eq_to_basic[s].copy()
    dec.basic_to_eq[s] += 3.0
    dec.update_equal_node(s)
    np.testing.assert_allclose(dec.eq_to_basic[s], base)


def test_noiseless_recovery():
    rng = np.random.default_rng(2)
    for kind, N in ((REPETITION, 2), (SINGLE_PARITY_CHECK, 4)):
        basic = BasicCodeSpec(kind, N, 6)
        spec = BmstSpec(basic, m=2, L=8, interleaver_seed=3)
        code = BmstCode(spec)
        u = rng.integers(0, 2, size=(spec.L, basic.k)).astype(np.uint8)
        llr = 50.0 * (1.0 - 2.0 * code.encode(u).astype(float))
        res = decode_frame(spec, llr, WindowConfig(d=3), code=code)
        np.testing.assert_array_equal(res.info_bits, u)


def test_memoryless_zero_delay_equals_basic_siso():
    basic = BasicCodeSpec(SINGLE_PARITY_CHECK, 3, 5)
    spec = BmstSpec(basic, m=0, L=6, interleaver_seed=9)
    code, u, llr = _random_frame(spec, 1.0, seed=21)
    res = decode_frame(spec, llr, WindowConfig(d=0), code=code)
    for t in range(spec.L):
        eff = deinterleave(np.clip(llr[t], -50.0, 50.0), code.perms[0])
        _, post = siso_decode_basic(basic, eff, np.zeros(basic.k))
        np.testing.assert_array_equal(res.info_bits[t], (post < 0).astype(np.uint8))


def test_known_tail_pins_tail_decisions():
    basic = BasicCodeSpec(REPETITION, 2, 4)
    spec = BmstSpec(basic, m=3, L=5, interleaver_seed=1)
    code, u, llr = _random_frame(spec, -2.0, seed=5)
    dec = ChainDecoder(code, llr)
    for t in range(spec.L + spec.m):
        decisions, _ = process_window(dec, t, WindowConfig(d=2))
        if t >= spec.L:
            np.testing.assert_array_equal(decisions, 0)


def test_process_window_rejects_bad_target():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 2), m=1, L=3)
    code = BmstCode(spec)
    dec = ChainDecoder(code, np.zeros((4, 4)))
    with pytest.raises(ConfigError):
        process_window(dec, 4, WindowConfig(d=1))


def test_decode_frame_deterministic():
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, 8), m=2, L=6, interleaver_seed=2)
    code, u, llr = _random_frame(spec, 1.0, seed=13)
    r1 = decode_frame(spec, llr, WindowConfig(d=4), code=code)
    r2 = decode_frame(spec, llr, WindowConfig(d=4), code=code)
    np.testing.assert_array_equal(r1.info_bits, r2.info_bits)
    np.testing.assert_array_equal(r1.iterations, r2.iterations)


def test_entropy_stop_examples():
    rng = np.random.default_rng(6)
    state = rng.normal(size=(4, 10))
    assert entropy_stop(state, state.copy(), 1e-6)
    sat = np.full((4, 10), 50.0)
    assert entropy_stop(sat, sat.copy(), 1e-6)
    assert not entropy_stop(state, np.roll(state, 1, axis=1), 1e-6)


def test_codeword_flip_symmetry():
    # flipping channel LLR signs along any valid chain output shifts the
    # decisions by the matching info bits and leaves iteration counts alone
    basic = BasicCodeSpec(REPETITION, 2, 6)
    spec = BmstSpec(basic, m=2, L=8, interleaver_seed=3)
    code, u, llr = _random_frame(spec, 1.0, seed=17)
    rng = np.random.default_rng(40)
    ustar = rng.integers(0, 2, size=(spec.L, basic.k)).astype(np.uint8)
    flipped = llr * (1.0 - 2.0 * code.encode(ustar))
    r1 = decode_frame(spec, llr, WindowConfig(d=4), code=code)
    r2 = decode_frame(spec, flipped, WindowConfig(d=4), code=code)
    np.testing.assert_array_equal(r1.info_bits ^ ustar, r2.info_bits)
    np.testing.assert_array_equal(r1.iterations, r2.iterations)


def test_all_negation_flips_decisions_memoryless():
    # with no memory the all-ones word is a chain output, so negating every
    # channel LLR complements every decision
    for kind, N in ((REPETITION, 2), (SINGLE_PARITY_CHECK, 4)):
        spec = BmstSpec(BasicCodeSpec(kind, N, 5), m=0, L=6, interleaver_seed=2)
        code, u, llr = _random_frame(spec, 2.0, seed=29)
        a = decode_frame(spec, llr, WindowConfig(d=0), code=code)
        b = decode_frame(spec, -llr, WindowConfig(d=0), code=code)
        np.testing.assert_array_equal(a.info_bits ^ 1, b.info_bits)


def test_ber_monotone_in_delay():
    basic = BasicCodeSpec(REPETITION, 2, 30)
    spec = BmstSpec(basic, m=2, L=10, interleaver_seed=4)
    code = BmstCode(spec)
    params = ChannelParams(2.0, float(rate_bmst(spec)))
    frames = 12
    bers = []
    for d in (0, 2, 6):
        errs = 0
        for f in range(frames):
            rng = frame_rng(99, 0, f)
            u = rng.integers(0, 2, size=(spec.L, basic.k)).astype(np.uint8)
            llr = awgn_llr(modulate_bpsk(code.encode(u)), params, rng)
            res = decode_frame(spec, llr, WindowConfig(d=d), code=code)
            errs += int(np.sum(res.info_bits != u))
        bers.append(errs / (frames * spec.L * basic.k))
    assert bers[0] >= bers[1] >= bers[2]
    assert bers[0] > bers[2]


def test_simulated_ber_respects_genie_bound():
    m, L, B = 1, 10, 40
    spec = BmstSpec(BasicCodeSpec(REPETITION, 2, B), m=m, L=L, interleaver_seed=4)
    code = BmstCode(spec)
    params = ChannelParams(3.0, float(rate_bmst(spec)))
    errs = bits = 0
    for f in range(25):
        rng = frame_rng(77, 0, f)
        u = rng.integers(0, 2, size=(L, B)).astype(np.uint8)
        llr = awgn_llr(modulate_bpsk(code.encode(u)), params, rng)
        res = decode_frame(spec, llr, WindowConfig(d=4), code=code)
        errs += int(np.sum(res.info_bits != u))
        bits += u.size
    ber = errs / bits
    bound = genie_lower_bound(RepetitionPerformanceCurve(2), m, L, 3.0)
    se = np.sqrt(max(ber * (1 - ber), 1e-12) / bits)
    assert ber >= bound - 3 * se
