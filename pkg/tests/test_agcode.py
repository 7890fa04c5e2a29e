import numpy as np
import pytest

from agcode import (
    ErasurePattern,
    build_code,
    compute_params,
    contains,
    contains_many,
    dual_level,
    dual_scaling_vector,
    encode,
    encode_many,
    erasure_decode,
    erasure_trial,
    family_rate,
    genmat_lines,
    iso_orthogonal,
    isodual_level,
    one_point_generator,
    one_point_scaling,
    parity_check,
    random_messages,
    rank_check,
    sample_weights,
    shorten,
    splitting_derivative,
    splitting_derivative_is_constant,
    systematic_generator,
    verify_duality,
)
from curve import SuzukiParams
from errors import CodeError, InconsistentWordError, LevelError, RankDeficientError
from linalg import rank
from riemann_roch import basis


def test_params_m1_l63():
    cp = compute_params(1, 63)
    assert (cp.n, cp.k, cp.dstar, cp.t) == (5824, 4082, 1729, 864)
    assert cp.rate == pytest.approx(0.7009, abs=1e-4)


def test_params_m1_l45_is_half_rate():
    cp = compute_params(1, 45)
    assert cp.k == 2912 == cp.n // 2


def test_params_m2_follow_closed_forms():
    cp = compute_params(2, 1023)
    assert (cp.n, cp.k, cp.dstar, cp.t) == (1301504, 1048452, 252929, 126464)


def test_params_reject_bad_levels():
    with pytest.raises(LevelError):
        compute_params(1, 64)
    with pytest.raises(LevelError):
        compute_params(1, 0)


def test_family_rate_grows():
    assert family_rate(1) == pytest.approx(4082 / 5824)
    assert family_rate(1) < family_rate(2) < family_rate(3) < 1


def test_dual_levels():
    p = SuzukiParams.for_m(1)
    assert dual_level(p, 63) == 27
    assert dual_level(p, 45) == 45
    assert dual_level(p, 27) == 63
    assert dual_level(p, 26) is None


def test_isodual_levels():
    assert isodual_level(SuzukiParams.for_m(1)) == 45
    assert isodual_level(SuzukiParams.for_m(2)) == 635
    assert iso_orthogonal(SuzukiParams.for_m(1), 27)
    assert iso_orthogonal(SuzukiParams.for_m(1), 45)
    assert not iso_orthogonal(SuzukiParams.for_m(1), 46)


def test_generator_shapes(code1, code63):
    assert code1.G.shape == (52, 5824)
    assert code63.G.shape == (4082, 5824)
    assert type(code1.G).order == 4096


def test_constant_row_is_all_ones(code1, code63):
    for code in (code1, code63):
        assert np.all(code.G[code.constant_row()] == 1)


def test_memory_budget(curve):
    with pytest.raises(CodeError, match="GiB"):
        build_code(curve, 63, memory_budget=1 << 20)


@pytest.mark.parametrize("ell,k", [(1, 52), (2, 117), (3, 182)])
def test_rank_equals_dimension(code_cache, ell, k):
    assert rank_check(code_cache(ell)) == k


def test_encode_basics(code1):
    assert not np.any(encode(code1, [0] * code1.k))
    for j in (0, 7, 51):
        unit = [0] * code1.k
        unit[j] = 1
        assert np.array_equal(encode(code1, unit), code1.G[j])


def test_encode_is_linear(code1, rng):
    a, b = random_messages(code1, 2, rng)
    assert np.array_equal(encode(code1, a + b), encode(code1, a) + encode(code1, b))


def test_encode_length_mismatch(code1):
    with pytest.raises(CodeError):
        encode(code1, [1] * (code1.k - 1))
    with pytest.raises(CodeError):
        encode_many(code1, code1.GF.Zeros((2, code1.k + 1)))


def test_systematic_encoding_shows_message(code1, rng):
    R, pivots = systematic_generator(code1)
    assert len(pivots) == code1.k
    msg = random_messages(code1, 1, rng)[0]
    word = encode(code1, msg, systematic=True)
    assert np.array_equal(word[pivots], msg)
    stacked = code1.GF(np.vstack([code1.G.view(np.ndarray), word.view(np.ndarray)[np.newaxis, :]]))
    assert rank(stacked) == code1.k


def test_random_messages_are_nonzero(code1, rng):
    msgs = random_messages(code1, 30, rng)
    assert msgs.shape == (30, code1.k)
    assert np.all(np.any(msgs.view(np.ndarray), axis=1))


def test_sampled_weights_meet_designed_distance_l1(code1, rng):
    weights = sample_weights(code1, 200, rng)
    assert len(weights) == 200
    assert weights.min() >= 5759


def test_sampled_weights_meet_designed_distance_l63(code63, rng):
    assert sample_weights(code63, 200, rng).min() >= 1729


def test_erasure_decode_without_erasures(code1, rng):
    msg = random_messages(code1, 1, rng)[0]
    word = encode(code1, msg).tolist()
    assert np.array_equal(erasure_decode(code1, word), msg)


def test_erasure_decode_at_designed_limit(code1, rng):
    for _ in range(5):
        trial = erasure_trial(code1, 5758, rng)
        assert trial.outcome == "recovered"
        assert not trial.silent_failure


def test_too_many_erasures_reports_rank(code1, rng):
    msg = random_messages(code1, 1, rng)[0]
    word = encode(code1, msg).tolist()
    received = [None] * code1.n
    for i in range(code1.k - 1):
        received[i] = word[i]
    with pytest.raises(RankDeficientError) as info:
        erasure_decode(code1, received)
    assert info.value.needed == code1.k
    assert info.value.rank < code1.k


def test_inconsistent_word_is_detected(code1, rng):
    msg = random_messages(code1, 1, rng)[0]
    word = encode(code1, msg).tolist()
    word[100] ^= 1
    with pytest.raises(InconsistentWordError):
        erasure_decode(code1, word)


def test_erasure_decode_length_mismatch(code1):
    with pytest.raises(CodeError):
        erasure_decode(code1, [0] * 10)


@pytest.mark.slow
def test_erasure_decode_l63(code63, rng):
    for _ in range(5):
        assert erasure_trial(code63, 1728, rng).outcome == "recovered"
    assert not erasure_trial(code63, 1729, rng).silent_failure


def test_scaling_vector(curve, code1):
    h = dual_scaling_vector(code1)
    assert h.shape == (5824,)
    assert np.all(h != 0)
    xs = code1.points.xs
    # h depends on x only
    for x in np.unique(xs)[:40].tolist():
        assert len(np.unique(h[xs == x].view(np.ndarray))) == 1
    # h t'(x) = (x^8 + x)^91
    T, derivative = splitting_derivative(curve)
    x = code1.points.x_array()
    correction = code1.GF(derivative[np.searchsorted(T, xs)])
    assert np.array_equal(h * correction, (x**8 + x) ** 91)


def test_splitting_derivative_is_nonzero(curve):
    T, derivative = splitting_derivative(curve)
    assert len(T) == len(derivative) == 736
    assert np.all(derivative != 0)


def test_duality_l63(code63, rng):
    report = verify_duality(code63, 1000, rng)
    assert (report.ell_dual, report.k, report.k_dual) == (27, 4082, 1742)
    assert report.dimensions_add_up
    assert report.failures == 0
    assert report.first_counterexample is None
    assert report.passed


def test_isodual_l45(code45, rng):
    report = verify_duality(code45, 1000, rng)
    assert (report.ell_dual, report.k, report.k_dual) == (45, 2912, 2912)
    assert report.passed


def test_duality_needs_large_level(code1, rng):
    with pytest.raises(LevelError):
        verify_duality(code1, 10, rng)
    with pytest.raises(LevelError):
        contains(code1, [0] * code1.n)


def test_parity_check_annihilates_generator(code27):
    H = parity_check(code27)
    assert H.shape == (4082, 5824)
    assert not np.any(code27.G[:12] @ H[:40].T)
    assert not np.any(code27.G[-12:] @ H[-40:].T)


def test_membership(code27, rng):
    msgs = random_messages(code27, 3, rng)
    words = encode_many(code27, msgs)
    assert contains_many(code27, words).all()
    assert contains(code27, [0] * code27.n)
    bumped = words[0].copy()
    bumped[5] += code27.GF(1)
    assert not contains(code27, bumped)


def test_shorten(code1):
    dropped = list(range(0, 100, 10))
    S, keep = shorten(code1, dropped)
    assert S.shape == (42, 5814)
    assert len(keep) == 5814
    assert not np.isin(dropped, keep).any()
    # zero-extended rows are codewords
    extended = code1.GF.Zeros((S.shape[0], code1.n))
    extended[:, keep] = S
    stacked = code1.GF(np.vstack([code1.G.view(np.ndarray), extended.view(np.ndarray)]))
    assert rank(stacked) == code1.k


@pytest.mark.slow
def test_shortening_keeps_orthogonality(code27):
    dropped = list(range(0, 300, 7))
    S, keep = shorten(code27, dropped)
    assert not np.any(S @ parity_check(code27)[:, keep].T)


@pytest.mark.slow
def test_full_gram_product_l63(code63, rng):
    report = verify_duality(code63, 10, rng, full=True)
    assert report.full_zero is True


def test_genmat_lines(code1):
    lines = genmat_lines(code1)
    assert len(lines) == 1 + code1.k
    header = lines[0]
    assert header.startswith("# m=1 ell=1 n=5824 k=52 modulus=1053 point_order_sha256=")
    assert header.endswith(code1.points.order_hash())
    row = lines[1 + code1.constant_row()].split()
    assert row == ["001"] * 5824
    assert all(len(tok) == 3 for tok in lines[1].split())


def test_erasure_pattern(code1, rng):
    pattern = ErasurePattern.random(code1.n, 10, rng)
    assert len(pattern) == 10
    assert pattern.guaranteed(code1)
    assert not ErasurePattern(frozenset(range(5759))).guaranteed(code1)
    received = pattern.apply(code1.G[0])
    assert sum(v is None for v in received) == 10
    assert all(received[i] is None for i in pattern.indices)
    with pytest.raises(CodeError):
        ErasurePattern(frozenset({code1.n})).apply(code1.G[0])


def test_splitting_derivative_is_not_constant_at_m1(curve):
    assert not splitting_derivative_is_constant(curve)
    _, derivative = splitting_derivative(curve)
    assert len(np.unique(derivative)) > 1


def test_uncorrected_scaling_misses_the_dual(curve, code63, rng):
    words = encode_many(code63, random_messages(code63, 3, rng))
    x = code63.points.x_array()
    uncorrected = code63.evaluator.rows(basis(curve.params, 27).monomials) * ((x**8 + x) ** 91)[np.newaxis, :]
    assert not np.any(parity_check(code63) @ words.T)
    assert np.any(uncorrected @ words.T)


@pytest.mark.parametrize("ell", [1, 27])
def test_one_point_generator_is_column_scaled_g(code_cache, ell):
    code = code_cache(ell)
    P = one_point_generator(code)
    scaling = one_point_scaling(code)
    assert P.shape == code.G.shape
    assert np.all(scaling != 0)
    assert np.array_equal(P, code.G * scaling[np.newaxis, :])
    assert np.all(P[code.constant_row()] == scaling)
