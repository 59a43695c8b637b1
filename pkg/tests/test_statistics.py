import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_problem
from encomp.kernels import KernelSpec, TrimRule, build_context
from encomp.model import validate_sample
from encomp.statistics import (
    ALL_KINDS,
    StatisticKind,
    bias_corrected_fit,
    compute_all,
    compute_statistic,
    icm_statistic,
    lr_residuals,
    lr_statistic,
)
from encomp.weighting import WeightSpec, build_weight_matrix, transform_x

# two-point fit (Y={0,2}, W={0,1}, h=1, Gaussian), mpmath at 30 digits
MHAT_2PT = (0.755081337596290870722198868509, 1.24491866240370912927780113149)
MBAR_2PT = (0.301233870709228322922854780925, 0.339679134211347704814921471945)
MTILDE_2PT = (0.570147826386203785167186956934, 1.42985217361379621483281304307)


def test_kind_serialization():
    assert [k.value for k in StatisticKind] == ["icm", "bc", "lr"]
    assert StatisticKind.parse_list("bc, lr,bc") == [StatisticKind.BC, StatisticKind.LR]
    with pytest.raises(ValueError):
        StatisticKind.parse_list("foo")


def test_bias_corrected_two_point():
    ctx = build_context([[0.0], [1.0]], KernelSpec(1.0))
    res = bias_corrected_fit(np.array([0.0, 2.0]), ctx)
    np.testing.assert_allclose(res.mhat, MHAT_2PT, rtol=0, atol=1e-12)
    np.testing.assert_allclose(res.mbar, MBAR_2PT, rtol=0, atol=1e-12)
    np.testing.assert_allclose(res.mtilde, MTILDE_2PT, rtol=0, atol=1e-12)
    np.testing.assert_allclose(res.eps_tilde, res.eps_hat + res.bias, atol=1e-15)


def test_bias_corrected_constant_response():
    _, ctx, _, _ = random_problem(1, n=12)
    res = bias_corrected_fit(np.full(12, -1.25), ctx)
    np.testing.assert_allclose(res.mhat, -1.25, rtol=1e-14)
    np.testing.assert_allclose(res.bias, 0.0, atol=1e-14)
    np.testing.assert_allclose(res.eps_tilde, 0.0, atol=1e-14)


def test_trimmed_point_drops_out_of_second_stage():
    sample, ctx, _, _ = random_problem(2, n=10, trim_alpha=0.1)
    k = int(np.flatnonzero(ctx.trim == 0)[0])
    res = bias_corrected_fit(sample.y, ctx)
    mhat_changed = res.mhat.copy()
    mhat_changed[k] += 100.0
    np.testing.assert_allclose(ctx.gram @ (mhat_changed * ctx.trim), res.mbar, rtol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_bias_corrected_matches_brute_force(seed):
    sample, ctx, _, _ = random_problem(seed, n=12, p=2, trim_alpha=0.2)
    f, mhat, mbar, mtil = oracles.fit(sample.y.tolist(), sample.w.tolist(), ctx.spec.h, ctx.trim.tolist())
    res = bias_corrected_fit(sample, ctx)
    np.testing.assert_allclose(res.mhat, mhat, rtol=1e-12)
    np.testing.assert_allclose(res.mbar, mbar, rtol=1e-12)
    np.testing.assert_allclose(res.mtilde, mtil, rtol=1e-12, atol=1e-12)


def test_icm_trivial_cases():
    A = build_weight_matrix([[0.0], [0.0]])
    assert icm_statistic([0.0, 0.0], A) == 0.0
    assert icm_statistic([1.0, 1.0], A) == pytest.approx(2.0, abs=1e-15)


def test_icm_matches_double_sum():
    sample, ctx, xt, A = random_problem(11, n=15, trim_alpha=0.1)
    eps = np.random.default_rng(0).normal(size=15)
    expected = oracles.icm(eps.tolist(), ctx.trim.tolist(), xt.tolist())
    assert icm_statistic(eps, A) == pytest.approx(expected, rel=1e-12)


def test_lr_zero_residuals():
    _, ctx, _, A = random_problem(3)
    assert lr_statistic(np.zeros(15), ctx, A) == 0.0


def test_lr_flat_smoother_limit():
    sample, _, xt, _ = random_problem(4, n=15)
    ctx = build_context(sample.w, KernelSpec(1e6))
    A = build_weight_matrix(xt, ctx.trim)
    eps = np.random.default_rng(1).normal(size=15)
    centered = eps - eps.mean()
    assert lr_statistic(eps, ctx, A) == pytest.approx(centered @ A.a_mat @ centered, rel=1e-9)


@pytest.mark.parametrize("trim_alpha", [None, 0.15])
def test_lr_matches_quadrature(trim_alpha):
    sample, ctx, xt, A = random_problem(5, n=20, trim_alpha=trim_alpha)
    eps = np.random.default_rng(2).normal(size=20)
    expected = oracles.lr_quadrature(eps, ctx.trim, sample.w.tolist(), xt.tolist(), ctx.spec.h)
    assert lr_statistic(eps, ctx, A) == pytest.approx(expected, rel=1e-6)


def test_lr_equals_printed_three_term_form_without_trimming():
    _, ctx, _, A = random_problem(6, n=18)
    e = np.random.default_rng(3).normal(size=18)
    K, Am = ctx.kmat, A.a_mat
    three = e @ Am @ e - 2 * e @ Am @ K @ e + e @ K.T @ Am @ K @ e
    assert lr_statistic(e, ctx, A) == pytest.approx(three, rel=1e-10)


def test_lr_residuals_definition():
    _, ctx, _, _ = random_problem(7, n=10, trim_alpha=0.2)
    e = np.random.default_rng(4).normal(size=10)
    te = e * ctx.trim
    np.testing.assert_allclose(lr_residuals(e, ctx), (np.eye(10) - ctx.kmat) @ te, atol=1e-14)


def test_constant_response_all_statistics_zero():
    sample, ctx, _, A = random_problem(8, n=16)
    for kind in ALL_KINDS:
        assert abs(compute_statistic(kind, np.full(16, 4.0), ctx, A)) < 1e-10


def test_bc_dispatch_is_icm_on_eps_tilde():
    sample, ctx, _, A = random_problem(9, n=15, trim_alpha=0.1)
    eps_t = bias_corrected_fit(sample, ctx).eps_tilde
    assert compute_statistic("bc", sample, ctx, A) == icm_statistic(eps_t, A)


def test_compute_all_matches_single_dispatch():
    sample, ctx, _, A = random_problem(10, n=15)
    allst = compute_all(ALL_KINDS, sample.y, ctx, A)
    for kind in ALL_KINDS:
        assert allst[kind] == compute_statistic(kind, sample.y, ctx, A)


def test_matrix_responses_are_columnwise():
    sample, ctx, _, A = random_problem(12, n=15, trim_alpha=0.1)
    Y = np.random.default_rng(5).normal(size=(15, 4))
    for kind in ALL_KINDS:
        batch = compute_statistic(kind, Y, ctx, A)
        single = [compute_statistic(kind, Y[:, b], ctx, A) for b in range(4)]
        np.testing.assert_allclose(batch, single, rtol=1e-13)


def test_constant_x_gives_squared_mean():
    rng = np.random.default_rng(13)
    n = 14
    ctx = build_context(rng.normal(size=(n, 1)), KernelSpec(0.7))
    A = build_weight_matrix(np.zeros((n, 1)), ctx.trim, WeightSpec("none"))
    e = rng.normal(size=n)
    assert icm_statistic(e, A) == pytest.approx(n * e.mean() ** 2, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(3, 30), st.sampled_from([None, 0.1, 0.3]))
def test_nonnegative(seed, n, trim_alpha):
    sample, ctx, _, A = random_problem(seed, n=n, trim_alpha=trim_alpha)
    y = np.random.default_rng(seed + 1).standard_cauchy(size=n)
    for kind in ALL_KINDS:
        assert compute_statistic(kind, y, ctx, A) >= -1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.floats(-1e3, 1e3))
def test_location_shift(seed, c):
    sample, ctx, _, A = random_problem(seed, n=15)
    base = bias_corrected_fit(sample.y, ctx)
    shifted = bias_corrected_fit(sample.y + c, ctx)
    np.testing.assert_allclose(shifted.mhat, base.mhat + c, atol=1e-10 * max(1, abs(c)))
    np.testing.assert_allclose(shifted.eps_hat, base.eps_hat, atol=1e-10)
    np.testing.assert_allclose(shifted.eps_tilde, base.eps_tilde, atol=1e-10)
    for kind in ALL_KINDS:
        assert compute_statistic(kind, sample.y + c, ctx, A) == pytest.approx(
            compute_statistic(kind, sample.y, ctx, A), abs=1e-10
        )


def test_oracle_equivalence_multivariate():
    # p = 2 smoothing and d = 2 weighting regressors, trimming active
    sample, ctx, xt, A = random_problem(14, n=12, p=2, d=2, trim_alpha=0.2)
    _, mhat, _, mtil = oracles.fit(sample.y.tolist(), sample.w.tolist(), ctx.spec.h, ctx.trim.tolist())
    eps_hat = sample.y - np.array(mhat)
    eps_til = sample.y - np.array(mtil)
    t = ctx.trim.tolist()
    assert compute_statistic("icm", sample, ctx, A) == pytest.approx(oracles.icm(eps_hat.tolist(), t, xt.tolist()), rel=1e-10)
    assert compute_statistic("bc", sample, ctx, A) == pytest.approx(oracles.icm(eps_til.tolist(), t, xt.tolist()), rel=1e-10)
