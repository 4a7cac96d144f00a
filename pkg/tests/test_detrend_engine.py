import numpy as np
import pytest

from mfadcca import detrend_engine as de


# ---------------------------------------------------------------- profiles

def test_profile_hand_example():
    # mean of [1,-1,1,-1] is 0, so the profile is the plain partial sums
    prof = de.build_profile(np.array([1.0, -1.0, 1.0, -1.0]))
    np.testing.assert_array_equal(prof.values, [1.0, 0.0, 1.0, 0.0])
    assert prof.origin_length == 4
    assert len(prof) == 4


def test_profile_centering_kills_shifts():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(500)
    a = de.build_profile(x)
    b = de.build_profile(x + 17.5)
    np.testing.assert_allclose(a.values, b.values, atol=1e-9)
    assert abs(a.values[-1]) < 1e-9  # centered cumsum returns to zero


def test_profile_rejects_scalars_and_short_input():
    with pytest.raises(ValueError):
        de.build_profile(np.array([1.0]))
    with pytest.raises(ValueError):
        de.build_profile(np.ones((3, 3)))


# ------------------------------------------------------------- index proxy

def test_index_proxy_doubles_per_log2_step():
    proxy = de.build_index_proxy(np.log(np.array([2.0, 2.0, 2.0])))
    np.testing.assert_allclose(proxy.values, [2.0, 4.0, 8.0])


def test_index_proxy_reproduces_price_path():
    rng = np.random.default_rng(11)
    prices = 50.0 * np.exp(np.cumsum(0.01 * rng.standard_normal(300)))
    returns = np.diff(np.log(prices), prepend=np.log(prices[0]))
    proxy = de.build_index_proxy(returns)
    np.testing.assert_allclose(proxy.values, prices / prices[0], rtol=1e-12)


def test_index_proxy_requires_finite_increments():
    with pytest.raises(ValueError):
        de.build_index_proxy(np.array([0.1, np.nan, 0.2]))


# ------------------------------------------------------------ segmentation

def test_two_sided_plan_layout():
    plan = de.two_sided_plan(10, 3)
    # forward tiles the prefix, backward tiles the suffix nearest-end first
    np.testing.assert_array_equal(plan.starts, [0, 3, 6, 7, 4, 1])
    assert plan.count == 6 and plan.length == 3


def test_two_sided_plan_properties():
    for n, s in [(100, 7), (64, 8), (1669, 20), (1669, 166)]:
        plan = de.two_sided_plan(n, s)
        n_s = n // s
        assert plan.count == 2 * n_s
        assert plan.starts.min() == min(0, n - n_s * s) or plan.starts.min() >= 0
        assert plan.starts.max() + s <= n
        fwd, bwd = plan.starts[:n_s], plan.starts[n_s:]
        np.testing.assert_array_equal(fwd, np.arange(n_s) * s)
        np.testing.assert_array_equal(bwd, n - np.arange(1, n_s + 1) * s)


def test_two_sided_plan_exact_tiling_has_mirror_segments():
    plan = de.two_sided_plan(12, 4)  # divides evenly: passes coincide
    np.testing.assert_array_equal(np.sort(plan.starts), [0, 0, 4, 4, 8, 8])


def test_overlap_plan_layout():
    plan = de.overlap_plan(10, 3)
    np.testing.assert_array_equal(plan.starts, np.arange(7))
    assert plan.length == 4 and plan.mode == "overlap"


def test_plan_scale_bounds():
    with pytest.raises(ValueError):
        de.two_sided_plan(10, 1)
    with pytest.raises(ValueError):
        de.two_sided_plan(10, 11)
    with pytest.raises(ValueError):
        de.overlap_plan(10, 10)


def test_segment_matrix_gathers_rows():
    vals = np.arange(10.0)
    plan = de.two_sided_plan(10, 3)
    mat = de.segment_matrix(vals, plan)
    assert mat.shape == (6, 3)
    np.testing.assert_array_equal(mat[0], [0, 1, 2])
    np.testing.assert_array_equal(mat[3], [7, 8, 9])  # first backward segment


# --------------------------------------------------------------- detrending

def test_poly_residuals_annihilate_exact_polynomials():
    t = np.arange(25.0)
    seg = 3.0 - 2.0 * t + 0.5 * t ** 2
    res = de.poly_residuals(seg[None, :], order=2)
    assert np.abs(res).max() < 1e-9


def test_poly_residuals_keep_higher_degree():
    t = np.linspace(-1, 1, 40)
    res = de.poly_residuals((t ** 3)[None, :], order=2)
    assert np.abs(res).max() > 1e-3  # cubic survives quadratic detrending


def test_poly_residuals_linear():
    res = de.poly_residuals(np.array([[1.0, 2.0, 3.0, 4.0]]), order=1)
    np.testing.assert_allclose(res, 0.0, atol=1e-12)


def test_poly_residuals_degenerate_length():
    with pytest.raises(de.DegenerateSegmentError):
        de.poly_residuals(np.zeros((1, 3)), order=2)


def test_poly_residuals_batch_matches_rowwise():
    rng = np.random.default_rng(0)
    batch = rng.standard_normal((8, 30))
    whole = de.poly_residuals(batch, order=2)
    rows = np.vstack([de.poly_residuals(row[None, :], order=2) for row in batch])
    np.testing.assert_allclose(whole, rows, atol=1e-12)


# ------------------------------------------------------ trend classification

def test_classify_monotone_paths():
    n = 200
    up = de.build_index_proxy(np.full(n, 0.01))
    down = de.build_index_proxy(np.full(n, -0.01))
    flat = de.build_index_proxy(np.zeros(n))
    plan = de.two_sided_plan(n, 20)
    assert np.all(de.classify_trend(up, plan) == de.UP)
    assert np.all(de.classify_trend(down, plan) == de.DOWN)
    assert np.all(de.classify_trend(flat, plan) == de.FLAT)


def test_classify_matches_direct_index_regression():
    rng = np.random.default_rng(7)
    x = 0.02 * rng.standard_normal(600)
    proxy = de.build_index_proxy(x)
    plan = de.two_sided_plan(600, 25)
    got = de.classify_trend(proxy, plan)
    idx = de.segment_matrix(proxy.values, plan)  # small increments: no overflow
    t = np.arange(25)
    want = np.array([np.sign(np.polyfit(t, row, 1)[0]) for row in idx])
    np.testing.assert_array_equal(got, want)


def test_classify_survives_extreme_cumulative_drift():
    # cumulative log-index reaches ~3e4; the plain index would overflow
    n = 4096
    x = np.full(n, 8.0)
    x[::2] = 7.9  # strictly rising path with wiggle
    proxy = de.build_index_proxy(x)
    plan = de.two_sided_plan(n, 64)
    signs = de.classify_trend(proxy, plan)
    assert np.all(np.isfinite(signs))
    assert np.all(signs == de.UP)


def test_segment_slopes_sign_invariant_under_global_log_shift():
    rng = np.random.default_rng(13)
    x = 0.05 * rng.standard_normal(512)
    plan = de.two_sided_plan(512, 32)
    a = np.sign(de.segment_slopes(de.build_index_proxy(x), plan))
    shifted = de.IndexProxy(log_values=de.build_index_proxy(x).log_values + 300.0)
    b = np.sign(de.segment_slopes(shifted, plan))
    np.testing.assert_array_equal(a, b)


# -------------------------------------------------------- detrended covariance

def test_detrended_cov_hand_example():
    # raw arrays, order 0 (mean removal), one forward + one backward segment
    x = np.array([1.0, -1.0, 1.0, -1.0])
    plan = de.two_sided_plan(4, 4)
    f2 = de.detrended_cov(x, x, plan, order=0, mode="abs")
    np.testing.assert_allclose(f2, [1.0, 1.0])  # mean |x_i|^2 = 1
    f2s = de.detrended_cov(x, -x, plan, order=0, mode="signed")
    np.testing.assert_allclose(f2s, [-1.0, -1.0])


def test_detrended_cov_self_equals_abs_of_signed():
    rng = np.random.default_rng(5)
    prof = de.build_profile(rng.standard_normal(240))
    plan = de.two_sided_plan(240, 30)
    signed = de.detrended_cov(prof, prof, plan, order=2, mode="signed")
    absval = de.detrended_cov(prof, prof, plan, order=2, mode="abs")
    np.testing.assert_allclose(signed, absval)  # squares are nonnegative
    assert np.all(absval > 0)


def test_detrended_cov_bilinear_scaling():
    rng = np.random.default_rng(8)
    xv = rng.standard_normal(300)
    yv = rng.standard_normal(300)
    plan = de.two_sided_plan(300, 25)
    base = de.detrended_cov(xv, yv, plan, order=2, mode="signed")
    scaled = de.detrended_cov(2.0 * xv, -3.0 * yv, plan, order=2, mode="signed")
    np.testing.assert_allclose(scaled, -6.0 * base, rtol=1e-12)


def test_detrended_cov_ignores_quadratic_trend_at_order_2():
    rng = np.random.default_rng(9)
    xv = rng.standard_normal(300)
    t = np.arange(300.0)
    plan = de.two_sided_plan(300, 50)
    base = de.detrended_cov(xv, xv, plan, order=2, mode="abs")
    bent = xv + 0.01 * t ** 2 - 0.3 * t
    got = de.detrended_cov(bent, bent, plan, order=2, mode="abs")
    np.testing.assert_allclose(got, base, rtol=1e-6, atol=1e-9)


def test_detrended_cov_rejects_short_segments_and_bad_mode():
    plan = de.two_sided_plan(9, 3)
    with pytest.raises(de.DegenerateSegmentError):
        de.detrended_cov(np.arange(9.0), np.arange(9.0), plan, order=2)
    with pytest.raises(ValueError):
        de.detrended_cov(np.arange(9.0), np.arange(9.0), plan, order=1, mode="weird")


def test_detrended_cov_cauchy_schwarz_per_segment():
    rng = np.random.default_rng(21)
    xv = rng.standard_normal(500)
    yv = rng.standard_normal(500)
    plan = de.two_sided_plan(500, 40)
    fxy = de.detrended_cov(xv, yv, plan, order=2, mode="signed")
    fxx = de.detrended_cov(xv, xv, plan, order=2, mode="abs")
    fyy = de.detrended_cov(yv, yv, plan, order=2, mode="abs")
    assert np.all(fxy ** 2 <= fxx * fyy * (1 + 1e-12))
