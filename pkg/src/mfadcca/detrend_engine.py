"""Shared geometry for detrended (cross-)fluctuation methods.

Provides profiles, the multiplicative index proxy, segmentation plans
(two-sided non-overlapping and overlapping), local polynomial detrending
and trend-sign classification. Everything downstream (MF-ADCCA, the DCCA
coefficient) is built on these primitives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

UP, DOWN, FLAT = 1, -1, 0


@dataclass(frozen=True)
class Profile:
    """Cumulative sum of a mean-centered increment series.

    values[k] = sum_{t<=k} (x_t - mean(x)), so the last entry is zero up
    to rounding.
    """

    values: np.ndarray
    origin_length: int

    def __len__(self) -> int:
        return self.origin_length


@dataclass(frozen=True)
class IndexProxy:
    """Multiplicative index reconstructed from increments.

    I(0) = 1 and I(k) = I(k-1) * exp(x_k). Only the logarithm is stored:
    for unit-variance synthetic inputs the plain index overflows double
    precision long before N = 2^16, while every consumer (trend-sign
    classification) is invariant under positive rescaling and can work
    on a per-segment rescaled index.
    """

    log_values: np.ndarray  # log I(k) for k = 1..N

    def __len__(self) -> int:
        return len(self.log_values)

    @property
    def values(self) -> np.ndarray:
        """The index I(1..N) itself; may overflow for extreme inputs."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_values)


@dataclass(frozen=True)
class SegmentationPlan:
    """Window layout at a single scale.

    two_sided_nonoverlap: 2*floor(N/s) segments of length s, first tiling
    from the start, then the same count tiling backwards from the end.
    overlap: N - s windows of length s + 1 with unit stride.
    """

    scale: int
    starts: np.ndarray
    length: int
    mode: str = field(default="two_sided_nonoverlap")

    @property
    def count(self) -> int:
        return len(self.starts)


class DegenerateSegmentError(ValueError):
    """Segment too short for the requested polynomial order."""


def build_profile(x: np.ndarray) -> Profile:
    """Mean-centered cumulative sum of an increment series."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("profile requires a 1-D series of length >= 2")
    return Profile(values=np.cumsum(x - x.mean()), origin_length=len(x))


def build_index_proxy(x: np.ndarray) -> IndexProxy:
    """Multiplicative index proxy of an increment series.

    When x holds log-returns the proxy reproduces the price path up to a
    constant factor: I(k) = p_k / p_0.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("index proxy requires finite increments")
    return IndexProxy(log_values=np.cumsum(x))


def two_sided_plan(n: int, s: int) -> SegmentationPlan:
    """Non-overlapping two-pass segmentation: forward tiles the prefix,
    backward tiles the suffix in reverse order of distance from the end."""
    if s < 2 or s > n:
        raise ValueError(f"scale {s} out of range for series length {n}")
    n_s = n // s
    fwd = np.arange(n_s) * s
    bwd = n - (np.arange(1, n_s + 1)) * s
    return SegmentationPlan(scale=s, starts=np.concatenate([fwd, bwd]), length=s)


def overlap_plan(n: int, s: int) -> SegmentationPlan:
    """Overlapping windows of length s + 1 with unit stride: N - s of them."""
    if s < 1 or s + 1 > n:
        raise ValueError(f"scale {s} out of range for series length {n}")
    return SegmentationPlan(scale=s, starts=np.arange(n - s), length=s + 1, mode="overlap")


@lru_cache(maxsize=256)
def _poly_basis(length: int, order: int) -> np.ndarray:
    """Orthonormal basis of degree-`order` polynomials sampled on `length`
    points. QR of the Vandermonde matrix on [-1, 1]; the span is identical
    to polynomials in the raw index but the projection stays well
    conditioned at large scales."""
    if length <= order + 1:
        raise DegenerateSegmentError(
            f"segment of length {length} cannot fit a degree-{order} trend"
        )
    t = np.linspace(-1.0, 1.0, length)
    v = np.vander(t, order + 1, increasing=True)
    q, _ = np.linalg.qr(v)
    return q


def poly_residuals(segments: np.ndarray, order: int) -> np.ndarray:
    """Least-squares polynomial residuals for a batch of equal-length segments.

    Parameters
    ----------
    segments : array, shape (m, L)
    order : polynomial degree of the local trend

    Returns
    -------
    array, shape (m, L): segment minus its fitted trend.
    """
    segments = np.atleast_2d(np.asarray(segments, dtype=float))
    q = _poly_basis(segments.shape[1], order)
    return segments - (segments @ q) @ q.T


def segment_matrix(values: np.ndarray, plan: SegmentationPlan) -> np.ndarray:
    """Gather the planned segments of a value array into a (count, L) matrix."""
    if plan.mode == "overlap":
        from numpy.lib.stride_tricks import sliding_window_view

        return sliding_window_view(values, plan.length)[plan.starts]
    idx = plan.starts[:, None] + np.arange(plan.length)[None, :]
    return values[idx]


def _slope_stats(length: int) -> tuple[np.ndarray, float]:
    t = np.arange(length, dtype=float)
    t -= t.mean()
    return t, float(np.dot(t, t))


def segment_slopes(proxy: IndexProxy, plan: SegmentationPlan) -> np.ndarray:
    """OLS slope of the index within each planned segment.

    The fit is a + b*i over the segment's index positions. Each segment is
    rescaled by exp(-max log I) before exponentiating; the positive factor
    leaves the slope's sign (the only consumed quantity) unchanged and
    avoids overflow.
    """
    logs = segment_matrix(proxy.log_values, plan)
    scaled = np.exp(logs - logs.max(axis=1, keepdims=True))
    t, tt = _slope_stats(plan.length)
    return scaled @ t / tt


def classify_trend(proxy: IndexProxy, plan: SegmentationPlan) -> np.ndarray:
    """Trend sign per segment: UP for positive fitted slope, DOWN for
    negative, FLAT for an exactly zero slope (constant proxy)."""
    b = segment_slopes(proxy, plan)
    return np.sign(b).astype(np.int8)


def detrended_cov(
    x_profile: Profile | np.ndarray,
    y_profile: Profile | np.ndarray,
    plan: SegmentationPlan,
    order: int = 2,
    mode: str = "abs",
) -> np.ndarray:
    """Per-segment detrended covariance of two profiles.

    abs mode (non-overlapping fluctuation analysis):
        f2(s, v) = (1/L) * sum |X - Xfit| * |Y - Yfit|
    signed mode (DCCA coefficient numerators):
        f2(s, v) = (1/L) * sum (X - Xfit) * (Y - Yfit)

    where L is the segment length, i.e. s for two-sided plans and s + 1
    for overlapping plans, matching the normalization each method defines.
    """
    xv = x_profile.values if isinstance(x_profile, Profile) else np.asarray(x_profile, float)
    yv = y_profile.values if isinstance(y_profile, Profile) else np.asarray(y_profile, float)
    if plan.length <= order + 1:
        raise DegenerateSegmentError(
            f"segment of length {plan.length} cannot fit a degree-{order} trend"
        )
    rx = poly_residuals(segment_matrix(xv, plan), order)
    ry = rx if yv is xv else poly_residuals(segment_matrix(yv, plan), order)
    prod = rx * ry
    if mode == "abs":
        np.abs(prod, out=prod)
    elif mode != "signed":
        raise ValueError(f"unknown covariance mode: {mode!r}")
    return prod.mean(axis=1)
