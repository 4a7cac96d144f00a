"""Scale-dependent DCCA cross-correlation coefficients.

rho_DCCA(s) is the detrended covariance of two cumulative-sum profiles
over all N - s overlapping windows of length s + 1, normalized by the
corresponding detrended variances. The asymmetric variants restrict
numerator and denominators to windows whose index-proxy trend is up or
down; using the same window set on both sides keeps the Cauchy-Schwarz
bound, so every coefficient lies in [-1, 1].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .detrend_engine import (
    DOWN,
    UP,
    IndexProxy,
    _poly_basis,
    _slope_stats,
    build_index_proxy,
)

log = logging.getLogger(__name__)

MIN_WINDOWS_PER_TREND = 4
VERDICT_MARGIN = 0.05
_CHUNK_ELEMENTS = 4_000_000  # cap on windows * length per detrending batch


@dataclass(frozen=True)
class DccaCurve:
    """rho(s) with optional trend-conditional columns and window counts."""

    scales: np.ndarray
    rho: np.ndarray
    rho_up: np.ndarray | None = None
    rho_down: np.ndarray | None = None
    counts_up: np.ndarray | None = None
    counts_down: np.ndarray | None = None
    counts_flat: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.scales)


def default_dcca_scales(n: int, count: int = 30) -> np.ndarray:
    """30 log-spaced integer scales from 10 to floor(n/5)."""
    hi = n // 5
    if hi <= 10:
        raise ValueError(f"series of length {n} too short for the default DCCA scales")
    raw = np.exp(np.linspace(np.log(10), np.log(hi), count))
    return np.unique(np.round(raw).astype(int))


def _window_sums(x: np.ndarray, y: np.ndarray, log_proxy: np.ndarray | None,
                 s: int, order: int):
    """Stream the N - s overlapping windows at scale s.

    Returns per-window signed detrended covariance and the two detrended
    variances, plus the proxy trend sign per window (None without proxy).
    Windows are processed in chunks so memory stays bounded at large N.
    """
    n = len(x)
    length = s + 1
    n_win = n - s
    rx_prof = np.cumsum(x)
    ry_prof = np.cumsum(y)
    q = _poly_basis(length, order)
    t, tt = _slope_stats(length)
    f2xy = np.empty(n_win)
    f2x = np.empty(n_win)
    f2y = np.empty(n_win)
    signs = np.empty(n_win, dtype=np.int8) if log_proxy is not None else None
    step = max(1, _CHUNK_ELEMENTS // length)
    wx_all = sliding_window_view(rx_prof, length)
    wy_all = sliding_window_view(ry_prof, length)
    wp_all = sliding_window_view(log_proxy, length) if log_proxy is not None else None
    for lo in range(0, n_win, step):
        hi = min(lo + step, n_win)
        wx = wx_all[lo:hi]
        wy = wy_all[lo:hi]
        resx = wx - (wx @ q) @ q.T
        resy = wy - (wy @ q) @ q.T
        f2xy[lo:hi] = np.mean(resx * resy, axis=1)
        f2x[lo:hi] = np.mean(resx * resx, axis=1)
        f2y[lo:hi] = np.mean(resy * resy, axis=1)
        if signs is not None:
            wp = wp_all[lo:hi]
            scaled = np.exp(wp - wp.max(axis=1, keepdims=True))
            signs[lo:hi] = np.sign(scaled @ t / tt)
    return f2xy, f2x, f2y, signs


def _class_rho(f2xy, f2x, f2y, mask) -> float:
    num = f2xy[mask].mean()
    den = np.sqrt(f2x[mask].mean() * f2y[mask].mean())
    if den == 0.0:
        raise ValueError("zero detrended variance (constant series?)")
    rho = num / den
    # Cauchy-Schwarz guarantees |rho| <= 1; clip the rounding spillover
    return float(np.clip(rho, -1.0, 1.0))


def rho_dcca(x, y, scales, order: int = 2) -> DccaCurve:
    """Overall DCCA coefficient across scales.

    x, y are increment arrays or IncrementSeries of equal length N; each
    scale uses the N - s overlapping windows of length s + 1.
    """
    xv = np.asarray(getattr(x, "values", x), dtype=float)
    yv = np.asarray(getattr(y, "values", y), dtype=float)
    scales = np.asarray(scales, dtype=int)
    _check_pair(xv, yv, scales)
    rho = np.empty(len(scales))
    for j, s in enumerate(scales):
        f2xy, f2x, f2y, _ = _window_sums(xv, yv, None, int(s), order)
        rho[j] = _class_rho(f2xy, f2x, f2y, np.ones(len(f2xy), dtype=bool))
    return DccaCurve(scales=scales, rho=rho)


def rho_dcca_asym(
    x, y, proxy: IndexProxy | None = None, scales=None, order: int = 2,
    min_windows: int = MIN_WINDOWS_PER_TREND,
) -> DccaCurve:
    """DCCA coefficient with trend-conditional variants.

    Every window is classified by the sign of the OLS slope of the index
    proxy (built from x when not supplied) inside it. rho_up/rho_down
    are assembled from trend-restricted covariances and trend-restricted
    variances; cells with fewer than `min_windows` members are NaN.
    """
    xv = np.asarray(getattr(x, "values", x), dtype=float)
    yv = np.asarray(getattr(y, "values", y), dtype=float)
    if proxy is None:
        proxy = build_index_proxy(xv)
    if scales is None:
        scales = default_dcca_scales(len(xv))
    scales = np.asarray(scales, dtype=int)
    _check_pair(xv, yv, scales)
    n_s = len(scales)
    rho = np.empty(n_s)
    rho_up = np.full(n_s, np.nan)
    rho_down = np.full(n_s, np.nan)
    c_up = np.zeros(n_s, dtype=int)
    c_down = np.zeros(n_s, dtype=int)
    c_flat = np.zeros(n_s, dtype=int)
    for j, s in enumerate(scales):
        f2xy, f2x, f2y, signs = _window_sums(xv, yv, proxy.log_values, int(s), order)
        rho[j] = _class_rho(f2xy, f2x, f2y, np.ones(len(f2xy), dtype=bool))
        up = signs == UP
        down = signs == DOWN
        c_up[j] = int(up.sum())
        c_down[j] = int(down.sum())
        c_flat[j] = len(signs) - c_up[j] - c_down[j]
        if c_up[j] >= min_windows:
            rho_up[j] = _class_rho(f2xy, f2x, f2y, up)
        if c_down[j] >= min_windows:
            rho_down[j] = _class_rho(f2xy, f2x, f2y, down)
    return DccaCurve(scales=scales, rho=rho, rho_up=rho_up, rho_down=rho_down,
                     counts_up=c_up, counts_down=c_down, counts_flat=c_flat)


def asymmetry_verdict(curve: DccaCurve, margin: float = VERDICT_MARGIN) -> list[str]:
    """Per-scale classification of the volatility-asymmetry pattern.

    'asymmetric' when |rho_down| exceeds |rho_up| by more than `margin`,
    'inverse_asymmetric' for the reverse, otherwise 'indeterminate'
    (including any scale with a missing trend cell).
    """
    if curve.rho_up is None or curve.rho_down is None:
        return ["indeterminate"] * len(curve)
    out = []
    for up, down in zip(curve.rho_up, curve.rho_down):
        if not (np.isfinite(up) and np.isfinite(down)):
            out.append("indeterminate")
        elif abs(down) > abs(up) + margin:
            out.append("asymmetric")
        elif abs(up) > abs(down) + margin:
            out.append("inverse_asymmetric")
        else:
            out.append("indeterminate")
    return out


def _check_pair(xv: np.ndarray, yv: np.ndarray, scales: np.ndarray) -> None:
    if len(xv) != len(yv):
        raise ValueError("series lengths differ")
    if scales.min() < 4:
        raise ValueError("DCCA scales must be >= 4")
    if len(xv) <= scales.max() + 2:
        raise ValueError(f"series of length {len(xv)} too short for scale {scales.max()}")
