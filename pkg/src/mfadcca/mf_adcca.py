"""Multifractal asymmetric detrended cross-correlation analysis.

Computes trend-conditional q-order fluctuation functions on two-sided
non-overlapping segmentations, generalized Hurst exponents by log-log
regression, Renyi exponents, Legendre singularity spectra and the scalar
asymmetry/efficiency measures built on them. With both inputs equal the
overall branch reduces to plain MFDFA of the single series (same code
path).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .detrend_engine import (
    DOWN,
    FLAT,
    UP,
    IndexProxy,
    Profile,
    build_index_proxy,
    build_profile,
    classify_trend,
    detrended_cov,
    two_sided_plan,
)

log = logging.getLogger(__name__)

BRANCHES = ("overall", "up", "down")
DEFAULT_DH_ORDERS = (-10.0, 2.0, 10.0)
MIN_SEGMENTS_PER_TREND = 4
MIN_REGRESSION_POINTS = 10


@dataclass(frozen=True)
class ScaleGrid:
    """Strictly increasing integer scales with their generating policy."""

    scales: np.ndarray
    s_min: int
    s_max: int
    count: int

    def __post_init__(self):
        if len(self.scales) < 2 or np.any(np.diff(self.scales) <= 0):
            raise ValueError("scale grid must be strictly increasing with >= 2 entries")

    def __len__(self) -> int:
        return len(self.scales)

    @classmethod
    def log_spaced(cls, s_min: int, s_max: int, count: int = 100) -> "ScaleGrid":
        """count log-spaced points in [s_min, s_max], duplicate integers collapsed."""
        if not (2 <= s_min < s_max):
            raise ValueError(f"need 2 <= s_min < s_max, got [{s_min}, {s_max}]")
        raw = np.exp(np.linspace(np.log(s_min), np.log(s_max), count))
        scales = np.unique(np.round(raw).astype(int))
        return cls(scales=scales, s_min=s_min, s_max=s_max, count=count)

    @classmethod
    def from_policy(cls, n: int, count: int = 100) -> "ScaleGrid":
        """Default policy: s_min = max(20, n/100), s_max = min(20 s_min, n/10)."""
        s_min = max(20, n // 100)
        s_max = min(20 * s_min, n // 10)
        if s_min >= s_max:
            raise ValueError(f"series of length {n} is too short for the default scale policy")
        return cls.log_spaced(s_min, s_max, count)

    @classmethod
    def explicit(cls, scales) -> "ScaleGrid":
        arr = np.unique(np.asarray(scales, dtype=int))
        return cls(scales=arr, s_min=int(arr[0]), s_max=int(arr[-1]), count=len(arr))


@dataclass(frozen=True)
class QGrid:
    """Moment orders for the generalized fluctuation functions.

    Must contain -10, 0, 2 and 10 so the asymmetry and efficiency scalars
    are always defined on the default outputs.
    """

    qs: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.qs) <= 0):
            raise ValueError("q grid must be strictly increasing")
        for needed in (-10.0, 0.0, 2.0, 10.0):
            if not np.any(np.isclose(self.qs, needed, atol=1e-9)):
                raise ValueError(f"q grid must contain {needed}")

    def __len__(self) -> int:
        return len(self.qs)

    def index_of(self, q: float) -> int:
        hits = np.nonzero(np.isclose(self.qs, q, atol=1e-9))[0]
        if hits.size == 0:
            raise KeyError(f"q = {q} not on the grid")
        return int(hits[0])

    @classmethod
    def default(cls) -> "QGrid":
        return cls(qs=np.arange(-10.0, 10.0 + 0.25, 0.5))

    @classmethod
    def from_range(cls, q_min: float, q_max: float, step: float) -> "QGrid":
        if step <= 0 or q_min >= q_max:
            raise ValueError("invalid q range")
        n = int(round((q_max - q_min) / step))
        return cls(qs=q_min + step * np.arange(n + 1))


@dataclass(frozen=True)
class FluctuationTable:
    """F_q(s) per trend branch over the (q, scale) grid.

    Arrays are (len(qs), len(scales)); cells that cannot be estimated
    (too few segments of that trend, or zero fluctuations meeting q <= 0)
    are NaN. Counts are per scale; flat segments belong to neither trend.
    """

    qs: np.ndarray
    scales: np.ndarray
    f: np.ndarray
    f_up: np.ndarray
    f_down: np.ndarray
    m_up: np.ndarray
    m_down: np.ndarray
    m_flat: np.ndarray
    origin_length: int

    def branch(self, name: str) -> np.ndarray:
        return {"overall": self.f, "up": self.f_up, "down": self.f_down}[name]


@dataclass(frozen=True)
class SpectrumScalars:
    delta_alpha: float
    alpha_zero: float
    alpha_min: float
    alpha_max: float
    a_alpha: float
    quality: str  # 'ok' | 'folded' | 'missing'


@dataclass(frozen=True)
class BranchResult:
    """Exponents and spectrum of one trend branch, aligned to the q grid."""

    h: np.ndarray
    h_se: np.ndarray
    tau: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    scalars: SpectrumScalars


@dataclass(frozen=True)
class MultifractalResult:
    qs: np.ndarray
    overall: BranchResult
    up: BranchResult
    down: BranchResult
    dh: dict
    d_xy: float

    def branch(self, name: str) -> BranchResult:
        return {"overall": self.overall, "up": self.up, "down": self.down}[name]


def _branch_lnF(lnf2: np.ndarray, n_zero: int, qs: np.ndarray, denom: int) -> np.ndarray:
    """ln F_q for one branch population at one scale.

    lnf2 holds the logs of the strictly positive f2 values; n_zero counts
    exact zeros in the population. denom is the averaging count (2 N_s
    for the overall branch, M+- for a trend branch). Zero cells are exact
    in the q > 0 power mean, poison the geometric mean and make q < 0
    moments infinite, hence NaN there.
    """
    out = np.full(len(qs), np.nan)
    if lnf2.size == 0:
        return out
    pos = qs > 0
    neg = qs < 0
    zero = ~pos & ~neg
    if n_zero == 0:
        nz = qs[~zero]
        out[~zero] = (logsumexp(np.outer(nz / 2.0, lnf2), axis=1) - np.log(denom)) / nz
        out[zero] = lnf2.sum() / (2.0 * denom)
    else:
        nz = qs[pos]
        out[pos] = (logsumexp(np.outer(nz / 2.0, lnf2), axis=1) - np.log(denom)) / nz
    return out


def fluctuation_functions(
    x_profile: Profile,
    y_profile: Profile,
    proxy: IndexProxy,
    scales: ScaleGrid,
    qs: QGrid,
    order: int = 2,
    min_segments: int = MIN_SEGMENTS_PER_TREND,
) -> FluctuationTable:
    """Trend-conditional q-order fluctuation functions.

    For each scale the profiles are cut into 2 floor(N/s) two-sided
    segments; f2(s, v) is the degree-`order` detrended absolute
    covariance of the pair in segment v. The overall branch averages all
    segments:

        F_q(s) = { (1/2N_s) sum [f2]^(q/2) }^(1/q)
        F_0(s) = exp{ (1/4N_s) sum ln f2 }

    and the trend branches restrict to segments whose index-proxy slope
    is positive (up) or negative (down), with 1/M and 1/2M prefactors.
    Trend cells with fewer than `min_segments` members are NaN.
    """
    n = x_profile.origin_length
    if y_profile.origin_length != n:
        raise ValueError("profiles must have equal origin length")
    nq, ns = len(qs), len(scales)
    shape = (nq, ns)
    f = np.full(shape, np.nan)
    f_up = np.full(shape, np.nan)
    f_down = np.full(shape, np.nan)
    m_up = np.zeros(ns, dtype=int)
    m_down = np.zeros(ns, dtype=int)
    m_flat = np.zeros(ns, dtype=int)
    qv = qs.qs
    for j, s in enumerate(scales.scales):
        plan = two_sided_plan(n, int(s))
        f2 = detrended_cov(x_profile, y_profile, plan, order=order, mode="abs")
        signs = classify_trend(proxy, plan)
        m_up[j] = int(np.sum(signs == UP))
        m_down[j] = int(np.sum(signs == DOWN))
        m_flat[j] = int(np.sum(signs == FLAT))
        for arr, mask, denom in (
            (f, np.ones(len(f2), dtype=bool), plan.count),
            (f_up, signs == UP, m_up[j]),
            (f_down, signs == DOWN, m_down[j]),
        ):
            if arr is not f and denom < min_segments:
                continue
            vals = f2[mask]
            posv = vals[vals > 0]
            arr[:, j] = _branch_lnF(np.log(posv), int(len(vals) - len(posv)), qv, denom)
    with np.errstate(over="ignore"):
        return FluctuationTable(
            qs=qv.copy(), scales=scales.scales.copy(),
            f=np.exp(f), f_up=np.exp(f_up), f_down=np.exp(f_down),
            m_up=m_up, m_down=m_down, m_flat=m_flat, origin_length=n,
        )


def _ols_loglog(ln_s: np.ndarray, ln_f: np.ndarray) -> tuple[float, float]:
    """Slope and slope standard error of ln F on ln s."""
    n = len(ln_s)
    sx = ln_s - ln_s.mean()
    sy = ln_f - ln_f.mean()
    sxx = np.dot(sx, sx)
    slope = np.dot(sx, sy) / sxx
    resid = sy - slope * sx
    if n > 2:
        se = np.sqrt(np.dot(resid, resid) / (n - 2) / sxx)
    else:
        se = np.nan
    return float(slope), float(se)


def hurst_exponents(
    table: FluctuationTable, min_points: int = MIN_REGRESSION_POINTS
) -> dict:
    """Generalized Hurst exponents per branch by OLS on the log-log grid.

    Returns {branch: (h, h_se)} arrays aligned to the q grid; a q with
    fewer than `min_points` usable scales is NaN.
    """
    ln_s_all = np.log(table.scales.astype(float))
    out = {}
    for name in BRANCHES:
        fq = table.branch(name)
        h = np.full(len(table.qs), np.nan)
        se = np.full(len(table.qs), np.nan)
        for i in range(len(table.qs)):
            row = fq[i]
            good = np.isfinite(row) & (row > 0)
            if good.sum() < min_points:
                continue
            h[i], se[i] = _ols_loglog(ln_s_all[good], np.log(row[good]))
        out[name] = (h, se)
    return out


def renyi(h: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """Renyi mass exponent tau(q) = q h(q) - 1."""
    return qs * h - 1.0


def singularity_spectrum(
    h: np.ndarray, qs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, SpectrumScalars]:
    """Legendre transform of the exponent curve.

    alpha(q) = h(q) + q h'(q) with h' by central differences (one-sided
    at the ends); f(alpha) = q (alpha - h) + 1. A theoretically clean
    alpha is non-increasing in q; estimation noise can fold it back, in
    which case the scalars are taken on the monotone envelope and the
    result is flagged 'folded'. Returns alpha and f aligned to the full
    q grid (NaN where h is missing).
    """
    alpha = np.full(len(qs), np.nan)
    f_alpha = np.full(len(qs), np.nan)
    finite = np.isfinite(h)
    if finite.sum() < 3:
        return alpha, f_alpha, SpectrumScalars(*(np.nan,) * 5, quality="missing")
    qf = qs[finite]
    hf = h[finite]
    dh = np.gradient(hf, qf)
    af = hf + qf * dh
    ff = qf * (af - hf) + 1.0
    alpha[finite] = af
    f_alpha[finite] = ff
    # ends of the q grid mix one-sided and central differences, which can
    # bend a clean monotone curve by O(grid step^2); only folds visible
    # against the spectrum's own width count
    span = float(af.max() - af.min())
    folded = bool(np.any(np.diff(af) > 1e-3 * span))
    # monotone (non-increasing) envelope: keep each new running minimum
    keep = [0]
    for i in range(1, len(af)):
        if af[i] < af[keep[-1]]:
            keep.append(i)
    ak, fk = af[keep], ff[keep]
    a_min, a_max = float(ak.min()), float(ak.max())
    width = a_max - a_min
    a_zero = float(ak[np.argmax(fk)])
    if width > 0:
        a_asym = ((a_zero - a_min) - (a_max - a_zero)) / width
    else:
        a_asym = 0.0  # point spectrum, trivially symmetric
    scalars = SpectrumScalars(
        delta_alpha=width, alpha_zero=a_zero, alpha_min=a_min, alpha_max=a_max,
        a_alpha=float(a_asym), quality="folded" if folded else "ok",
    )
    return alpha, f_alpha, scalars


def asymmetry_degree(h_up: np.ndarray, h_down: np.ndarray, qs: np.ndarray, q: float) -> float:
    """Delta h(q) = h_up(q) - h_down(q); NaN if either side is missing."""
    hits = np.nonzero(np.isclose(qs, q, atol=1e-9))[0]
    if hits.size == 0:
        return float("nan")
    i = hits[0]
    return float(h_up[i] - h_down[i])


def efficiency_degree(h: np.ndarray, qs: np.ndarray) -> float:
    """Market-deviation measure (|h(-10) - 1/2| + |h(10) - 1/2|) / 2."""
    try:
        lo = np.nonzero(np.isclose(qs, -10.0, atol=1e-9))[0][0]
        hi = np.nonzero(np.isclose(qs, 10.0, atol=1e-9))[0][0]
    except IndexError:
        return float("nan")
    return float(0.5 * (abs(h[lo] - 0.5) + abs(h[hi] - 0.5)))


def _branch_result(h: np.ndarray, se: np.ndarray, qs: np.ndarray) -> BranchResult:
    alpha, f_alpha, scalars = singularity_spectrum(h, qs)
    return BranchResult(h=h, h_se=se, tau=renyi(h, qs), alpha=alpha,
                        f_alpha=f_alpha, scalars=scalars)


def analyze_pair(
    x,
    y=None,
    scales: ScaleGrid | None = None,
    qs: QGrid | None = None,
    order: int = 2,
    min_segments: int = MIN_SEGMENTS_PER_TREND,
    dh_orders=DEFAULT_DH_ORDERS,
) -> tuple[FluctuationTable, MultifractalResult]:
    """Full analysis of an increment pair (or one series against itself).

    x, y are 1-D increment arrays or IncrementSeries; y defaults to x.
    The trend proxy is always built from x. Returns the fluctuation
    table and the derived exponent/spectrum result.
    """
    xv = np.asarray(getattr(x, "values", x), dtype=float)
    yv = xv if y is None else np.asarray(getattr(y, "values", y), dtype=float)
    if len(xv) != len(yv):
        raise ValueError("series lengths differ")
    if scales is None:
        scales = ScaleGrid.from_policy(len(xv))
    if qs is None:
        qs = QGrid.default()
    x_prof = build_profile(xv)
    y_prof = x_prof if yv is xv else build_profile(yv)
    proxy = build_index_proxy(xv)
    table = fluctuation_functions(x_prof, y_prof, proxy, scales, qs,
                                  order=order, min_segments=min_segments)
    exps = hurst_exponents(table)
    branches = {name: _branch_result(h, se, table.qs) for name, (h, se) in exps.items()}
    h_up, _ = exps["up"]
    h_down, _ = exps["down"]
    dh = {float(q): asymmetry_degree(h_up, h_down, table.qs, q) for q in dh_orders}
    result = MultifractalResult(
        qs=table.qs, overall=branches["overall"], up=branches["up"],
        down=branches["down"], dh=dh,
        d_xy=efficiency_degree(exps["overall"][0], table.qs),
    )
    return table, result
