"""Price ingestion and derived series.

Turns timestamped intraday prices into the three series the scaling and
volatility analyses consume: daily log-returns, realized-volatility
estimates and log-volatility increments, plus descriptive statistics
with the Jarque-Bera normality test.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
from scipy.stats import chi2

log = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400
COVERAGE_THRESHOLD = 0.8  # minimum fraction of nominal bars for a day to count


@dataclass(frozen=True)
class IntradaySeries:
    """Timestamped intraday prices at a nominal bar spacing."""

    timestamps: np.ndarray  # epoch seconds, strictly increasing
    prices: np.ndarray      # positive quote-currency prices
    interval_minutes: int
    label: str = "series"

    def __post_init__(self):
        if len(self.timestamps) != len(self.prices) or len(self.prices) < 2:
            raise ValueError("intraday series needs >= 2 aligned (timestamp, price) rows")
        if np.any(np.diff(self.timestamps) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        bad = np.nonzero(~(self.prices > 0))[0]
        if bad.size:
            raise ValueError(f"non-positive price at row {bad[0]}")
        if self.interval_minutes <= 0:
            raise ValueError("interval_minutes must be positive")

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class DailySeries:
    """One value per calendar day (closing price or volatility estimate)."""

    dates: np.ndarray   # numpy datetime64[D], strictly increasing
    values: np.ndarray
    label: str = "series"

    def __post_init__(self):
        if len(self.dates) != len(self.values):
            raise ValueError("dates and values must align")
        if len(self.dates) > 1 and np.any(np.diff(self.dates).astype(int) <= 0):
            raise ValueError("dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class IncrementSeries:
    """1-D series of log-increments feeding the scaling analyses."""

    values: np.ndarray
    role: str = "generic"  # return | volatility_change | generic
    source_id: str = "series"
    dates: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("increment series must be finite")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    median: float
    std_dev: float
    max: float
    min: float
    skewness: float
    excess_kurtosis: float
    jarque_bera: float
    jb_p_value: float
    n: int


def _parse_timestamp(raw: str) -> int:
    raw = raw.strip()
    try:
        return int(float(raw))
    except ValueError:
        pass
    iso = raw.replace("Z", "+00:00")
    dt = datetime.fromisoformat(iso)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def read_intraday_csv(path, interval_minutes: int = 5, label: str | None = None) -> IntradaySeries:
    """Read a `timestamp,price` CSV (header required, UTC assumed).

    Timestamps may be epoch seconds or ISO-8601.
    """
    ts, px = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        cols = [c.strip().lower() for c in header]
        try:
            t_col, p_col = cols.index("timestamp"), cols.index("price")
        except ValueError:
            raise ValueError(f"{path}: header must name 'timestamp' and 'price' columns")
        for i, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                ts.append(_parse_timestamp(row[t_col]))
                px.append(float(row[p_col]))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{i}: bad row {row!r}") from exc
    name = label if label is not None else str(path)
    return IntradaySeries(np.asarray(ts, dtype=np.int64), np.asarray(px, dtype=float),
                          interval_minutes, label=name)


def read_series_csv(path, role: str = "generic", label: str | None = None) -> IncrementSeries:
    """Read a `date,value` CSV into an increment series (values column only)."""
    vals, dates = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        for i, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                dates.append(row[0].strip())
                vals.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{i}: bad row {row!r}") from exc
    name = label if label is not None else str(path)
    return IncrementSeries(np.asarray(vals, dtype=float), role=role, source_id=name,
                           dates=np.asarray(dates))


def write_series_csv(path, dates, values) -> None:
    """Write a `date,value` CSV with full-precision values."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "value"])
        for d, v in zip(dates, values):
            writer.writerow([str(d), format(float(v), ".17g")])


def log_returns(prices: DailySeries) -> IncrementSeries:
    """Log-price increments: values[t] = ln p_{t+1} - ln p_t."""
    if len(prices) < 2:
        raise ValueError("need at least two prices")
    bad = np.nonzero(~(prices.values > 0))[0]
    if bad.size:
        raise ValueError(f"non-positive price at index {bad[0]} ({prices.dates[bad[0]]})")
    vals = np.diff(np.log(prices.values))
    return IncrementSeries(vals, role="return", source_id=prices.label,
                           dates=prices.dates[1:])


def realized_volatility(intraday: IntradaySeries) -> DailySeries:
    """Daily realized-volatility estimates from intraday bars.

    RV_t is the sum of squared intraday log-returns attributed to UTC day
    t; each return is keyed to the day of its later bar, so an interior
    day with a full bar grid contributes one return per bar. The emitted
    value is sigma_hat = sqrt(RV). Days with fewer than 80% of the nominal
    bar count are dropped and logged; missing bars are skipped rather
    than imputed.
    """
    t = intraday.timestamps
    r2 = np.diff(np.log(intraday.prices)) ** 2
    day = (t // SECONDS_PER_DAY).astype(np.int64)
    ret_day = day[1:]  # return keyed to the later bar
    uniq, counts = np.unique(day, return_counts=True)
    nominal = (24 * 60) // intraday.interval_minutes
    keep = counts >= COVERAGE_THRESHOLD * nominal
    for d, c in zip(uniq[~keep], counts[~keep]):
        log.warning("%s: day %s dropped (%d of %d bars)", intraday.label,
                    np.datetime64(int(d), "D"), c, nominal)
    kept_days = uniq[keep]
    if kept_days.size == 0:
        raise ValueError(f"{intraday.label}: no day meets the "
                         f"{COVERAGE_THRESHOLD:.0%} bar-coverage threshold")
    rv = np.zeros(kept_days.size)
    pos = np.searchsorted(kept_days, ret_day)
    ok = (pos < kept_days.size) & (kept_days[np.minimum(pos, kept_days.size - 1)] == ret_day)
    np.add.at(rv, pos[ok], r2[ok])
    dates = kept_days.astype("datetime64[D]")
    return DailySeries(dates, np.sqrt(rv), label=intraday.label)


def daily_closes(intraday: IntradaySeries, dates: np.ndarray | None = None) -> DailySeries:
    """Last bar price per UTC day; optionally restricted to given dates."""
    day = (intraday.timestamps // SECONDS_PER_DAY).astype(np.int64)
    uniq, last_idx = np.unique(day[::-1], return_index=True)
    closes = intraday.prices[::-1][last_idx]
    all_dates = uniq.astype("datetime64[D]")
    if dates is not None:
        mask = np.isin(all_dates, dates)
        all_dates, closes = all_dates[mask], closes[mask]
    return DailySeries(all_dates, closes, label=intraday.label)


def vol_changes(sigma: DailySeries) -> IncrementSeries:
    """Log-volatility increments: v_t = ln sigma_{t+1} - ln sigma_t."""
    bad = np.nonzero(~(sigma.values > 0))[0]
    if bad.size:
        raise ValueError(f"non-positive volatility on {sigma.dates[bad[0]]}; "
                         "zero-RV days must be excluded upstream")
    vals = np.diff(np.log(sigma.values))
    return IncrementSeries(vals, role="volatility_change", source_id=sigma.label,
                           dates=sigma.dates[1:])


def describe(x: IncrementSeries | np.ndarray) -> DescriptiveStats:
    """Moments plus the Jarque-Bera statistic JB = N/6 (S^2 + K^2/4).

    S and K are the biased sample skewness and excess kurtosis entering
    the test; std_dev is the usual ddof=1 estimate. The p-value comes
    from chi-square with 2 degrees of freedom.
    """
    v = x.values if isinstance(x, IncrementSeries) else np.asarray(x, dtype=float)
    n = len(v)
    if n < 8:
        raise ValueError("need at least 8 observations")
    m = v.mean()
    d = v - m
    m2 = np.mean(d ** 2)
    if m2 <= 0:
        raise ValueError("zero variance: higher moments undefined")
    skew = np.mean(d ** 3) / m2 ** 1.5
    kurt = np.mean(d ** 4) / m2 ** 2 - 3.0
    jb = n / 6.0 * (skew ** 2 + kurt ** 2 / 4.0)
    return DescriptiveStats(
        mean=float(m), median=float(np.median(v)), std_dev=float(v.std(ddof=1)),
        max=float(v.max()), min=float(v.min()),
        skewness=float(skew), excess_kurtosis=float(kurt),
        jarque_bera=float(jb), jb_p_value=float(chi2.sf(jb, 2)), n=n,
    )


def align_return_vol(closes: DailySeries, sigma: DailySeries) -> tuple[IncrementSeries, IncrementSeries]:
    """Paired daily returns and volatility changes on a common date index.

    Zero-volatility days are excluded (with a warning) before the log
    transform; dates missing from either series are dropped from both,
    so the two outputs have identical length and date keys.
    """
    zero = sigma.values <= 0
    if zero.any():
        for d in sigma.dates[zero]:
            log.warning("%s: day %s excluded (zero realized volatility)", sigma.label, d)
    common = np.intersect1d(closes.dates, sigma.dates[~zero])
    if common.size < 3:
        raise ValueError("fewer than 3 common trading days after exclusions")
    c_mask = np.isin(closes.dates, common)
    s_mask = np.isin(sigma.dates, common)
    r = log_returns(DailySeries(closes.dates[c_mask], closes.values[c_mask], closes.label))
    v = vol_changes(DailySeries(sigma.dates[s_mask], sigma.values[s_mask], sigma.label))
    return r, v
