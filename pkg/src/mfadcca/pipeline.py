"""End-to-end batch pipeline: intraday CSVs in, report bundle out.

Per asset: realized volatility and daily closes, aligned return and
volatility-change series, descriptive statistics, the cross-correlation
significance curve, the multifractal asymmetric cross-correlation
analysis, DCCA coefficients with verdicts, and both GARCH fits. A failed
stage is recorded and the run continues with the remaining assets.
"""

from __future__ import annotations

import logging
import time
import traceback
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, cross_corr_test, dcca_coeff, garch, mf_adcca, report, series_core
from .config import RunConfig
from .series_core import SECONDS_PER_DAY

log = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    output_dir: str
    failures: list
    manifest: dict

    @property
    def ok(self) -> bool:
        return not self.failures


def _date_filter(intraday, start: str | None, end: str | None):
    if start is None and end is None:
        return intraday
    t = intraday.timestamps
    mask = np.ones(len(t), dtype=bool)
    if start is not None:
        mask &= t >= np.datetime64(start, "D").astype(int) * SECONDS_PER_DAY
    if end is not None:
        mask &= t < (np.datetime64(end, "D").astype(int) + 1) * SECONDS_PER_DAY
    if mask.sum() < 2:
        raise ValueError(f"date range {start}..{end} leaves fewer than 2 bars")
    return series_core.IntradaySeries(t[mask], intraday.prices[mask],
                                      intraday.interval_minutes, intraday.label)


def _scale_grid(cfg: RunConfig, n: int) -> mf_adcca.ScaleGrid:
    if cfg.scale_min is not None and cfg.scale_max is not None:
        return mf_adcca.ScaleGrid.log_spaced(cfg.scale_min, cfg.scale_max, cfg.scale_count)
    return mf_adcca.ScaleGrid.from_policy(n, cfg.scale_count)


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    out_root = Path(cfg.output_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    qgrid = mf_adcca.QGrid.from_range(cfg.q_min, cfg.q_max, cfg.q_step)
    failures = []
    asset_status = {}
    timings = {}
    summary = []

    if cfg.plots:
        from . import plots
    else:
        plots = None

    for asset in cfg.assets:
        t0 = time.perf_counter()
        out = out_root / asset.name
        out.mkdir(parents=True, exist_ok=True)
        try:
            _run_asset(cfg, asset, out, qgrid, plots, summary)
            asset_status[asset.name] = "ok"
        except Exception as exc:
            log.error("asset %s failed: %s", asset.name, exc)
            log.debug("%s", traceback.format_exc())
            failures.append({"asset": asset.name, "error": f"{type(exc).__name__}: {exc}"})
            asset_status[asset.name] = "failed"
        timings[asset.name] = round(time.perf_counter() - t0, 3)

    manifest = {
        "config_hash": cfg.config_hash(),
        "versions": _versions(),
        "assets": asset_status,
        "failures": failures,
    }
    report.write_json(out_root / "manifest.json", manifest)
    # wall-clock timings are inherently nondeterministic, so they live in
    # a sidecar file instead of breaking byte-identical reruns
    report.write_json(out_root / "timings.json", {"seconds": timings})
    (out_root / "summary.txt").write_text("\n".join(summary) + "\n" if summary else "")
    return PipelineResult(output_dir=str(out_root), failures=failures, manifest=manifest)


def _versions() -> dict:
    import matplotlib
    import numba
    import scipy

    return {
        "mfadcca": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
        "numba": numba.__version__,
    }


def _run_asset(cfg, asset, out: Path, qgrid, plots, summary: list) -> None:
    intraday = series_core.read_intraday_csv(asset.intraday_csv,
                                             cfg.rv_interval_minutes, label=asset.name)
    intraday = _date_filter(intraday, cfg.date_start, cfg.date_end)
    sigma = series_core.realized_volatility(intraday)
    closes = series_core.daily_closes(intraday, sigma.dates)
    r, v = series_core.align_return_vol(closes, sigma)
    n = len(r)

    series_core.write_series_csv(out / "daily_close.csv", closes.dates, closes.values)
    series_core.write_series_csv(out / "sigma.csv", sigma.dates, sigma.values)
    series_core.write_series_csv(out / "returns.csv", r.dates, r.values)
    series_core.write_series_csv(out / "vol_changes.csv", v.dates, v.values)

    if "describe" in cfg.analyses:
        stats = {"returns": series_core.describe(r), "vol_changes": series_core.describe(v)}
        report.write_json(out / "descriptive_stats.json",
                          {k: report.describe_payload(s) for k, s in stats.items()})
        summary.extend(report.summary_lines(asset.name, stats))

    if "qcc" in cfg.analyses:
        m_max = min(cfg.qcc_m_max, n - 2)
        if m_max < cfg.qcc_m_max:
            log.warning("%s: m_max clamped to %d (N = %d)", asset.name, m_max, n)
        qres = cross_corr_test.qcc(r, v, m_max=m_max, level=cfg.qcc_level)
        report.write_qcc(out / "qcc.csv", qres)
        if plots:
            plots.plot_qcc(out / "qcc.png", qres)

    if "mf_adcca" in cfg.analyses:
        table, result = mf_adcca.analyze_pair(
            r, v, scales=_scale_grid(cfg, n), qs=qgrid, order=cfg.detrend_order)
        report.write_fluctuation(out / "fluctuation.csv", table)
        report.write_exponents(out / "exponents.csv", result)
        report.write_spectrum(out / "spectrum.csv", result)
        report.write_scalars(out / "scalars.json", result)
        if plots:
            plots.plot_fluctuation(out / "fluctuation.png", table)
            plots.plot_hurst(out / "hurst.png", result)
            plots.plot_spectrum(out / "spectrum.png", result)

    if "dcca_coeff" in cfg.analyses:
        curve = dcca_coeff.rho_dcca_asym(r, v, order=cfg.detrend_order)
        verdicts = dcca_coeff.asymmetry_verdict(curve)
        report.write_dcca(out / "dcca.csv", curve, verdicts)
        if plots:
            plots.plot_dcca(out / "dcca.png", curve)

    if "garch" in cfg.analyses:
        for model in ("egarch", "gjr"):
            fit_result = garch.fit(garch.GarchSpec(model), r)
            verdict = garch.asymmetry_sign(fit_result)
            report.write_json(out / f"garch_{model}.json",
                              report.garch_payload(fit_result, verdict))

    if plots:
        plots.plot_series(out / "series.png", r.dates.astype("datetime64[D]"),
                          r.values, v.values)
