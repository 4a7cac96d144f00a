"""Command-line interface.

Verbs: analyze (config-driven batch pipeline), synth (oracle series
generation), and single-shot describe / qcc / mfadcca / dcca / garch on
CSV inputs. Exit codes: 0 success, 1 partial or analysis failure,
2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from . import __version__, cross_corr_test, dcca_coeff, garch, mf_adcca, report, series_core, synth
from .config import ConfigError, load_config
from .synth import GeneratorSpec

log = logging.getLogger("mfadcca")

_KIND_MAP = {
    "fgn": "fgn",
    "cascade": "binomial_cascade",
    "iid": "iid_gaussian",
    "egarch": "garch_sim",
    "gjr": "garch_sim",
}


def _parse_scales(text: str, n: int) -> mf_adcca.ScaleGrid:
    try:
        lo, hi, count = (int(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"--scales expects MIN:MAX:COUNT, got {text!r}")
    return mf_adcca.ScaleGrid.log_spaced(lo, hi, count)


def _parse_q(text: str) -> mf_adcca.QGrid:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"--q expects MIN:MAX:STEP, got {text!r}")
    return mf_adcca.QGrid.from_range(lo, hi, step)


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_series(path, role="generic"):
    return series_core.read_series_csv(path, role=role, label=Path(path).stem)


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    if args.out is not None:
        cfg = type(cfg)(**{**cfg.__dict__, "output_dir": str(Path(args.out))})
    if args.no_plots:
        cfg = type(cfg)(**{**cfg.__dict__, "plots": False})
    from .pipeline import run_pipeline

    result = run_pipeline(cfg)
    for failure in result.failures:
        print(f"FAILED {failure['asset']}: {failure['error']}", file=sys.stderr)
    print(f"reports written to {result.output_dir}"
          f" ({len(cfg.assets) - len(result.failures)}/{len(cfg.assets)} assets ok)")
    return 0 if result.ok else 1


def _synth_spec(args) -> GeneratorSpec:
    params = {}
    if args.kind == "fgn":
        params["H"] = args.H
    elif args.kind == "cascade":
        params["p"] = args.p
        params["levels"] = args.levels if args.levels else int(np.ceil(np.log2(args.length)))
    elif args.kind in ("egarch", "gjr"):
        params.update(model=args.kind, omega=args.omega, alpha1=args.alpha1,
                      alpha2=args.alpha2, beta=args.beta)
    return GeneratorSpec(kind=_KIND_MAP[args.kind], length=args.length,
                         seed=args.seed, params=params)


def cmd_synth(args) -> int:
    if args.kind == "cascade" and args.levels:
        args.length = 2 ** args.levels
    if args.kind == "fgn" and args.length & (args.length - 1):
        raise ConfigError("fgn length must be a power of two")
    start = date.fromisoformat(args.start_date)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        spec = _synth_spec(args)
        if args.intraday:
            _write_intraday(spec, args, start, out)
        else:
            values = spec.generate()
            dates = [start + timedelta(days=int(i)) for i in range(len(values))]
            series_core.write_series_csv(out, dates, values)
    except ValueError as exc:
        # bad generator parameters are a usage error, and the generators
        # all validate before the output file is opened
        raise ConfigError(str(exc))
    print(f"wrote {out}")
    return 0


def _write_intraday(spec: GeneratorSpec, args, start: date, out: Path) -> None:
    """Emit timestamp,price bars. GARCH kinds drive one sigma per day with
    Gaussian bars inside; other kinds are used directly as bar returns."""
    import csv as _csv

    bars_per_day = (24 * 60) // args.interval
    t0 = np.datetime64(start.isoformat(), "s").astype(int)
    step = args.interval * 60
    if spec.kind == "garch_sim":
        n_days = spec.length
        theta = tuple(float(spec.params[k]) for k in ("omega", "alpha1", "alpha2", "beta"))
        _, sigma = synth._simulate_garch(spec.params["model"], theta, n_days, spec.seed)
        rng = np.random.default_rng(spec.seed + 1)
        sigma_bar = np.repeat(sigma, bars_per_day) / np.sqrt(bars_per_day)
        bar_r = sigma_bar * rng.standard_normal(n_days * bars_per_day)
    else:
        total = args.days * bars_per_day if args.days else spec.length
        gen_len = total
        if spec.kind == "fgn":
            gen_len = 1 << int(np.ceil(np.log2(max(total, 1024))))
        raw = GeneratorSpec(spec.kind, gen_len, spec.seed, spec.params).generate()[:total]
        bar_r = raw * args.bar_std
    prices = args.price0 * np.exp(np.cumsum(bar_r))
    ts = t0 + step * np.arange(len(prices))
    with open(out, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["timestamp", "price"])
        for t, p in zip(ts, prices):
            writer.writerow([int(t), format(float(p), ".17g")])


def cmd_describe(args) -> int:
    x = _load_series(args.csv)
    stats = series_core.describe(x)
    payload = report.describe_payload(stats)
    out = _outdir(args)
    if out is not None:
        report.write_json(out / "descriptive_stats.json", payload)
        print(f"wrote {out / 'descriptive_stats.json'}")
    else:
        for line in report.summary_lines(x.source_id, {"values": stats}):
            print(line)
    return 0


def cmd_qcc(args) -> int:
    x = _load_series(args.csv_x)
    y = _load_series(args.csv_y)
    m_max = min(args.m_max, len(x) - 2)
    result = cross_corr_test.qcc(x, y, m_max=m_max, level=args.level)
    out = _outdir(args)
    if out is not None:
        report.write_qcc(out / "qcc.csv", result)
        if not args.no_plots:
            from . import plots
            plots.plot_qcc(out / "qcc.png", result)
        print(f"wrote {out / 'qcc.csv'}")
    n_sig = int(result.significant.sum())
    print(f"Q_cc significant at {result.level:g} for {n_sig}/{m_max} lags")
    return 0


def cmd_mfadcca(args) -> int:
    x = _load_series(args.csv_x)
    y = x if args.csv_y in (None, args.csv_x) else _load_series(args.csv_y)
    scales = _parse_scales(args.scales, len(x)) if args.scales else None
    qs = _parse_q(args.q) if args.q else None
    table, result = mf_adcca.analyze_pair(x, y if y is not x else None,
                                          scales=scales, qs=qs)
    out = _outdir(args)
    if out is not None:
        report.write_fluctuation(out / "fluctuation.csv", table)
        report.write_exponents(out / "exponents.csv", result)
        report.write_spectrum(out / "spectrum.csv", result)
        report.write_scalars(out / "scalars.json", result)
        if not args.no_plots:
            from . import plots
            plots.plot_fluctuation(out / "fluctuation.png", table)
            plots.plot_hurst(out / "hurst.png", result)
            plots.plot_spectrum(out / "spectrum.png", result)
        print(f"wrote reports to {out}")
    i2 = mf_adcca.QGrid(result.qs).index_of(2.0)
    print(f"h(2) overall = {report.fmt(result.overall.h[i2], 4)}"
          f"  dh(2) = {report.fmt(result.dh.get(2.0, float('nan')), 4)}"
          f"  D_xy = {report.fmt(result.d_xy, 4)}"
          f"  dalpha = {report.fmt(result.overall.scalars.delta_alpha, 4)}")
    return 0


def cmd_dcca(args) -> int:
    x = _load_series(args.csv_x)
    y = _load_series(args.csv_y)
    scales = None
    if args.scales:
        scales = _parse_scales(args.scales, len(x)).scales
    curve = dcca_coeff.rho_dcca_asym(x, y, scales=scales)
    verdicts = dcca_coeff.asymmetry_verdict(curve)
    out = _outdir(args)
    if out is not None:
        report.write_dcca(out / "dcca.csv", curve, verdicts)
        if not args.no_plots:
            from . import plots
            plots.plot_dcca(out / "dcca.png", curve)
        print(f"wrote {out / 'dcca.csv'}")
    counts = {v: verdicts.count(v) for v in sorted(set(verdicts))}
    print(f"verdicts across {len(curve)} scales: {counts}")
    return 0


def cmd_garch(args) -> int:
    r = _load_series(args.csv, role="return")
    models = ("egarch", "gjr") if args.model == "both" else (args.model,)
    out = _outdir(args)
    rc = 0
    for model in models:
        fit_result = garch.fit(garch.GarchSpec(model), r)
        verdict = garch.asymmetry_sign(fit_result)
        payload = report.garch_payload(fit_result, verdict)
        if out is not None:
            report.write_json(out / f"garch_{model}.json", payload)
        p = fit_result.params
        print(f"{model}: omega={report.fmt(p['omega'], 4)} alpha1={report.fmt(p['alpha1'], 4)} "
              f"alpha2={report.fmt(p['alpha2'], 4)} beta={report.fmt(p['beta'], 4)} "
              f"loglik={report.fmt(fit_result.loglik, 6)} aic={report.fmt(fit_result.aic, 6)} "
              f"[{verdict}]")
        if not fit_result.converged:
            print(f"warning: {model} fit did not converge", file=sys.stderr)
            rc = 1
    return rc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfadcca",
        description="Multifractal asymmetric detrended cross-correlation analysis toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, plots=True):
        p.add_argument("--out", help="output directory for reports")
        p.add_argument("--seed", type=int, default=0)
        if plots:
            p.add_argument("--no-plots", action="store_true",
                           help="skip figure rendering")

    p = sub.add_parser("analyze", help="run the full pipeline from a YAML config")
    p.add_argument("config")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate synthetic series as CSV")
    p.add_argument("--kind", required=True, choices=sorted(_KIND_MAP))
    p.add_argument("--length", "-n", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--H", type=float, default=0.5, help="fgn Hurst index")
    p.add_argument("--p", type=float, default=0.75, help="cascade weight")
    p.add_argument("--levels", type=int, default=0, help="cascade levels (overrides length)")
    p.add_argument("--omega", type=float, default=1e-4)
    p.add_argument("--alpha1", type=float, default=0.05)
    p.add_argument("--alpha2", type=float, default=0.10)
    p.add_argument("--beta", type=float, default=0.85)
    p.add_argument("--intraday", action="store_true",
                   help="emit timestamp,price bars instead of date,value increments")
    p.add_argument("--days", type=int, default=0, help="days of bars (intraday mode)")
    p.add_argument("--interval", type=int, default=5, help="bar minutes (intraday mode)")
    p.add_argument("--start-date", default="2016-01-01")
    p.add_argument("--price0", type=float, default=100.0)
    p.add_argument("--bar-std", type=float, default=0.001,
                   help="per-bar return std for non-GARCH intraday kinds")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("describe", help="descriptive statistics of a series CSV")
    p.add_argument("csv")
    add_common(p, plots=False)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("qcc", help="cross-correlation significance test")
    p.add_argument("csv_x")
    p.add_argument("csv_y")
    p.add_argument("--m-max", type=int, default=500)
    p.add_argument("--level", type=float, default=0.05)
    add_common(p)
    p.set_defaults(func=cmd_qcc)

    p = sub.add_parser("mfadcca", help="multifractal (cross-)correlation analysis")
    p.add_argument("csv_x")
    p.add_argument("csv_y", nargs="?", default=None,
                   help="second series; omit for self-analysis")
    p.add_argument("--scales", help="MIN:MAX:COUNT log-spaced scale grid")
    p.add_argument("--q", help="MIN:MAX:STEP moment orders")
    add_common(p)
    p.set_defaults(func=cmd_mfadcca)

    p = sub.add_parser("dcca", help="DCCA coefficients with asymmetry verdicts")
    p.add_argument("csv_x")
    p.add_argument("csv_y")
    p.add_argument("--scales", help="MIN:MAX:COUNT log-spaced scale grid")
    add_common(p)
    p.set_defaults(func=cmd_dcca)

    p = sub.add_parser("garch", help="EGARCH / GJR-GARCH maximum likelihood fit")
    p.add_argument("csv")
    p.add_argument("--model", choices=("both", "egarch", "gjr"), default="both")
    add_common(p, plots=False)
    p.set_defaults(func=cmd_garch)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
