"""Multifractal asymmetric detrended cross-correlation analysis toolkit.

Library and CLI for scaling analysis of paired financial series:
MF-ADCCA fluctuation functions and singularity spectra, trend-conditional
DCCA coefficients, the Q_cc cross-correlation test, realized volatility
construction and asymmetric GARCH estimation, validated against synthetic
processes with analytically known exponents.
"""

__version__ = "0.1.0"

from .cross_corr_test import QccResult, chi2_quantile, qcc
from .dcca_coeff import DccaCurve, asymmetry_verdict, default_dcca_scales, rho_dcca, rho_dcca_asym
from .detrend_engine import (
    IndexProxy,
    Profile,
    build_index_proxy,
    build_profile,
    classify_trend,
    detrended_cov,
    overlap_plan,
    two_sided_plan,
)
from .garch import GarchFit, GarchSpec, asymmetry_sign, fit, ljung_box_squared, loglik
from .mf_adcca import (
    FluctuationTable,
    MultifractalResult,
    QGrid,
    ScaleGrid,
    analyze_pair,
    asymmetry_degree,
    efficiency_degree,
    fluctuation_functions,
    hurst_exponents,
    renyi,
    singularity_spectrum,
)
from .series_core import (
    DailySeries,
    DescriptiveStats,
    IncrementSeries,
    IntradaySeries,
    describe,
    log_returns,
    realized_volatility,
    vol_changes,
)
from .synth import (
    GeneratorSpec,
    cascade_alpha_range,
    cascade_hurst,
    cascade_tau,
    gen_binomial_cascade,
    gen_fgn,
    gen_garch,
)

__all__ = [
    "__version__",
    "QccResult", "chi2_quantile", "qcc",
    "DccaCurve", "asymmetry_verdict", "default_dcca_scales", "rho_dcca", "rho_dcca_asym",
    "IndexProxy", "Profile", "build_index_proxy", "build_profile",
    "classify_trend", "detrended_cov", "overlap_plan", "two_sided_plan",
    "GarchFit", "GarchSpec", "asymmetry_sign", "fit", "ljung_box_squared", "loglik",
    "FluctuationTable", "MultifractalResult", "QGrid", "ScaleGrid",
    "analyze_pair", "asymmetry_degree", "efficiency_degree",
    "fluctuation_functions", "hurst_exponents", "renyi", "singularity_spectrum",
    "DailySeries", "DescriptiveStats", "IncrementSeries", "IntradaySeries",
    "describe", "log_returns", "realized_volatility", "vol_changes",
    "GeneratorSpec", "cascade_alpha_range", "cascade_hurst", "cascade_tau",
    "gen_binomial_cascade", "gen_fgn", "gen_garch",
]
