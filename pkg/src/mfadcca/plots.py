"""Figure rendering for report bundles.

All figures are written as PNG files next to the delimited outputs.
Rendering is deterministic: fixed rcParams, fixed dpi and no embedded
software/timestamp metadata.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "lines.markersize": 3.5,
}
_SAVE = {"metadata": {"Software": None}}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def plot_series(path, dates, returns, vol_changes) -> None:
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(2, 1, sharex=True, figsize=(7.0, 5.5))
        axes[0].plot(dates, returns, color="tab:blue")
        axes[0].set_ylabel("log return")
        axes[1].plot(dates, vol_changes, color="tab:red")
        axes[1].set_ylabel("volatility change")
        axes[1].set_xlabel("date")
        _save(fig, path)


def plot_qcc(path, result) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.loglog(result.m_values, result.q_cc, label="Q_cc(m)", color="tab:blue")
        ax.loglog(result.m_values, result.critical, "--", color="tab:gray",
                  label=f"chi2 critical ({result.level:g})")
        ax.set_xlabel("m")
        ax.set_ylabel("statistic")
        ax.legend()
        _save(fig, path)


def plot_fluctuation(path, table, q_show=(-10.0, -4.0, 0.0, 2.0, 4.0, 10.0)) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for q in q_show:
            hits = np.nonzero(np.isclose(table.qs, q))[0]
            if hits.size == 0:
                continue
            row = table.f[hits[0]]
            good = np.isfinite(row)
            ax.loglog(table.scales[good], row[good], "o-", label=f"q={q:g}")
        ax.set_xlabel("scale s")
        ax.set_ylabel("F_q(s)")
        ax.legend(ncols=2)
        _save(fig, path)


def plot_hurst(path, result) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        styles = {"overall": "k.-", "up": "r.--", "down": "b.--"}
        for trend, style in styles.items():
            br = result.branch(trend)
            good = np.isfinite(br.h)
            ax.plot(result.qs[good], br.h[good], style, label=trend)
        ax.set_xlabel("q")
        ax.set_ylabel("h(q)")
        ax.legend()
        _save(fig, path)


def plot_spectrum(path, result) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        styles = {"overall": "k.-", "up": "r.--", "down": "b.--"}
        for trend, style in styles.items():
            br = result.branch(trend)
            good = np.isfinite(br.alpha) & np.isfinite(br.f_alpha)
            ax.plot(br.alpha[good], br.f_alpha[good], style, label=trend)
        ax.set_xlabel("alpha")
        ax.set_ylabel("f(alpha)")
        ax.legend()
        _save(fig, path)


def plot_dcca(path, curve) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.semilogx(curve.scales, curve.rho, "k.-", label="rho")
        if curve.rho_up is not None:
            ax.semilogx(curve.scales, curve.rho_up, "r.--", label="rho_up")
        if curve.rho_down is not None:
            ax.semilogx(curve.scales, curve.rho_down, "b.--", label="rho_down")
        ax.axhline(0.0, color="tab:gray", lw=0.8)
        ax.set_ylim(-1.05, 1.05)
        ax.set_xlabel("scale s")
        ax.set_ylabel("rho_DCCA")
        ax.legend()
        _save(fig, path)
