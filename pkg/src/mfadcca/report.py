"""Deterministic report writers.

Machine files carry 17 significant digits (shortest round-trip is not
enough for cross-tool byte stability); the human summary uses 4. NaN
cells become empty CSV fields and JSON nulls.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path


def fmt(x, digits: int = 17) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool,)):
        return str(x).lower()
    if isinstance(x, (int,)):
        return str(x)
    xf = float(x)
    if math.isnan(xf):
        return ""
    return format(xf, f".{digits}g")


def _sanitize(obj):
    """Make an object JSON-clean: NaN/inf -> None, numpy scalars -> python."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(_sanitize(obj), sort_keys=True, indent=2) + "\n")


def write_csv(path, header, rows) -> None:
    """Rows may mix strings, ints and floats; floats get 17 digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else fmt(c) for c in row])


def qcc_rows(result):
    for m, q, crit, sig in zip(result.m_values, result.q_cc,
                               result.critical, result.significant):
        yield [int(m), float(q), float(crit), "true" if sig else "false"]


def write_qcc(path, result) -> None:
    write_csv(path, ["m", "q_cc", "critical", "significant"], qcc_rows(result))


def write_fluctuation(path, table) -> None:
    rows = []
    for trend in ("overall", "up", "down"):
        fq = table.branch(trend)
        for i, q in enumerate(table.qs):
            for j, s in enumerate(table.scales):
                rows.append([trend, float(q), int(s), float(fq[i, j])])
    write_csv(path, ["trend", "q", "s", "F"], rows)


def write_exponents(path, result) -> None:
    rows = []
    for trend in ("overall", "up", "down"):
        br = result.branch(trend)
        for i, q in enumerate(result.qs):
            rows.append([trend, float(q), float(br.h[i]), float(br.h_se[i])])
    write_csv(path, ["trend", "q", "h", "stderr"], rows)


def write_spectrum(path, result) -> None:
    rows = []
    for trend in ("overall", "up", "down"):
        br = result.branch(trend)
        for i, q in enumerate(result.qs):
            rows.append([trend, float(q), float(br.alpha[i]), float(br.f_alpha[i])])
    write_csv(path, ["trend", "q", "alpha", "f_alpha"], rows)


def scalars_payload(result) -> dict:
    payload = {
        "dh": {fmt(q, 4): v for q, v in result.dh.items()},
        "d_xy": result.d_xy,
    }
    for trend in ("overall", "up", "down"):
        sc = result.branch(trend).scalars
        payload[trend] = {
            "delta_alpha": sc.delta_alpha,
            "alpha_zero": sc.alpha_zero,
            "alpha_min": sc.alpha_min,
            "alpha_max": sc.alpha_max,
            "a_alpha": sc.a_alpha,
            "quality": sc.quality,
        }
    return payload


def write_scalars(path, result) -> None:
    write_json(path, scalars_payload(result))


def write_dcca(path, curve, verdicts) -> None:
    rows = []
    for j, s in enumerate(curve.scales):
        up = float(curve.rho_up[j]) if curve.rho_up is not None else float("nan")
        down = float(curve.rho_down[j]) if curve.rho_down is not None else float("nan")
        rows.append([int(s), float(curve.rho[j]), up, down, verdicts[j]])
    write_csv(path, ["scale", "rho", "rho_up", "rho_down", "verdict"], rows)


def garch_payload(fit_result, verdict: str) -> dict:
    stars = {}
    for name, value in fit_result.params.items():
        se = fit_result.std_errors.get(name)
        if se is None or not (isinstance(se, float) and math.isfinite(se)) or se <= 0:
            stars[name] = ""
            continue
        z = abs(value) / se
        stars[name] = "***" if z > 2.576 else "**" if z > 1.96 else "*" if z > 1.645 else ""
    return {
        "model": fit_result.model,
        "params": fit_result.params,
        "std_errors": fit_result.std_errors,
        "significance": stars,
        "loglik": fit_result.loglik,
        "aic": fit_result.aic,
        "q2_stat": fit_result.q2_stat,
        "q2_pvalue": fit_result.q2_pvalue,
        "converged": fit_result.converged,
        "n_obs": fit_result.n_obs,
        "asymmetry": verdict,
    }


def describe_payload(stats) -> dict:
    return {
        "mean": stats.mean, "median": stats.median, "std_dev": stats.std_dev,
        "max": stats.max, "min": stats.min, "skewness": stats.skewness,
        "excess_kurtosis": stats.excess_kurtosis, "kurtosis_convention": "excess",
        "jarque_bera": stats.jarque_bera, "jb_p_value": stats.jb_p_value,
        "n": stats.n,
    }


def summary_lines(asset: str, stats_by_role: dict) -> list[str]:
    lines = [f"[{asset}]"]
    for role, st in stats_by_role.items():
        lines.append(
            f"  {role}: n={st.n} mean={fmt(st.mean, 4)} std={fmt(st.std_dev, 4)} "
            f"skew={fmt(st.skewness, 4)} exkurt={fmt(st.excess_kurtosis, 4)} "
            f"JB={fmt(st.jarque_bera, 4)} (p={fmt(st.jb_p_value, 4)})"
        )
    return lines
