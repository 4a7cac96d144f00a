"""Run configuration: declarative YAML in, validated RunConfig out."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

ANALYSES = ("describe", "qcc", "mf_adcca", "dcca_coeff", "garch")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class AssetConfig:
    name: str
    intraday_csv: str


@dataclass(frozen=True)
class RunConfig:
    assets: tuple
    output_dir: str
    date_start: str | None = None
    date_end: str | None = None
    rv_interval_minutes: int = 5
    scale_min: int | None = None
    scale_max: int | None = None
    scale_count: int = 100
    q_min: float = -10.0
    q_max: float = 10.0
    q_step: float = 0.5
    analyses: tuple = ANALYSES
    qcc_m_max: int = 500
    qcc_level: float = 0.05
    seed: int = 0
    plots: bool = True
    detrend_order: int = 2

    def config_hash(self) -> str:
        """Hash of the semantically meaningful fields.

        The output directory is excluded: pointing the same run elsewhere
        must not look like a different analysis.
        """
        payload = {
            "assets": [[a.name, a.intraday_csv] for a in self.assets],
            "date_range": [self.date_start, self.date_end],
            "rv_interval_minutes": self.rv_interval_minutes,
            "scales": [self.scale_min, self.scale_max, self.scale_count],
            "q": [self.q_min, self.q_max, self.q_step],
            "analyses": list(self.analyses),
            "qcc": [self.qcc_m_max, self.qcc_level],
            "seed": self.seed,
            "plots": self.plots,
            "detrend_order": self.detrend_order,
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path) -> RunConfig:
    """Parse and validate a YAML run configuration."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: YAML parse error: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    assets_raw = raw.get("assets")
    if not assets_raw or not isinstance(assets_raw, list):
        raise ConfigError(f"{path}: 'assets' must be a non-empty list")
    assets = []
    for i, entry in enumerate(assets_raw):
        if not isinstance(entry, dict) or "name" not in entry or "intraday_csv" not in entry:
            raise ConfigError(f"{path}: assets[{i}] needs 'name' and 'intraday_csv'")
        csv_path = Path(entry["intraday_csv"])
        if not csv_path.is_absolute():
            csv_path = path.parent / csv_path
        if not csv_path.exists():
            raise ConfigError(f"{path}: assets[{i}] input file not found: {csv_path}")
        assets.append(AssetConfig(name=str(entry["name"]), intraday_csv=str(csv_path)))

    out_dir = raw.get("output_dir", "out")
    out_path = Path(out_dir)
    if not out_path.is_absolute():
        out_path = path.parent / out_path

    dr = raw.get("date_range") or {}
    start, end = dr.get("start"), dr.get("end")
    if start is not None and end is not None and str(start) > str(end):
        raise ConfigError(f"{path}: empty date range {start}..{end}")

    scales = raw.get("scales") or {}
    q = raw.get("q") or {}
    analyses_raw = raw.get("analyses")
    if analyses_raw is None:
        analyses = ANALYSES
    else:
        unknown = set(analyses_raw) - set(ANALYSES)
        if unknown:
            raise ConfigError(f"{path}: unknown analyses {sorted(unknown)}")
        analyses = tuple(a for a in ANALYSES if a in analyses_raw)

    try:
        cfg = RunConfig(
            assets=tuple(assets),
            output_dir=str(out_path),
            date_start=str(start) if start is not None else None,
            date_end=str(end) if end is not None else None,
            rv_interval_minutes=int(raw.get("rv_interval_minutes", 5)),
            scale_min=int(scales["min"]) if "min" in scales else None,
            scale_max=int(scales["max"]) if "max" in scales else None,
            scale_count=int(scales.get("count", 100)),
            q_min=float(q.get("min", -10.0)),
            q_max=float(q.get("max", 10.0)),
            q_step=float(q.get("step", 0.5)),
            analyses=analyses,
            qcc_m_max=int(raw.get("qcc_m_max", 500)),
            qcc_level=float(raw.get("qcc_level", 0.05)),
            seed=int(raw.get("seed", 0)),
            plots=bool(raw.get("plots", True)),
            detrend_order=int(raw.get("detrend_order", 2)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if cfg.rv_interval_minutes <= 0:
        raise ConfigError(f"{path}: rv_interval_minutes must be positive")
    if cfg.qcc_m_max < 1 or not (0.0 < cfg.qcc_level < 1.0):
        raise ConfigError(f"{path}: invalid qcc settings")
    return cfg
