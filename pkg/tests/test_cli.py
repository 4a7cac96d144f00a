"""CLI and pipeline behaviour: exit codes, artifacts, config handling."""

import json
import math
from pathlib import Path

import numpy as np
import pytest
import yaml

from mfadcca import cli, config, report


def run_cli(*argv):
    return cli.main([str(a) for a in argv])


# ---------------------------------------------------------------- synth verb


def test_synth_iid_deterministic(tmp_path):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert run_cli("synth", "--kind", "iid", "-n", 256, "--seed", 7, "--out", a) == 0
    assert run_cli("synth", "--kind", "iid", "-n", 256, "--seed", 7, "--out", b) == 0
    assert run_cli("synth", "--kind", "iid", "-n", 256, "--seed", 8, "--out", c) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_synth_fgn_rejects_non_power_of_two(tmp_path, capsys):
    rc = run_cli("synth", "--kind", "fgn", "-n", 1000, "--out", tmp_path / "x.csv")
    assert rc == 2
    assert "power of two" in capsys.readouterr().err


def test_synth_explosive_garch_rejected_before_writing(tmp_path, capsys):
    out = tmp_path / "x.csv"
    rc = run_cli("synth", "--kind", "gjr", "-n", 500, "--alpha1", 0.5,
                 "--alpha2", 0.5, "--beta", 0.9, "--out", out)
    assert rc == 2
    assert not out.exists()
    assert "config error" in capsys.readouterr().err


def test_synth_cascade_levels_set_length(tmp_path):
    out = tmp_path / "c.csv"
    assert run_cli("synth", "--kind", "cascade", "--levels", 10, "--out", out) == 0
    assert len(out.read_text().splitlines()) == 1024 + 1  # header + rows


def test_synth_intraday_garch_bar_count(tmp_path):
    out = tmp_path / "bars.csv"
    rc = run_cli("synth", "--kind", "gjr", "-n", 3, "--intraday", "--out", out)
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "timestamp,price"
    assert len(lines) == 1 + 3 * 288  # 5-minute bars, three days

    ts = [int(line.split(",")[0]) for line in lines[1:4]]
    assert ts[1] - ts[0] == 300 and ts[2] - ts[1] == 300


# ------------------------------------------------------------ one-shot verbs


@pytest.fixture(scope="module")
def iid_csv(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "iid.csv"
    run_cli("synth", "--kind", "iid", "-n", 600, "--seed", 3, "--out", p)
    return p


@pytest.fixture(scope="module")
def iid_csv2(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "iid2.csv"
    run_cli("synth", "--kind", "iid", "-n", 600, "--seed", 4, "--out", p)
    return p


def test_describe_prints_summary(iid_csv, capsys):
    assert run_cli("describe", iid_csv) == 0
    text = capsys.readouterr().out
    assert "[iid]" in text and "JB=" in text


def test_describe_writes_json(iid_csv, tmp_path):
    assert run_cli("describe", iid_csv, "--out", tmp_path) == 0
    payload = json.loads((tmp_path / "descriptive_stats.json").read_text())
    assert payload["n"] == 600
    assert payload["kurtosis_convention"] == "excess"


def test_qcc_writes_csv_and_figure(iid_csv, iid_csv2, tmp_path):
    assert run_cli("qcc", iid_csv, iid_csv2, "--m-max", 40, "--out", tmp_path) == 0
    lines = (tmp_path / "qcc.csv").read_text().splitlines()
    assert lines[0] == "m,q_cc,critical,significant"
    assert len(lines) == 41
    assert (tmp_path / "qcc.png").stat().st_size > 0


def test_qcc_no_plots_skips_figure(iid_csv, iid_csv2, tmp_path):
    rc = run_cli("qcc", iid_csv, iid_csv2, "--m-max", 10, "--out", tmp_path,
                 "--no-plots")
    assert rc == 0
    assert (tmp_path / "qcc.csv").exists()
    assert not (tmp_path / "qcc.png").exists()


def test_qcc_m_max_clamped_to_series_length(iid_csv, iid_csv2, capsys):
    # 600 observations cap the usable lag range at n - 2
    assert run_cli("qcc", iid_csv, iid_csv2, "--m-max", 5000) == 0
    assert "/598 lags" in capsys.readouterr().out


@pytest.fixture(scope="module")
def cascade_csv(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "cascade.csv"
    run_cli("synth", "--kind", "cascade", "--levels", 12, "--seed", 5, "--out", p)
    return p


def test_mfadcca_self_analysis_artifacts(cascade_csv, tmp_path, capsys):
    rc = run_cli("mfadcca", cascade_csv, "--scales", "8:256:20",
                 "--q=-10:10:1", "--out", tmp_path)
    assert rc == 0
    for name in ("fluctuation.csv", "exponents.csv", "spectrum.csv", "scalars.json",
                 "fluctuation.png", "hurst.png", "spectrum.png"):
        assert (tmp_path / name).exists(), name
    assert "h(2) overall" in capsys.readouterr().out

    rows = (tmp_path / "exponents.csv").read_text().splitlines()
    assert rows[0] == "trend,q,h,stderr"
    assert len(rows) == 1 + 3 * 21  # three branches, q grid -10..10 step 1


def test_mfadcca_bad_scales_exit_code(cascade_csv, tmp_path):
    rc = run_cli("mfadcca", cascade_csv, "--scales", "junk", "--out", tmp_path)
    assert rc == 2


def test_dcca_writes_verdict_column(iid_csv, iid_csv2, tmp_path):
    rc = run_cli("dcca", iid_csv, iid_csv2, "--scales", "10:60:6", "--out", tmp_path)
    assert rc == 0
    lines = (tmp_path / "dcca.csv").read_text().splitlines()
    assert lines[0] == "scale,rho,rho_up,rho_down,verdict"
    verdicts = {line.split(",")[-1] for line in lines[1:]}
    assert verdicts <= {"symmetric", "asymmetric", "inverse_asymmetric", "indeterminate"}
    assert (tmp_path / "dcca.png").exists()


@pytest.fixture(scope="module")
def garch_returns_csv(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "returns.csv"
    run_cli("synth", "--kind", "gjr", "-n", 2000, "--seed", 11,
            "--omega", 1e-4, "--alpha1", 0.05, "--alpha2", 0.10,
            "--beta", 0.85, "--out", p)
    return p


def test_garch_verb_writes_both_fits(garch_returns_csv, tmp_path, capsys):
    rc = run_cli("garch", garch_returns_csv, "--out", tmp_path)
    assert rc == 0
    for model in ("egarch", "gjr"):
        payload = json.loads((tmp_path / f"garch_{model}.json").read_text())
        assert payload["model"] == model
        assert set(payload["params"]) == {"omega", "alpha1", "alpha2", "beta"}
        assert payload["n_obs"] == 2000
        assert payload["asymmetry"] in (
            "negative_shock_dominant", "positive_shock_dominant", "insignificant")
    out = capsys.readouterr().out
    assert "egarch:" in out and "gjr:" in out


# ------------------------------------------------------------------- analyze


def write_intraday_asset(path, days, seed):
    run_cli("synth", "--kind", "gjr", "-n", days, "--seed", seed,
            "--intraday", "--out", path)


@pytest.fixture(scope="module")
def mini_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("mini")
    for name, seed in (("aaa", 21), ("bbb", 22)):
        write_intraday_asset(root / f"{name}.csv", 420, seed)
    cfg = {
        "assets": [{"name": "aaa", "intraday_csv": "aaa.csv"},
                   {"name": "bbb", "intraday_csv": "bbb.csv"}],
        "output_dir": "out",
        "scales": {"min": 16, "max": 40, "count": 10},
        "q": {"min": -10, "max": 10, "step": 1},
        "qcc_m_max": 50,
        "plots": False,
    }
    cfg_path = root / "run.yaml"
    cfg_path.write_text(yaml.safe_dump(cfg))
    rc = run_cli("analyze", cfg_path)
    return root, rc


def test_analyze_exit_code_and_artifacts(mini_run):
    root, rc = mini_run
    assert rc == 0
    out = root / "out"
    assert json.loads((out / "manifest.json").read_text())["assets"] == {
        "aaa": "ok", "bbb": "ok"}
    assert (out / "timings.json").exists()
    assert "[aaa]" in (out / "summary.txt").read_text()
    for asset in ("aaa", "bbb"):
        for name in ("daily_close.csv", "sigma.csv", "returns.csv",
                     "vol_changes.csv", "descriptive_stats.json", "qcc.csv",
                     "fluctuation.csv", "exponents.csv", "spectrum.csv",
                     "scalars.json", "dcca.csv", "garch_egarch.json",
                     "garch_gjr.json"):
            assert (out / asset / name).exists(), f"{asset}/{name}"


def test_analyze_no_plots_leaves_no_figures(mini_run):
    root, _ = mini_run
    assert list((root / "out").rglob("*.png")) == []


def test_analyze_out_flag_overrides_output_dir(mini_run, tmp_path):
    root, _ = mini_run
    rc = run_cli("analyze", root / "run.yaml", "--out", tmp_path / "alt")
    assert rc == 0
    assert (tmp_path / "alt" / "manifest.json").exists()


def test_analyze_manifest_hash_stable_across_output_dirs(mini_run, tmp_path):
    root, _ = mini_run
    first = json.loads((root / "out" / "manifest.json").read_text())
    run_cli("analyze", root / "run.yaml", "--out", tmp_path / "other")
    second = json.loads((tmp_path / "other" / "manifest.json").read_text())
    assert first["config_hash"] == second["config_hash"]


def test_analyze_missing_config_exit_2(capsys):
    assert run_cli("analyze", "/nonexistent/run.yaml") == 2
    assert "config error" in capsys.readouterr().err


# ------------------------------------------------------------------- config


def test_load_config_rejects_bad_yaml(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("assets: [unclosed\n")
    with pytest.raises(config.ConfigError, match="YAML"):
        config.load_config(p)


def test_load_config_rejects_non_mapping(tmp_path):
    p = tmp_path / "list.yaml"
    p.write_text("- just\n- a list\n")
    with pytest.raises(config.ConfigError, match="mapping"):
        config.load_config(p)


def test_load_config_requires_assets(tmp_path):
    p = tmp_path / "empty.yaml"
    p.write_text("output_dir: out\n")
    with pytest.raises(config.ConfigError, match="assets"):
        config.load_config(p)


def test_load_config_checks_input_files(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text(yaml.safe_dump(
        {"assets": [{"name": "x", "intraday_csv": "missing.csv"}]}))
    with pytest.raises(config.ConfigError, match="not found"):
        config.load_config(p)


def test_load_config_rejects_unknown_analyses(tmp_path):
    (tmp_path / "x.csv").write_text("timestamp,price\n0,1.0\n")
    p = tmp_path / "cfg.yaml"
    p.write_text(yaml.safe_dump({
        "assets": [{"name": "x", "intraday_csv": "x.csv"}],
        "analyses": ["describe", "wavelets"],
    }))
    with pytest.raises(config.ConfigError, match="wavelets"):
        config.load_config(p)


def test_load_config_rejects_empty_date_range(tmp_path):
    (tmp_path / "x.csv").write_text("timestamp,price\n0,1.0\n")
    p = tmp_path / "cfg.yaml"
    p.write_text(yaml.safe_dump({
        "assets": [{"name": "x", "intraday_csv": "x.csv"}],
        "date_range": {"start": "2020-01-01", "end": "2019-01-01"},
    }))
    with pytest.raises(config.ConfigError, match="date range"):
        config.load_config(p)


def test_load_config_resolves_relative_paths(tmp_path):
    (tmp_path / "x.csv").write_text("timestamp,price\n0,1.0\n")
    p = tmp_path / "cfg.yaml"
    p.write_text(yaml.safe_dump(
        {"assets": [{"name": "x", "intraday_csv": "x.csv"}],
         "output_dir": "results"}))
    cfg = config.load_config(p)
    assert Path(cfg.assets[0].intraday_csv) == tmp_path / "x.csv"
    assert Path(cfg.output_dir) == tmp_path / "results"


def test_config_hash_excludes_output_dir(tmp_path):
    (tmp_path / "x.csv").write_text("timestamp,price\n0,1.0\n")
    base = {"assets": [{"name": "x", "intraday_csv": "x.csv"}]}
    p1, p2 = tmp_path / "a.yaml", tmp_path / "b.yaml"
    p1.write_text(yaml.safe_dump({**base, "output_dir": "one"}))
    p2.write_text(yaml.safe_dump({**base, "output_dir": "two"}))
    assert config.load_config(p1).config_hash() == config.load_config(p2).config_hash()

    p3 = tmp_path / "c.yaml"
    p3.write_text(yaml.safe_dump({**base, "seed": 99}))
    assert config.load_config(p3).config_hash() != config.load_config(p1).config_hash()


def test_analyses_keep_canonical_order(tmp_path):
    (tmp_path / "x.csv").write_text("timestamp,price\n0,1.0\n")
    p = tmp_path / "cfg.yaml"
    p.write_text(yaml.safe_dump({
        "assets": [{"name": "x", "intraday_csv": "x.csv"}],
        "analyses": ["garch", "describe"],
    }))
    assert config.load_config(p).analyses == ("describe", "garch")


# ------------------------------------------------------------- report utils


def test_fmt_handles_empty_and_typed_cells():
    assert report.fmt(float("nan")) == ""
    assert report.fmt(None) == ""
    assert report.fmt(True) == "true"
    assert report.fmt(3) == "3"
    assert report.fmt(math.pi, 4) == "3.142"


def test_write_json_converts_non_finite_to_null(tmp_path):
    p = tmp_path / "x.json"
    report.write_json(p, {"a": float("nan"), "b": np.float64(2.0),
                          "c": float("inf")})
    assert json.loads(p.read_text()) == {"a": None, "b": 2.0, "c": None}


def test_write_json_sorted_and_newline_terminated(tmp_path):
    p = tmp_path / "x.json"
    report.write_json(p, {"b": 1, "a": 2})
    text = p.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
