"""Experiment harness: config parsing, runs, reproducibility."""

import json
from pathlib import Path

import pytest

from rsc import experiments
from rsc.experiments import ConfigError, ExperimentConfig, chi2_sf, run, seed_stream


def make_config(tmp_path, kind, **overrides):
    base = {
        "kind": kind,
        "n_grid": (3,),
        "r": 1,
        "alpha": None,
        "p": None,
        "trials": 50,
        "seed": 7,
        "out_dir": str(tmp_path),
        "prefix": f"{kind}-test",
        "workers": 1,
        "params": {},
    }
    base.update(overrides)
    return ExperimentConfig(**base)


def test_seed_stream_deterministic_and_injective():
    assert seed_stream(5, 0) == seed_stream(5, 0)
    assert seed_stream(5, 0) != seed_stream(5, 1)
    seen = {seed_stream(5, i) for i in range(2000)}
    assert len(seen) == 2000


def test_chi2_sf_against_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    for dof in (1, 2, 3, 8, 17, 30):
        for x in (0.5, 2.0, 10.0, 35.0):
            assert chi2_sf(x, dof) == pytest.approx(
                float(scipy_stats.chi2.sf(x, dof)), rel=1e-10, abs=1e-300
            )


def test_config_from_toml(tmp_path):
    cfg_file = tmp_path / "exp.toml"
    cfg_file.write_text(
        """
[experiment]
kind = "connectivity"
trials = 5
seed = 11
rate_required = 0.8

[model]
n = [20, 30]
r = 2
alpha = [0.1, 0.4, 2.0]

[output]
dir = "OUT"
prefix = "conn"
"""
    )
    config = ExperimentConfig.from_toml(cfg_file)
    assert config.kind == "connectivity"
    assert config.n_grid == (20, 30)
    assert config.params["rate_required"] == 0.8
    assert config.out_dir == "OUT"


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": {}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(
            {"experiment": {"kind": "nope"}, "model": {"n": 3, "r": 1, "alpha": [0.1, 0.2]}}
        )
    with pytest.raises(ConfigError):
        make_config(tmp_path, "connectivity", trials=0, alpha=(0.1, 0.2))
    with pytest.raises(ConfigError):
        make_config(tmp_path, "connectivity", n_grid=(30, 20), alpha=(0.1, 0.2))
    bad = tmp_path / "bad.toml"
    bad.write_text("not toml [ at all")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_toml(bad)


def test_measure_oracle_run(tmp_path):
    config = make_config(
        tmp_path,
        "measure-oracle",
        p=("1/2", "1/2"),
        trials=4000,
    )
    result = run(config)
    assert result.passed
    assert result.summary["summary"]["exact_sum_one"] is True
    assert result.summary["summary"]["p_value"] > 0.001
    rows = Path(result.rows_path).read_text().splitlines()
    assert rows[0].startswith("complex_id,")
    assert len(rows) == 1 + 18  # header + all complexes at (3, 1)


def test_face_numbers_band(tmp_path):
    config = make_config(
        tmp_path,
        "face-numbers",
        alpha=(0.0, 0.3),
        n_grid=(150,),
        trials=30,
        params={"d": 1, "band_t": 0.2},
    )
    result = run(config)
    assert result.summary["summary"]["regime"] == "band"
    assert result.passed


def test_face_numbers_vanishing(tmp_path):
    config = make_config(
        tmp_path,
        "face-numbers",
        alpha=(0.0, 4.0),
        n_grid=(60,),
        trials=30,
        params={"d": 1},
    )
    result = run(config)
    assert result.summary["summary"]["regime"] == "vanishing"
    assert result.passed


def test_betti_domination_small(tmp_path):
    config = make_config(
        tmp_path,
        "betti-domination",
        alpha=(0.0, 0.0, 1.5, 0.0),
        r=3,
        n_grid=(16, 32),
        trials=6,
    )
    result = run(config)
    by_n = result.summary["summary"]["by_n"]
    assert set(by_n) == {"16", "32"}
    assert result.summary["summary"]["critical_dimension"] == 1


def test_connectivity_run(tmp_path):
    config = make_config(
        tmp_path,
        "connectivity",
        alpha=(0.0, 0.3, 3.0),
        r=2,
        n_grid=(60,),
        trials=20,
    )
    result = run(config)
    assert result.passed
    assert result.summary["summary"]["connected_rate"]["60"] >= 0.95


def test_degrees_run(tmp_path):
    config = make_config(
        tmp_path,
        "degrees",
        alpha=(0.0, 0.0, 1.5, 0.0),
        r=3,
        n_grid=(40, 80),
        trials=6,
        params={"d": 0, "d_above": 1, "delta": 0.3, "k": 1},
    )
    result = run(config)
    summary = result.summary["summary"]
    assert summary["band_rate_at_largest_n"] == 1.0
    assert summary["purity_rate_at_largest_n"] == 1.0


def test_garland_run(tmp_path):
    config = make_config(
        tmp_path,
        "garland",
        alpha=(0.0, 0.0, 0.2, 0.0),
        r=3,
        n_grid=(25,),
        trials=4,
        params={"k": 3},
    )
    result = run(config)
    assert result.passed  # zero inconsistencies is the gate
    assert result.summary["summary"]["inconsistencies"] == 0


def test_cycle_hunt_run(tmp_path):
    config = make_config(
        tmp_path,
        "cycle-hunt",
        alpha=(0.2, 0.85),
        r=1,
        n_grid=(150,),
        trials=25,
        params={"k": 1},
    )
    result = run(config)
    assert result.passed
    assert result.summary["summary"]["violations"] == 0


def test_phase_diagram_run(tmp_path):
    config = make_config(
        tmp_path,
        "phase-diagram",
        r=3,
        n_grid=(1,),
        trials=1,
        params={"free": (1, 2), "steps": 11, "min": 0.0, "max": 1.5},
    )
    result = run(config)
    labels = result.summary["summary"]["labels_seen"]
    assert any(label.startswith("D1") for label in labels)
    assert any(label.startswith("D2") for label in labels)


def test_reproducible_outputs(tmp_path):
    def go(subdir):
        config = make_config(
            tmp_path / subdir,
            "connectivity",
            alpha=(0.1, 0.4, 2.0),
            r=2,
            n_grid=(30,),
            trials=10,
        )
        result = run(config)
        return (
            Path(result.rows_path).read_bytes(),
            Path(result.summary_path).read_bytes(),
        )

    rows_a, summary_a = go("a")
    rows_b, summary_b = go("b")
    assert rows_a == rows_b
    assert summary_a == summary_b


def test_workers_do_not_change_results(tmp_path):
    def go(subdir, workers):
        config = make_config(
            tmp_path / subdir,
            "connectivity",
            alpha=(0.1, 0.4, 2.0),
            r=2,
            n_grid=(25,),
            trials=8,
            workers=workers,
        )
        return Path(run(config).rows_path).read_bytes()

    assert go("w1", 1) == go("w2", 2)


def test_summary_embeds_config_and_phase(tmp_path):
    config = make_config(
        tmp_path,
        "connectivity",
        alpha=(0.1, 0.4, 2.0),
        r=2,
        n_grid=(20,),
        trials=3,
    )
    result = run(config)
    data = json.loads(Path(result.summary_path).read_text())
    assert data["input_hash"] == config.content_hash()
    assert data["config"]["seed"] == 7
    assert data["phase"]["domain"] == {"kind": "domain", "k": 1}


def test_failed_trials_are_skipped(capsys):
    from rsc.experiments import _map_trials

    def worker(task):
        _, n, trial, _ = task
        if trial == 1:
            raise RuntimeError("boom")
        return (n, trial)

    tasks = [(None, 10, t, 0) for t in range(4)]
    results = _map_trials(worker, tasks, workers=1)
    assert results == [(10, 0), (10, 2), (10, 3)]
    assert "trial failed" in capsys.readouterr().err
