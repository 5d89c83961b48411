import json
import time

import pytest

from volset import __version__
from volset.cli import main
from volset.errors import ConfigError
from volset.experiment import SCENARIOS, materialize, run
from volset.serialize import load_json

PLANAR = {"seed": 3, "generator": {"type": "planar", "n": 20},
          "operations": [{"op": "volumes", "bin_width": 0.01, "expect_degenerate": True}]}


def numeric(report):
    return json.dumps([report["results"], report["verdicts"]], sort_keys=True)


def test_seed_is_mandatory():
    with pytest.raises(ConfigError, match="seed"):
        materialize({"generator": {"type": "uniform"}})


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        materialize({"seed": 1, "generator": {"type": "uniform", "levle": 3}})
    with pytest.raises(ConfigError):
        materialize({"seed": 1, "generator": {"type": "uniform"}, "operations": [{"op": "x"}]})


def test_defaults_materialized():
    cfg = materialize({"seed": 1, "generator": {"type": "cantor_product", "dimension": 0.9},
                       "operations": [{"op": "smallness"}, {"op": "fr-scan"}]})
    gen = cfg["generator"]
    assert gen["ratio"] == pytest.approx(2 ** (-1 / 0.9)) and gen["level"] == 6
    assert cfg["operations"][0]["s"] == pytest.approx(2.7)
    assert cfg["operations"][0]["n_pairs"] == 1_000_000
    assert cfg["operations"][1]["radii"][0] == 4.0
    assert cfg["threads"] == 1 and cfg["budget_cells"] > 0


def test_tolerance_override():
    cfg = materialize({"seed": 1, "generator": {"type": "uniform"},
                       "operations": [{"op": "smallness"}],
                       "tolerances": {"smallness": {"slope_max": -1.0}}})
    assert cfg["operations"][0]["slope_max"] == -1.0


def test_config_error_has_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "seed": 1,\n  "generator": {"type": }\n}\n')
    with pytest.raises(ConfigError) as exc:
        from volset.experiment import load_config
        load_config(path)
    assert exc.value.line == 3 and exc.value.column is not None


def test_planar_degenerate_control(tmp_path):
    report = run(dict(PLANAR, output={"dir": str(tmp_path)}))
    res = report["results"][0]["result"]
    assert res["verdict"] == "degenerate control passed"
    assert res["occupancy_indicator"] == 0.01
    assert report["passed"] and report["version"] == __version__
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "00_volumes_volumes.csv").exists()


def test_identical_config_identical_payload():
    cfg = {"seed": 9, "generator": {"type": "cantor_product", "dimension": 0.8, "level": 4},
           "operations": [{"op": "smallness", "n_pairs": 300_000},
                          {"op": "volumes", "mode": "sampled", "n_draws": 300_000,
                           "delta": 0.01}]}
    a, b = run(cfg), run(dict(cfg, threads=3))
    assert numeric(a) == numeric(b)
    assert a["config"]["threads"] == 1 and b["config"]["threads"] == 3


def test_thm7_desk_scenario():
    report = run(SCENARIOS["thm7-desk"])
    vol = report["results"][1]["result"]
    assert vol["delta_bound"] == pytest.approx(4096 ** (5 / 13))
    assert vol["delta_bound"] == pytest.approx(24.5, abs=0.1)
    verdict = report["verdicts"][0]
    assert verdict["value"] == vol["delta_count"]
    assert verdict["passed"] == (vol["delta_count"] >= vol["delta_bound"])


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["run", "--scenario", "planar-control"]) == 0
    gen = '{"type": "homogeneous", "n": 1000}'
    assert main(["volumes", "--generator", gen, "--seed", "1", "--budget-tuples", "1000"]) == 3
    assert main(["volumes", "--generator", gen]) == 2  # no seed
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    assert main(["run", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err
    # a declared bound that cannot hold gives exit status 1
    args = ["smallness", "--generator", '{"type": "uniform", "level": 4}', "--seed", "2",
            "--set", "n_pairs=20000", "--set", "slope_max=-10"]
    assert main(args) == 1
    with pytest.raises(SystemExit) as exc:
        main(["suite", "nightly"])
    assert exc.value.code == 2


def test_cli_subcommands(tmp_path, capsys):
    out = tmp_path / "gen"
    assert main(["generate", "--generator", '{"type": "sphere", "level": 4}', "--seed", "0",
                 "--out", str(out)]) == 0
    assert load_json(out / "source.json").n_cells > 0
    shell = '{"type": "uniform", "level": 4, "annulus": [0.5, 1.0]}'
    common = ["--seed", "1", "--threads", "2"]
    assert main(["energy", "--generator", '{"type": "homogeneous", "n": 64}'] + common) == 0
    assert main(["decay", "--generator", '{"type": "sphere", "level": 5}',
                 "--set", "samples_per_annulus=64"] + common) == 0
    assert main(["smallness", "--generator", shell, "--set", "n_pairs=20000"] + common) == 0
    assert main(["fr-scan", "--generator", shell, "--set", "n_quads=20000"] + common) == 0
    assert main(["boxdim", "--generator", shell, "--set", "n_draws=20000",
                 "--out", str(tmp_path / "bd")] + common) == 0
    assert (tmp_path / "bd" / "00_boxdim_boxdim.csv").exists()
    capsys.readouterr()


def test_smoke_suite(tmp_path, capsys):
    t0 = time.perf_counter()
    status = main(["suite", "smoke", "--out", str(tmp_path)])
    assert time.perf_counter() - t0 < 60
    summary = json.loads((tmp_path / "suite.json").read_text())
    assert len(summary["criteria"]) == 10
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("[")]
    assert len(lines) == 10
    # status mirrors the aggregate verdict
    assert status == (0 if summary["passed"] else 1)
