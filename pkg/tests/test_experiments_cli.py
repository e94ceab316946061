import json
import os

import numpy as np
import pytest

from semistab.cli import main
from semistab.errors import ConfigError, TruncationInadequateError
from semistab.experiments import (FAIL, PASS, SKIPPED, Spacing, TimeGrid,
                                  config_hash, parse_config, render_config,
                                  run_hardy, run_simulate, run_theorem_check,
                                  run_witness, write_csv)
from semistab.models import Family

JP_TEXT = """\
# small run
model.family = JORDAN_PAIRS
model.max_index = auto
grid.t_min = 1.0
grid.t_max = 40.0
grid.points = 14
grid.spacing = GEOMETRIC
output.directory = {out}
"""

LS_TEXT = """\
model.family = LOG_SPECTRUM
model.order = {order}
grid.t_min = 7.389056098930650
grid.t_max = 200.0
grid.points = 12
checks.top_k = 3
output.directory = {out}
"""


def _read(path):
    with open(path, "rb") as handle:
        return handle.read()


def _strip_timings(path):
    report = json.loads(_read(path))
    report.pop("timings")
    return json.dumps(report, sort_keys=True)


# ------------------------------------------------------------------ config

def test_config_round_trip():
    cfg = parse_config(JP_TEXT.format(out="somewhere"))
    again = parse_config(render_config(cfg))
    assert again == cfg
    assert config_hash(again) == config_hash(cfg)


def test_config_defaults():
    cfg = parse_config(JP_TEXT.format(out="x"))
    assert cfg.model.family is Family.JORDAN_PAIRS
    assert cfg.model.max_index == 2000  # 50 * t_max
    assert cfg.model.mu_default == 1.0 + 0.0j
    assert cfg.contour_nodes == 64
    assert cfg.top_k == 5
    assert cfg.tolerances.norm_tol == 1e-10
    assert cfg.output.formats == ("CSV", "JSON")


def test_config_errors_name_lines():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("model.family = JORDAN_PAIRS\nmystery.key = 1\n")
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("model.family = JORDAN_PAIRS\ngrid.t_min = 1\n"
                      "grid.t_min = 2\n")
    with pytest.raises(ConfigError, match="missing required"):
        parse_config("model.family = JORDAN_PAIRS\n")
    with pytest.raises(ConfigError, match="bad value"):
        parse_config(JP_TEXT.format(out="x") + "contour.nodes = many\n")
    with pytest.raises(ConfigError):
        parse_config(JP_TEXT.format(out="x") + "model.mu = not-a-number\n")


def test_config_rejects_inadequate_truncation():
    text = JP_TEXT.format(out="x").replace("model.max_index = auto",
                                           "model.max_index = 100")
    with pytest.raises(TruncationInadequateError) as info:
        parse_config(text)
    assert info.value.required == 2000
    assert "2000" in str(info.value)


def test_config_max_dim_cap():
    with pytest.raises(TruncationInadequateError) as info:
        parse_config(JP_TEXT.format(out="x"), max_dim=100)
    assert "minimal adequate max_index 2000" in str(info.value)


def test_time_grid_values():
    geo = TimeGrid(1.0, 100.0, 3, Spacing.GEOMETRIC).values()
    assert geo == pytest.approx([1.0, 10.0, 100.0])
    lin = TimeGrid(0.0, 10.0, 3, Spacing.LINEAR).values()
    assert lin == pytest.approx([0.0, 5.0, 10.0])
    with pytest.raises(ValueError):
        TimeGrid(0.0, 10.0, 3, Spacing.GEOMETRIC)
    with pytest.raises(ValueError):
        TimeGrid(5.0, 1.0, 3)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 10.0, 1)


# ------------------------------------------------------------------ runners

def test_run_simulate_outputs_and_determinism(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    cfg = parse_config(JP_TEXT.format(out=out_a))
    report = run_simulate(cfg)
    assert report.all_passed()
    assert set(report.verdicts) == {"semigroup_growth",
                                    "resolvent_product_bounded", "ratio_decay"}

    csv_lines = _read(out_a / "samples.csv").decode().strip().splitlines()
    assert csv_lines[0] == "t,semigroup_norm,resolvent_product_norm,ratio"
    assert len(csv_lines) == 1 + cfg.grid.points

    run_simulate(cfg, out_dir=str(out_b))
    assert _read(out_a / "samples.csv") == _read(out_b / "samples.csv")
    assert _strip_timings(out_a / "report.json") == \
        _strip_timings(out_b / "report.json")


def test_run_simulate_diag_jordan_verdicts(tmp_path):
    # Short grid: the linear-growth window (t >= 50) is empty, so that
    # verdict is SKIPPED while boundedness and the ratio law hold.
    text = ("model.family = DIAG_JORDAN\ngrid.t_min = 1.0\n"
            "grid.t_max = 40.0\ngrid.points = 20\n"
            f"output.directory = {tmp_path / 'dj'}\n")
    report = run_simulate(parse_config(text))
    assert report.verdicts["semigroup_growth"].status == SKIPPED
    assert report.verdicts["resolvent_product_bounded"].status == PASS
    assert report.verdicts["ratio_decay"].status == PASS
    assert report.all_passed()


def test_run_simulate_log_spectrum_verdicts(tmp_path):
    text = ("model.family = LOG_SPECTRUM\nmodel.order = 1\n"
            "grid.t_min = 7.389056098930650\ngrid.t_max = 60.0\n"
            "grid.points = 12\n"
            f"output.directory = {tmp_path / 'ls'}\n")
    report = run_simulate(parse_config(text))
    assert report.verdicts["semigroup_growth"].status == PASS
    assert report.verdicts["resolvent_product_bounded"].status == SKIPPED
    assert report.verdicts["ratio_decay"].status == PASS
    assert "ratio_inverse_log" in report.fits


def test_report_json_schema_and_config_echo(tmp_path):
    cfg = parse_config(JP_TEXT.format(out=tmp_path / "o"))
    report = run_simulate(cfg).to_dict()
    assert set(report) == {"config", "samples", "fits", "projections",
                           "verdicts", "timings", "version"}
    echoed = parse_config(report["config"]["text"])
    assert echoed == cfg
    assert report["config"]["hash"] == config_hash(cfg)
    for verdict in report["verdicts"].values():
        assert verdict["status"] in (PASS, FAIL, SKIPPED)


def test_run_theorem_check_log_spectrum(tmp_path):
    cfg = parse_config(LS_TEXT.format(order=1, out=tmp_path / "ls"))
    report = run_theorem_check(cfg)
    assert set(report.verdicts) == {"envelope_conditions",
                                    "envelope_translation",
                                    "hypothesis_b_decay", "conclusion_decay"}
    assert report.all_passed()
    assert len(report.projections) == 3
    for entry in report.projections:
        assert entry["idempotency_defect"] <= 1e-10
        assert entry["rank"] == 1
    lines = _read(tmp_path / "ls" / "theorem_curves.csv").decode().splitlines()
    assert lines[0] == ("t,semigroup_norm,resolvent_product_norm,"
                        "envelope,conclusion_curve")
    assert len(lines) == 1 + cfg.grid.points


def test_run_theorem_check_jordan_pairs(tmp_path):
    text = ("model.family = JORDAN_PAIRS\n"
            "grid.t_min = 1.0\ngrid.t_max = 100.0\ngrid.points = 10\n"
            "checks.top_k = 4\n"
            f"output.directory = {tmp_path / 'jp'}\n")
    report = run_theorem_check(parse_config(text))
    assert report.all_passed()


def test_run_hardy_deterministic(tmp_path):
    r1 = run_hardy(500, max_len=64, seed=3, out_dir=str(tmp_path / "h1"))
    r2 = run_hardy(500, max_len=64, seed=3, out_dir=str(tmp_path / "h2"))
    v1 = r1.verdicts["hardy_bound"]
    v2 = r2.verdicts["hardy_bound"]
    assert v1.status == PASS
    assert v1.metrics["worst_ratio"] == v2.metrics["worst_ratio"]
    assert v1.metrics["worst_ratio"] < 1.0
    assert _read(tmp_path / "h1" / "hardy_worst.csv") == \
        _read(tmp_path / "h2" / "hardy_worst.csv")
    with pytest.raises(ConfigError):
        run_hardy(0)


def test_run_witness_outputs(tmp_path):
    report = run_witness([10.0, 20.0], out_dir=str(tmp_path / "w"))
    assert report.all_passed()
    lines = _read(tmp_path / "w" / "witness.csv").decode().splitlines()
    assert lines[0] == "t,raw_ratio,normalized"
    assert len(lines) == 3


def test_write_csv_is_atomic_and_round_trips_floats(tmp_path):
    path = tmp_path / "data.csv"
    rows = [(0.1 + 0.2, 1.0 / 3.0)]
    write_csv(str(path), ["a", "b"], rows)
    text = _read(path).decode().splitlines()
    a, b = text[1].split(",")
    assert float(a) == 0.1 + 0.2 and float(b) == 1.0 / 3.0
    leftovers = [p for p in os.listdir(tmp_path) if p.endswith(".tmp")]
    assert not leftovers


# ------------------------------------------------------------------ CLI

def test_cli_simulate_and_report(tmp_path, capsys):
    cfg_path = tmp_path / "jp.cfg"
    out_dir = tmp_path / "run"
    cfg_path.write_text(JP_TEXT.format(out=out_dir))
    assert main(["simulate", "--config", str(cfg_path)]) == 0
    assert main(["report", str(out_dir / "report.json")]) == 0
    shown = capsys.readouterr().out
    assert "semigroup_growth" in shown and "PASS" in shown


def test_cli_report_exit_codes(tmp_path, capsys):
    missing = main(["report", str(tmp_path / "nope.json")])
    assert missing == 2
    assert "nope.json" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["report", str(bad)]) == 2

    failing = tmp_path / "fail.json"
    failing.write_text(json.dumps({
        "config": {"command": "simulate", "text": "", "hash": ""},
        "verdicts": {"thing": {"status": "FAIL", "detail": "broken",
                               "metrics": {}}},
        "version": "0.1.0",
    }))
    assert main(["report", str(failing)]) == 1
    assert "thing" in capsys.readouterr().out


def test_cli_usage_errors(tmp_path, capsys):
    assert main(["simulate", "--config", str(tmp_path / "ghost.cfg")]) == 2
    capsys.readouterr()
    assert main(["hardy", "--cases", "0"]) == 2
    capsys.readouterr()
    assert main(["witness", "--t", "abc"]) == 2
    capsys.readouterr()
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_cli_max_dim_guard(tmp_path, capsys):
    cfg_path = tmp_path / "jp.cfg"
    cfg_path.write_text(JP_TEXT.format(out=tmp_path / "o"))
    code = main(["simulate", "--config", str(cfg_path), "--max-dim", "10"])
    assert code == 2
    assert "minimal adequate" in capsys.readouterr().err


def test_cli_hardy_and_witness(tmp_path, capsys):
    assert main(["hardy", "--cases", "200", "--max-len", "32",
                 "--out", str(tmp_path / "h")]) == 0
    capsys.readouterr()
    assert main(["witness", "--t", "10,20", "--out", str(tmp_path / "w")]) == 0
    capsys.readouterr()
    assert (tmp_path / "w" / "witness.csv").exists()
