import json

import pytest

from cohepow.cli import dump_prefix, main
from cohepow.errors import ConfigError
from cohepow.orders import Naturals, Rationals
from cohepow.recipes import BUILTIN, Recipe, load_recipe, run_recipe
from cohepow.suites import CRITERIA


def test_empty_recipe_gives_empty_report():
    report = run_recipe(load_recipe("empty"))
    assert report.checks == [] and report.passed


def test_std_power_recipe_all_yes():
    report = run_recipe(load_recipe("std-power"))
    assert [c["outcome"] for c in report.checks] == ["pass"] * 3
    assert report.environment["numbering"] == "urm-cantor-1"
    assert report.cohesive["provenance"] == "family-relative"


def test_example_transport_recipe():
    report = run_recipe(load_recipe("example-4-5"))
    assert report.passed and len(report.checks) == 3


def test_reports_are_replay_deterministic():
    a = run_recipe(load_recipe("example-4-5")).to_json(runtime=False)
    b = run_recipe(load_recipe("example-4-5"), parallel=True).to_json(runtime=False)
    assert a == b


def test_every_criterion_is_a_recipe():
    for key in CRITERIA:
        assert load_recipe(key).checks == [{"check": key}]
    assert [c["check"] for c in load_recipe("acceptance").checks] == list(CRITERIA)


def test_schema_errors():
    with pytest.raises(ConfigError):
        Recipe.from_dict({"checks": []})
    with pytest.raises(ConfigError):
        Recipe.from_dict({"name": "x", "checks": [{"check": "nope"}]})
    with pytest.raises(ConfigError):
        Recipe.from_dict({"name": "x", "stages": -1})
    with pytest.raises(ConfigError):
        Recipe.from_dict({"name": "x", "colour": 1})


def test_recipe_file_and_overrides(tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"name": "mine", "checks": [{"check": "successor", "params": {"count": 3}}],
                                "stages": 500, "horizon": 600}))
    r = load_recipe(str(path), {"horizon": 700})
    assert r.stages == 500 and r.horizon == 700
    report = run_recipe(r)
    assert report.passed and report.cohesive["horizon"] == 700


def test_undecided_is_recorded_not_raised(tmp_path):
    window = tmp_path / "w.json"
    window.write_text(json.dumps({"provenance": "tiny", "stage": 0, "horizon": 12, "elements": [10, 11, 12]}))
    report = run_recipe(Recipe("tiny", [{"check": "midpoint"}], cohesive=str(window)))
    assert report.checks[0]["outcome"] == "undecided"
    assert report.cohesive["provenance"] == "tiny"
    assert not report.passed


def test_dump_prefix_examples():
    d = dump_prefix(Naturals(), 10)
    assert d["elements"] == list(range(11)) and d["pending"] == []
    Q = Rationals()
    els = dump_prefix(Q, 60)["elements"]
    assert all(Q.census(a, b) > 0 for a, b in zip(els, els[1:]))


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["test", "empty"]) == 0
    assert main(["test", "no-such-recipe"]) == 2
    assert main(["build", "breaker", "--stages", "-1"]) == 2
    assert main(["frobnicate"]) == 2
    bad = tmp_path / "fail.json"
    bad.write_text(json.dumps({"name": "f", "checks": [{"check": "successor", "expect": "fail"}]}))
    assert main(["test", str(bad)]) == 1


def test_cli_build_trace_and_replay(tmp_path, capsys):
    trace = tmp_path / "t.jsonl"
    assert main(["build", "breaker", "--stages", "400", "--trace", str(trace), "--seedless"]) == 0
    lines = trace.read_text().splitlines()
    rec = json.loads(lines[0])
    assert set(rec) == {"stage", "pair", "witness", "sides", "added", "colors"}
    assert main(["replay", str(trace), "--stages", "400", "--against", "breaker"]) == 0
    assert '"matches": true' in capsys.readouterr().out


def test_cli_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"stages": 120, "horizon": 30}))
    out = tmp_path / "o.json"
    assert main(["build", "breaker", "--config", str(cfg), "--stages", "90", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["stages"] == 90
    assert main(["build", "breaker", "--config", str(cfg), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["stages"] == 120


def test_cli_dump_and_plot(tmp_path):
    out, png = tmp_path / "d.json", tmp_path / "d.png"
    assert main(["dump", "N", "--horizon", "10", "--out", str(out), "--plot", str(png)]) == 0
    assert json.loads(out.read_text())["elements"] == list(range(11))
    assert png.stat().st_size > 0


def test_cli_disasm(capsys):
    assert main(["disasm", "5"]) == 0
    assert '["INC", 0]' in capsys.readouterr().out


def test_builtin_names():
    assert {"empty", "std-power", "example-4-5", "acceptance"} <= set(BUILTIN)
