import json

import pytest

from cubicsod.checks import CHECKS, SUITES, Config, ConfigError, explain, report_exit_code, run_suite
from cubicsod.cli import main, mukai_main, pflab_main, replay_main


def run_json(tmp_path, *args):
    out = tmp_path / "report.json"
    code = main(["run", *args, "--json", str(out)])
    return code, json.loads(out.read_text())


@pytest.mark.parametrize("suite", ["cohomology", "mutations-plane", "mutations-singular", "mukai", "pfaffian"])
def test_suites_pass(tmp_path, suite):
    code, report = run_json(tmp_path, "--suite", suite, "--box", "6")
    assert code == 0
    assert report["schema"] == 1 and report["suite"] == suite
    assert [c["id"] for c in report["checks"]] == list(SUITES[suite])
    assert all(c["status"] == "pass" for c in report["checks"])


def test_all_suite_has_every_check_once():
    ids = SUITES["all"]
    assert len(ids) == len(set(ids)) == len(CHECKS)
    assert sorted(ids) == sorted(i for s, v in SUITES.items() if s != "all" for i in v)


def test_report_is_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["run", "--suite", "pfaffian", "--json", str(a)]) == 0
    assert main(["run", "--suite", "pfaffian", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "wall_time_s" not in json.loads(a.read_text())


def test_timing_is_opt_in():
    report = run_suite("mutations-plane", Config(), timing=True)
    assert report["wall_time_s"] >= 0


def test_box_zero_is_vacuous(tmp_path):
    code, report = run_json(tmp_path, "--suite", "mukai", "--box", "0")
    assert code == 0
    search = next(c for c in report["checks"] if c["id"] == "app.k0-search")
    assert search["evidence"]["vacuous"] is True


@pytest.mark.parametrize("flags", [["--ext", "3"], ["--box", "-1"], ["--q", "6"], ["--workers", "0"]])
def test_bad_config_exits_2(flags, capsys):
    assert main(["run", "--suite", "mukai", *flags]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_config_validation():
    with pytest.raises(ConfigError):
        Config(q=7, ext=2, bound=1000).validate()
    Config(q=7, ext=2).validate()


def test_exit_code_rules():
    report = {"checks": [{"status": "pass"}, {"status": "undetermined"}]}
    assert report_exit_code(report, allow_undetermined=False) == 1
    assert report_exit_code(report, allow_undetermined=True) == 0
    assert report_exit_code({"checks": [{"status": "fail"}]}, allow_undetermined=True) == 1


@pytest.mark.parametrize("check_id", ["app.gram", "sec4.step6"])
def test_explain(check_id, capsys):
    assert main(["explain", check_id]) == 0
    text = capsys.readouterr().out
    assert check_id in text and "status" in text
    assert explain(check_id) == text


def test_explain_unknown(capsys):
    assert main(["explain", "nope"]) == 2
    assert "nope" in capsys.readouterr().err


@pytest.mark.parametrize("case", ["plane", "singular"])
def test_replay_builtin(case, tmp_path, capsys):
    out = tmp_path / "trace.jsonl"
    assert replay_main([case, "--out", str(out)]) == 0
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert lines[0]["op"] == "start"
    assert "verdict: Match" in capsys.readouterr().err


def test_replay_mismatch_and_missing(tmp_path):
    from cubicsod.sodengine import builtin_script

    doc = dict(builtin_script("plane"))
    doc["steps"] = doc["steps"][:2]
    path = tmp_path / "short.json"
    path.write_text(json.dumps(doc))
    assert main(["replay", str(path), "--no-shadows"]) == 1
    assert main(["replay", str(tmp_path / "missing.json")]) == 2


def test_mukai_search_cli(tmp_path):
    out = tmp_path / "m.json"
    assert mukai_main(["search", "--box", "3", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["found"] is False
    assert main(["mukai", "search", "--untwisted", "--box", "1", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["found"] is True
    assert mukai_main(["search", "--box", "-1"]) == 2
    assert mukai_main(["search", "--bh", "1/3"]) == 2


def test_pflab_commands(tmp_path):
    inst = tmp_path / "inst.json"
    assert pflab_main(["gen", "--seed", "4", "--out", str(inst)]) == 0
    assert json.loads(inst.read_text())["seed"] == 4

    sing = tmp_path / "sing.json"
    assert pflab_main(["sing", "--input", str(inst), "--out", str(sing)]) == 0
    assert [1, 0, 0, 0, 0, 0] in json.loads(sing.read_text())["singular_points"]

    xv = tmp_path / "xv.json"
    assert main(["pflab", "xv-count", "--input", str(inst), "--out", str(xv)]) == 0
    doc = json.loads(xv.read_text())
    assert doc["seed"] == 4 and doc["counts"]["F_7^1"] > 0

    s = tmp_path / "s.json"
    assert pflab_main(["s-count", "--input", str(inst), "--out", str(s)]) == 0
    doc = json.loads(s.read_text())
    assert "smoothness" in doc and doc["counts"]["F_7^1"] == doc["smoothness"]["point_count"]


def test_pflab_errors(tmp_path):
    assert pflab_main(["xv-count", "--ext", "3"]) == 2
    assert pflab_main(["sing", "--input", str(tmp_path / "none.json")]) == 2
