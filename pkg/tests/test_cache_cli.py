import json

import pytest

from ddks import ENGINE_VERSION
from ddks.cache import ENV_VAR, ResultCache, command_key, default_root
from ddks.cli import main


def test_cache_roundtrip(tmp_path):
    c = ResultCache(tmp_path)
    calls = []
    f = lambda: calls.append(1) or {"x": 1}  # noqa: E731
    assert c.memo("cmd", "G(1,1)", {"a": 1}, f) == ({"x": 1}, False)
    assert c.memo("cmd", "G(1,1)", {"a": 1}, f) == ({"x": 1}, True)
    assert len(calls) == 1
    p = c.path("cmd", "G(1,1)", {"a": 1})
    assert p.parent.parent.name == ENGINE_VERSION
    assert json.loads(p.read_text())["params"] == {"a": 1}
    assert not list(p.parent.glob(".tmp-*"))


def test_cache_never_crosses_engine_versions(tmp_path):
    ResultCache(tmp_path, engine="old").put("cmd", "L", {}, 5)
    assert ResultCache(tmp_path, engine="new").get("cmd", "L", {}) is None
    assert command_key("a", {"x": 1}) != command_key("a", {"x": 2})


def test_corrupt_entry_is_a_miss(tmp_path):
    c = ResultCache(tmp_path)
    c.put("cmd", "L", {}, 1)
    c.path("cmd", "L", {}).write_text("{not json")
    assert c.get("cmd", "L", {}) is None


def test_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert default_root() == tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_group_verbs(capsys, tmp_path):
    code, out, _ = run(capsys, "--format", "json", "--cache-dir", str(tmp_path), "group", "info", "S4")
    assert code == 0 and json.loads(out)["order"] == 24
    code, out, _ = run(capsys, "--format", "json", "--no-cache", "group", "cct", "G(36,10)")
    assert json.loads(out)["cct"] is False
    code, out, _ = run(capsys, "--format", "json", "--no-cache", "group", "mon", "G(54,6)")
    assert json.loads(out)["mon_order"] == 3
    code, out, _ = run(capsys, "--format", "json", "--cache-dir", str(tmp_path), "group", "aut", "G(32,50)")
    assert json.loads(out)["aut_order"] == 1920


def test_cli_errors(capsys):
    code, _, err = run(capsys, "group", "info", "G(99,1)")
    assert code == 2 and "unknown catalog label" in err
    code, _, err = run(capsys, "group", "info", "G(64,18)")
    assert code == 2 and "external input required" in err
    code, _, err = run(capsys, "--no-cache", "structures", "search", "S3", "--b", "3")
    assert code == 2


def test_cli_structures_and_h1(capsys, tmp_path):
    c = str(tmp_path)
    code, out, _ = run(capsys, "--format", "json", "--cache-dir", c, "structures", "search", "G(32,49)", "--count-only")
    assert json.loads(out)["total"] == 2211840
    code, out, _ = run(capsys, "--format", "csv", "--no-cache", "structures", "search", "G(64,266)", "--first", "3")
    lines = out.strip().splitlines()
    assert lines[0].startswith("label,b,n,entries") and len(lines) == 4
    code, _, err = run(capsys, "--no-cache", "structures", "search", "G(32,49)")
    assert code == 2 and "--count-only" in err
    code, out, _ = run(capsys, "--format", "json", "--no-cache", "structures", "lift", "G(64,265)",
                       "--over", "G(32,50)", "--samples", "2")
    assert [r["generating"] for r in json.loads(out)] == [240, 240]
    code, out, _ = run(capsys, "--format", "json", "--cache-dir", c, "h1", "G(32,50)")
    assert json.loads(out)["h1"] == "Z^8 + (Z2)^4"
    code, out, _ = run(capsys, "--format", "json", "--no-cache", "invariants", "--order", "64", "--m1", "2",
                       "--m2", "2", "--q", "6")
    assert json.loads(out)["p_g"] == 93


def test_cli_user_presentation_file(capsys, tmp_path):
    f = tmp_path / "s4.grp"
    f.write_text('group "mine" { gens a, b; rel a^2 = b^4 = (a*b)^3 = 1; }\n')
    code, out, _ = run(capsys, "--format", "json", "--no-cache", "group", "mon", str(f))
    d = json.loads(out)
    assert code == 0 and d["monolithic"] and d["mon_order"] == 4


def test_cli_report_exit_status(capsys):
    code, out, _ = run(capsys, "--no-cache", "report", "cct-54")
    assert code == 0 and "{G(54,5), G(54,6)}" in out and "golden: OK" in out
    code, out, _ = run(capsys, "--no-cache", "--format", "csv", "report", "cct-40")
    assert code == 0 and out.startswith("group,CCT")
