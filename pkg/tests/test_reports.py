import json

import pytest

from ddks.cache import ResultCache
from ddks.reports import TABLES, run_report


def test_unknown_table():
    with pytest.raises(ValueError):
        run_report("cct-37")
    with pytest.raises(ValueError):
        run_report("nope")
    assert len(TABLES) == 9


def test_cct_formats_are_stable():
    a = run_report("cct-60")
    assert a.render("md") == run_report("cct-60").render("md")
    data = json.loads(a.render("json"))
    assert data["table"] == "cct-60" and not data["mismatches"]
    assert a.render("csv").splitlines()[0] == "group,CCT,witness (x y w)"


def test_order64_and_invariants_tables(tmp_path):
    cache = ResultCache(tmp_path)
    rep = run_report("order64-structures", cache)
    assert rep.ok, rep.mismatches
    assert [r[2] for r in rep.rows] == [566231040] * 3 + [530841600] * 2 + [566231040, 530841600]
    assert [r[4] for r in rep.rows] == [138240, 46080, 184320, 14400, 8640, 368640, 23040]
    again = run_report("order64-structures", cache)  # served from cache
    assert again.render("md") == rep.render("md")
    inv = run_report("invariants-table", cache)
    assert inv.ok, inv.mismatches
    assert all(r[8] in (91, 93) for r in inv.rows)


def test_h1_table(tmp_path):
    rep = run_report("h1-table", ResultCache(tmp_path), scan=24)
    assert rep.ok, rep.mismatches
    assert len(rep.rows) == 8
