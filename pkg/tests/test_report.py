import json

import pytest

from defverify.report import CheckResult, Report, Verdict, emit_report


def sample(scenario="curve", fail=False):
    r = Report(scenario, 3)
    r.add(CheckResult.of("a", Verdict(True, "fine"), "t^3"))
    r.add(CheckResult.skipped("b", "not machine-checkable", "flatness"))
    r.add(CheckResult.of("c", Verdict(not fail, "bad" if fail else "ok"), "t^4"))
    return r


def test_passed_ignores_skips():
    assert sample().passed
    r = sample(fail=True)
    assert not r.passed and r.first_failure().name == "c"


def test_bad_status_rejected():
    with pytest.raises(ValueError):
        CheckResult("x", "maybe", "", "")


def test_json_key_order_and_shape():
    out = emit_report(sample(), "json").decode()
    obj = json.loads(out)
    assert list(obj) == ["scenario", "p", "checks", "elapsed_ms"]
    assert list(obj["checks"][0]) == ["name", "status", "detail", "anchor"]
    assert obj["elapsed_ms"] is None
    many = json.loads(emit_report([sample(), sample("surface")], "json"))
    assert [m["scenario"] for m in many] == ["curve", "surface"]


def test_text_report():
    out = emit_report(sample(fail=True)).decode()
    assert "[SKIPPED] b" in out
    assert "first failing check: c" in out
    assert "overall: FAIL (1/3 checks passed)" in out


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(sample(), "xml")


def test_emission_is_stable():
    assert emit_report(sample(), "json") == emit_report(sample(), "json")
