import json
from pathlib import Path

import pytest

fldx = pytest.importorskip("fldx")
jsonschema = pytest.importorskip("jsonschema")

ROOT = Path(__file__).resolve().parents[2]
SCHEMA = json.loads((ROOT / "schema" / "fldx-report-1.json").read_text())
INTERPOLATE = (ROOT / "corpus" / "interpolate.c").read_text()


def test_mid_table_is_valid():
    report = fldx.analyze(INTERPOLATE, scenario="mid-table")
    jsonschema.validate(report, SCHEMA)
    assert report["schema"] == fldx.REPORT_SCHEMA
    assert report["alarms"] == []
    assert [a["verdict"] for a in report["assertions"]] == ["valid"]


def test_near_minus_one_raises_an_alarm():
    report = fldx.analyze(INTERPOLATE, {"in": "[-1.0000001,-0.9999999]"})
    jsonschema.validate(report, SCHEMA)
    assert report["alarms"]
    assert report["sections"][0]["merge_list"] == ["out"]


def test_inputs_as_list_and_options():
    src = "double main(double x) {\n  double sq = x * x;\n  return sq;\n}\n"
    one = fldx.analyze(src, ["x=[0,1]~0"])
    two = fldx.analyze(src, ["x=[0,1]~0"], subdiv=2, format="binary64")
    assert two["runs"] == 2
    assert two["config"]["subdiv"] == 2
    # Reported hulls are the intersection with interval arithmetic.
    assert one["result"]["real"] == ["0", "1"]
    assert two["result"]["real"] == ["0", "1"]


def test_errors():
    with pytest.raises(fldx.StageError) as e:
        fldx.analyze("double main(double x) { return x + ; }", {"x": "1"})
    assert e.value.args[0] == "parse"
    with pytest.raises(ValueError):
        fldx.analyze("double main(double x) { return x; }")
    with pytest.raises(ValueError):
        fldx.analyze(INTERPOLATE, scenario="missing")


def test_instrument_and_typecheck():
    out = fldx.instrument(INTERPOLATE)
    assert "/*@ split 1 save() */" in out
    assert "/*@ merge 1 merge(out) */" in out
    typing = fldx.typecheck("void h(double f, double g) { /*@ assert f - 0.1 <= g; */ }")
    assert "decided in rational" in typing
