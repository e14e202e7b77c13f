import json
import os
import re
import subprocess
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

ROOT = Path(__file__).resolve().parents[2]
CLI = os.environ.get("FLDX_CLI", str(ROOT / "build" / "fldx"))
CORPUS = ROOT / "corpus"
SCHEMA = json.loads((ROOT / "schema" / "fldx-report-1.json").read_text())


def scenarios(path):
    return re.findall(r"Scenario([^:\n]*):", path.read_text())


CASES = [(p, i + 1) for p in sorted(CORPUS.glob("*.c")) for i, _ in enumerate(scenarios(p))]


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, timeout=120)


def rational(v):
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(int(v["num"]), int(v["den"]))


@pytest.mark.parametrize("path,scenario", CASES, ids=[f"{p.stem}-{s}" for p, s in CASES])
def test_report_validates_and_exit_code_matches_alarms(path, scenario):
    proc = run("analyze", path, "--scenario", scenario, "--report", "json")
    report = json.loads(proc.stdout)
    jsonschema.validate(report, SCHEMA)
    assert (proc.returncode == 0) == (len(report["alarms"]) == 0)
    assert proc.returncode in (0, 1)


def test_missing_input_is_a_usage_error():
    proc = run("analyze", CORPUS / "interpolate.c")
    assert proc.returncode == 2
    assert "in" in proc.stderr


def test_stage_failures_have_distinct_codes(tmp_path):
    bad_syntax = tmp_path / "syntax.c"
    bad_syntax.write_text("double main(double x) { return x + ; }\n")
    bad_type = tmp_path / "types.c"
    bad_type.write_text("double main(double x) { return y; }\n")
    bad_spec = tmp_path / "spec.c"
    bad_spec.write_text("double main(double x) {\n  /*@ assert accuracy_assert_derr(1.0, 0.0, 1.0); */\n  return x;\n}\n")
    codes = {
        "usage": run("analyze", CORPUS / "square.c", "--input", "x=[1,0]").returncode,
        "parse": run("analyze", bad_syntax, "--input", "x=1").returncode,
        "type": run("analyze", bad_type, "--input", "x=1").returncode,
        "spec": run("analyze", bad_spec, "--input", "x=1").returncode,
    }
    assert codes == {"usage": 2, "parse": 3, "type": 4, "spec": 4}


def test_interpolation_examples():
    ok = run("analyze", CORPUS / "interpolate.c", "--format", "binary64", "--input", "in=[0.5,0.5]~[-1e-9,1e-9]",
             "--report", "json")
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["assertions"][0]["verdict"] == "valid"
    bad = run("analyze", CORPUS / "interpolate.c", "--input", "in=[-1.0000001,-0.9999999]")
    assert bad.returncode == 1


def test_subdivision_never_widens_the_square():
    previous = None
    for k in range(1, 9):
        proc = run("analyze", CORPUS / "square.c", "--input", "x=[0,1]~0", "--subdiv", k, "--report", "json")
        report = json.loads(proc.stdout)
        jsonschema.validate(report, SCHEMA)
        assert report["runs"] == k
        current = report["finals"]["sq"]
        if previous is not None:
            for part in ("float", "real", "err"):
                lo, hi = map(rational, current[part])
                plo, phi = map(rational, previous[part])
                assert plo <= lo and hi <= phi, (k, part)
        previous = current
    assert rational(previous["real"][0]) > Fraction(-1, 4)


def test_instrument_and_typecheck():
    inst = run("instrument", CORPUS / "interpolate.c")
    assert inst.returncode == 0
    assert "/*@ split 1 save() */" in inst.stdout
    assert "/*@ merge 1 merge(out) */" in inst.stdout
    typed = run("typecheck", CORPUS / "interpolate.c")
    assert typed.returncode == 0
    assert "decided in" in typed.stdout or "computed in" in typed.stdout
