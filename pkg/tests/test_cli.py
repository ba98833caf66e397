"""Golden-file tests for every CLI subcommand.

Regenerate the expected outputs with ``python3 tests/test_cli.py --regen``.
"""

from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from treedfloer.cli import run

GOLDEN = Path(__file__).parent / "golden"
INP = GOLDEN / "inputs"


def _i(name: str) -> str:
    return str(INP / name)


# name, argv, expected exit code
CASES = [
    ("enumerate_n1_v1", ["enumerate", "--n", "1", "--max-vertices", "1", "--kind", "strip"], 0),
    ("enumerate_n1_v2", ["enumerate", "--n", "1", "--max-vertices", "2"], 0),
    ("enumerate_disk", ["enumerate", "--n", "1", "--max-vertices", "2", "--kind", "disk", "--k", "1"], 0),
    ("dim", ["dim", "--type", _i("strip_type.json")], 0),
    ("boundary", ["boundary", "--type", _i("strip_type.json")], 0),
    ("classify", ["classify", "--type", _i("labeled_bubble.json")], 0),
    ("divisor_km_rat", ["divisor", "km", "--preset", _i("rat1.json")], 0),
    ("divisor_km_irr", ["divisor", "km", "--preset", _i("irr1.json")], 0),
    ("divisor_degree", ["divisor", "degree", "--classes", _i("classes.json")], 0),
    ("divisor_degree_bad", ["divisor", "degree", "--classes", _i("classes_bad.json")], 1),
    ("floer_d", ["floer", "d", "--dataset", _i("ok.json"), "--cutoff", "20"], 0),
    ("floer_d2", ["floer", "d2", "--dataset", _i("ok.json")], 0),
    ("floer_ogw", ["floer", "ogw", "--dataset", _i("disks.json"), "--beta", "1,0", "--select"], 0),
    ("floer_ogw_mixed", ["floer", "ogw", "--dataset", _i("disks.json"), "--beta", "1,0"], 1),
    ("floer_generate", ["floer", "generate", "--k", "2", "--terms", "1", "--seed", "3"], 0),
    ("novikov_add", ["novikov", "add", "--x", _i("nv_x.json"), "--y", _i("nv_y.json")], 0),
    ("novikov_mul", ["novikov", "mul", "--x", _i("nv_x.json"), "--y", _i("nv_y.json")], 0),
    ("novikov_invert", ["novikov", "invert", "--x", _i("nv_x.json"), "--E", "3"], 0),
    ("novikov_valuation", ["novikov", "valuation", "--x", _i("nv_y.json")], 0),
    ("table_format", ["--format", "table", "divisor", "km", "--preset", _i("rat1.json")], 0),
]


def _run(argv):
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code):
    got_code, first = _run(argv)
    _, second = _run(argv)
    assert got_code == code
    assert first == second
    expected = (GOLDEN / "expected" / f"{name}.out").read_text()
    assert first == expected


def test_documented_examples():
    code, out = _run(CASES[0][1])
    assert code == 0 and json.loads(out)["count"] == 1
    code, out = _run(["floer", "d2", "--dataset", _i("ok.json")])
    assert code == 0 and json.loads(out)["report"]["ok"]
    code, out = _run(["divisor", "km", "--preset", _i("rat1.json")])
    assert json.loads(out)["result"]["k_m"] == 6


def test_parse_error_exits_2(capsys):
    assert run(["nonsense"], io.StringIO()) == 2
    assert run(["dim"], io.StringIO()) == 2
    assert run(["dim", "--type", "{not json"], io.StringIO()) == 2
    assert run(["novikov", "add", "--x", _i("nv_x.json")], io.StringIO()) == 2


def test_failing_check_exits_1(tmp_path):
    bad = json.loads((INP / "ok.json").read_text())
    bad["records"][0]["sign"] *= -1
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, out = _run(["floer", "d2", "--dataset", str(p)])
    assert code == 1
    rep = json.loads(out)["report"]
    assert not rep["ok"] and rep["issues"]


def test_console_entry_point_runs():
    out = subprocess.run(
        [sys.executable, "-m", "treedfloer", "novikov", "valuation", "--x", _i("nv_x.json")],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["value"] == "0"


def regenerate():
    (GOLDEN / "expected").mkdir(exist_ok=True)
    for name, argv, code in CASES:
        got, out = _run(argv)
        if got != code:
            raise SystemExit(f"{name}: exit {got}, expected {code}")
        (GOLDEN / "expected" / f"{name}.out").write_text(out)


if __name__ == "__main__":
    if "--regen" in sys.argv:
        regenerate()
