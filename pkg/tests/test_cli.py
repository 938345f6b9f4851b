import hashlib
import json
from fractions import Fraction
from pathlib import Path

import pytest

from algebroid.cli import main
from algebroid.cli.report import RunReport, decode_rational, encode

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

# (golden name, argv); the golden files were produced by these exact invocations
GOLDEN_RUNS = {
    "validate-heis3": ["validate", str(FIX / "heis3.json")],
    "validate-jacobi-broken": ["validate", str(FIX / "jacobi-broken.json")],
    "obstruction-heis3-base": ["obstruction", str(FIX / "heis3-base.json")],
    "classify-pair": ["classify", str(FIX / "classify-pair.json"), "--seed", "1"],
    "spectral-heis3": ["spectral", str(FIX / "heis3-extension.json")],
    "atiyah-p1-3": ["atiyah-p1", "--degree", "3"],
}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_reports_match_golden_files(capsys, name):
    code, out, _ = run(capsys, GOLDEN_RUNS[name])
    assert out == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("argv", [["cohomology", str(FIX / "nerve-triangle.json")],
                                  ["obstruction", str(FIX / "nerve-triangle.json"), "--seed", "4"]])
def test_reports_are_byte_stable(capsys, argv):
    assert run(capsys, argv)[1] == run(capsys, argv)[1]


@pytest.mark.parametrize("fixture, code", [
    ("heis3.json", 0),
    ("jacobi-broken.json", 1),
    ("heis3-base.json", 1),
    ("split-abelian.json", 0),
    ("empty.json", 2),
])
def test_validate_exit_codes(capsys, fixture, code):
    assert run(capsys, ["validate", str(FIX / fixture)])[0] == code


def test_jacobi_failure_lists_the_triple(capsys):
    _, out, _ = run(capsys, ["validate", str(FIX / "jacobi-broken.json")])
    doc = json.loads(out)
    assert doc["status"] == "failure"
    assert "e1, e2, e3" in json.dumps(doc["results"])


def test_empty_file_is_a_parse_error_with_location(capsys):
    code, out, err = run(capsys, ["validate", str(FIX / "empty.json")])
    assert code == 2 and out == ""
    assert "parse error at line 1 column 1" in err


def test_malformed_json_reports_line_and_column(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "algebroid": {"catalog": }\n}\n')
    code, _, err = run(capsys, ["validate", str(bad)])
    assert code == 2 and "line 2" in err


def test_unknown_document_kind_is_a_parse_error(tmp_path, capsys):
    f = tmp_path / "x.json"
    f.write_text('{"something": 1}')
    assert run(capsys, ["cohomology", str(f)])[0] == 2


def test_missing_file_is_an_input_error(capsys):
    assert run(capsys, ["validate", str(FIX / "no-such-file.json")])[0] == 2


def test_digest_is_the_hash_of_the_input_bytes(capsys):
    path = FIX / "heis3.json"
    doc = json.loads(run(capsys, ["validate", str(path)])[1])
    assert doc["input_digest"] == hashlib.sha256(path.read_bytes()).hexdigest()


def test_output_flag_writes_the_report(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, ["cohomology", str(FIX / "heis3.json"), "--output", str(target)])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"]["algebroid"]["H"] == [1, 2, 2, 1]


def test_obstruction_of_the_heis_base_fixture(capsys):
    code, out, _ = run(capsys, ["obstruction", str(FIX / "heis3-base.json")])
    res = json.loads(out)["results"]
    assert code == 0
    assert res["lambda"]["entries"] == [[[0, 1, 2], ["1"]]]
    assert res["class"] == []


def test_split_and_p1_obstructions_vanish(capsys):
    assert run(capsys, ["obstruction", str(FIX / "split-abelian.json")])[0] == 0
    code, out, _ = run(capsys, ["obstruction", str(FIX / "p1-degree1.json")])
    assert code == 0 and json.loads(out)["results"]["gluing"]["ok"]


def test_atiyah_small_truncation_is_refused(capsys):
    code, out, err = run(capsys, ["atiyah-p1", "--degree", "3", "--truncation", "1"])
    assert code == 2 and out == "" and "truncation" in err


def test_atiyah_degree_zero(capsys):
    code, out, _ = run(capsys, ["atiyah-p1", "--degree", "0", "--seed", "2"])
    res = json.loads(out)["results"]
    assert code == 0
    assert res["hypercohomology"]["direct"] == [1, 1, 1, 1]
    assert all(res["checks"].values())


def test_split_spectral_has_no_differentials(capsys):
    code, out, _ = run(capsys, ["spectral", str(FIX / "split-abelian.json")])
    res = json.loads(out)["results"]
    assert code == 0
    assert all(not page["nonzero_differentials"] for page in res["pages"])


def test_rationals_round_trip_as_strings():
    x = Fraction(-7, 3)
    rep = RunReport("t", "0", True, {"v": x, "n": 4, "m": [Fraction(1, 2)]})
    doc = RunReport.parse(rep.to_json())
    assert decode_rational(doc["results"]["v"]) == x
    assert doc["results"]["n"] == 4
    assert encode(doc["results"]) == doc["results"]
    assert "." not in json.dumps(doc)
