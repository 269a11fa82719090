import csv
import io
import json
from fractions import Fraction

import pytest

from hkelliptic.cli import main
from hkelliptic.curves import get_curve
from hkelliptic.reports import HKReport, load_ideal, rational_from_json, rational_json, verify


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_oracle_json(capsys):
    code, out, _ = run(capsys, "oracle", "--curve", "hesse:p5:l1", "--ideal", "maximal", "--q", "1,5,25")
    assert code == 0
    totals = [p["total"] for p in json.loads(out)["profiles"]]
    assert totals == [1, 55, 1405]


def test_oracle_csv_to_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "oracle", "--curve", "fermat:p2", "--q", "2,4,8",
                       "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    totals = {}
    for r in rows:
        totals[r["q"]] = totals.get(r["q"], 0) + int(r["colength"])
    assert totals == {"2": 8, "4": 36, "8": 144}


def test_oracle_errors(capsys):
    assert run(capsys, "oracle", "--curve", "hesse:p5:l1", "--q", "4")[0] == 2
    assert run(capsys, "oracle", "--curve", "hesse:p2:l1", "--q", "2")[0] == 2
    assert run(capsys, "oracle", "--curve", "nowhere.json", "--q", "2")[0] == 2


def test_formula_commands(capsys):
    code, out, _ = run(capsys, "formula", "--theorem", "complete", "--params", '{"N": 3, "p": 5}', "--q", "5")
    assert code == 0 and json.loads(out)["results"][0]["phi"] == 65
    code, _, err = run(capsys, "formula", "--theorem", "complete", "--params", '{"N": 2, "p": 2}', "--q", "2")
    assert code == 5 and "h^1" in err
    code, out, _ = run(capsys, "formula", "--theorem", "space-curve", "--params",
                       '{"delta": 6, "p": 5, "case": "i"}', "--q", "5")
    assert json.loads(out)["results"][0]["phi"] == 99
    code, out, _ = run(capsys, "formula", "--theorem", "general", "--params",
                       '{"delta": 3, "d": [1, 1, 1], "summands": [[2, -9]]}', "--q", "5,25", "--format", "csv")
    assert out.splitlines()[1:] == ["5,55,-5,4", "25,1405,-5,4"]


def test_formula_params_file(capsys, tmp_path):
    path = tmp_path / "params.json"
    # Fermat over F_2: h^1 = 1 at q = 2 and 2 from q = 4 on
    path.write_text(json.dumps({"N": 2, "p": 2, "h1": {"values": 2, "by_q": {"2": 1}}}))
    code, out, _ = run(capsys, "formula", "--theorem", "complete", "--params", str(path), "--q", "1,2,4,8")
    assert [r["phi"] for r in json.loads(out)["results"]] == [1, 8, 36, 144]
    code, _, _ = run(capsys, "formula", "--theorem", "semistable", "--params", '{"delta": 3}', "--q", "5")
    assert code == 2


@pytest.mark.parametrize("curve,e_max,phis", [
    ("hesse:p5:l1", "2", [1, 55, 1405]),
    ("hesse:p2:lF8", "3", [1, 7, 35, 143]),
    ("ci-quartic:p5", "2", [1, 65, 1665]),
])
def test_verify_match(capsys, curve, e_max, phis):
    code, out, _ = run(capsys, "verify", "--curve", curve, "--ideal", "maximal", "--e-max", e_max)
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "Match"
    assert [r["phi_oracle"] for r in report["rows"]] == phis
    assert "timing_s" not in report


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "--curve", "fermat:p2")[1]
    second = run(capsys, "verify", "--curve", "fermat:p2")[1]
    assert first == second


def test_verify_mismatch_exit_code(capsys, tmp_path):
    # (X^2, Y^2, Z^2) on an ordinary cubic has a semistable syzygy bundle;
    # claiming a split into degrees -12 and -6 must be caught
    ideal = tmp_path / "ideal.json"
    ideal.write_text(json.dumps({"gens": ["X^2", "Y^2", "Z^2"], "summands": [[1, -12], [1, -6]]}))
    code, out, _ = run(capsys, "verify", "--curve", "hesse:p5:l1", "--ideal", str(ideal), "--e-max", "1")
    assert code == 1 and json.loads(out)["verdict"] == "Mismatch"


def test_verify_without_route(capsys, tmp_path):
    ideal = tmp_path / "ideal.json"
    ideal.write_text(json.dumps({"gens": ["X^2", "Y^2", "Z^2"]}))
    assert run(capsys, "verify", "--curve", "hesse:p5:l1", "--ideal", str(ideal))[0] == 2


def test_classify_and_hasse(capsys):
    code, out, _ = run(capsys, "classify", "--decomposition", '{"summands": [{"rank": 3, "degree": -4}]}')
    assert code == 0 and json.loads(out)["verdict"] == "Yes"
    code, out, _ = run(capsys, "classify", "--decomposition",
                       '{"summands":[{"rank":2,"degree":-4,"kind":{"AtiyahTwist":"l"}},'
                       '{"rank":1,"degree":-2,"kind":{"Line":"l"}}]}')
    assert json.loads(out)["verdict"] == "No" and json.loads(out)["condition"] == "iv"
    assert run(capsys, "classify", "--decomposition", '{"summands": [{"rank": 2, "degree": -5}]}')[0] == 2
    assert json.loads(run(capsys, "hasse", "--curve", "fermat:p2")[1])["hasse_invariant"] == 0
    assert json.loads(run(capsys, "hasse", "--curve", "hesse:p2:lF8")[1])["hasse_invariant"] == 1
    assert run(capsys, "hasse", "--curve", "ci-quartic:p5")[0] == 2


def test_report_round_trip():
    curve = get_curve("fermat:p2")
    report = verify(curve, load_ideal("maximal", curve), 3)
    again = HKReport.from_json(json.loads(json.dumps(report.to_json())))
    assert again == report
    assert report.gamma_cycle == (2, 1)


def test_rational_encoding():
    for x in (Fraction(-5, 4), Fraction(0), Fraction(7)):
        enc = rational_json(x)
        assert isinstance(enc["num"], str) and rational_from_json(enc) == x
