import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import jsonschema
import pytest

from qreider import __version__
from qreider.cli import main
from qreider.document import parse
from qreider.report import report_to_json, run_document

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "docs" / "hirzebruch_n3.surf"
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def run_cli(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "qreider.cli", *args],
        capture_output=True,
        text=True,
        input=stdin,
        timeout=120,
    )
    return proc


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert __version__ in proc.stdout


def test_check_golden_file_exit_zero():
    proc = run_cli("check", str(GOLDEN))
    assert proc.returncode == 0, proc.stderr
    assert "chi = 5" in proc.stdout
    assert "not-established" in proc.stdout  # the very-ample query honestly fails


def test_check_json_validates_against_schema():
    proc = run_cli("check", str(GOLDEN), "--json")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    jsonschema.validate(payload, SCHEMA)
    chi = next(q for q in payload["queries"] if q["query"].startswith("chi"))
    assert chi["values"]["chi"] == {"num": 5, "den": 1}


def test_json_rationals_survive_exactly():
    report = run_document(parse(GOLDEN.read_text()), source=str(GOLDEN))
    payload = report_to_json(report)
    jsonschema.validate(payload, SCHEMA)
    free = next(q for q in payload["queries"] if q["query"].startswith("check-free"))
    mu = free["values"]["mu"]
    assert F(mu["num"], mu["den"]) == F(9, 10)
    for line in free["trace"]:
        assert isinstance(line["lhs"]["num"], int) and isinstance(line["lhs"]["den"], int)


def test_stdin_input():
    text = "gram = [[-1,1],[1,0]]; K = -2G - 3F; chi_O = 1\ncurves\nG = G\nF = F\ndivisors\nH = G + F\nqueries\nchi H"
    proc = run_cli("check", "-", stdin=text)
    assert proc.returncode == 0, proc.stderr
    assert "chi = 3" in proc.stdout


def test_parse_error_exit_one():
    proc = run_cli("check", "-", stdin="gram = [[0,1],[2,0]]; K = -2G - 5F; chi_O = 1")
    assert proc.returncode == 1
    assert "error" in proc.stderr


def test_missing_file_exit_one():
    proc = run_cli("check", "no_such_file.surf")
    assert proc.returncode == 1


def test_query_error_sets_exit_one_but_not_established_does_not():
    # min degree of a non-nef class is a query error
    text = (
        "gram = [[-3,1],[1,0]]; K = -2G - 5F; chi_O = 1\n"
        "curves\nG = G\nF = F\n"
        "cone\nhirzebruch = 3\n"
        "points\np = G:1 F:1\n"
        "divisors\nB = 1/2 G\nL = 3G + 4F\nM = L - B\n"
        "queries\ncheck-free point=p B=B M=M"
    )
    proc = run_cli("check", "-", stdin=text)
    assert proc.returncode == 1
    assert "error" in proc.stdout

    ok_text = text.replace("L = 3G + 4F", "L = 1G + 10F")
    proc = run_cli("check", "-", stdin=ok_text)
    assert proc.returncode == 0, proc.stderr


def test_hirzebruch_subcommand_text_and_json():
    proc = run_cli("hirzebruch", "--n", "3", "--part", "1")
    assert proc.returncode == 0, proc.stderr
    assert "ok: yes" in proc.stdout
    proc = run_cli("hirzebruch", "--n", "1", "--part", "2", "--json")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    jsonschema.validate(payload, SCHEMA)
    claim = payload["queries"][0]
    assert claim["flags"]["ok"] is True
    assert any(c["query"].startswith("tangent separation") for c in claim["checks"])


def test_main_entry_returns_exit_codes_in_process(capsys):
    assert main(["check", str(GOLDEN)]) == 0
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_hirzebruch_claim_query_matches_search_example():
    text = "queries\nhirzebruch-claim n=1 part=2"
    report = run_document(parse(text))
    result = report.results[0]
    assert result.status == "report"
    assert result.flags["ok"] is True
    tangent = next(c for c in result.checks if c.query.startswith("tangent separation"))
    assert tangent.status == "established"
    assert tangent.found is True


def test_very_ample_query_shows_the_forced_square_conflict():
    report = run_document(parse("queries\ncheck-very-ample m2=8 mindeg=100"))
    result = report.results[0]
    assert result.status == "not-established"
    forced = next(l for l in result.trace if "forces M^2 > 8" in l.text)
    assert forced.lhs == 8 and forced.rel == ">" and forced.rhs == 8 and not forced.holds


def test_plc_ties_break_by_declaration_order():
    text = (
        "gram=[[0,1],[1,0]]; K = -2A - 2B; chi_O=1\n"
        "curves\nZc = A\nAc = B\n"  # sorted order would put Ac first
        "points\np = Zc:1 Ac:1\n"
        "divisors\nBd = 1/2 Zc + 1/2 Ac\nDd = 3/4 Zc + 3/4 Ac\n"
        "queries\nplc-threshold point=p B=Bd D=Dd\n"
    )
    import warnings

    from qreider.criteria import PLCContextWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PLCContextWarning)
        report = run_document(parse(text))
    result = report.results[0]
    assert result.labels["critical"] == "Zc"
    assert result.labels["achievers"] == "Zc, Ac"


def test_check_separate_query():
    text = (
        "gram = [[-1,1],[1,0]]; K = -2G - 3F; chi_O = 1\n"
        "curves\nG = G\nF = F\n"
        "cone\nhirzebruch = 1\n"
        "points\np = F:1\nq = F:1\n"
        "divisors\nB = 1/2 G\nM = 5/2 G + 6F\n"
        "queries\n"
        "check-separate p=p q=q B=B M=M\n"
        "check-separate p=p q=q B=B M=M mindeg_p=7/2 mindeg_q=7/2 mindeg_pq=7/2\n"
    )
    report = run_document(parse(text))
    defaulted, overridden = report.results
    assert defaulted.status in ("established", "not-established")
    assert overridden.values["mindeg_pq"] == F(7, 2)
    assert overridden.status == "established"
