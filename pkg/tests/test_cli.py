import csv
import io
import json

import jsonschema
import pytest

from cremona.cli import main
from cremona.parsing import MapFile, load_fixture
from cremona.schemas import load_schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_ex4_json(capsys):
    code, out, _ = run(capsys, "analyze", "ex4", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("analysis_report"))
    assert doc["decomposition"]["pairs"] == [[2, 3, 0], [4, 5, 0], [1, 1, 1]]
    assert doc["recurrence"]["secular"]["char_poly"] == "x^5 - 3*x^4 + 2*x^3 + x - 1"
    assert doc["growth"]["class"] == "Exponential"
    assert all(c["passed"] for c in doc["checks"])
    # unresolved orbits of O_3, O_5 give the caveat exit code
    assert code == 2 and doc["exit_code"] == 2


def test_analyze_ex3_text(capsys):
    code, out, _ = run(capsys, "analyze", "ex3")
    assert code == 0
    assert "Polynomial of degree 2" in out
    assert "d(k+4) - 2*d(k+3) + 2*d(k+1) - d(k) = 0" in out


def test_analyze_identity(capsys):
    code, out, _ = run(capsys, "analyze", "identity", "--json")
    doc = json.loads(out)
    assert code == 0 and set(doc["degrees"]["forward"]) == {1}


def test_analyze_diagnostics(capsys):
    _, out, _ = run(capsys, "analyze", "ex4", "--diagnostics")
    assert "gamma_3(k)" in out and "gamma_5(k)" in out


def test_infinitely_near_hint(capsys):
    code, _, err = run(capsys, "analyze", "ex2_raw")
    assert code == 1
    assert "InfinitelyNearSuspected" in err and "cremona conjugate" in err


def test_iterate_csv(capsys):
    code, out, _ = run(capsys, "iterate", "ex2_star", "--kmax", "8")
    assert code == 0
    assert out.count("\r\n") == 10 and "\n" not in out.replace("\r\n", "")
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert [int(r["d"]) for r in rows] == [1, 2, 4, 7, 12, 20, 33, 54, 88]
    assert rows[0]["log_d"] == "0.0"


def test_iterate_json_schema(capsys):
    code, out, _ = run(capsys, "iterate", "std_quadratic", "--kmax", "5", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("degree_table"))
    assert [r["d"] for r in doc["rows"]] == [1, 2, 1, 2, 1, 2]


def test_iterate_sigma_zero(capsys):
    _, out, _ = run(capsys, "iterate", "generic_quadratic", "--kmax", "6", "--json")
    assert [r["d"] for r in json.loads(out)["rows"]] == [2**k for k in range(7)]


def test_iterate_budget(capsys):
    code, out, err = run(capsys, "iterate", "generic_quadratic", "--kmax", "20", "--budget", "40", "--method", "exact")
    assert code == 2 and "last good k = 5" in err
    assert len(out.strip().splitlines()) == 7


def test_screen_json(capsys):
    code, out, _ = run(capsys, "screen", "--m-max", "5")
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("screen"))
    rows = {tuple(r["m"]): r for r in doc["candidates"]}
    assert rows[(2, 2, 2)]["reduced"] == "x^4 - 2*x^3 + 2*x - 1"
    assert rows[(0, 3, 3)]["reduced"] == "x^6 - 2*x^5 + x^4 + x^2 - 2*x + 1"
    assert "codimension 6" in doc["note"]


def test_screen_sigma_zero(capsys):
    _, out, _ = run(capsys, "screen", "--sigma1", "0", "--n", "3")
    doc = json.loads(out)
    assert len(doc["candidates"]) == 1
    assert doc["candidates"][0]["det"] == "x - 3"
    assert doc["candidates"][0]["growth"]["class"] == "Exponential"


def test_screen_csv(capsys):
    _, out, _ = run(capsys, "screen", "--m-max", "2", "--csv")
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert len(rows) == 10 and rows[0]["m"] == "0 0 0"


def test_screen_custom_i_data(capsys, tmp_path):
    f = tmp_path / "ex4.json"
    f.write_text(json.dumps({"n": 3, "i_fwd": [1, 1, 2], "i_inv": [1, 1, 2], "i_cross": [[0, 1, 1], [1, 0, 1], [1, 1, 1]]}))
    code, out, _ = run(capsys, "screen", "--n", "3", "--m-max", "1", "--i-data", str(f))
    rows = {tuple(r["m"]): r for r in json.loads(out)["candidates"]}
    assert code == 0 and rows[(0, 0, 1)]["det"] == "x^5 - 3*x^4 + 2*x^3 + x - 1"


def test_conjugate_ex2(capsys, tmp_path):
    out_file = tmp_path / "star.json"
    code, _, _ = run(capsys, "conjugate", "ex2_raw", "ex2_psi", "--out", str(out_file), "--name", "star")
    assert code == 0
    doc = json.loads(out_file.read_text())
    jsonschema.validate(doc, load_schema("map_file"))
    star = load_fixture("ex2_star").birat_map().canonical()
    assert MapFile.from_dict(doc).birat_map().canonical() == star


def test_conjugate_identity_byte_identical(capsys, tmp_path):
    code, a, _ = run(capsys, "conjugate", "ex3", "identity", "--name", "ex3")
    src = tmp_path / "ex3.json"
    src.write_text(a)
    _, b, _ = run(capsys, "conjugate", str(src), "identity", "--name", "ex3")
    assert code == 0 and a == b


def test_verify_with_report(capsys, tmp_path):
    _, out, _ = run(capsys, "analyze", "ex3", "--json")
    rep = tmp_path / "rep.json"
    rep.write_text(out)
    code, out, _ = run(capsys, "verify", "ex3", "--report", str(rep))
    assert code == 0 and "FAIL" not in out and "PASS report pairs reproduced" in out
    doc = json.loads(rep.read_text())
    doc["growth"]["class"] = "Exponential"
    rep.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "ex3", "--report", str(rep))
    assert code == 1 and "FAIL report growth class reproduced" in out


def test_param_override(capsys):
    _, base, _ = run(capsys, "conjugate", "ex3", "identity")
    code, out, _ = run(capsys, "conjugate", "ex3", "identity", "--param", "q3=3")
    assert code == 0 and out != base
    # the degree pattern is shared by the whole family
    _, a, _ = run(capsys, "iterate", "ex3", "--kmax", "6")
    _, b, _ = run(capsys, "iterate", "ex3", "--param", "q3=3", "--kmax", "6")
    assert a == b


@pytest.mark.parametrize(
    "argv, code",
    [
        (["frobnicate"], 64),
        (["iterate"], 64),
        (["iterate", "ex3", "--kmax", "many"], 64),
        (["iterate", "no_such_map"], 65),
        (["iterate", "ex3", "--param", "oops"], 65),
    ],
)
def test_exit_codes(capsys, argv, code):
    if code == 64:
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 64
    else:
        assert main(argv) == code


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"forward": ["z1^2 + z2", "z2^2", "z3^2"], "inverse": ["z1", "z2", "z3"]}))
    assert main(["analyze", str(bad)]) == 65
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["analyze", str(broken)]) == 65
    syntax = tmp_path / "syntax.json"
    syntax.write_text(json.dumps({"forward": ["z1 z2", "z2^2", "z3^2"], "inverse": ["z1", "z2", "z3"]}))
    capsys.readouterr()
    assert main(["iterate", str(syntax)]) == 65
    assert "at position 3" in capsys.readouterr().err
