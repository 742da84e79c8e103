import json
import math

import pytest

from pcmaxioms.cli import main
from pcmaxioms.io import load_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_then_eval_consistent(tmp_path, capsys):
    f = tmp_path / "c.json"
    assert run(capsys, "gen", "--kind", "consistent", "--n", "5", "--out", str(f))[0] == 0
    code, out, _ = run(capsys, "eval", "--index", "ci", "--matrix", str(f))
    assert code == 0 and abs(float(out)) <= 1e-8


def test_written_matrix_round_trips_exactly(tmp_path, capsys):
    f = tmp_path / "r.json"
    run(capsys, "gen", "--kind", "random", "--n", "6", "--seed", "9", "--out", str(f))
    A = load_matrix(f)
    g = tmp_path / "r2.json"
    from pcmaxioms.io import dumps_matrix

    g.write_text(dumps_matrix(A))
    assert load_matrix(g) == A


def test_corner_requires_x(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--kind", "corner", "--n", "4", "--out", str(tmp_path / "x.json"))
    assert code == 2 and "--x" in err


def test_eval_prints_seventeen_digits(tmp_path, capsys):
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"n": 3, "upper": [2, 2, 2]}))
    code, out, _ = run(capsys, "eval", "--index", "ki", "--matrix", str(f))
    assert out.strip() == "0.5"
    code, out, _ = run(capsys, "eval", "--index", "gci", "--matrix", str(f))
    assert float(out) == pytest.approx(math.log(2) ** 2 / 3, rel=1e-13)


def test_eval_rejects_non_reciprocal_csv(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("1,2\n0.4,1\n")
    code, _, err = run(capsys, "eval", "--index", "ci", "--matrix", str(f))
    assert code == 2 and "reciprocal" in err


def test_eval_accepts_reciprocal_csv(tmp_path, capsys):
    f = tmp_path / "ok.csv"
    f.write_text("1,2,4\n0.5,1,2\n0.25,0.5,1\n")
    code, out, _ = run(capsys, "eval", "--index", "ci", "--matrix", str(f))
    assert code == 0 and abs(float(out)) <= 1e-8


@pytest.mark.parametrize("doc", [{"n": 3, "upper": [1, 2]}, {"n": 3}, {"n": 2, "upper": [-1]}])
def test_eval_invalid_documents(tmp_path, capsys, doc):
    f = tmp_path / "m.json"
    f.write_text(json.dumps(doc))
    assert run(capsys, "eval", "--index", "ci", "--matrix", str(f))[0] == 2


def test_unknown_index_is_invalid_input(tmp_path, capsys):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"n": 2, "upper": [3]}))
    assert run(capsys, "eval", "--index", "nope", "--matrix", str(f))[0] == 2


def test_check_writes_replayable_witness(tmp_path, capsys):
    code, out, _ = run(capsys, "check", "--index", "hci", "--system", "bf", "--axiom", "3",
                       "--trials", "500", "--witness-dir", str(tmp_path))
    assert code == 0 and "Falsified" in out
    path = out.strip().splitlines()[-1].removeprefix("witness: ")
    doc = json.loads(open(path).read())
    from pcmaxioms.axioms import replays_exactly
    from pcmaxioms.indices import lookup
    from pcmaxioms.io import witness_from_document

    assert replays_exactly(witness_from_document(doc), lookup("hci"))
    code, val, _ = run(capsys, "eval", "--index", "hci", "--matrix", path, "--name", "intensified")
    assert float(val) == doc["values"]["intensified"]


def test_check_not_falsified(capsys):
    code, out, _ = run(capsys, "check", "--index", "ki", "--system", "ks", "--axiom", "1", "--trials", "200")
    assert code == 0 and "NotFalsified" in out


def test_jaccard_output(capsys, tmp_path):
    code, out, _ = run(capsys, "jaccard", "--json", str(tmp_path / "j.json"))
    assert code == 0
    assert out.splitlines()[0].split() == ["KS", "KU", "BF", "CS"]
    doc = json.loads((tmp_path / "j.json").read_text())
    assert doc["matrix"][2][3] == 1 / 11


def test_search_none_found(capsys):
    code, out, _ = run(capsys, "search", "--kind", "triad-worsening", "--index", "ki", "--n", "3", "--budget", "500")
    assert code == 0 and out.strip() == "none found"


def test_ri_table(capsys):
    code, out, _ = run(capsys, "ri", "--n", "3..4", "--samples", "2000", "--seed", "1")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "n\tRI" and len(lines) == 3
    assert run(capsys, "ri", "--n", "5..3", "--samples", "10")[0] == 2


def test_report_exit_code_and_rerender(tmp_path, capsys):
    md, js = tmp_path / "r.md", tmp_path / "r.json"
    code, out, _ = run(capsys, "report", "--indices", "hci,ki", "--systems", "bf", "--trials", "200",
                       "--out", str(md), "--json", str(js))
    assert code == 3  # HCI transpose cell disagrees
    md2 = tmp_path / "r2.md"
    code2, _, _ = run(capsys, "report", "--from-json", str(js), "--out", str(md2))
    assert code2 == 3 and md2.read_bytes() == md.read_bytes()


def test_report_agreeing_subset_exits_zero(tmp_path, capsys):
    code, _, _ = run(capsys, "report", "--indices", "ki", "--systems", "ks,mz", "--trials", "200")
    assert code == 0


def test_report_unknown_system(capsys):
    assert run(capsys, "report", "--systems", "zz", "--trials", "10")[0] == 2
