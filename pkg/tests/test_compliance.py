import json

import pytest

from pcmaxioms.axioms import AxiomVerdict, CheckConfig, VerdictKind, Witness
from pcmaxioms.compliance import (
    CellClass,
    ComplianceMatrix,
    Expectation,
    Expected,
    classify,
    diff_report,
    expected_matrix,
    matrix_from_record,
    run_compliance,
)
from pcmaxioms.indices import lookup
from pcmaxioms.pcm import from_upper

SMALL = CheckConfig(trials=100)


def _expect(index, axiom):
    (e,) = [e for e in expected_matrix() if (e.index, e.axiom) == (index, axiom)]
    return e.expected


def test_expected_matrix_covers_grid_once():
    cells = [(e.index, e.axiom) for e in expected_matrix()]
    assert len(cells) == 8 * 20 == len(set(cells))


@pytest.mark.parametrize(
    "index, axiom, expected",
    [
        ("ci", "mz_bounded", Expected.DISSATISFIES),
        ("ci", "ku_a2", Expected.DISSATISFIES),
        ("ci", "bf6_transpose", Expected.SATISFIES),
        ("gw", "bf_a4", Expected.UNKNOWN),
        ("ki", "ku_a4", Expected.UNKNOWN),
        ("ki", "cs_6", Expected.SATISFIES),
        ("re", "bf_a5", Expected.DISSATISFIES),
        ("hci", "bf_a3", Expected.DISSATISFIES),
        ("ci_star", "bf6_transpose", Expected.UNKNOWN),
        ("cr", "bf_a1", Expected.UNKNOWN),
        ("ci", "ks_a1", Expected.UNKNOWN),
    ],
)
def test_expectation_examples(index, axiom, expected):
    assert _expect(index, axiom) is expected


def _witness():
    A = from_upper(3, (2.0, 1.0, 2.0))
    return Witness("bf_a3", "forged", 1e-9, {"original": A}, {"original": 0.0})


@pytest.mark.parametrize(
    "kind, expected, cls",
    [
        (VerdictKind.FALSIFIED, Expected.DISSATISFIES, CellClass.AGREE),
        (VerdictKind.NOT_FALSIFIED, Expected.SATISFIES, CellClass.AGREE),
        (VerdictKind.FALSIFIED, Expected.SATISFIES, CellClass.DISAGREE),
        (VerdictKind.NOT_FALSIFIED, Expected.DISSATISFIES, CellClass.DISAGREE),
        (VerdictKind.NOT_FALSIFIED, Expected.UNKNOWN, CellClass.UNKNOWN),
        (VerdictKind.HEURISTIC, Expected.SATISFIES, CellClass.HEURISTIC),
        (VerdictKind.INAPPLICABLE, Expected.SATISFIES, CellClass.UNKNOWN),
    ],
)
def test_classification(kind, expected, cls):
    w = _witness() if kind is VerdictKind.FALSIFIED else None
    assert classify(AxiomVerdict("x", "bf_a3", kind, 5, w), expected) is cls


def test_forged_disagreement_embeds_witness():
    v = AxiomVerdict("ki", "bf_a3", VerdictKind.FALSIFIED, 1, _witness())
    m = ComplianceMatrix(["ki"], ["bf_a3"], {("ki", "bf_a3"): v}, expected_matrix(["ki"], ["bf_a3"]), {})
    report = diff_report(m)
    assert report.has_disagreement
    (cell,) = report.record["cells"]
    assert cell["classification"] == "DISAGREE"
    assert cell["verdict"]["witness"]["relation"] == "forged"
    assert "(ki, bf_a3)" in report.markdown


def test_single_cell_grid_and_determinism():
    a = run_compliance([lookup("hci")], ["bf_a3"], SMALL)
    b = run_compliance([lookup("hci")], ["bf_a3"], SMALL)
    assert list(a.verdicts) == [("hci", "bf_a3")]
    assert diff_report(a).json_text() == diff_report(b).json_text()
    assert diff_report(a).cell("hci", "bf_a3").classification is CellClass.AGREE


def test_checker_errors_recorded_per_cell():
    from pcmaxioms.indices import IndexHandle

    def boom(A):
        raise RuntimeError("bad index")

    m = run_compliance([IndexHandle("boom", boom), lookup("ki")], ["ks_a1"], SMALL)
    assert m.verdict("boom", "ks_a1").kind is VerdictKind.INAPPLICABLE
    assert "bad index" in m.verdict("boom", "ks_a1").note
    assert m.verdict("ki", "ks_a1").kind is VerdictKind.NOT_FALSIFIED


def test_empty_selection_rejected():
    with pytest.raises(ValueError):
        run_compliance([], ["bf_a1"], SMALL)


def test_record_round_trip():
    m = run_compliance([lookup("ci"), lookup("gw")], ["bf_a3", "mz_bounded", "bf_a5"], SMALL)
    report = diff_report(m)
    back = matrix_from_record(json.loads(report.json_text()))
    assert back.expectations == m.expectations
    assert diff_report(back).json_text() == report.json_text()
    assert diff_report(back).markdown == report.markdown


def test_expectation_dict_round_trip():
    for e in expected_matrix():
        assert Expectation.from_dict(json.loads(json.dumps(e.to_dict()))) == e


def test_report_header_states_caveat():
    m = run_compliance([lookup("ki")], ["ks_a1"], SMALL)
    md = diff_report(m).markdown
    assert "NotFalsified in N random trials" in md
