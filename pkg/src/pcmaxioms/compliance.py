"""Index x axiom compliance grid and its comparison with published verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .axioms import AXIOMS, GRID_AXIOMS, AxiomVerdict, CheckConfig, VerdictKind, check
from .indices import IndexHandle, index_names, registry

SCHEMA_VERSION = 1

CAVEAT = (
    "AGREE equates a published 'Satisfies' with 'NotFalsified in N random trials'; "
    "a sampled search never proves an axiom holds. A5 (continuity) cells are heuristic "
    "and excluded from the agreement gate."
)


class Expected(str, Enum):
    SATISFIES = "Satisfies"
    DISSATISFIES = "Dissatisfies"
    UNKNOWN = "Unknown"


class CellClass(str, Enum):
    AGREE = "AGREE"
    DISAGREE = "DISAGREE"
    HEURISTIC = "HEURISTIC"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Expectation:
    index: str
    axiom: str
    expected: Expected
    source: str

    def to_dict(self) -> dict:
        return {"index": self.index, "axiom": self.axiom, "expected": self.expected.value, "source": self.source}

    @classmethod
    def from_dict(cls, doc: dict) -> "Expectation":
        return cls(doc["index"], doc["axiom"], Expected(doc["expected"]), doc["source"])


# Literature columns the expectations are read from.
_BF15 = "Brunelli & Fedrizzi (2015)"
_MZ = "Mazurek (2016)"
_BF17 = "Brunelli & Fedrizzi (2017)"
_KU = "Koczkodaj & Urban (2018)"
_CS = "Csato (2018)"

_CS_AXIOMS = ("cs_1", "cs_2", "cs_3", "cs_4", "cs_5", "cs_6")

S, D = Expected.SATISFIES, Expected.DISSATISFIES


def _bf(sat: Iterable[int] = (), dis: Iterable[int] = ()) -> dict:
    out = {f"bf_a{k}": S for k in sat}
    out.update({f"bf_a{k}": D for k in dis})
    return out


# (index, axiom) -> (verdict, source column); absent cells are Unknown.
_ENCODED: dict[str, dict[str, tuple[Expected, str]]] = {}


def _put(index, column, cells):
    row = _ENCODED.setdefault(index, {})
    for axiom, verdict in cells.items():
        if axiom in row:
            raise AssertionError(f"duplicate expectation for ({index}, {axiom})")
        row[axiom] = (verdict, column)


_put("ci", _BF15, _bf(sat=range(1, 6)))
_put("ci", _MZ, {"mz_bounded": D})
_put("ci", _BF17, {"bf6_transpose": S})
_put("ci", _KU, {"ku_a2": D, "ku_a4": D})

_put("ci_star", _BF15, _bf(sat=range(1, 6)))
_put("ci_star", _MZ, {"mz_bounded": D})

_put("gci", _BF15, _bf(sat=range(1, 6)))
_put("gci", _MZ, {"mz_bounded": D})
_put("gci", _BF17, {"bf6_transpose": S})

_put("ki", _BF15, _bf(sat=range(1, 6)))
_put("ki", _MZ, {"mz_bounded": S})
_put("ki", _BF17, {"bf6_transpose": S})
_put("ki", _CS, {a: S for a in _CS_AXIOMS})

_put("re", _BF15, _bf(sat=(1, 2, 3), dis=(4, 5)))
_put("re", _MZ, {"mz_bounded": S})
_put("re", _BF17, {"bf6_transpose": S})

_put("hci", _BF15, _bf(sat=(1, 2, 4, 5), dis=(3,)))
_put("hci", _BF17, {"bf6_transpose": S})

_put("gw", _BF15, _bf(sat=(1, 2, 5), dis=(3,)))
_put("gw", _MZ, {"mz_bounded": S})
_put("gw", _BF17, {"bf6_transpose": S})


def expected_matrix(indices: Sequence[str] | None = None, axioms: Sequence[str] | None = None) -> list[Expectation]:
    """Published verdicts for every (index, axiom) cell; '-' or omitted cells are Unknown."""
    indices = index_names() if indices is None else list(indices)
    axioms = GRID_AXIOMS if axioms is None else tuple(axioms)
    out = []
    for idx in indices:
        row = _ENCODED.get(idx, {})
        for ax in axioms:
            verdict, column = row.get(ax, (Expected.UNKNOWN, "no published verdict"))
            out.append(Expectation(idx, ax, verdict, column))
    return out


@dataclass
class ComplianceMatrix:
    indices: list[str]
    axioms: list[str]
    verdicts: dict[tuple[str, str], AxiomVerdict]
    expectations: list[Expectation]
    metadata: dict = field(default_factory=dict)

    def verdict(self, index: str, axiom: str) -> AxiomVerdict:
        return self.verdicts[(index, axiom)]

    def expectation(self, index: str, axiom: str) -> Expectation:
        for e in self.expectations:
            if e.index == index and e.axiom == axiom:
                return e
        return Expectation(index, axiom, Expected.UNKNOWN, "no published verdict")


def _metadata(cfg: CheckConfig, timestamp: str | None) -> dict:
    from . import __version__

    return {
        "seed": cfg.seed,
        "trials": cfg.trials,
        "orders": list(cfg.orders),
        "tol": cfg.tol,
        "equality_rel_tol": cfg.equality_rel_tol,
        "search_budget": cfg.search_budget,
        "ku_deviation": cfg.ku_deviation,
        "timestamp": timestamp,
        "version": __version__,
    }


def run_compliance(
    indices: Sequence[IndexHandle] | None = None,
    axioms: Sequence[str] | None = None,
    cfg: CheckConfig = CheckConfig(),
    timestamp: str | None = None,
    progress=None,
) -> ComplianceMatrix:
    """Run every checker over the grid; checker errors are recorded, not raised.

    Each cell draws from its own seed stream, so the grid does not depend on
    execution order. ``progress`` is called with (index, axiom) before each cell.
    """
    indices = registry() if indices is None else list(indices)
    axioms = list(GRID_AXIOMS if axioms is None else axioms)
    if not indices or not axioms:
        raise ValueError("run_compliance needs at least one index and one axiom")
    verdicts = {}
    for h in indices:
        for ax in axioms:
            if progress is not None:
                progress(h.name, ax)
            try:
                verdicts[(h.name, ax)] = check(h, ax, cfg)
            except Exception as exc:  # recorded per cell
                verdicts[(h.name, ax)] = AxiomVerdict(
                    h.name, ax, VerdictKind.INAPPLICABLE, 0, note=f"error: {type(exc).__name__}: {exc}"
                )
    names = [h.name for h in indices]
    return ComplianceMatrix(names, axioms, verdicts, expected_matrix(names, axioms), _metadata(cfg, timestamp))


def classify(verdict: AxiomVerdict, expected: Expected) -> CellClass:
    if verdict.kind is VerdictKind.HEURISTIC:
        return CellClass.HEURISTIC
    if verdict.kind is VerdictKind.INAPPLICABLE or expected is Expected.UNKNOWN:
        return CellClass.UNKNOWN
    agree = (expected is Expected.DISSATISFIES) == (verdict.kind is VerdictKind.FALSIFIED)
    return CellClass.AGREE if agree else CellClass.DISAGREE


@dataclass(frozen=True)
class Cell:
    index: str
    axiom: str
    expectation: Expectation
    verdict: AxiomVerdict
    classification: CellClass


@dataclass(frozen=True)
class Report:
    cells: list[Cell]
    counts: dict[str, int]
    markdown: str
    record: dict

    @property
    def has_disagreement(self) -> bool:
        return self.counts[CellClass.DISAGREE.value] > 0

    def json_text(self) -> str:
        return canonical_json(self.record)

    def cell(self, index: str, axiom: str) -> Cell:
        for c in self.cells:
            if c.index == index and c.axiom == axiom:
                return c
        raise KeyError((index, axiom))


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


_SHORT = {
    VerdictKind.FALSIFIED: "F",
    VerdictKind.NOT_FALSIFIED: "NF",
    VerdictKind.HEURISTIC: "H",
    VerdictKind.INAPPLICABLE: "NA",
}
_EXP_SHORT = {Expected.SATISFIES: "S", Expected.DISSATISFIES: "D", Expected.UNKNOWN: "-"}


def _render_markdown(m: ComplianceMatrix, cells: list[Cell], counts: dict) -> str:
    lookup_cell = {(c.index, c.axiom): c for c in cells}
    meta = m.metadata
    lines = [
        "# Inconsistency index compliance report",
        "",
        f"> {CAVEAT}",
        "",
        f"seed {meta.get('seed')}, trials {meta.get('trials')}, orders {meta.get('orders')}, "
        f"tol {meta.get('tol')}, version {meta.get('version')}, timestamp {meta.get('timestamp')}",
        "",
        "Cell format: observed verdict / published verdict: classification. "
        "F = Falsified, NF = NotFalsified, H = heuristic, NA = not applicable; "
        "S = Satisfies, D = Dissatisfies, - = unknown.",
        "",
        "Summary: " + ", ".join(f"{k} {counts[k]}" for k in sorted(counts)),
        "",
    ]
    systems = []
    for ax in m.axioms:
        sysname = AXIOMS[ax].system
        if sysname not in systems:
            systems.append(sysname)
    for sysname in systems:
        cols = [ax for ax in m.axioms if AXIOMS[ax].system == sysname]
        lines.append(f"## {sysname.upper()}")
        lines.append("")
        lines.append("| index | " + " | ".join(cols) + " |")
        lines.append("|---" * (len(cols) + 1) + "|")
        for idx in m.indices:
            row = []
            for ax in cols:
                c = lookup_cell[(idx, ax)]
                row.append(f"{_SHORT[c.verdict.kind]} / {_EXP_SHORT[c.expectation.expected]}: {c.classification.value}")
            lines.append(f"| {idx} | " + " | ".join(row) + " |")
        lines.append("")
    flagged = [c for c in cells if c.classification is CellClass.DISAGREE]
    if flagged:
        lines.append("## Disagreements")
        lines.append("")
        for c in flagged:
            lines.append(
                f"- ({c.index}, {c.axiom}): expected {c.expectation.expected.value} "
                f"[{c.expectation.source}], observed {c.verdict.describe()}"
            )
        lines.append("")
    notes = [c for c in cells if c.verdict.note and c.classification is not CellClass.DISAGREE]
    if notes:
        lines.append("## Notes")
        lines.append("")
        for c in notes:
            lines.append(f"- ({c.index}, {c.axiom}): {c.verdict.note}")
        lines.append("")
    return "\n".join(lines)


def diff_report(m: ComplianceMatrix) -> Report:
    cells = []
    for idx in m.indices:
        for ax in m.axioms:
            e = m.expectation(idx, ax)
            v = m.verdict(idx, ax)
            cells.append(Cell(idx, ax, e, v, classify(v, e.expected)))
    counts = {k.value: 0 for k in CellClass}
    for c in cells:
        counts[c.classification.value] += 1
    record = {
        "schema_version": SCHEMA_VERSION,
        "caveat": CAVEAT,
        "metadata": dict(m.metadata),
        "indices": list(m.indices),
        "axioms": list(m.axioms),
        "expectations": [e.to_dict() for e in m.expectations],
        "cells": [
            {"index": c.index, "axiom": c.axiom, "classification": c.classification.value, "verdict": c.verdict.to_dict()}
            for c in cells
        ],
        "summary": counts,
    }
    return Report(cells, counts, _render_markdown(m, cells, counts), record)


def matrix_from_record(record: dict) -> ComplianceMatrix:
    """Rebuild a ComplianceMatrix from a machine record written by :func:`diff_report`."""
    if record.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {record.get('schema_version')!r}")
    verdicts = {}
    for c in record["cells"]:
        verdicts[(c["index"], c["axiom"])] = AxiomVerdict.from_dict(c["verdict"])
    return ComplianceMatrix(
        list(record["indices"]),
        list(record["axioms"]),
        verdicts,
        [Expectation.from_dict(e) for e in record["expectations"]],
        dict(record["metadata"]),
    )
