"""Matrix documents on disk: JSON upper-triangle records and full-matrix CSV."""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

from .errors import PcmError
from .pcm import Pcm, from_upper, new_pcm

CSV_RECIPROCITY_TOL = 1e-12


def matrix_document(A: Pcm, name: str | None = None) -> dict:
    doc = A.to_dict()
    if name is not None:
        doc["name"] = name
    return doc


def dumps_matrix(A: Pcm, name: str | None = None) -> str:
    """JSON text; floats use repr, which round-trips exactly (up to 17 digits)."""
    return json.dumps(matrix_document(A, name), indent=2) + "\n"


def parse_matrix_document(doc) -> Pcm:
    if not isinstance(doc, dict) or "n" not in doc or "upper" not in doc:
        raise PcmError("matrix document needs 'n' and 'upper'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise PcmError("'n' must be an integer")
    if not isinstance(doc["upper"], list):
        raise PcmError("'upper' must be a list of numbers")
    return from_upper(n, doc["upper"])


def read_csv_matrix(text: str) -> Pcm:
    rows = [r for r in csv.reader(text.splitlines()) if any(c.strip() for c in r)]
    try:
        full = [[float(c) for c in r] for r in rows]
    except ValueError as exc:
        raise PcmError(f"non-numeric CSV entry: {exc}") from exc
    if not full or any(len(r) != len(full) for r in full):
        from .errors import NonSquare

        raise NonSquare("CSV must hold n rows of n values")
    return new_pcm(full, tol=CSV_RECIPROCITY_TOL)


def load_matrix(path, name: str | None = None) -> Pcm:
    """Read a matrix from JSON or CSV.

    JSON may be a single matrix document or any document holding a
    ``matrices`` list of them (as written for witnesses); ``name`` then picks
    one, defaulting to the first.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return read_csv_matrix(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PcmError(f"{path}: invalid JSON: {exc}") from exc
    if isinstance(doc, dict) and "matrices" in doc:
        docs = doc["matrices"]
        if name is not None:
            docs = [d for d in docs if d.get("name") == name]
        if not docs:
            raise PcmError(f"{path}: no matrix named {name!r}")
        doc = docs[0]
    return parse_matrix_document(doc)


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def witness_document(witness) -> dict:
    """Witness record whose ``matrices`` list is loadable by :func:`load_matrix`."""
    doc = witness.to_dict()
    doc["matrices"] = [matrix_document(m, label) for label, m in witness.matrices.items()]
    return doc


def witness_from_document(doc: dict):
    from .axioms import Witness

    doc = dict(doc)
    doc["matrices"] = {d["name"]: {"n": d["n"], "upper": d["upper"]} for d in doc["matrices"]}
    return Witness.from_dict(doc)
