"""Jaccard similarity between axiomatic systems of inconsistency indices.

Only the number of axioms per system and the number of (nearly) identical
axioms per pair are stored; the axiom texts themselves are not compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownSystem

SYSTEM_ORDER = ("KS", "KU", "BF", "CS")

AXIOM_COUNTS = {"KS": 3, "KU": 4, "BF": 5, "CS": 6}

_SHARED = {
    frozenset({"KS", "KU"}): 1,
    frozenset({"KS", "BF"}): 2,
    frozenset({"KS", "CS"}): 1,
    frozenset({"KU", "BF"}): 3,
    frozenset({"KU", "CS"}): 2,
    frozenset({"BF", "CS"}): 1,
}


@dataclass(frozen=True)
class AxiomSystem:
    name: str
    axiom_count: int

    def shared(self, other: "AxiomSystem") -> int:
        if self.name == other.name:
            return self.axiom_count
        return _SHARED.get(frozenset({self.name, other.name}), 0)


def system(name: str) -> AxiomSystem:
    key = name.upper()
    if key not in AXIOM_COUNTS:
        raise UnknownSystem(name)
    return AxiomSystem(key, AXIOM_COUNTS[key])


def jaccard(sys_a: str, sys_b: str) -> float:
    """Shared axioms over the summed sizes of both systems; 1 on the diagonal."""
    a, b = system(sys_a), system(sys_b)
    if a.name == b.name:
        return 1.0
    return a.shared(b) / (a.axiom_count + b.axiom_count)


def jaccard_set_union(sys_a: str, sys_b: str) -> float:
    """Textbook Jaccard |A n B| / |A u B| with |A u B| = |A| + |B| - |A n B|."""
    a, b = system(sys_a), system(sys_b)
    k = a.shared(b)
    return k / (a.axiom_count + b.axiom_count - k)


def similarity_matrix(order=SYSTEM_ORDER, measure=jaccard) -> np.ndarray:
    return np.array([[measure(a, b) for b in order] for a in order])


def published_similarity_matrix() -> np.ndarray:
    """4x4 similarity matrix over (KS, KU, BF, CS) with the sum denominator."""
    return similarity_matrix(SYSTEM_ORDER, jaccard)


def format_matrix(m: np.ndarray, order=SYSTEM_ORDER, digits: int = 4) -> str:
    width = digits + 3
    lines = [" " * 4 + "".join(f"{name:>{width}}" for name in order)]
    for name, row in zip(order, m):
        lines.append(f"{name:<4}" + "".join(f"{v:>{width}.{digits}f}" for v in row))
    return "\n".join(lines)


fig1_matrix = published_similarity_matrix
