"""Inconsistency indices: functions mapping a PCM to a real number.

Every built-in returns 0 (up to rounding) on 2x2 input, since every 2x2 PCM is consistent;
the triad-based normalizers of GCI and CI* are undefined there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import GeneratorRejected, MissingRiEntry, OrderTooSmall, UnknownIndex
from .pcm import (
    SAATY_SCALE,
    Pcm,
    Triad,
    _as_rng,
    geometric_mean_weights,
    pair_indices,
    perron_roots,
    principal_eigen,
    triad_indices,
    triad_ratios,
    upper_length,
)


@dataclass(frozen=True)
class Range:
    lower: float
    upper: float
    upper_closed: bool = False

    def __str__(self) -> str:
        hi = "inf" if math.isinf(self.upper) else f"{self.upper:g}"
        return f"[{self.lower:g}, {hi}{']' if self.upper_closed else ')'}"


@dataclass(frozen=True)
class IndexHandle:
    name: str
    eval: Callable[[Pcm], float]
    min_order: int = 3
    claimed_range: Range = Range(0.0, math.inf)
    triad_decomposable: bool = False
    title: str = ""

    def __call__(self, A: Pcm) -> float:
        return float(self.eval(A))


@dataclass(frozen=True)
class TriadGenerator:
    """Local inconsistency ``F`` of a triad ratio and an aggregation ``agg``.

    ``agg`` receives a 1-D numpy array with one entry per triad.
    """

    F: Callable[[float], float]
    agg: Callable[[np.ndarray], float]
    name: str = ""


# ---------------------------------------------------------------- Saaty


def ci_saaty(A: Pcm) -> float:
    """(lambda_max - n) / (n - 1)."""
    if A.n == 2:
        return 0.0
    lam = principal_eigen(A).lambda_max
    return (lam - A.n) / (A.n - 1)


def _saaty_stack(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    scale = np.array(SAATY_SCALE)
    picks = scale[rng.integers(0, scale.size, size=(count, upper_length(n)))]
    stack = np.ones((count, n, n))
    rows, cols = pair_indices(n)
    stack[:, rows, cols] = picks
    stack[:, cols, rows] = 1.0 / picks
    return stack


def random_index(n: int, samples: int, seed=None, chunk: int = 20_000) -> float:
    """Mean CI over ``samples`` Saaty-scale random matrices of order ``n``.

    The draws follow :func:`pcmaxioms.pcm.random_pcm`; eigenvalues come from
    the batched power iteration so 10^5 samples take well under a second.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if n == 2:
        return 0.0
    rng = _as_rng(seed)
    total = 0.0
    left = samples
    while left:
        count = min(chunk, left)
        lam = perron_roots(_saaty_stack(rng, n, count))
        total += float(np.sum((lam - n) / (n - 1)))
        left -= count
    return total / samples


# Frozen output of random_index(n, 100_000, seed=42).
DEFAULT_RI: Mapping[int, float] = {
    3: 0.5239935481269522,
    4: 0.8821152587638452,
    5: 1.1079889278709858,
    6: 1.2459054253217252,
    7: 1.3401958359762642,
    8: 1.4028080173905526,
    9: 1.4495723624697778,
    10: 1.4854048188478912,
}


def cr_saaty(A: Pcm, ri_table: Mapping[int, float] = DEFAULT_RI) -> float:
    if A.n not in ri_table:
        raise MissingRiEntry(f"no random index for n = {A.n}")
    return ci_saaty(A) / ri_table[A.n]


def _cr_default(A: Pcm) -> float:
    if A.n == 2:
        return 0.0
    return cr_saaty(A)


# ---------------------------------------------------------------- triad indices


def ki_triad(t: Triad | Sequence[float]) -> float:
    """min(|1 - b/(ac)|, |1 - ac/b|) for the triad (a, b, c) = (t12, t13, t23)."""
    a, b, c = t.as_tuple() if isinstance(t, Triad) else t
    return min(abs(1.0 - b / (a * c)), abs(1.0 - a * c / b))


def ki_koczkodaj(A: Pcm) -> float:
    """Largest local triad inconsistency."""
    if A.n == 2:
        return 0.0
    x = triad_ratios(A)
    local = np.minimum(np.abs(1.0 - 1.0 / x), np.abs(1.0 - x))
    return float(local.max())


def ci_star(A: Pcm) -> float:
    """Mean over all triads of eta + 1/eta - 2, written as (eta - 1)^2 / eta."""
    if A.n == 2:
        return 0.0
    x = triad_ratios(A)
    return float(np.mean((x - 1.0) ** 2 / x))


def gci(A: Pcm) -> float:
    if A.n == 2:
        return 0.0
    n = A.n
    logw = np.log(geometric_mean_weights(A))
    rows, cols = pair_indices(n)
    e = A.log_matrix[rows, cols] - logw[rows] + logw[cols]
    return float(2.0 / ((n - 1) * (n - 2)) * np.sum(e * e))


# ---------------------------------------------------------------- column-based


def hci(A: Pcm) -> float:
    """Harmonic consistency index built on the column sums."""
    n = A.n
    s = A.matrix.sum(axis=0)
    hm = n / np.sum(1.0 / s)
    return float((hm - n) * (n + 1) / (n * (n - 1)))


def gw(A: Pcm) -> float:
    """Mean absolute gap between normalized columns and geometric-mean weights."""
    m = A.matrix
    normalized = m / m.sum(axis=0)
    w = geometric_mean_weights(A)
    return float(np.abs(normalized - w[:, None]).sum() / A.n)


def re_barzilai(A: Pcm) -> float:
    """Share of the log-matrix energy left after removing its row-difference part.

    Set to 0 at the all-ones matrix, where the ratio is 0/0.
    """
    d = A.log_matrix
    total = float(np.sum(d * d))
    if total == 0.0:
        return 0.0
    r = d.mean(axis=1)
    e = d - (r[:, None] - r[None, :])
    return float(np.sum(e * e)) / total


# ---------------------------------------------------------------- triad framework


def build_triad_index(gen: TriadGenerator, name: str, cfg=None) -> IndexHandle:
    """Index aggregating F(a_ij a_jk a_ki) over all i < j < k.

    Raises GeneratorRejected when sampled checks find ``F`` or ``agg``
    lacking the required symmetry, minimum, quasi-convexity or monotonicity.
    """
    from .axioms import CheckConfig, check_generator_properties

    if cfg is None:
        cfg = CheckConfig(trials=1000)
    verdict = check_generator_properties(gen, cfg)
    if verdict.falsified:
        raise GeneratorRejected(verdict.note)

    F = np.vectorize(gen.F, otypes=[float])

    def evaluate(A: Pcm) -> float:
        if A.n < 3:
            raise OrderTooSmall("triad indices need n >= 3")
        I, J, K = triad_indices(A.n)
        m = A.matrix
        eta = m[I, J] * m[J, K] * m[K, I]
        return float(gen.agg(F(eta)))

    return IndexHandle(name, evaluate, min_order=3, triad_decomposable=True, title=gen.name or name)


# ---------------------------------------------------------------- registry

_BUILTINS = (
    IndexHandle("ci", ci_saaty, 3, Range(0.0, math.inf), False, "CI Saaty (1980)"),
    IndexHandle("cr", _cr_default, 3, Range(0.0, math.inf), False, "CR Saaty (1980)"),
    IndexHandle("ki", ki_koczkodaj, 3, Range(0.0, 1.0), True, "KI Koczkodaj (1993)"),
    IndexHandle("gci", gci, 3, Range(0.0, math.inf), True, "GCI Aguaron & Moreno-Jimenez (2003)"),
    IndexHandle("ci_star", ci_star, 3, Range(0.0, math.inf), True, "CI* Pelaez & Lamata (2003)"),
    IndexHandle("hci", hci, 2, Range(0.0, math.inf), False, "HCI Stein & Mizzi (2007)"),
    IndexHandle("gw", gw, 2, Range(0.0, 2.0), False, "GW Golden & Wang (1989)"),
    IndexHandle("re", re_barzilai, 2, Range(0.0, 1.0, True), False, "RE Barzilai (1998)"),
)

# Indices with Table-1 verdicts whose formulas are not carried here.
RESERVED = {
    "cm": "CM Salo & Hamalainen (1997)",
    "cci": "CCI Kou & Lin (2014)",
    "ni_g": "NI_n^g Ramik & Korviny (2010)",
    "ci_h": "CI_H Wu & Xu (2012)",
    "s_dixit": "S Dixit (2018)",
    "i_chi2": "I_chi2 Fedrizzi & Ferrari (2018)",
    "fg": "FG Fedrizzi & Giove (2007)",
    "ati": "ATI Grzybowski (2016)",
    "i_cp": "I_CP Cavallo & D'Apuzzo (2012)",
    "ci_beta": "CI_beta Sato & Tan (2023)",
}


def registry() -> list[IndexHandle]:
    return list(_BUILTINS)


def index_names() -> list[str]:
    return [h.name for h in _BUILTINS]


def lookup(name: str) -> IndexHandle:
    for h in _BUILTINS:
        if h.name == name:
            return h
    if name in RESERVED:
        raise NotImplementedError(f"{RESERVED[name]} is reserved but not implemented")
    raise UnknownIndex(name)
