"""Randomized falsification of inconsistency-index axioms.

Every axiom is a sampler that draws a *case* (a few labelled matrices plus
parameters) and a pure predicate that decides from the index values whether
the case violates the axiom. A falsifying case becomes a :class:`Witness`;
:func:`replay` re-evaluates it with the same predicate. A check that finds no
violation only reports how many cases it tried.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import UnknownAxiom
from .indices import IndexHandle, TriadGenerator, ki_triad
from .pcm import (
    Pcm,
    count_intransitive,
    from_upper,
    intensify,
    is_consistent,
    perturb_entry,
    permute,
    random_consistent,
    random_pcm,
    submatrix,
    transpose,
    triad_ratios,
    corner_matrix,
    upper_length,
)

LN9 = math.log(9.0)


@dataclass(frozen=True)
class CheckConfig:
    trials: int = 10_000
    orders: tuple[int, ...] = (3, 4, 5, 6)
    seed: int = 42
    tol: float = 1e-9
    search_budget: int = 100_000
    # "eim": max(ac/b, b/ac) deviation for KU axiom 3; "abs": |ac - b|.
    ku_deviation: str = "eim"
    equality_rel_tol: float = 1e-12

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.orders or min(self.orders) < 2:
            raise ValueError("orders must be non-empty and >= 2")
        if self.ku_deviation not in ("eim", "abs"):
            raise ValueError("ku_deviation must be 'eim' or 'abs'")
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))


class VerdictKind(str, Enum):
    FALSIFIED = "Falsified"
    NOT_FALSIFIED = "NotFalsified"
    HEURISTIC = "Heuristic"
    INAPPLICABLE = "Inapplicable"


@dataclass(frozen=True)
class Witness:
    axiom: str
    relation: str
    tol: float
    matrices: dict[str, Pcm]
    values: dict[str, float]
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "relation": self.relation,
            "tol": self.tol,
            "matrices": {k: m.to_dict() for k, m in self.matrices.items()},
            "values": dict(self.values),
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Witness":
        return cls(
            axiom=doc["axiom"],
            relation=doc["relation"],
            tol=float(doc["tol"]),
            matrices={k: Pcm.from_dict(m) for k, m in doc["matrices"].items()},
            values={k: float(v) for k, v in doc["values"].items()},
            params=dict(doc.get("params", {})),
        )


@dataclass(frozen=True)
class AxiomVerdict:
    index: str
    axiom: str
    kind: VerdictKind
    trials_run: int
    witness: Witness | None = None
    note: str = ""
    evidence: dict | None = None

    def __post_init__(self):
        if self.kind is VerdictKind.FALSIFIED and self.witness is None:
            raise ValueError("a Falsified verdict needs a witness")

    @property
    def falsified(self) -> bool:
        return self.kind is VerdictKind.FALSIFIED

    def describe(self) -> str:
        if self.kind is VerdictKind.NOT_FALSIFIED:
            return f"no counterexample in {self.trials_run} trials"
        if self.kind is VerdictKind.FALSIFIED:
            return f"falsified after {self.trials_run} trials: {self.witness.relation}"
        if self.kind is VerdictKind.HEURISTIC:
            return f"heuristic ({self.trials_run} probes): {self.note}"
        return f"inapplicable: {self.note}"

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "axiom": self.axiom,
            "kind": self.kind.value,
            "trials_run": self.trials_run,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "note": self.note,
            "evidence": self.evidence,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AxiomVerdict":
        w = doc.get("witness")
        return cls(
            index=doc["index"],
            axiom=doc["axiom"],
            kind=VerdictKind(doc["kind"]),
            trials_run=int(doc["trials_run"]),
            witness=None if w is None else Witness.from_dict(w),
            note=doc.get("note", ""),
            evidence=doc.get("evidence"),
        )


@dataclass(frozen=True)
class Case:
    matrices: dict[str, Pcm]
    params: dict = field(default_factory=dict)


# A predicate returns a description of the violated relation, or None.
Predicate = Callable[[dict, Case, float], "str | None"]


@dataclass(frozen=True)
class AxiomSpec:
    id: str
    system: str
    label: str
    statement: str


AXIOMS: dict[str, AxiomSpec] = {
    a.id: a
    for a in [
        AxiomSpec("bf_a1", "bf", "A1", "A is consistent iff f(A) = omega"),
        AxiomSpec("bf_a2", "bf", "A2", "f(P^T A P) = f(A)"),
        AxiomSpec("bf_a3", "bf", "A3", "f(A^k) >= f(A) for k > 1"),
        AxiomSpec("bf_a4", "bf", "A4", "monotone along single-entry deviations from consistency"),
        AxiomSpec("bf_a5", "bf", "A5", "continuity in the upper-triangle entries"),
        AxiomSpec("bf6_transpose", "bf", "A6", "f(A^T) = f(A)"),
        AxiomSpec("mz_bounded", "mz", "A6", "bounded from above"),
        AxiomSpec("ku_a1", "ku", "A1", "A is consistent iff f(A) = 0"),
        AxiomSpec("ku_a2", "ku", "A2", "f(A) in ]0, 1] for inconsistent A"),
        AxiomSpec("ku_a3", "ku", "A3", "larger transitivity deviation gives larger f"),
        AxiomSpec("ku_a4", "ku", "A4", "f(submatrix) <= f(A)"),
        AxiomSpec("ks_a1", "ks", "A1", "consistent triads map to 0"),
        AxiomSpec("ks_a2", "ks", "A2", "f takes values in [0, 1["),
        AxiomSpec("ks_a3", "ks", "A3", "altering a consistent triad gives f > 0; quasi-convexity"),
        AxiomSpec("cs_1", "cs", "I", "positive responsiveness"),
        AxiomSpec("cs_2", "cs", "II", "invariance under inversion of preferences"),
        AxiomSpec("cs_3", "cs", "III", "homogeneous treatment of entities"),
        AxiomSpec("cs_4", "cs", "IV", "scale invariance f(a,b,c) = f(ka,k^2 b,kc)"),
        AxiomSpec("cs_5", "cs", "V", "monotony: triad <= matrix"),
        AxiomSpec("cs_6", "cs", "VI", "reducibility: some triad equals the matrix"),
        AxiomSpec("bf_a7", "a7", "A7", "C(A) >= C(B) implies f(A) >= f(B)"),
    ]
}

GRID_AXIOMS: tuple[str, ...] = tuple(a for a in AXIOMS if a != "bf_a7")
HEURISTIC_AXIOMS = frozenset({"bf_a5"})

SYSTEM_AXIOMS = {
    "bf": ("bf_a1", "bf_a2", "bf_a3", "bf_a4", "bf_a5", "bf6_transpose"),
    "mz": ("mz_bounded",),
    "ku": ("ku_a1", "ku_a2", "ku_a3", "ku_a4"),
    "ks": ("ks_a1", "ks_a2", "ks_a3"),
    "cs": ("cs_1", "cs_2", "cs_3", "cs_4", "cs_5", "cs_6"),
    "a7": ("bf_a7",),
}


def axiom_id(system: str, number: int | str | None = None) -> str:
    """Map a (system, axiom number) pair such as ('bf', 6) to an axiom id."""
    system = system.lower()
    if system not in SYSTEM_AXIOMS:
        raise UnknownAxiom(system)
    ids = SYSTEM_AXIOMS[system]
    if len(ids) == 1:
        return ids[0]
    if number is None:
        raise UnknownAxiom(f"system {system!r} needs an axiom number")
    k = int(number)
    if not 1 <= k <= len(ids):
        raise UnknownAxiom(f"{system} has no axiom {number}")
    return ids[k - 1]


# ---------------------------------------------------------------- sampling


def derived_rng(seed: int, index_name: str, axiom: str) -> np.random.Generator:
    """Independent, order-free stream per (seed, index, axiom)."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(index_name.encode()), zlib.crc32(axiom.encode())]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _log_uniform_pcm(rng, n, spread=LN9) -> Pcm:
    return from_upper(n, np.exp(rng.uniform(-spread, spread, upper_length(n))))


def _perturbed_consistent(rng, n) -> Pcm:
    base = random_consistent(n, rng)
    if rng.random() < 0.5:
        i, j = sorted(rng.choice(n, 2, replace=False))
        delta = rng.choice([-1.0, 1.0]) * math.exp(rng.uniform(math.log(1e-2), math.log(3.0)))
        return perturb_entry(base, int(i), int(j), base.entry(int(i), int(j)) * math.exp(delta))
    sigma = math.exp(rng.uniform(math.log(1e-2), 0.0))
    noise = np.exp(rng.normal(0.0, sigma, upper_length(n)))
    return from_upper(n, np.array(base.upper) * noise)


# Inconsistent probes keep some triad at least this far from consistency in
# log terms, so that quadratic indices stay well above the value tolerance.
MIN_LOG_INCONSISTENCY = 1e-2


def sample_inconsistent(rng, n) -> Pcm:
    """Mixture of Saaty-scale, continuous and near-consistent inconsistent matrices."""
    while True:
        kind = rng.integers(4)
        if kind == 0:
            A = random_pcm(n, rng)
        elif kind == 1:
            A = _log_uniform_pcm(rng, n)
        elif kind == 2:
            A = _log_uniform_pcm(rng, n, spread=math.log(1e3))
        else:
            A = _perturbed_consistent(rng, n)
        if n > 2 and np.max(np.abs(np.log(triad_ratios(A)))) >= MIN_LOG_INCONSISTENCY:
            return A


def sample_any(rng, n) -> Pcm:
    if n == 2 or rng.random() < 0.15:
        return random_consistent(n, rng)
    return sample_inconsistent(rng, n)


def _random_triad(rng, spread=LN9) -> Pcm:
    return from_upper(3, np.exp(rng.uniform(-spread, spread, 3)))


def _consistent_triad(rng) -> Pcm:
    a, c = np.exp(rng.uniform(-LN9, LN9, 2))
    return from_upper(3, (a, a * c, c))


def _triad(a, b, c) -> Pcm:
    return from_upper(3, (a, b, c))


def _order(rng, cfg, minimum=2) -> int:
    choices = [n for n in cfg.orders if n >= minimum]
    if not choices:
        raise ValueError(f"no configured order >= {minimum}")
    return int(rng.choice(choices))


def _close(x: float, y: float, tol: float, rel: float = 1e-12) -> bool:
    return abs(x - y) <= max(rel * max(abs(x), abs(y)), tol)


# ---------------------------------------------------------------- predicates


def _p_bf_a1(values, case, tol):
    ref, probe = values["reference"], values["probe"]
    if is_consistent(case.matrices["probe"]):
        if abs(probe - ref) > tol:
            return "two consistent matrices have different values"
    elif abs(probe - ref) <= tol:
        return "an inconsistent matrix takes the consistent value omega"
    return None


def _p_equal(left, right):
    def pred(values, case, tol):
        rel = case.params.get("rel_tol", 1e-12)
        if not _close(values[left], values[right], tol, rel):
            return f"f({left}) != f({right})"
        return None

    return pred


def _p_bf_a3(values, case, tol):
    if values["intensified"] < values["original"] - tol:
        return "f(A^k) < f(A) for k > 1"
    return None


def _p_chain(values, case, tol):
    labels = list(case.matrices)
    for prev, nxt in zip(labels, labels[1:]):
        if values[nxt] < values[prev] - tol:
            return f"f({nxt}) < f({prev}) further from the consistent entry"
    return None


def _p_bf_a5(values, case, tol):
    base = values["base"]
    labels = [k for k in case.matrices if k != "base"]
    first = abs(values[labels[0]] - base)
    last = abs(values[labels[-1]] - base)
    if last > 1e-4 * max(1.0, abs(base)) and last >= 0.1 * first:
        return "|f(A_eps) - f(A)| does not shrink as eps -> 0"
    return None


LADDER_THRESHOLD = 1e6


def _p_bounded(values, case, tol):
    v = [values[k] for k in case.matrices]
    upper = case.params["claimed_upper"]
    closed = case.params.get("upper_closed", False)
    increasing = all(b > a for a, b in zip(v, v[1:]))
    if increasing and max(v) > LADDER_THRESHOLD:
        return f"strictly increasing ladder exceeding {LADDER_THRESHOLD:g}"
    if upper is not None and math.isfinite(upper):
        if any(x > upper + tol or (not closed and x >= upper) for x in v):
            return f"ladder leaves the claimed range (upper {upper:g})"
        return None
    top = v[len(v) // 2 - 1 :]
    steps = [b - a for a, b in zip(top, top[1:])]
    if increasing and all(s2 >= s1 * (1 - 1e-9) for s1, s2 in zip(steps, steps[1:])):
        return "strictly increasing ladder whose increments do not shrink"
    return None


def _p_ku_a1(values, case, tol):
    f = values["probe"]
    if is_consistent(case.matrices["probe"]):
        if abs(f) > tol:
            return "consistent matrix with f != 0"
    elif abs(f) <= tol:
        return "inconsistent matrix with f = 0"
    return None


def _p_ku_a2(values, case, tol):
    f = values["A"]
    if not (f > 0.0 and f <= 1.0 + tol):
        return "f(A) outside ]0, 1] for inconsistent A"
    return None


def ku_deviation(triad: Pcm, mode: str) -> float:
    a, b, c = triad.upper
    if mode == "abs":
        return abs(a * c - b)
    r = a * c / b
    return max(r, 1.0 / r)


def _p_ku_a3(values, case, tol):
    mode = case.params.get("deviation", "eim")
    d1 = ku_deviation(case.matrices["t1"], mode)
    d2 = ku_deviation(case.matrices["t2"], mode)
    if d1 <= d2 and values["t1"] > values["t2"] + tol:
        return "smaller transitivity deviation but larger f"
    return None


def _p_ku_a4(values, case, tol):
    if values["sub"] > values["A"] + tol:
        return "f(submatrix) > f(A)"
    return None


def _p_ks_a1(values, case, tol):
    if abs(values["triad"]) > tol:
        return "consistent triad with f != 0"
    return None


def _p_ks_a2(values, case, tol):
    f = values["triad"]
    if f < -tol or f >= 1.0:
        return "f outside [0, 1["
    return None


def _p_ks_a3(values, case, tol):
    if case.params["probe"] == "alter":
        if values["altered"] <= tol:
            return "altered consistent triad still has f = 0"
        return None
    if values["mid"] > max(values["p"], values["q"]) + tol:
        return "f(midpoint) > max(f(endpoints)) in log coordinates"
    return None


def _p_cs_1(values, case, tol):
    if values["larger"] - values["smaller"] <= tol:
        return "f(1,a,1) >= f(1,b,1) although a < b"
    return None


def _p_cs_5(values, case, tol):
    for label in case.matrices:
        if label != "A" and values[label] > values["A"] + tol:
            return f"f({label}) > f(A)"
    return None


def _p_cs_6(values, case, tol):
    gaps = [abs(values["A"] - values[k]) for k in case.matrices if k != "A"]
    if min(gaps) > tol:
        return "no triad attains f(A)"
    return None


def _p_bf_a7(values, case, tol):
    ca = count_intransitive(case.matrices["A"])
    cb = count_intransitive(case.matrices["B"])
    if ca >= cb and values["A"] < values["B"] - tol:
        return f"C(A) = {ca} >= C(B) = {cb} but f(A) < f(B)"
    return None


def _p_worsening(values, case, tol):
    i, j, k = case.params["triad"]
    before = ki_triad(_triad_of(case.matrices["before"], i, j, k))
    after = ki_triad(_triad_of(case.matrices["after"], i, j, k))
    if after > before and values["after"] < values["before"] - tol:
        return "a triad got worse while the whole matrix improved"
    return None


def _triad_of(A: Pcm, i, j, k):
    m = A.matrix
    return (float(m[i, j]), float(m[i, k]), float(m[j, k]))


PREDICATES: dict[str, Predicate] = {
    "bf_a1": _p_bf_a1,
    "bf_a2": _p_equal("original", "permuted"),
    "bf_a3": _p_bf_a3,
    "bf_a4": _p_chain,
    "bf_a5": _p_bf_a5,
    "bf6_transpose": _p_equal("original", "transposed"),
    "mz_bounded": _p_bounded,
    "ku_a1": _p_ku_a1,
    "ku_a2": _p_ku_a2,
    "ku_a3": _p_ku_a3,
    "ku_a4": _p_ku_a4,
    "ks_a1": _p_ks_a1,
    "ks_a2": _p_ks_a2,
    "ks_a3": _p_ks_a3,
    "cs_1": _p_cs_1,
    "cs_2": _p_equal("triad", "inverted"),
    "cs_3": _p_equal("left", "right"),
    "cs_4": _p_equal("triad", "rescaled"),
    "cs_5": _p_cs_5,
    "cs_6": _p_cs_6,
    "bf_a7": _p_bf_a7,
    "triad_worsening": _p_worsening,
}


# ---------------------------------------------------------------- samplers


def _s_bf_a1(rng, cfg, t):
    n = _order(rng, cfg)
    ref = random_consistent(n, rng)
    probe = random_consistent(n, rng) if rng.random() < 0.3 else sample_inconsistent(rng, n)
    return Case({"reference": ref, "probe": probe})


def _s_bf_a2(rng, cfg, t):
    n = _order(rng, cfg)
    A = sample_any(rng, n)
    sigma = list(range(n)) if t == 0 else [int(s) for s in rng.permutation(n)]
    return Case({"original": A, "permuted": permute(A, sigma)}, {"sigma": sigma, "rel_tol": cfg.equality_rel_tol})


def _s_bf_a3(rng, cfg, t):
    n = _order(rng, cfg)
    A = sample_any(rng, n)
    k = float(rng.uniform(1.0, 4.0))
    while k == 1.0:
        k = float(rng.uniform(1.0, 4.0))
    return Case({"original": A, "intensified": intensify(A, k)}, {"k": k})


def _s_bf_a4(rng, cfg, t):
    n = _order(rng, cfg)
    A = random_consistent(n, rng)
    i, j = (int(v) for v in sorted(rng.choice(n, 2, replace=False)))
    side = float(rng.choice([-1.0, 1.0]))
    reach = math.exp(rng.uniform(math.log(1e-2), math.log(10.0)))
    offsets = np.sort(rng.uniform(0.0, reach, 6))
    base = A.entry(i, j)
    mats = {"base": A}
    for step, off in enumerate(offsets, 1):
        mats[f"step{step}"] = perturb_entry(A, i, j, base * math.exp(side * off))
    return Case(mats, {"entry": [i, j], "side": side, "log_offsets": [float(o) for o in offsets]})


EPSILONS = tuple(10.0**-p for p in range(2, 9))


def _s_bf_a5(rng, cfg, t):
    n = _order(rng, cfg)
    roll = rng.random()
    if t % 4 == 0:
        A = from_upper(n, [1.0] * upper_length(n))
    elif roll < 0.3:
        A = random_consistent(n, rng)
    else:
        A = sample_inconsistent(rng, n)
    u = rng.normal(size=upper_length(n))
    u /= np.linalg.norm(u)
    mats = {"base": A}
    for eps in EPSILONS:
        mats[f"eps={eps:.0e}"] = from_upper(n, np.array(A.upper) * np.exp(eps * u))
    return Case(mats)


def _s_transpose(rng, cfg, t):
    n = _order(rng, cfg)
    A = sample_any(rng, n)
    return Case({"original": A, "transposed": transpose(A)}, {"rel_tol": cfg.equality_rel_tol})


def _s_ku_a1(rng, cfg, t):
    n = _order(rng, cfg)
    probe = random_consistent(n, rng) if rng.random() < 0.3 else sample_inconsistent(rng, n)
    return Case({"probe": probe})


def _s_ku_a2(rng, cfg, t):
    return Case({"A": sample_inconsistent(rng, _order(rng, cfg, 3))})


def _s_ku_a3(rng, cfg, t):
    t1 = _consistent_triad(rng) if rng.random() < 0.1 else _random_triad(rng)
    t2 = _random_triad(rng, spread=float(rng.choice([LN9, math.log(1e3)])))
    if ku_deviation(t1, cfg.ku_deviation) > ku_deviation(t2, cfg.ku_deviation):
        t1, t2 = t2, t1
    return Case({"t1": t1, "t2": t2}, {"deviation": cfg.ku_deviation})


def _s_ku_a4(rng, cfg, t):
    n = _order(rng, cfg, 3)
    A = sample_any(rng, n)
    size = int(rng.integers(3, n)) if n > 3 else 2
    subset = sorted(int(s) for s in rng.choice(n, size, replace=False))
    return Case({"A": A, "sub": submatrix(A, subset)}, {"subset": subset})


def _s_ks_a1(rng, cfg, t):
    return Case({"triad": _consistent_triad(rng)})


def _s_ks_a2(rng, cfg, t):
    roll = rng.random()
    if roll < 0.2:
        tri = _consistent_triad(rng)
    elif roll < 0.6:
        tri = random_pcm(3, rng)
    else:
        tri = _random_triad(rng, spread=float(rng.choice([LN9, math.log(1e3)])))
    return Case({"triad": tri})


def _s_ks_a3(rng, cfg, t):
    if t % 2 == 0:
        base = _consistent_triad(rng)
        upper = list(base.upper)
        pos = int(rng.integers(3))
        delta = float(rng.choice([-1.0, 1.0])) * math.exp(rng.uniform(math.log(1e-2), math.log(3.0)))
        upper[pos] *= math.exp(delta)
        return Case({"consistent": base, "altered": _triad(*upper)}, {"probe": "alter", "position": pos})
    lp = rng.uniform(-LN9, LN9, 3)
    lq = rng.uniform(-LN9, LN9, 3)
    return Case(
        {"p": _triad(*np.exp(lp)), "q": _triad(*np.exp(lq)), "mid": _triad(*np.exp((lp + lq) / 2))},
        {"probe": "quasiconvex"},
    )


def _s_cs_1(rng, cfg, t):
    while True:
        a, b = np.exp(rng.uniform(0.0, math.log(100.0), 2))
        if abs(math.log(a) - math.log(b)) >= 1e-3:
            break
    a, b = sorted((float(a), float(b)))
    return Case({"smaller": _triad(1.0, a, 1.0), "larger": _triad(1.0, b, 1.0)}, {"a": a, "b": b})


def _s_cs_2(rng, cfg, t):
    tri = random_pcm(3, rng) if rng.random() < 0.5 else _random_triad(rng)
    return Case({"triad": tri, "inverted": transpose(tri)}, {"rel_tol": cfg.equality_rel_tol})


def _s_cs_3(rng, cfg, t):
    a, b = (float(v) for v in np.exp(rng.uniform(-LN9, LN9, 2)))
    return Case(
        {"left": _triad(1.0, a, b), "right": _triad(1.0, a / b, 1.0)},
        {"a": a, "b": b, "rel_tol": cfg.equality_rel_tol},
    )


def _s_cs_4(rng, cfg, t):
    a, b, c = (float(v) for v in np.exp(rng.uniform(-LN9, LN9, 3)))
    k = float(math.exp(rng.uniform(-LN9, LN9)))
    return Case(
        {"triad": _triad(a, b, c), "rescaled": _triad(k * a, k * k * b, k * c)},
        {"k": k, "rel_tol": cfg.equality_rel_tol},
    )


def _s_all_triads(rng, cfg, t):
    n = _order(rng, cfg, 3)
    A = sample_any(rng, n)
    mats = {"A": A}
    for i, j, k in _combinations3(n):
        mats[f"triad{i}{j}{k}"] = submatrix(A, (i, j, k))
    return Case(mats)


def _combinations3(n):
    import itertools

    return itertools.combinations(range(n), 3)


def _mild_intransitive(rng, n) -> Pcm:
    """Near-indifferent matrix whose preference directions are random."""
    signs = rng.choice([-1.0, 1.0], upper_length(n))
    mags = rng.uniform(0.01, 0.3, upper_length(n))
    return from_upper(n, np.exp(signs * mags))


def _strong_transitive(rng, n) -> Pcm:
    """Transitive but far from cardinal consistency: a_ij > 1 for all i < j."""
    return from_upper(n, np.exp(rng.uniform(0.05, LN9, upper_length(n)) * rng.uniform(0.2, 1.0)))


def _s_bf_a7(rng, cfg, t):
    n = _order(rng, cfg, 3)
    if t % 2 == 0:
        A, B = _mild_intransitive(rng, n), _strong_transitive(rng, n)
    else:
        A, B = sample_any(rng, n), sample_any(rng, n)
    if count_intransitive(A) < count_intransitive(B):
        A, B = B, A
    return Case({"A": A, "B": B})


SAMPLERS = {
    "bf_a1": _s_bf_a1,
    "bf_a2": _s_bf_a2,
    "bf_a3": _s_bf_a3,
    "bf_a4": _s_bf_a4,
    "bf_a5": _s_bf_a5,
    "bf6_transpose": _s_transpose,
    "ku_a1": _s_ku_a1,
    "ku_a2": _s_ku_a2,
    "ku_a3": _s_ku_a3,
    "ku_a4": _s_ku_a4,
    "ks_a1": _s_ks_a1,
    "ks_a2": _s_ks_a2,
    "ks_a3": _s_ks_a3,
    "cs_1": _s_cs_1,
    "cs_2": _s_cs_2,
    "cs_3": _s_cs_3,
    "cs_4": _s_cs_4,
    "cs_5": _s_all_triads,
    "cs_6": _s_all_triads,
    "bf_a7": _s_bf_a7,
}

# Axioms stated for triads; they need the index to be defined on 3x3 input.
TRIAD_AXIOMS = frozenset({"ks_a1", "ks_a2", "ks_a3", "ku_a3", "cs_1", "cs_2", "cs_3", "cs_4", "cs_5", "cs_6"})


# ---------------------------------------------------------------- running


def _evaluate(index: IndexHandle, case: Case) -> dict[str, float]:
    return {label: index(m) for label, m in case.matrices.items()}


def _witness(axiom, relation, tol, case, values) -> Witness:
    return Witness(axiom, relation, tol, dict(case.matrices), dict(values), dict(case.params))


def _run_sampled(index: IndexHandle, axiom: str, cfg: CheckConfig, trials: int | None = None) -> AxiomVerdict:
    rng = derived_rng(cfg.seed, index.name, axiom)
    sampler, predicate = SAMPLERS[axiom], PREDICATES[axiom]
    trials = cfg.trials if trials is None else trials
    for t in range(trials):
        case = sampler(rng, cfg, t)
        values = _evaluate(index, case)
        relation = predicate(values, case, cfg.tol)
        if relation:
            return AxiomVerdict(index.name, axiom, VerdictKind.FALSIFIED, t + 1, _witness(axiom, relation, cfg.tol, case, values))
    return AxiomVerdict(index.name, axiom, VerdictKind.NOT_FALSIFIED, trials)


def _inapplicable(index, axiom, note):
    return AxiomVerdict(index.name, axiom, VerdictKind.INAPPLICABLE, 0, note=note)


def _check_bf_a1(index, cfg):
    verdict = _run_sampled(index, "bf_a1", cfg)
    rng = derived_rng(cfg.seed, index.name, "bf_a1/omega")
    omegas = [index(random_consistent(_order(rng, cfg), rng)) for _ in range(min(cfg.trials, 200))]
    omega = omegas[0]
    spread = max(omegas) - min(omegas)
    note = (
        f"omega ~ {omega:.3g}; omega = 0: {abs(omega) <= cfg.tol}; "
        f"consistent samples agree within tol: {spread <= cfg.tol} (spread {spread:.3g})"
    )
    return AxiomVerdict(verdict.index, verdict.axiom, verdict.kind, verdict.trials_run, verdict.witness, note)


def _check_bf_a5(index, cfg):
    rng = derived_rng(cfg.seed, index.name, "bf_a5")
    probes = max(1, cfg.trials // 10)
    flagged = 0
    example = None
    for t in range(probes):
        case = _s_bf_a5(rng, cfg, t)
        values = _evaluate(index, case)
        relation = _p_bf_a5(values, case, cfg.tol)
        if relation:
            flagged += 1
            if example is None:
                example = _witness("bf_a5", relation, cfg.tol, case, values)
    if flagged:
        note = f"discontinuity evidence at {flagged} of {probes} points"
    else:
        note = f"|f(A_eps) - f(A)| shrank at all {probes} points"
    evidence = {"points": probes, "discontinuity_points": flagged, "epsilons": list(EPSILONS)}
    return AxiomVerdict(index.name, "bf_a5", VerdictKind.HEURISTIC, probes, example, note, evidence)


LADDER = tuple(10.0**p for p in range(1, 13))


def _ladder_case(index: IndexHandle, n: int) -> Case:
    mats = {f"x=1e{p}": corner_matrix(n, x) for p, x in enumerate(LADDER, 1)}
    rng_ = index.claimed_range
    return Case(mats, {"n": n, "claimed_upper": rng_.upper if math.isfinite(rng_.upper) else None, "upper_closed": rng_.upper_closed})


def check_bounded_above(index: IndexHandle, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    """Evaluate the index along corner matrices with x = 10^1 ... 10^12."""
    orders = [n for n in cfg.orders if n >= 3]
    evaluated = 0
    for n in orders:
        case = _ladder_case(index, n)
        values = _evaluate(index, case)
        evaluated += len(values)
        relation = _p_bounded(values, case, cfg.tol)
        if relation:
            return AxiomVerdict(index.name, "mz_bounded", VerdictKind.FALSIFIED, evaluated, _witness("mz_bounded", relation, cfg.tol, case, values))
    return AxiomVerdict(index.name, "mz_bounded", VerdictKind.NOT_FALSIFIED, evaluated)


def check(index: IndexHandle, axiom: str, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    """Run the checker for one axiom id (see :data:`AXIOMS`)."""
    if axiom not in AXIOMS:
        raise UnknownAxiom(axiom)
    if axiom in TRIAD_AXIOMS and index.min_order > 3:
        return _inapplicable(index, axiom, "index is not defined on 3x3 matrices")
    if axiom == "bf_a1":
        return _check_bf_a1(index, cfg)
    if axiom == "bf_a5":
        return _check_bf_a5(index, cfg)
    if axiom == "mz_bounded":
        return check_bounded_above(index, cfg)
    return _run_sampled(index, axiom, cfg)


def check_ks(index, axiom_id: int, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    return check(index, axiom_id_for("ks", axiom_id), cfg)


def check_bf(index, axiom_id: int, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    return check(index, axiom_id_for("bf", axiom_id), cfg)


def check_ku(index, axiom_id: int, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    return check(index, axiom_id_for("ku", axiom_id), cfg)


def check_cs(index, property_id: int, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    return check(index, axiom_id_for("cs", property_id), cfg)


def check_axiom7(index, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    return check(index, "bf_a7", cfg)


axiom_id_for = axiom_id


# ---------------------------------------------------------------- replay


def replay(witness: Witness, index: IndexHandle) -> str | None:
    """Re-evaluate a witness; returns the violated relation or None."""
    case = Case(dict(witness.matrices), dict(witness.params))
    values = _evaluate(index, case)
    return PREDICATES[witness.axiom](values, case, witness.tol)


def replays_exactly(witness: Witness, index: IndexHandle) -> bool:
    """True when replay reproduces both the stored values and the violation."""
    values = _evaluate(index, Case(dict(witness.matrices)))
    return values == witness.values and replay(witness, index) is not None


# ---------------------------------------------------------------- triad worsening


def search_triad_worsening(index: IndexHandle, n: int, cfg: CheckConfig = CheckConfig()) -> Witness | None:
    """Look for an entry change that worsens one triad yet lowers the index.

    Random restarts over inconsistent matrices; within a restart a hill
    climb in log-entry space adjusts the step on a_ij and the other entries
    to push f(after) - f(before) below -tol while the chosen triad's local
    inconsistency grows. Each index evaluation counts against
    ``cfg.search_budget``.
    """
    if n < 3:
        return None
    rng = derived_rng(cfg.seed, index.name, f"triad_worsening/{n}")
    budget = cfg.search_budget
    used = 0
    while used < budget:
        A = sample_inconsistent(rng, n)
        i, j = (int(v) for v in sorted(rng.choice(n, 2, replace=False)))
        k = int(rng.choice([v for v in range(n) if v not in (i, j)]))
        tri = tuple(sorted((i, j, k)))
        delta = float(rng.choice([-1.0, 1.0])) * 0.1
        best = None
        for _ in range(50):
            if used >= budget:
                break
            after = perturb_entry(A, i, j, A.entry(i, j) * math.exp(delta))
            t_before = ki_triad(_triad_of(A, *tri))
            t_after = ki_triad(_triad_of(after, *tri))
            if not t_after > t_before:
                delta = -delta
                continue
            f_before, f_after = index(A), index(after)
            used += 2
            gap = f_after - f_before
            case = Case({"before": A, "after": after}, {"triad": list(tri), "entry": [i, j], "log_step": delta})
            values = {"before": f_before, "after": f_after}
            if _p_worsening(values, case, cfg.tol):
                return _witness("triad_worsening", "a triad got worse while the whole matrix improved", cfg.tol, case, values)
            if best is None or gap < best:
                best = gap
                delta *= 1.5
            else:
                # move another entry of the starting matrix instead
                p, q = (int(v) for v in sorted(rng.choice(n, 2, replace=False)))
                if (p, q) != (i, j):
                    A = perturb_entry(A, p, q, A.entry(p, q) * math.exp(rng.normal(0.0, 0.3)))
                delta *= 0.7
    return None


# ---------------------------------------------------------------- triad generators


def check_generator_properties(gen: TriadGenerator, cfg: CheckConfig = CheckConfig()) -> AxiomVerdict:
    """Sampled checks of the conditions under which a triad aggregation is a sound index."""
    name = gen.name or "generator"
    rng = derived_rng(cfg.seed, name, "triad_generator")
    trials = min(cfg.trials, 2000)
    tol = cfg.tol

    def fail(relation, **params):
        w = Witness("triad_generator", relation, tol, {}, {}, params)
        return AxiomVerdict(name, "triad_generator", VerdictKind.FALSIFIED, trials, w, relation)

    grid = np.exp(np.linspace(math.log(1e-3), math.log(1e3), 401))
    F = [float(gen.F(float(x))) for x in grid]
    f1 = float(gen.F(1.0))
    for x, fx in zip(grid, F):
        fi = float(gen.F(1.0 / x))
        if not _close(fx, fi, tol, 1e-9):
            return fail("F(x) != F(1/x)", x=float(x), F_x=fx, F_inv=fi)
        if fx < f1 - tol:
            return fail("F(x) < F(1)", x=float(x), F_x=fx, F_1=f1)
    for _ in range(trials):
        x, y = sorted(np.exp(rng.uniform(math.log(1e-3), math.log(1e3), 2)))
        s = rng.uniform()
        z = (1 - s) * x + s * y
        fz = float(gen.F(z))
        bound = max(float(gen.F(x)), float(gen.F(y)))
        if fz > bound + tol:
            return fail("F not quasi-convex", x=float(x), y=float(y), z=float(z))
    for _ in range(trials):
        m = int(rng.integers(1, 21))
        v = rng.exponential(1.0, m)
        a = float(gen.agg(v))
        b = float(gen.agg(rng.permutation(v)))
        if not _close(a, b, tol, 1e-9):
            return fail("aggregation not symmetric", vector=[float(t) for t in v])
        w = v.copy()
        w[int(rng.integers(m))] += rng.exponential(1.0)
        if float(gen.agg(w)) < a - tol:
            return fail("aggregation not monotone", vector=[float(t) for t in v])
    return AxiomVerdict(name, "triad_generator", VerdictKind.NOT_FALSIFIED, trials)
