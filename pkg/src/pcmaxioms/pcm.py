"""Pairwise comparison matrices, triads and the eigen machinery built on them.

A :class:`Pcm` keeps only its strict upper triangle. The lower triangle is
always derived as ``1 / a_ij``, so reciprocity cannot drift no matter what
arithmetic is applied to a matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    LengthMismatch,
    NoConvergence,
    NonPositiveEntry,
    NonSquare,
    OrderTooSmall,
    ReciprocityViolation,
    SubsetTooSmall,
)

SAATY_SCALE = tuple([1.0 / v for v in range(9, 1, -1)] + [float(v) for v in range(1, 10)])

DEFAULT_CONSISTENCY_TOL = 1e-9
DEFAULT_EIGEN_TOL = 1e-12
DEFAULT_EIGEN_MAX_ITER = 10_000


def upper_length(n: int) -> int:
    return n * (n - 1) // 2


def _check_entries(values) -> None:
    for v in values:
        if not (math.isfinite(v) and v > 0):
            raise NonPositiveEntry(f"entries must be finite and positive, got {v!r}")


@lru_cache(maxsize=None)
def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major (i, j), i < j, index arrays for the strict upper triangle."""
    rows, cols = np.triu_indices(n, k=1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


@lru_cache(maxsize=None)
def triad_indices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index arrays (I, J, K) of all i < j < k in lexicographic order."""
    combos = np.array(list(itertools.combinations(range(n), 3)), dtype=int).reshape(-1, 3)
    out = tuple(np.ascontiguousarray(combos[:, c]) for c in range(3))
    for arr in out:
        arr.setflags(write=False)
    return out


@dataclass(frozen=True)
class Pcm:
    """Positive reciprocal matrix of order ``n`` stored as its upper triangle.

    ``upper`` lists a_ij for i < j in row-major order:
    (0,1), (0,2), ..., (0,n-1), (1,2), ...
    """

    n: int
    upper: tuple[float, ...]

    def __post_init__(self):
        if self.n < 2:
            raise OrderTooSmall(f"a PCM needs order >= 2, got {self.n}")
        upper = tuple(float(v) for v in self.upper)
        if len(upper) != upper_length(self.n):
            raise LengthMismatch(
                f"order {self.n} needs {upper_length(self.n)} upper entries, got {len(upper)}"
            )
        _check_entries(upper)
        object.__setattr__(self, "upper", upper)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Full read-only matrix; the lower triangle is recomputed as 1/a_ij."""
        m = np.ones((self.n, self.n))
        rows, cols = pair_indices(self.n)
        vals = np.array(self.upper)
        m[rows, cols] = vals
        m[cols, rows] = 1.0 / vals
        m.setflags(write=False)
        return m

    @cached_property
    def log_matrix(self) -> np.ndarray:
        m = np.log(self.matrix)
        m.setflags(write=False)
        return m

    def entry(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return float(self.matrix[i, j])

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"index {i} outside 0..{self.n - 1}")

    def to_dict(self) -> dict:
        return {"n": self.n, "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, doc: dict) -> "Pcm":
        return from_upper(int(doc["n"]), doc["upper"])


@dataclass(frozen=True)
class Triad:
    """The values (a_ij, a_ik, a_jk) of one i < j < k pattern.

    Consistent when ``t12 * t23 == t13``.
    """

    t12: float
    t13: float
    t23: float

    def __post_init__(self):
        _check_entries((self.t12, self.t13, self.t23))

    @property
    def ratio(self) -> float:
        """t12 * t23 / t13; equals 1 exactly for a consistent triad."""
        return self.t12 * self.t23 / self.t13

    def as_pcm(self) -> Pcm:
        return Pcm(3, (self.t12, self.t13, self.t23))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t12, self.t13, self.t23)


@dataclass(frozen=True)
class EigenResult:
    lambda_max: float
    vector: np.ndarray
    iterations: int
    residual: float


# ---------------------------------------------------------------- construction


def new_pcm(full_matrix, tol: float = 1e-12) -> Pcm:
    """Validate a full square matrix and keep its upper triangle.

    A pair is accepted when ``a_ji`` is bit-equal to ``1 / a_ij`` or when
    ``|a_ij * a_ji - 1| <= tol``; with ``tol=0`` only the first form passes.
    Indices in :class:`ReciprocityViolation` are 0-based.
    """
    m = np.asarray(full_matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n < 2:
        raise OrderTooSmall(f"a PCM needs order >= 2, got {n}")
    if not np.all(np.isfinite(m)) or np.any(m <= 0):
        raise NonPositiveEntry("all entries must be finite and positive")
    for i in range(n):
        dev = abs(m[i, i] - 1.0)
        if dev > tol:
            raise ReciprocityViolation(i, i, dev)
    rows, cols = pair_indices(n)
    for i, j in zip(rows, cols):
        a, b = m[i, j], m[j, i]
        if b == 1.0 / a:
            continue
        dev = abs(a * b - 1.0)
        if dev > tol:
            raise ReciprocityViolation(int(i), int(j), float(dev))
    return Pcm(n, tuple(m[rows, cols]))


def from_upper(n: int, upper: Sequence[float]) -> Pcm:
    return Pcm(int(n), tuple(upper))


def from_weights(w) -> Pcm:
    """Consistent matrix with a_ij = w_i / w_j."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise OrderTooSmall("a weight vector needs at least two entries")
    _check_entries(w)
    w = w / w.sum()
    rows, cols = pair_indices(w.size)
    return Pcm(w.size, tuple(w[rows] / w[cols]))


def corner_matrix(n: int, x: float) -> Pcm:
    """All-ones matrix except a_1n = x (and a_n1 = 1/x)."""
    if n < 3:
        raise OrderTooSmall("corner matrices need n >= 3")
    upper = [1.0] * upper_length(n)
    upper[n - 2] = float(x)  # position of (0, n-1) in row-major order
    return Pcm(n, tuple(upper))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pcm(n: int, seed=None) -> Pcm:
    """Upper entries drawn uniformly from the 17-value Saaty scale."""
    rng = _as_rng(seed)
    picks = rng.integers(0, len(SAATY_SCALE), size=upper_length(n))
    return Pcm(n, tuple(SAATY_SCALE[p] for p in picks))


def random_consistent(n: int, seed=None) -> Pcm:
    rng = _as_rng(seed)
    logw = rng.uniform(-math.log(9.0), math.log(9.0), size=n)
    return from_weights(np.exp(logw))


# ---------------------------------------------------------------- transforms


def perturb_entry(A: Pcm, i: int, j: int, value: float) -> Pcm:
    """Copy of ``A`` with a_ij = value and a_ji = 1/value."""
    A._check_index(i)
    A._check_index(j)
    if i == j:
        raise IndexOutOfRange("diagonal entries cannot be perturbed")
    _check_entries((value,))
    if i > j:
        i, j, value = j, i, 1.0 / value
    pos = i * A.n - i * (i + 1) // 2 + (j - i - 1)
    upper = list(A.upper)
    upper[pos] = float(value)
    return Pcm(A.n, tuple(upper))


def intensify(A: Pcm, k: float) -> Pcm:
    return Pcm(A.n, tuple(np.power(np.array(A.upper), k)))


def transpose(A: Pcm) -> Pcm:
    return Pcm(A.n, tuple(1.0 / np.array(A.upper)))


def permute(A: Pcm, sigma: Sequence[int]) -> Pcm:
    """P^T A P, i.e. b_ij = a_{sigma(i) sigma(j)} (0-based sigma)."""
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(A.n)):
        raise IndexOutOfRange(f"{sigma} is not a permutation of 0..{A.n - 1}")
    rows, cols = pair_indices(A.n)
    s = np.array(sigma)
    return Pcm(A.n, tuple(A.matrix[s[rows], s[cols]]))


def submatrix(A: Pcm, subset: Sequence[int]) -> Pcm:
    subset = [int(s) for s in subset]
    if len(subset) < 2:
        raise SubsetTooSmall("a submatrix needs at least two alternatives")
    if len(set(subset)) != len(subset):
        raise IndexOutOfRange(f"repeated alternatives in {subset}")
    for s in subset:
        A._check_index(s)
    k = len(subset)
    rows, cols = pair_indices(k)
    s = np.array(subset)
    return Pcm(k, tuple(A.matrix[s[rows], s[cols]]))


# ---------------------------------------------------------------- predicates


def triad_ratios(A: Pcm) -> np.ndarray:
    """a_ij * a_jk / a_ik for every i < j < k (empty for n = 2)."""
    I, J, K = triad_indices(A.n)
    m = A.matrix
    return m[I, J] * m[J, K] / m[I, K]


def is_consistent(A: Pcm, tol: float = DEFAULT_CONSISTENCY_TOL) -> bool:
    if A.n == 2:
        return True
    return bool(np.all(np.abs(triad_ratios(A) - 1.0) <= tol))


def triads(A: Pcm) -> list[tuple[tuple[int, int, int], Triad]]:
    if A.n < 3:
        raise OrderTooSmall("triads need n >= 3")
    m = A.matrix
    return [
        ((i, j, k), Triad(float(m[i, j]), float(m[i, k]), float(m[j, k])))
        for i, j, k in itertools.combinations(range(A.n), 3)
    ]


_LABELINGS = list(itertools.permutations(range(3)))


def count_intransitive(A: Pcm) -> int:
    """Number of unordered triples {i, j, k} that break ordinal transitivity.

    A triple is intransitive if some labeling (p, q, r) of it has
    a_pq > 1 and a_qr > 1 but a_pr <= 1. Ties (entries equal to 1) are
    not strict preferences.
    """
    if A.n < 3:
        return 0
    m = A.matrix
    idx = triad_indices(A.n)
    bad = np.zeros(idx[0].size, dtype=bool)
    for p, q, r in _LABELINGS:
        P, Q, R = idx[p], idx[q], idx[r]
        bad |= (m[P, Q] > 1.0) & (m[Q, R] > 1.0) & (m[P, R] <= 1.0)
    return int(bad.sum())


def is_ordinally_consistent(A: Pcm) -> bool:
    return count_intransitive(A) == 0


# ---------------------------------------------------------------- weights & eigen


def principal_eigen(
    A: Pcm, tol: float = DEFAULT_EIGEN_TOL, max_iter: int = DEFAULT_EIGEN_MAX_ITER
) -> EigenResult:
    """Perron eigenpair by power iteration started from the uniform vector.

    Strongly inconsistent matrices have subdominant eigenvalues of nearly the
    same modulus as the Perron root, so the iterate is advanced with powers
    A^(2^k) obtained by repeated squaring: step k holds A^(2^k - 1) v0. All
    products involve positive numbers only, so squaring adds no cancellation.

    Iteration stops once two successive Rayleigh quotients differ by at most
    ``tol`` and the residual max|A v - lambda v| is at most ``10 * tol``.
    Both thresholds are taken relative to ``max(1, lambda)`` so that matrices
    with huge entries converge to the same number of significant digits.
    When the eigenvector is too ill-conditioned for that residual (entries
    spanning many decades with a tiny spectral gap), iteration also stops
    once lambda has settled, the residual has stopped improving and it is
    below ``sqrt(tol)``; the reached residual is reported.
    The returned vector sums to one.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be > 0 and max_iter >= 1")
    m = A.matrix
    power = m / m.max()
    v = np.full(A.n, 1.0 / A.n)
    lam_prev = math.nan
    resid = resid_prev = math.inf
    for it in range(1, max_iter + 1):
        y = m @ v
        lam = float(v @ y) / float(v @ v)
        resid = float(np.max(np.abs(y - lam * v)))
        scale = max(1.0, lam)
        if abs(lam - lam_prev) <= tol * scale:
            if resid <= 10 * tol * scale:
                return EigenResult(lam, v, it, resid)
            if resid >= 0.5 * resid_prev and resid <= math.sqrt(tol) * scale:
                return EigenResult(lam, v, it, resid)
        lam_prev = lam
        resid_prev = resid
        v = power @ v
        v /= v.sum()
        power = power @ power
        power /= power.max()
    raise NoConvergence(max_iter, resid)


def perron_roots(stack: np.ndarray, tol: float = DEFAULT_EIGEN_TOL, max_iter: int = 200) -> np.ndarray:
    """Batched :func:`principal_eigen` eigenvalues for a (M, n, n) stack.

    Same iteration and stopping rule, applied to every matrix at once; used
    for Monte Carlo work where per-matrix Python overhead dominates.
    """
    m = np.asarray(stack, dtype=float)
    count, n, _ = m.shape
    power = m / m.max(axis=(1, 2), keepdims=True)
    v = np.full((count, n), 1.0 / n)
    lam_prev = np.full(count, np.nan)
    lam = np.empty(count)
    done = np.zeros(count, dtype=bool)
    resid_prev = np.full(count, np.inf)
    for _ in range(max_iter):
        y = np.einsum("mij,mj->mi", m, v)
        cur = np.einsum("mi,mi->m", v, y) / np.einsum("mi,mi->m", v, v)
        resid = np.max(np.abs(y - cur[:, None] * v), axis=1)
        scale = np.maximum(1.0, cur)
        stalled = (resid >= 0.5 * resid_prev) & (resid <= math.sqrt(tol) * scale)
        ok = (np.abs(cur - lam_prev) <= tol * scale) & ((resid <= 10 * tol * scale) | stalled)
        newly = ok & ~done
        lam[newly] = cur[newly]
        done |= ok
        if done.all():
            return lam
        lam_prev = cur
        resid_prev = resid
        v = np.einsum("mij,mj->mi", power, v)
        v /= v.sum(axis=1, keepdims=True)
        power = power @ power
        power /= power.max(axis=(1, 2), keepdims=True)
    raise NoConvergence(max_iter, float(np.max(resid[~done])))


def geometric_mean_weights(A: Pcm) -> np.ndarray:
    """Row geometric means, normalized to sum to one."""
    w = np.exp(A.log_matrix.mean(axis=1))
    return w / w.sum()


def numerical_rank(matrix, threshold: float) -> int:
    """Rank by Gaussian elimination with complete pivoting.

    Elimination stops once the largest remaining pivot candidate falls
    to ``threshold`` or below.
    """
    a = np.array(matrix, dtype=float)
    rows, cols = a.shape
    rank = 0
    for step in range(min(rows, cols)):
        sub = np.abs(a[step:, step:])
        p, q = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[p, q] <= threshold:
            break
        p += step
        q += step
        a[[step, p], :] = a[[p, step], :]
        a[:, [step, q]] = a[:, [q, step]]
        factors = a[step + 1 :, step] / a[step, step]
        a[step + 1 :, step:] -= np.outer(factors, a[step, step:])
        rank += 1
    return rank


@dataclass(frozen=True)
class ConsistencyEquivalences:
    consistent: bool
    lambda_is_n: bool
    rank_is_one: bool
    ratio_representable: bool
    lambda_max: float
    rank: int
    max_ratio_deviation: float

    @property
    def flags(self) -> tuple[bool, bool, bool, bool]:
        return (self.consistent, self.lambda_is_n, self.rank_is_one, self.ratio_representable)

    @property
    def coherent(self) -> bool:
        return len(set(self.flags)) == 1


def verify_consistency_equivalences(A: Pcm, tol: float = 1e-6) -> ConsistencyEquivalences:
    """Evaluate the four equivalent characterizations of consistency separately.

    Each condition uses its own routine: a triad scan, the Perron eigenvalue,
    a pivoted elimination rank with threshold ``tol * ||A||_F``, and the
    ratio fit ``a_ij * w_j / w_i`` against geometric-mean weights.
    """
    eig = principal_eigen(A)
    m = A.matrix
    rank = numerical_rank(m, tol * float(np.linalg.norm(m)))
    w = geometric_mean_weights(A)
    dev = float(np.max(np.abs(m * w[None, :] / w[:, None] - 1.0)))
    return ConsistencyEquivalences(
        consistent=is_consistent(A, tol),
        lambda_is_n=abs(eig.lambda_max - A.n) <= tol,
        rank_is_one=rank == 1,
        ratio_representable=dev <= tol,
        lambda_max=eig.lambda_max,
        rank=rank,
        max_ratio_deviation=dev,
    )


verify_prop1 = verify_consistency_equivalences
