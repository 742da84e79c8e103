import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcmaxioms.errors import (
    IndexOutOfRange,
    LengthMismatch,
    NonPositiveEntry,
    NonSquare,
    NoConvergence,
    OrderTooSmall,
    ReciprocityViolation,
    SubsetTooSmall,
)
from pcmaxioms.pcm import (
    Pcm,
    corner_matrix,
    count_intransitive,
    from_upper,
    from_weights,
    geometric_mean_weights,
    intensify,
    is_consistent,
    is_ordinally_consistent,
    new_pcm,
    perron_roots,
    permute,
    perturb_entry,
    principal_eigen,
    random_consistent,
    random_pcm,
    submatrix,
    transpose,
    triads,
    verify_consistency_equivalences,
    SAATY_SCALE,
)

log_entry = st.floats(min_value=-math.log(9), max_value=math.log(9), allow_nan=False)


@st.composite
def pcms(draw, n_min=3, n_max=6):
    n = draw(st.integers(n_min, n_max))
    logs = draw(st.lists(log_entry, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return from_upper(n, np.exp(logs))


def test_full_matrix_is_reciprocal_by_construction():
    A = from_upper(3, (2.0, 5.0, 0.25))
    m = A.matrix
    assert np.array_equal(np.diag(m), np.ones(3))
    assert m[1, 0] == 1 / 2.0 and m[2, 0] == 1 / 5.0 and m[2, 1] == 4.0


def test_new_pcm_accepts_exact_reciprocals_and_rejects_others():
    A = new_pcm([[1, 3, 1 / 7], [1 / 3, 1, 2], [7, 0.5, 1]])
    assert A.upper == (3.0, 1 / 7, 2.0)
    with pytest.raises(ReciprocityViolation) as err:
        new_pcm([[1, 2], [0.4, 1]])
    assert (err.value.i, err.value.j) == (0, 1)
    assert err.value.deviation == pytest.approx(0.2)


@pytest.mark.parametrize(
    "bad, exc",
    [
        ([[1, 2, 3], [0.5, 1, 1]], NonSquare),
        ([[1, -2], [-0.5, 1]], NonPositiveEntry),
        ([[1, 0], [1, 1]], NonPositiveEntry),
        ([[1.0]], OrderTooSmall),
        ([[2, 1], [1, 1]], ReciprocityViolation),
    ],
)
def test_new_pcm_validation_errors(bad, exc):
    with pytest.raises(exc):
        new_pcm(bad)


def test_from_upper_validation():
    with pytest.raises(LengthMismatch):
        from_upper(3, (1.0, 2.0))
    with pytest.raises(NonPositiveEntry):
        from_upper(2, (math.inf,))
    with pytest.raises(IndexOutOfRange):
        from_upper(2, (2.0,)).entry(0, 2)


def test_saaty_scale_has_seventeen_values():
    assert len(SAATY_SCALE) == 17
    assert min(SAATY_SCALE) == 1 / 9 and max(SAATY_SCALE) == 9


def test_from_weights_is_consistent_and_recovers_weights():
    w = np.array([4.0, 2.0, 1.0, 1.0])
    A = from_weights(w)
    assert is_consistent(A)
    np.testing.assert_allclose(geometric_mean_weights(A), w / w.sum(), rtol=1e-14)


def test_corner_matrix_places_x_in_the_corner():
    A = corner_matrix(4, 1e6)
    assert A.entry(0, 3) == 1e6
    assert sum(v != 1.0 for v in A.upper) == 1


def test_random_generators_are_seeded():
    assert random_pcm(5, 7) == random_pcm(5, 7)
    assert set(random_pcm(6, 1).upper) <= set(SAATY_SCALE)
    assert is_consistent(random_consistent(6, 3))


def test_perturb_entry_lower_triangle_inverts_value():
    A = from_upper(3, (1.0, 1.0, 1.0))
    assert perturb_entry(A, 2, 0, 4.0).entry(0, 2) == 0.25
    with pytest.raises(ValueError):
        perturb_entry(A, 1, 1, 2.0)


def test_intensify_transpose_permute_submatrix():
    A = from_upper(3, (2.0, 5.0, 0.25))
    assert intensify(A, 2).upper == (4.0, 25.0, 0.0625)
    assert transpose(A).matrix.tolist() == A.matrix.T.tolist()
    B = permute(A, [2, 0, 1])
    assert B.entry(0, 1) == A.entry(2, 0)
    assert submatrix(A, [0, 2]).upper == (5.0,)
    with pytest.raises(SubsetTooSmall):
        submatrix(A, [1])


def test_triads_use_zero_based_indices():
    A = from_upper(4, range(1, 7))
    keys = [k for k, _ in triads(A)]
    assert keys[0] == (0, 1, 2) and len(keys) == 4


def test_ordinal_consistency():
    transitive = from_upper(3, (2.0, 3.0, 2.0))
    cycle = from_upper(3, (2.0, 0.5, 2.0))
    assert count_intransitive(transitive) == 0 and is_ordinally_consistent(transitive)
    assert count_intransitive(cycle) == 1 and not is_ordinally_consistent(cycle)


def test_eigen_three_by_three_closed_form():
    # For n = 3 the characteristic polynomial gives lambda = 1 + r^(1/3) + r^(-1/3), r = a12 a23 / a13.
    a, b, c = 2.0, 9.0, 1 / 3
    r = a * c / b
    lam = principal_eigen(from_upper(3, (a, b, c))).lambda_max
    assert lam == pytest.approx(1 + r ** (1 / 3) + r ** (-1 / 3), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(pcms())
def test_eigen_matches_lapack(A):
    ref = max(np.linalg.eigvals(A.matrix).real)
    res = principal_eigen(A)
    assert res.lambda_max == pytest.approx(ref, rel=1e-12)
    assert np.all(res.vector > 0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("x", [1e3, 1e8, 1e12])
def test_eigen_converges_on_corner_matrices(n, x):
    A = corner_matrix(n, x)
    ref = max(np.linalg.eigvals(A.matrix).real)
    assert principal_eigen(A).lambda_max == pytest.approx(ref, rel=1e-10)


def test_eigen_reports_no_convergence():
    with pytest.raises(NoConvergence):
        principal_eigen(random_pcm(5, 1), tol=1e-300, max_iter=3)


def test_perron_roots_batch_matches_single():
    mats = [random_pcm(4, s) for s in range(20)]
    stack = np.stack([m.matrix for m in mats])
    single = [principal_eigen(m).lambda_max for m in mats]
    np.testing.assert_allclose(perron_roots(stack), single, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 2**31))
def test_consistency_equivalences_holds_for_consistent(n, seed):
    r = verify_consistency_equivalences(random_consistent(n, seed))
    assert r.coherent and all(r.flags)


def test_consistency_equivalences_all_false_for_inconsistent():
    r = verify_consistency_equivalences(from_upper(3, (2.0, 0.5, 2.0)))
    assert r.coherent and not any(r.flags)
    assert r.rank >= 2


@settings(max_examples=40, deadline=None)
@given(pcms(), st.randoms(use_true_random=False))
def test_lambda_invariant_under_permutation_and_transpose(A, rnd):
    sigma = list(range(A.n))
    rnd.shuffle(sigma)
    lam = principal_eigen(A).lambda_max
    assert principal_eigen(permute(A, sigma)).lambda_max == pytest.approx(lam, rel=1e-12)
    assert principal_eigen(transpose(A)).lambda_max == pytest.approx(lam, rel=1e-12)


def test_pcm_dict_round_trip():
    A = random_pcm(5, 3)
    assert Pcm.from_dict(A.to_dict()) == A


def test_eigen_on_ill_conditioned_matrix_stops_at_rounding_floor():
    # Entries span 1e-8..6e9 and the spectral gap is about 2e-6 of lambda.
    upper = (
        371.51398442874756, 50.62629261082971, 3.9531603667347336e-05, 1393719.281841946,
        6333625.775974026, 0.010918389827842576, 0.004898887224982394, 4386784.849647182,
        0.4043589223567271, 5794674655.891379, 292095.89071010076, 3.077196102219534e-08,
        1617518.6219050735, 0.002009674869247421, 2.8172669835251426e-07,
    )
    A = from_upper(6, upper)
    res = principal_eigen(A)
    ref = max(np.linalg.eigvals(A.matrix).real)
    assert res.lambda_max == pytest.approx(ref, rel=1e-9)
    assert res.residual <= 1e-6 * res.lambda_max
