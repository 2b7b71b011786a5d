import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from idealcalc.core.sequences import (
    as_sequence,
    check_product_rearrangement,
    check_split_sum,
    check_sum_rearrangement,
    decreasing_rearrangement,
    dilate,
    hadamard,
    is_decreasing,
    isotonic_decreasing,
    pad_pair,
    project_decreasing,
)
from idealcalc.errors import InvalidArgumentError

MAX_LEN = 12
finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
vectors = st.integers(1, MAX_LEN).flatmap(lambda n: arrays(np.float64, (n,), elements=finite))


@pytest.mark.parametrize("xi, expected", [
    ([1, -3, 2], [3, 2, 1]),
    ([5, 4, 1], [5, 4, 1]),
    ([], []),
    ([3j, -4], [4, 3]),
])
def test_decreasing_rearrangement(xi, expected):
    assert_array_equal(decreasing_rearrangement(xi), np.asarray(expected, dtype=float))


def test_decreasing_rearrangement_matches_sort_oracle(rng):
    xi = rng.standard_normal(20)
    expected = sorted((abs(v) for v in xi), reverse=True)
    assert_array_equal(decreasing_rearrangement(xi), expected)


@seed(3)
@settings(deadline=None)
@given(xi=vectors)
def test_rearrangement_idempotent_and_decreasing(xi):
    s = decreasing_rearrangement(xi)
    assert_array_equal(decreasing_rearrangement(s), s)
    assert is_decreasing(s)


def test_non_finite_input_rejected():
    with pytest.raises(InvalidArgumentError):
        as_sequence([1.0, np.nan])


@pytest.mark.parametrize("xi, m, expected", [
    ([3, 1], 2, [3, 3, 1, 1]),
    ([2, 1, 0], 3, [2, 2, 2, 1, 1, 1, 0, 0, 0]),
    ([4, -1], 1, [4, -1]),
])
def test_dilate(xi, m, expected):
    assert_array_equal(dilate(xi, m), expected)


@pytest.mark.parametrize("m", [0, -2, 1.5])
def test_dilate_rejects_bad_factor(m):
    with pytest.raises(InvalidArgumentError):
        dilate([1.0, 2.0], m)


def test_hadamard_and_padding():
    assert_array_equal(hadamard([1, 2], [3, 4]), [3, 8])
    assert_array_equal(hadamard([1, 2, 3], [0, 0, 0]), [0, 0, 0])
    assert_array_equal(hadamard([5, 6, 7], [1]), [5, 0, 0])
    a, b = pad_pair([1], [1, 2, 3])
    assert_array_equal(a, [1, 0, 0])
    assert_array_equal(b, [1, 2, 3])


def test_sum_rearrangement_examples():
    ok, margin = check_sum_rearrangement([1, 0], [0, 1])
    assert ok
    assert margin == pytest.approx(1.0)
    ok, margin = check_sum_rearrangement([0, 0], [0, 0])
    assert ok and margin == 0.0


@seed(7)
@settings(deadline=None, max_examples=200)
@given(xi=vectors, eta=vectors)
def test_rearrangement_inequalities_hold(xi, eta):
    for check in (check_sum_rearrangement, check_product_rearrangement, check_split_sum):
        ok, margin = check(xi, eta)
        assert ok, (check.__name__, margin)


@seed(8)
@settings(deadline=None)
@given(xi=vectors, eta=vectors)
def test_rearrangement_is_monotone(xi, eta):
    xi, eta = pad_pair(xi, eta)
    larger = np.abs(xi) + np.abs(eta)
    assert np.all(decreasing_rearrangement(xi) <= decreasing_rearrangement(larger))


@seed(9)
@settings(deadline=None)
@given(xi=vectors, alpha=finite)
def test_rearrangement_is_homogeneous(xi, alpha):
    assert_array_equal(decreasing_rearrangement(alpha * xi), abs(alpha) * decreasing_rearrangement(xi))

@pytest.mark.parametrize("y, expected", [
    ([3, 2, 1], [3, 2, 1]),
    ([1, 3, 2], [2, 2, 2]),
    ([3, 1, 2], [3, 1.5, 1.5]),
    ([1, 2, 3, 0], [2, 2, 2, 0]),
])
def test_isotonic_decreasing(y, expected):
    assert_allclose(isotonic_decreasing(y), expected)


def test_project_decreasing_clips_at_zero():
    assert_array_equal(project_decreasing([-1.0, -2.0]), [0.0, 0.0])
    assert_allclose(project_decreasing([1.0, -1.0, 3.0]), [1.0, 1.0, 1.0])


@seed(5)
@settings(deadline=None)
@given(y=vectors)
def test_projection_lands_in_cone_and_is_idempotent(y):
    p = project_decreasing(y)
    assert is_decreasing(p)
    assert_allclose(project_decreasing(p), p, atol=1e-9)


@seed(9)
@settings(deadline=None)
@given(y=vectors)
def test_projection_is_nearest_point_among_shifted_candidates(y):
    p = project_decreasing(y)
    dist = np.linalg.norm(y - p)
    # any other point of the cone is at least as far away
    for candidate in (np.zeros_like(y), decreasing_rearrangement(y), p * 1.01, np.maximum(p - 0.01, 0)):
        assert dist <= np.linalg.norm(y - candidate) + 1e-9
