import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from idealcalc.core.sequences import basis_vector, dilate
from idealcalc.core.spaces import (
    WHOLE_SPACE,
    SpaceSpec,
    analytic_multiplier_space,
    concavity_modulus,
    dilation_bound,
    empirical_concavity,
    parse_space,
    registered_spaces,
    seq_norm,
    weights,
)
from idealcalc.errors import InvalidArgumentError

W3 = [1.0, 1.0 / 2.0, 1.0 / 3.0]
SPACES = registered_spaces(64)
finite = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)
pairs = st.integers(1, 10).flatmap(
    lambda n: st.tuples(arrays(np.float64, (n,), elements=finite), arrays(np.float64, (n,), elements=finite))
)
moderate = finite.filter(lambda v: v == 0 or abs(v) > 1e-100)
moderate_pairs = st.integers(1, 10).flatmap(
    lambda n: st.tuples(arrays(np.float64, (n,), elements=moderate), arrays(np.float64, (n,), elements=moderate))
)


@pytest.mark.parametrize("space, xi, expected", [
    (SpaceSpec.schatten(2), [3, 4], 5.0),
    (SpaceSpec.lorentz(W3, 1), [1, 1, 1], 11.0 / 6.0),
    (SpaceSpec.marcinkiewicz(W3, 1), [1, 1, 0], 4.0 / 3.0),
    (SpaceSpec.uniform(), [1, -3, 2], 3.0),
    (SpaceSpec.schatten(0.5), [1, 1], 4.0),
    (SpaceSpec.schatten(1), [], 0.0),
])
def test_seq_norm_examples(space, xi, expected):
    assert seq_norm(space, xi) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_unit_vector_has_norm_one(space):
    assert seq_norm(space, [1, 0, 0]) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("space, expected", [
    (SpaceSpec.schatten(0.5), 2.0),
    (SpaceSpec.schatten(2.0 / 3.0), math.sqrt(2.0)),
    (SpaceSpec.schatten(2), 1.0),
    (parse_space("lorentz:p=1:w=harmonic:n=8"), 1.0),
    (SpaceSpec.uniform(), 1.0),
])
def test_concavity_modulus(space, expected):
    assert concavity_modulus(space) == pytest.approx(expected)


@pytest.mark.parametrize("text", [
    "schatten:p=0.5",
    "schatten:p=2",
    "uniform",
    "lorentz:p=1:w=harmonic:n=64",
    "lorentz:p=2:w=power:0.5:n=32",
    "marcinkiewicz:p=2:w=harmonic:n=64",
    "marcinkiewicz:p=1:w=1,0.5,0.25",
    "lorentz:p=1:w=2,1:unnormalized",
])
def test_canonical_text_round_trips(text):
    space = parse_space(text)
    assert space.canonical() == text
    assert parse_space(space.canonical()) == space


@pytest.mark.parametrize("text", [
    "",
    "schatten",
    "schatten:p=0",
    "schatten:p=-1",
    "lorentz:p=0.5:w=harmonic:n=4",
    "lorentz:p=1",
    "lorentz:p=1:w=harmonic",
    "lorentz:p=1:w=1,2",
    "lorentz:p=1:w=2,1",
    "marcinkiewicz:p=1:w=power:1.5:n=4",
    "uniform:p=2",
    "orlicz:p=1",
    "schatten:p=abc",
])
def test_parse_space_rejects(text):
    with pytest.raises(InvalidArgumentError):
        parse_space(text)


def test_weights_families():
    assert_allclose(weights("harmonic", 3), W3)
    assert_allclose(weights("power", 4, 0.5), [1, 2 ** -0.5, 3 ** -0.5, 0.5])
    assert_allclose(weights("ones", 2), [1, 1])
    space = SpaceSpec.lorentz(W3)
    assert_allclose(space.weights.partial_sums(), [1, 1.5, 11.0 / 6.0])


def test_weighted_space_refuses_long_sequences():
    space = parse_space("lorentz:p=1:w=harmonic:n=4")
    with pytest.raises(InvalidArgumentError):
        seq_norm(space, np.ones(5))


def test_analytic_multiplier_space():
    s1, s2 = SpaceSpec.schatten(1), SpaceSpec.schatten(2)
    assert analytic_multiplier_space(s1, s2) == s2
    assert analytic_multiplier_space(s2, s2) == WHOLE_SPACE
    assert analytic_multiplier_space(s2, s1) == WHOLE_SPACE
    lorentz = parse_space("lorentz:p=1:w=harmonic:n=16")
    dual = analytic_multiplier_space(s1, lorentz)
    assert dual.kind == "marcinkiewicz" and dual.weights == lorentz.weights
    assert analytic_multiplier_space(s1, SpaceSpec.uniform()) == s1
    assert analytic_multiplier_space(lorentz, s2) is None


@seed(11)
@settings(deadline=None, max_examples=150)
@given(pair=pairs)
def test_quasi_triangle_and_rearrangement_invariance(pair):
    xi, eta = pair
    for space in SPACES:
        C = concavity_modulus(space)
        lhs = seq_norm(space, xi + eta)
        rhs = C * (seq_norm(space, xi) + seq_norm(space, eta))
        assert lhs <= rhs * (1 + 1e-12) + 1e-12
        assert seq_norm(space, -xi[::-1]) == pytest.approx(seq_norm(space, xi), rel=1e-12, abs=1e-300)


@seed(12)
@settings(deadline=None, max_examples=150)
@given(pair=moderate_pairs)
def test_monotone_solid_and_above_uniform(pair):
    xi, eta = pair
    # entries and their products stay clear of the subnormal range
    larger = np.abs(xi) + np.abs(eta)
    scale = float(np.max(np.abs(eta)))
    for space in SPACES:
        norm_xi = seq_norm(space, xi)
        assert norm_xi <= seq_norm(space, larger) * (1 + 1e-12) + 1e-300
        assert seq_norm(space, eta * xi) <= scale * norm_xi * (1 + 1e-12) + 1e-300
        assert seq_norm(SpaceSpec.uniform(), xi) <= norm_xi * (1 + 1e-12)


@pytest.mark.parametrize("space, expected", [
    (SpaceSpec.lorentz([1.0, 0.5], 2), math.sqrt(1.5)),
    (SpaceSpec.marcinkiewicz([1.0, 0.5], 2), math.sqrt(4.0 / 3.0)),
    (SpaceSpec.schatten(2), math.sqrt(2.0)),
], ids=str)
@pytest.mark.parametrize("size", [1e155, 1e-200])
def test_no_overflow_or_underflow_in_powers(space, expected, size):
    value = seq_norm(space, [size, size])
    assert value == pytest.approx(size * expected, rel=1e-12)

@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("space", SPACES, ids=str)
def test_dilation_bound(space, m, rng):
    C = concavity_modulus(space)
    n = 64 // m if space.capacity else 16
    for _ in range(20):
        xi = rng.standard_normal(n)
        assert seq_norm(space, dilate(xi, m)) <= dilation_bound(C, m) * seq_norm(space, xi) + 1e-10


def test_dilation_bound_values():
    assert dilation_bound(1.0, 1) == 1.0
    assert dilation_bound(1.0, 3) == 3.0
    assert dilation_bound(2.0, 2) == 4.0
    # the sum without the final term is too small: ||sigma_2 e_1||_1 = 2
    assert seq_norm(SpaceSpec.schatten(1), dilate(basis_vector(4, 0), 2)) == 2.0


@pytest.mark.parametrize("space", [SpaceSpec.schatten(0.5), SpaceSpec.schatten(2.0 / 3.0)], ids=str)
def test_empirical_concavity_attains_modulus(space, rng):
    assert empirical_concavity(space, 50, rng) == pytest.approx(concavity_modulus(space), rel=1e-12)


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_empirical_concavity_never_exceeds_modulus(space, rng):
    assert empirical_concavity(space, 200, rng) <= concavity_modulus(space) + 1e-12
