import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from idealcalc.core.derivations import (
    DerivationSpec,
    apply,
    check_linearity,
    gauge_generator,
    is_star_derivation,
    norm_estimate,
    recover_generator,
    split_star,
    zsido_bound,
)
from idealcalc.core.ensembles import make_rng, random_matrix
from idealcalc.core.operators import identity, matrix_unit, operator_norm, rounding_slack
from idealcalc.core.search import SearchBudget
from idealcalc.core.spaces import SpaceSpec
from idealcalc.errors import InvalidArgumentError, NotLinearError

from .oracles import grid_derivation_2x2, random_complex

S = SpaceSpec.schatten
SANDWICH_PAIRS = [(S(2), S(1)), (S(1), S(0.5)), (S(2), S(2))]


def test_apply_examples(rng):
    x = random_complex(rng, 3)
    assert_array_equal(apply(DerivationSpec(identity(3)), x), np.zeros((3, 3)))
    e12 = matrix_unit(2, 0, 1)
    assert_allclose(apply(DerivationSpec(np.diag([1.0, 0.0])), e12), e12)


def test_leibniz_rule(rng):
    d = DerivationSpec(random_complex(rng, 5))
    x, y = random_complex(rng, 5), random_complex(rng, 5)
    defect = d(x @ y) - d(x) @ y - x @ d(y)
    assert np.linalg.norm(defect) <= 1e-10 * max(1.0, np.linalg.norm(x @ y))


def test_apply_shape_mismatch():
    with pytest.raises(InvalidArgumentError):
        apply(DerivationSpec(identity(2)), identity(3))


def test_split_star(rng):
    h = random_complex(rng, 4)
    hermitian = h + h.conj().T
    re_part, _ = split_star(DerivationSpec(hermitian))
    assert_allclose(re_part.generator, np.zeros((4, 4)), atol=1e-15)
    _, im_part = split_star(DerivationSpec(h - h.conj().T))
    assert_allclose(im_part.generator, np.zeros((4, 4)), atol=1e-15)

    d = DerivationSpec(random_complex(rng, 4))
    re_part, im_part = split_star(d)
    x = random_complex(rng, 4)
    assert_allclose(re_part(x) + 1j * im_part(x), d(x), atol=1e-10)
    assert is_star_derivation(re_part, x)
    assert is_star_derivation(im_part, x)
    assert not is_star_derivation(d, x)


def test_gauge_generator_kills_phi0_diagonal(rng):
    a = random_complex(rng, 4)
    a_hat = gauge_generator(a)
    assert a_hat[0, 0] == 0
    assert_allclose(a - a_hat, a[0, 0] * identity(4))
    phi = np.ones(4) / 2.0
    assert abs(np.vdot(phi, gauge_generator(a, phi) @ phi)) <= 1e-12
    with pytest.raises(InvalidArgumentError):
        gauge_generator(a, np.ones(4))


# -- norm estimation -----------------------------------------------------------


def test_scalar_generator_has_norm_zero():
    report = norm_estimate(DerivationSpec(2.5j * identity(3)), S(2), S(1))
    assert report.estimate.value == 0.0
    assert report.estimate.method == "central-generator"
    assert_array_equal(report.gauge_generator, np.zeros((3, 3)))
    assert report.passed


def test_hilbert_schmidt_example_is_one(small_budget):
    report = norm_estimate(DerivationSpec(np.diag([1.0, 0.0])), S(2), S(2), small_budget)
    assert report.estimate.value == pytest.approx(1.0, abs=1e-9)
    assert report.op_norm_gauge == pytest.approx(1.0)


def test_trace_class_example_matches_grid():
    a = np.diag([1.0, 0.0])
    grid = grid_derivation_2x2(a, S(2), S(1))
    assert grid == pytest.approx(math.sqrt(2), rel=1e-9)
    report = norm_estimate(DerivationSpec(a), S(2), S(1), SearchBudget(restarts=12, ascent_steps=300, seed=3))
    assert abs(report.estimate.value - grid) <= 0.02 * grid
    assert report.estimate.value <= math.sqrt(2) * (1 + 1e-9)


@pytest.mark.parametrize("I, J", SANDWICH_PAIRS, ids=str)
def test_derivation_sandwich(I, J, small_budget):
    for t in range(6):
        rng = make_rng(17, t)
        a = random_matrix(rng, 3, "diagonal" if t % 2 == 0 else "gaussian")
        report = norm_estimate(DerivationSpec(a), I, J, small_budget)
        value = report.estimate.value
        assert report.op_norm_gauge - 1e-8 <= value
        assert report.upper_status == "exact-analytic"
        assert value <= report.upper_bound * (1 + rounding_slack(J, 3)) + 1e-8
        assert report.passed


@pytest.mark.parametrize("I, J", SANDWICH_PAIRS, ids=str)
def test_estimate_ignores_scalar_shift(I, J, small_budget):
    for t in range(4):
        rng = make_rng(19, t)
        # dyadic entries keep every shift and the gauge subtraction exact
        a = np.round(random_matrix(rng, 3, "diagonal" if t % 2 == 0 else "gaussian") * 64.0) / 64.0
        lam = complex(rng.integers(-8, 9), rng.integers(-8, 9)) / 4.0
        base = norm_estimate(DerivationSpec(a), I, J, small_budget)
        shifted = norm_estimate(DerivationSpec(a + lam * identity(3)), I, J, small_budget)
        assert_array_equal(shifted.gauge_generator, base.gauge_generator)
        assert shifted.estimate.value == base.estimate.value
        assert shifted.estimate.metadata == base.estimate.metadata


def test_report_record_layout(small_budget, rng):
    report = norm_estimate(DerivationSpec(random_matrix(rng, 3)), S(2), S(1), small_budget)
    record = report.to_record()
    assert set(record) == {
        "space_I", "space_J", "n", "seed", "estimate", "op_norm_gauge",
        "upper_bound", "upper_status", "margins", "pass",
    }
    assert record["space_I"] == "schatten:p=2" and record["space_J"] == "schatten:p=1"
    assert record["margins"]["lower"] >= -1e-8
    assert record["n"] == 3


@pytest.mark.parametrize("E", [S(1), S(2), S(0.5), SpaceSpec.uniform()], ids=str)
def test_zsido_bound(E, small_budget):
    for t in range(4):
        d = DerivationSpec(random_matrix(make_rng(23, t), 4))
        bound = zsido_bound(d, E)
        assert norm_estimate(d, E, E, small_budget).estimate.value <= bound * (1 + rounding_slack(E, 4)) + 1e-8
    assert zsido_bound(DerivationSpec(np.diag([1.0, 0.0])), S(0.5)) == pytest.approx(4.0)


# -- generator recovery --------------------------------------------------------


def test_recover_diagonal_example():
    recovered = recover_generator(DerivationSpec(np.diag([1.0, 2.0])), 2)
    assert_allclose(recovered.generator, np.diag([0.0, 1.0]), atol=1e-15)
    assert recovered.residual <= 1e-12


def test_recover_zero_map():
    recovered = recover_generator(lambda x: np.zeros_like(x), 3)
    assert_array_equal(recovered.generator, np.zeros((3, 3)))
    assert recovered.residual == 0.0


def test_recover_random_generators():
    for t in range(10):
        a = random_matrix(make_rng(31, t), 8)
        recovered = recover_generator(DerivationSpec(a), 8, seed=t)
        scale = max(1.0, operator_norm(a))
        assert np.max(np.abs(recovered.generator + a[0, 0] * identity(8) - a)) <= 1e-9 * scale
        assert recovered.residual <= 1e-9 * scale
        assert recovered.samples == 50

        shift = complex(*make_rng(37, t).standard_normal(2))
        shifted = recover_generator(DerivationSpec(a + shift * identity(8)), 8, seed=t)
        assert_allclose(shifted.generator, recovered.generator, rtol=0, atol=1e-12 * max(scale, abs(shift)))


def test_recover_with_other_reference_vector(rng):
    a = random_complex(rng, 4)
    phi = np.array([0.0, 0.6, 0.8j, 0.0])
    recovered = recover_generator(DerivationSpec(a), 4, phi0=phi)
    assert_allclose(recovered.generator, gauge_generator(a, phi), atol=1e-12)


def test_nonlinear_map_rejected(rng):
    a = random_complex(rng, 3)
    with pytest.raises(NotLinearError) as info:
        recover_generator(lambda x: apply(DerivationSpec(a), x) + x * np.conj(x), 3)
    assert info.value.residual > 1e-8
    assert check_linearity(DerivationSpec(a), 3) <= 1e-12


def test_non_derivation_leaves_residual():
    # linear but not a derivation: the transpose
    recovered = recover_generator(lambda x: x.T, 3)
    assert recovered.residual > 1e-3
