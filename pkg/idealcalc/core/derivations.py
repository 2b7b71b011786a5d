"""The derivation engine.

Inner derivations delta_a(x) = [a, x] between ideals I -> J: application,
*-splitting, norm estimation with the sandwich

    ||a_hat||_op <= ||delta_a||_{I -> J} <= 2 C_J ||a||_{J:I},

and recovery of a generator from a black-box derivation through the rank-one
projection onto span(phi0). The gauge generator a_hat = a - (a phi0, phi0) 1
is the representative the recovery returns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..config import LINEARITY_SAMPLES, LINEARITY_TOL, RECOVERY_SAMPLES, SANDWICH_TOL, SLACK_TOL
from ..errors import InvalidArgumentError, NotLinearError
from .ensembles import ginibre, make_rng
from .multipliers import NormEstimate, multiplier_norm_op
from .operators import (
    Matrix,
    adjoint,
    as_matrix,
    commutator,
    frobenius_norm,
    ideal_norm,
    identity,
    operator_norm,
    rank_one,
    rounding_slack,
    svd,
)
from .search import SearchBudget, matrix_search
from .spaces import SpaceSpec, concavity_modulus

logger = logging.getLogger(__name__)

LinearMap = Callable[[Matrix], Matrix]


@dataclass(frozen=True)
class DerivationSpec:
    """delta_a for a fixed square generator a."""

    generator: Matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "generator", as_matrix(self.generator))

    @property
    def n(self) -> int:
        return int(self.generator.shape[0])

    def __call__(self, x: Matrix) -> Matrix:
        return apply(self, x)


def _unit_vector(n: int, phi0: Optional[np.ndarray]) -> np.ndarray:
    if phi0 is None:
        e = np.zeros(n, dtype=np.complex128)
        e[0] = 1.0
        return e
    v = np.asarray(phi0, dtype=np.complex128).reshape(-1)
    if v.size != n:
        raise InvalidArgumentError(f"phi0 has length {v.size}, expected {n}")
    norm = float(np.linalg.norm(v))
    if not np.isclose(norm, 1.0, rtol=0.0, atol=1e-12):
        raise InvalidArgumentError(f"phi0 must be a unit vector, got norm {norm}")
    return v


def apply(d: DerivationSpec, x: Matrix) -> Matrix:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != d.generator.shape:
        raise InvalidArgumentError(f"derivation of size {d.n} applied to matrix of shape {x.shape}")
    return commutator(d.generator, x)


def split_star(d: DerivationSpec) -> Tuple[DerivationSpec, DerivationSpec]:
    """Generators of *-derivations with delta_a = delta_Re + i delta_Im.

    a_Re = (a - a*)/2 and a_Im = (a + a*)/(2i); both are skew-Hermitian, so
    delta(x*) = delta(x)* for each part.
    """
    a = d.generator
    a_star = adjoint(a)
    return DerivationSpec((a - a_star) / 2.0), DerivationSpec((a + a_star) / 2j)


def gauge_generator(a: Matrix, phi0: Optional[np.ndarray] = None) -> Matrix:
    """a_hat = a - (a phi0, phi0) 1, so that (a_hat phi0, phi0) = 0."""
    a = as_matrix(a)
    phi = _unit_vector(a.shape[0], phi0)
    return a - np.vdot(phi, a @ phi) * identity(a.shape[0])


@dataclass
class DerivationNormReport:
    estimate: NormEstimate
    gauge_generator: Matrix
    op_norm_gauge: float
    upper_bound: Optional[float]
    upper_status: Optional[str]
    space_i: SpaceSpec
    space_j: SpaceSpec
    seed: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.gauge_generator.shape[0])

    @property
    def lower_margin(self) -> float:
        return float(self.estimate.value - self.op_norm_gauge)

    @property
    def upper_margin(self) -> Optional[float]:
        if self.upper_bound is None:
            return None
        return float(self.upper_bound - self.estimate.value)

    @property
    def passed(self) -> bool:
        lower_slack = SANDWICH_TOL + rounding_slack(self.space_i, self.n)
        ok = self.lower_margin >= -lower_slack * max(1.0, self.estimate.value)
        if self.upper_status == "exact-analytic" and self.upper_bound is not None:
            slack = SANDWICH_TOL + rounding_slack(self.space_j, self.n)
            ok = ok and self.upper_margin >= -slack * max(1.0, self.upper_bound)
        return bool(ok)

    def to_record(self) -> Dict[str, Any]:
        return {
            "space_I": self.space_i.canonical(),
            "space_J": self.space_j.canonical(),
            "n": self.n,
            "seed": self.seed,
            "estimate": self.estimate.to_record(),
            "op_norm_gauge": self.op_norm_gauge,
            "upper_bound": self.upper_bound,
            "upper_status": self.upper_status,
            "margins": {"lower": self.lower_margin, "upper": self.upper_margin},
            "pass": self.passed,
        }


def norm_estimate(
    d: DerivationSpec,
    I: SpaceSpec,
    J: SpaceSpec,
    budget: Optional[SearchBudget] = None,
    phi0: Optional[np.ndarray] = None,
) -> DerivationNormReport:
    """Estimate ||delta_a||_{I -> J} = sup{ ||[a, x]||_J : ||x||_I <= 1 }."""
    budget = budget or SearchBudget()
    a = d.generator
    n = d.n
    phi = _unit_vector(n, phi0)
    a_hat = gauge_generator(a, phi)
    _, s_hat, vh_hat = svd(a_hat)
    op_gauge = float(s_hat[0])

    multiplier = multiplier_norm_op(J, I, a, budget)
    C = concavity_modulus(J)
    upper = 2.0 * C * multiplier.value
    metadata: Dict[str, Any] = {"multiplier": multiplier.to_record(), "concavity_modulus": C}

    # x = v (x) phi0* sends phi0 to the top right singular vector v of a_hat;
    # [a_hat, x] phi0 = a_hat v, whence ||[a, x]||_J >= ||a_hat||_op.
    top = np.conj(vh_hat[0])
    gauge_witness = rank_one(top, phi)

    if op_gauge == 0.0:
        estimate = NormEstimate(0.0, gauge_witness, "exact-analytic", "central-generator", 0,
                                {"origin": "witness:gauge-rank-one"})
        return DerivationNormReport(estimate, a_hat, op_gauge, upper, multiplier.status, I, J, budget.seed, metadata)

    # [a, x] = [a_hat, x]: searching on a_hat makes the estimate blind to a + lambda 1
    witnesses = [
        ("gauge-rank-one", gauge_witness),
        ("multiplier-aligned", multiplier_norm_op(J, I, a_hat, budget).witness),
        ("gauge-top-projection", rank_one(top, top)),
    ]
    search = matrix_search(
        objective=lambda x: ideal_norm(J, commutator(a_hat, x)),
        constraint=lambda x: ideal_norm(I, x),
        n=n,
        budget=budget,
    )
    result = search.run(witnesses)
    estimate = NormEstimate(result.value, result.witness, "lower-bound", "search:matrix-ascent",
                            result.evaluations, {"origin": result.origin})
    report = DerivationNormReport(estimate, a_hat, op_gauge, upper, multiplier.status, I, J, budget.seed, metadata)
    if not report.passed:
        logger.warning("derivation sandwich violated for %s -> %s: %s", I, J, report.to_record())
    return report


@dataclass
class RecoveredGenerator:
    generator: Matrix
    residual: float
    samples: int


def check_linearity(delta: LinearMap, n: int, samples: int = LINEARITY_SAMPLES, seed: int = 0) -> float:
    """Largest relative superposition defect over random samples; raises NotLinearError above tolerance."""
    rng = make_rng(seed, 1)
    worst = 0.0
    for _ in range(samples):
        x, y = ginibre(rng, n), ginibre(rng, n)
        alpha, beta = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        combined = np.asarray(delta(alpha * x + beta * y), dtype=np.complex128)
        if combined.shape != (n, n):
            raise InvalidArgumentError(f"black-box map returned shape {combined.shape}, expected {(n, n)}")
        expected = alpha * np.asarray(delta(x)) + beta * np.asarray(delta(y))
        scale = max(1.0, frobenius_norm(expected))
        worst = max(worst, frobenius_norm(combined - expected) / scale)
    if worst > LINEARITY_TOL:
        raise NotLinearError(f"map failed the superposition check (defect {worst:.3e})", worst)
    return worst


def recover_generator(
    delta: LinearMap,
    n: int,
    phi0: Optional[np.ndarray] = None,
    samples: int = RECOVERY_SAMPLES,
    seed: int = 0,
) -> RecoveredGenerator:
    """Rebuild a_hat from a black-box derivation: a_hat z = delta(z (x) phi0*) phi0.

    If delta = delta_a then a_hat = a - (a phi0, phi0) 1 and delta(x) = [a_hat, x];
    otherwise the residual over random samples measures the defect.
    """
    if n < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {n}")
    check_linearity(delta, n, seed=seed)
    phi = _unit_vector(n, phi0)
    columns = []
    for k in range(n):
        z = np.zeros(n, dtype=np.complex128)
        z[k] = 1.0
        columns.append(np.asarray(delta(rank_one(z, phi)), dtype=np.complex128) @ phi)
    a_hat = np.stack(columns, axis=1)

    rng = make_rng(seed, 2)
    residual = 0.0
    for _ in range(samples):
        x = ginibre(rng, n)
        residual = max(residual, frobenius_norm(np.asarray(delta(x)) - commutator(a_hat, x)))
    logger.debug("recovered generator of size %d, residual %.3e", n, residual)
    return RecoveredGenerator(a_hat, residual, samples)


def zsido_bound(d: DerivationSpec, I: SpaceSpec) -> float:
    """2 C_I ||a||_op: upper bound for ||delta_a||_{I -> I}."""
    return 2.0 * concavity_modulus(I) * operator_norm(d.generator)


def is_star_derivation(d: DerivationSpec, x: Matrix, tol: float = SLACK_TOL) -> bool:
    x = np.asarray(x, dtype=np.complex128)
    lhs = apply(d, adjoint(x))
    rhs = adjoint(apply(d, x))
    return frobenius_norm(lhs - rhs) <= tol * max(1.0, frobenius_norm(rhs))
