"""The named check suites.

Each suite turns a :class:`SuiteConfig` into a list of :class:`CheckRecord`,
every record one inequality ``lhs <= rhs`` up to its tolerance. Entrywise
dominance checks record ``max_i(lhs_i - rhs_i)`` against 0. All randomness is
drawn from streams keyed by (seed, suite-local indices), so a suite's records
do not depend on which other suites run or in what order.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterator, List, Sequence as Seq

import numpy as np

from ..config import REL_TOL, SANDWICH_TOL, SLACK_TOL
from ..core.derivations import (
    DerivationSpec,
    apply,
    gauge_generator,
    norm_estimate,
    recover_generator,
    split_star,
    zsido_bound,
)
from ..core.ensembles import ENSEMBLES, make_rng, random_matrix, random_sequence, random_unitary
from ..core.multipliers import holder_oracle, multiplier_norm_op, multiplier_norm_seq
from ..core.operators import (
    adjoint,
    check_diagonal_commuting_p_convexity,
    check_sv_product,
    check_sv_sum,
    diagonal,
    frobenius_norm,
    ideal_norm,
    identity,
    matrix_unit,
    modulus,
    operator_norm,
    rounding_slack,
    singular_values,
)
from ..core.search import SearchBudget
from ..core.sequences import (
    check_product_rearrangement,
    check_split_sum,
    check_sum_rearrangement,
    decreasing_rearrangement,
    dilate,
)
from ..core.spaces import (
    SpaceSpec,
    analytic_multiplier_space,
    concavity_modulus,
    dilation_bound,
    empirical_concavity,
    parse_space,
    registered_spaces,
    seq_norm,
)
from ..errors import InvalidArgumentError, NotLinearError, NumericFailureError
from .schemas import CheckRecord, SuiteConfig

logger = logging.getLogger(__name__)

SuiteFn = Callable[[SuiteConfig], List[CheckRecord]]
SUITES: Dict[str, SuiteFn] = {}

GENERATOR_TOL = 1e-9
SHIFT_TOL = 1e-12
DUALITY_REL_DEV = 0.02
SIDE_AGREEMENT = 0.05


def register(name: str) -> Callable[[SuiteFn], SuiteFn]:
    def deco(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        return fn
    return deco


class Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.records: List[CheckRecord] = []

    def check(self, params: Dict[str, Any], lhs: float, rhs: float, tolerance: float = SLACK_TOL) -> None:
        self.records.append(CheckRecord.inequality(self.suite, params, lhs, rhs, tolerance))

    def equal(self, params: Dict[str, Any], value: float, reference: float, rel: float) -> None:
        """|value - reference| <= rel * max(1, |reference|)."""
        self.check(params, abs(value - reference), 0.0, rel * max(1.0, abs(reference)))

    def dominated(self, params: Dict[str, Any], margin: float) -> None:
        self.check(params, -margin, 0.0)

    @contextmanager
    def guard(self, params: Dict[str, Any]) -> Iterator[None]:
        try:
            yield
        except NumericFailureError as exc:
            logger.warning("numeric failure in %s %s: %s", self.suite, params, exc)
            self.records.append(CheckRecord.failure(self.suite, params, str(exc)))


def _dims(cfg: SuiteConfig, default: Seq[int]) -> List[int]:
    return list(cfg.dimensions) if cfg.dimensions else list(default)


def _spaces(cfg: SuiteConfig, default: Seq[str]) -> List[SpaceSpec]:
    return [parse_space(s) for s in (cfg.spaces or default)]


def _pairs(cfg: SuiteConfig, default: Seq[Seq[str]]) -> List[List[SpaceSpec]]:
    return [[parse_space(a), parse_space(b)] for a, b in (cfg.pairs or default)]


def _budget(cfg: SuiteConfig, *keys: int) -> SearchBudget:
    state = np.random.SeedSequence([cfg.seed, *keys]).generate_state(1)[0]
    return SearchBudget(restarts=cfg.restarts, ascent_steps=cfg.ascent_steps, seed=int(state))


def _fit(space: SpaceSpec, n: int) -> int:
    capacity = space.capacity
    if capacity is not None and n > capacity:
        raise InvalidArgumentError(f"{space} holds sequences of length <= {capacity}, suite asks for {n}")
    return n


_REGISTERED = tuple(s.canonical() for s in registered_spaces(64))


# -- sequences -----------------------------------------------------------------


@register("rearrangement")
def rearrangement(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("rearrangement")
    checks = (
        ("sum", check_sum_rearrangement),
        ("product", check_product_rearrangement),
        ("split-sum", check_split_sum),
    )
    for n in _dims(cfg, (8, 16)):
        for t in range(cfg.samples):
            rng = make_rng(cfg.seed, n, t)
            xi, eta = random_sequence(rng, n), random_sequence(rng, n)
            for name, fn in checks:
                _, margin = fn(xi, eta)
                rec.dominated({"check": name, "n": n, "trial": t}, margin)
            permuted = xi[rng.permutation(n)] * rng.choice([-1.0, 1.0], size=n)
            drift = float(np.max(np.abs(decreasing_rearrangement(permuted) - decreasing_rearrangement(xi))))
            rec.check({"check": "permutation-invariance", "n": n, "trial": t}, drift, 0.0, 0.0)
            larger = xi * (1.0 + rng.random(n))
            margin = float(np.min(decreasing_rearrangement(larger) - decreasing_rearrangement(xi)))
            rec.dominated({"check": "monotonicity", "n": n, "trial": t}, margin)
            alpha = float(rng.standard_normal())
            scaled = abs(alpha) * decreasing_rearrangement(xi)
            drift = float(np.max(np.abs(decreasing_rearrangement(alpha * xi) - scaled)))
            rec.check({"check": "homogeneity", "n": n, "trial": t}, drift, 0.0, SLACK_TOL * max(1.0, scaled[0]))
    return rec.records


@register("quasi-norm-axioms")
def quasi_norm_axioms(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("quasi-norm-axioms")
    factors = list(cfg.factors) if cfg.factors else [2, 3, 4]
    for si, E in enumerate(_spaces(cfg, _REGISTERED)):
        space = E.canonical()
        C = concavity_modulus(E)
        rng = make_rng(cfg.seed, si)
        rec.check({"check": "concavity-modulus", "space": space},
                  empirical_concavity(E, cfg.samples, rng), C, SLACK_TOL * max(1.0, C))
        for n in _dims(cfg, (8,)):
            _fit(E, n)
            for t in range(cfg.samples):
                params = {"space": space, "n": n, "trial": t}
                rng = make_rng(cfg.seed, si, n, t)
                with rec.guard(params):
                    _axioms_trial(rec, E, C, n, params, rng, factors)
    return rec.records


def _axioms_trial(rec: Recorder, E: SpaceSpec, C: float, n: int, params: Dict[str, Any],
                  rng: np.random.Generator, factors: List[int]) -> None:
    x, y = random_matrix(rng, n), random_matrix(rng, n)
    b, c = random_matrix(rng, n), random_matrix(rng, n)
    u, v = random_unitary(rng, n), random_unitary(rng, n)
    nx, ny = ideal_norm(E, x), ideal_norm(E, y)

    def tol(scale: float) -> float:
        return SLACK_TOL * max(1.0, scale)

    bound = C * (nx + ny)
    rec.check({"check": "quasi-triangle", **params}, ideal_norm(E, x + y), bound, tol(bound))
    bound = operator_norm(u) * nx * operator_norm(v)
    rec.check({"check": "unitary-module", **params}, ideal_norm(E, u @ x @ v), bound, tol(bound))
    bound = operator_norm(b) * nx * operator_norm(c)
    rec.check({"check": "bimodule", **params}, ideal_norm(E, b @ x @ c), bound, tol(bound))
    rec.equal({"check": "adjoint", **params}, ideal_norm(E, adjoint(x)), nx, REL_TOL)
    rec.equal({"check": "modulus", **params}, ideal_norm(E, modulus(x)), nx, REL_TOL)
    rec.check({"check": "operator-norm-dominance", **params}, operator_norm(x), nx, tol(nx))
    k = int(rng.integers(n))
    rec.equal({"check": "rank-one-projection", **params}, ideal_norm(E, matrix_unit(n, k, k)), 1.0, REL_TOL)

    if E.kind == "schatten" and E.p is not None and E.p <= 1:
        p = float(E.p)
        bound = nx ** p + ny ** p
        rec.check({"check": "p-additivity", **params}, ideal_norm(E, x + y) ** p, bound, tol(bound))
    if E.kind == "schatten":
        family = (random_sequence(rng, n), random_sequence(rng, n), random_sequence(rng, n))
        _, margin = check_diagonal_commuting_p_convexity(E, family)
        rec.check({"check": "p-convexity-diagonal", **params}, -margin, 0.0, REL_TOL)

    for m in factors:
        length = n if E.capacity is None else min(n, E.capacity // m)
        if length < 1:
            continue
        xi = random_sequence(rng, length)
        bound = dilation_bound(C, m) * seq_norm(E, xi)
        rec.check({"check": "dilation", "m": m, **params}, seq_norm(E, dilate(xi, m)), bound, tol(bound))

    # n fits E, checked by the caller
    xi = random_sequence(rng, n)
    norm_xi = seq_norm(E, xi)
    larger = seq_norm(E, xi * (1.0 + rng.random(n)))
    rec.check({"check": "monotone", **params}, norm_xi, larger, tol(larger))
    c = random_sequence(rng, n)
    bound = float(np.max(np.abs(c))) * norm_xi
    rec.check({"check": "solid-module", **params}, seq_norm(E, c * xi), bound, tol(bound))
    rec.check({"check": "uniform-below", **params}, seq_norm(SpaceSpec.uniform(), xi), norm_xi, tol(norm_xi))


# -- operators -----------------------------------------------------------------


@register("sv-inequalities")
def sv_inequalities(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("sv-inequalities")
    ensembles = list(cfg.ensembles) if cfg.ensembles else ["gaussian"]
    for ensemble in ensembles:
        for n in _dims(cfg, (8,)):
            for t in range(cfg.samples):
                base = {"ensemble": ensemble, "n": n, "trial": t}
                rng = make_rng(cfg.seed, ENSEMBLES.index(ensemble), n, t)
                x, y = random_matrix(rng, n, ensemble), random_matrix(rng, n, ensemble)
                for name, fn in (("sum", check_sv_sum), ("product", check_sv_product)):
                    params = {"check": name, **base}
                    with rec.guard(params):
                        _, margin = fn(x, y)
                        rec.dominated(params, margin)
    return rec.records


@register("calkin-roundtrip")
def calkin_roundtrip(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("calkin-roundtrip")
    spaces = _spaces(cfg, _REGISTERED)
    for n in _dims(cfg, (8,)):
        for E in spaces:
            _fit(E, n)
        for t in range(cfg.samples):
            rng = make_rng(cfg.seed, n, t)
            xi = random_sequence(rng, n)
            x = random_matrix(rng, n)
            u, v = random_unitary(rng, n), random_unitary(rng, n)
            params = {"n": n, "trial": t}
            with rec.guard(params):
                drift = float(np.max(np.abs(singular_values(u @ x @ v) - singular_values(x))))
                rec.check({"check": "sv-unitary-invariance", **params}, drift, 0.0,
                          REL_TOL * max(1.0, operator_norm(x)))
                for E in spaces:
                    sparams = {"space": E.canonical(), **params}
                    expected = seq_norm(E, xi)
                    rec.equal({"check": "diagonal", **sparams}, ideal_norm(E, diagonal(xi)), expected, SLACK_TOL)
                    rec.equal({"check": "conjugated-diagonal", **sparams},
                              ideal_norm(E, u @ diagonal(xi) @ adjoint(u)), expected, REL_TOL)
                    rec.equal({"check": "unitary-conjugation", **sparams},
                              ideal_norm(E, u @ x @ adjoint(u)), ideal_norm(E, x), REL_TOL)
    return rec.records


# -- multipliers ---------------------------------------------------------------


def _ratio_at_witness(F: SpaceSpec, G: SpaceSpec, xi: np.ndarray, eta: np.ndarray) -> float:
    s = decreasing_rearrangement(xi)
    return seq_norm(F, s * eta) / seq_norm(G, eta)


@register("holder-duality")
def holder_duality(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("holder-duality")
    pairs = _pairs(cfg, (
        ("schatten:p=1", "schatten:p=2"),
        ("schatten:p=1", "schatten:p=3"),
        ("schatten:p=0.5", "schatten:p=1"),
        ("schatten:p=2", "schatten:p=3"),
    ))
    dims = _dims(cfg, range(2, 9))
    for pi, (F, G) in enumerate(pairs):
        if F.kind != "schatten" or G.kind != "schatten":
            raise InvalidArgumentError(f"holder-duality needs Schatten pairs, got {F} : {G}")
        r, p = float(F.p), float(G.p)  # type: ignore[arg-type]
        for t in range(cfg.samples):
            n = dims[t % len(dims)]
            rng = make_rng(cfg.seed, pi, n, t)
            xi = random_sequence(rng, n)
            params = {"F": F.canonical(), "G": G.canonical(), "n": n, "trial": t}
            with rec.guard(params):
                oracle = holder_oracle(r, p, xi)
                searched = multiplier_norm_seq(F, G, xi, _budget(cfg, pi, t), analytic=False)
                exact = multiplier_norm_seq(F, G, xi)
                rec.check({"check": "search-below-oracle", **params}, searched.value, oracle,
                          REL_TOL * max(1.0, oracle))
                rec.check({"check": "search-relative-deviation", **params},
                          abs(searched.value - oracle) / oracle if oracle else 0.0, DUALITY_REL_DEV, 0.0)
                rec.equal({"check": "exact-path", **params}, exact.value, oracle, REL_TOL)
                rec.equal({"check": "exact-witness", **params},
                          _ratio_at_witness(F, G, xi, exact.witness), exact.value, REL_TOL)
    return rec.records


@register("lorentz-marcinkiewicz-duality")
def lorentz_marcinkiewicz_duality(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("lorentz-marcinkiewicz-duality")
    pairs = _pairs(cfg, (
        ("schatten:p=1", "lorentz:p=1:w=harmonic:n=64"),
        ("schatten:p=2", "lorentz:p=2:w=harmonic:n=64"),
    ))
    dims = _dims(cfg, (4, 8))
    for pi, (F, G) in enumerate(pairs):
        M = analytic_multiplier_space(F, G)
        if not isinstance(M, SpaceSpec) or M.kind != "marcinkiewicz":
            raise InvalidArgumentError(f"{F} : {G} is not a Lorentz-Marcinkiewicz pair")
        for t in range(cfg.samples):
            n = _fit(G, dims[t % len(dims)])
            rng = make_rng(cfg.seed, pi, n, t)
            xi = random_sequence(rng, n)
            params = {"F": F.canonical(), "G": G.canonical(), "n": n, "trial": t}
            with rec.guard(params):
                m = seq_norm(M, xi)
                searched = multiplier_norm_seq(F, G, xi, _budget(cfg, pi, t), analytic=False).value
                exact = multiplier_norm_seq(F, G, xi).value
                rec.equal({"check": "exact-path", **params}, exact, m, REL_TOL)
                rec.check({"check": "search-below-marcinkiewicz", **params}, searched, m, REL_TOL * max(1.0, m))
                if G.p == 1:
                    rec.check({"check": "search-relative-deviation", **params},
                              abs(searched - m) / m if m else 0.0, DUALITY_REL_DEV, 0.0)
                else:
                    rec.check({"check": "search-envelope-lower", **params}, m / 4.0, searched, REL_TOL)
                    rec.check({"check": "search-envelope-upper", **params}, searched, 4.0 * m, REL_TOL)
    return rec.records


def _generator(rng: np.random.Generator, n: int, t: int) -> np.ndarray:
    """Alternate diagonal and Gaussian generators."""
    return random_matrix(rng, n, "diagonal" if t % 2 == 0 else "gaussian")


@register("multiplier-sandwich")
def multiplier_sandwich(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("multiplier-sandwich")
    pairs = _pairs(cfg, (
        ("schatten:p=1", "schatten:p=2"),
        ("schatten:p=0.5", "schatten:p=1"),
        ("schatten:p=1", "schatten:p=1"),
    ))
    for pi, (J, I) in enumerate(pairs):
        C = concavity_modulus(J)
        for n in _dims(cfg, (4,)):
            for t in range(cfg.samples):
                rng = make_rng(cfg.seed, pi, n, t)
                a = _generator(rng, n, t)
                params = {"J": J.canonical(), "I": I.canonical(), "n": n, "trial": t}
                with rec.guard(params):
                    budget = _budget(cfg, pi, n, t)
                    exact = multiplier_norm_op(J, I, a)
                    left = multiplier_norm_op(J, I, a, budget, analytic=False)
                    right = multiplier_norm_op(J, I, a, budget, side="right", analytic=False)
                    restricted = left.metadata["diagonal_value"]
                    rec.check({"check": "restricted-below-full", **params}, restricted, left.value,
                              REL_TOL * max(1.0, left.value))
                    top = max(left.value, right.value)
                    rec.check({"check": "left-right-agreement", **params}, abs(left.value - right.value),
                              SIDE_AGREEMENT * top, 0.0)
                    if exact.is_exact:
                        bound = 2.0 * C * exact.value
                        rec.check({"check": "full-below-bound", **params}, left.value, bound,
                                  (SANDWICH_TOL + rounding_slack(J, n)) * max(1.0, bound))
                        x = random_matrix(rng, n)
                        bound = exact.value * ideal_norm(I, x)
                        rec.check({"check": "contraction", **params}, ideal_norm(J, a @ x), bound,
                                  REL_TOL * max(1.0, bound))
    return rec.records


# -- derivations ---------------------------------------------------------------


@register("derivation-sandwich")
def derivation_sandwich(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("derivation-sandwich")
    pairs = _pairs(cfg, (
        ("schatten:p=2", "schatten:p=1"),
        ("schatten:p=1", "schatten:p=0.5"),
        ("schatten:p=2", "schatten:p=2"),
    ))
    for pi, (I, J) in enumerate(pairs):
        for n in _dims(cfg, (3,)):
            for t in range(cfg.samples):
                rng = make_rng(cfg.seed, pi, n, t)
                a = _generator(rng, n, t)
                params = {"I": I.canonical(), "J": J.canonical(), "n": n, "trial": t}
                with rec.guard(params):
                    report = norm_estimate(DerivationSpec(a), I, J, _budget(cfg, pi, n, t))
                    value = report.estimate.value
                    rec.check({"check": "gauge-lower", **params}, report.op_norm_gauge, value,
                              (SANDWICH_TOL + rounding_slack(I, n)) * max(1.0, value))
                    if report.upper_status == "exact-analytic" and report.upper_bound is not None:
                        rec.check({"check": "multiplier-upper", **params}, value, report.upper_bound,
                                  (SANDWICH_TOL + rounding_slack(J, n)) * max(1.0, report.upper_bound))
                    # dyadic entries keep a_hat bit-identical under the shift
                    grid = np.round(a * 64.0) / 64.0
                    lam = complex(rng.integers(-8, 9), rng.integers(-8, 9)) / 4.0
                    budget = _budget(cfg, pi, n, t, 1)
                    base = norm_estimate(DerivationSpec(grid), I, J, budget).estimate.value
                    shifted = norm_estimate(DerivationSpec(grid + lam * np.eye(n)), I, J, budget).estimate.value
                    rec.check({"check": "scalar-shift", **params}, abs(shifted - base), 0.0, 0.0)
    return rec.records


@register("zsido-bound")
def zsido(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("zsido-bound")
    spaces = _spaces(cfg, ("schatten:p=1", "schatten:p=2", "schatten:p=0.5", "uniform"))
    for si, E in enumerate(spaces):
        for n in _dims(cfg, (4,)):
            _fit(E, n)
            for t in range(cfg.samples):
                rng = make_rng(cfg.seed, si, n, t)
                d = DerivationSpec(random_matrix(rng, n))
                params = {"space": E.canonical(), "n": n, "trial": t}
                with rec.guard(params):
                    value = norm_estimate(d, E, E, _budget(cfg, si, n, t)).estimate.value
                    bound = zsido_bound(d, E)
                    rec.check(params, value, bound, (SANDWICH_TOL + rounding_slack(E, n)) * max(1.0, bound))
    return rec.records


@register("generator-recovery")
def generator_recovery(cfg: SuiteConfig) -> List[CheckRecord]:
    rec = Recorder("generator-recovery")
    dims = _dims(cfg, (8,))
    for n in dims:
        for t in range(cfg.samples):
            rng = make_rng(cfg.seed, n, t)
            a = random_matrix(rng, n, ENSEMBLES[t % len(ENSEMBLES)])
            shift = complex(rng.standard_normal(), rng.standard_normal())
            x = random_matrix(rng, n)
            params = {"n": n, "trial": t}
            with rec.guard(params):
                d = DerivationSpec(a)
                scale = max(1.0, operator_norm(a))
                recovered = recover_generator(d, n, seed=t)
                defect = np.max(np.abs(recovered.generator + a[0, 0] * identity(n) - a))
                rec.check({"check": "generator", **params}, float(defect), 0.0, GENERATOR_TOL * scale)
                rec.check({"check": "residual", **params}, recovered.residual, 0.0, GENERATOR_TOL * scale)
                gauge = np.max(np.abs(recovered.generator - gauge_generator(a)))
                rec.check({"check": "gauge", **params}, float(gauge), 0.0, GENERATOR_TOL * scale)

                shifted = recover_generator(DerivationSpec(a + shift * identity(n)), n, seed=t)
                drift = np.max(np.abs(shifted.generator - recovered.generator))
                rec.check({"check": "scalar-shift", **params}, float(drift), 0.0,
                          SHIFT_TOL * max(scale, abs(shift)))

                re_part, im_part = split_star(d)
                target = apply(d, x)
                split = frobenius_norm(apply(re_part, x) + 1j * apply(im_part, x) - target)
                rec.check({"check": "star-split", **params}, split, 0.0, REL_TOL * max(1.0, frobenius_norm(target)))
                for name, part in (("star-real", re_part), ("star-imaginary", im_part)):
                    lhs = apply(part, adjoint(x))
                    rhs = adjoint(apply(part, x))
                    rec.check({"check": name, **params}, frobenius_norm(lhs - rhs), 0.0,
                              REL_TOL * max(1.0, frobenius_norm(rhs)))

    n = dims[0]
    a = random_matrix(make_rng(cfg.seed, n, cfg.samples), n)
    rejected = 0.0
    try:
        recover_generator(lambda x: apply(DerivationSpec(a), x) + x * np.conj(x), n)
    except NotLinearError:
        rejected = 1.0
    rec.check({"check": "nonlinear-rejected", "n": n}, 1.0, rejected, 0.0)
    return rec.records
