"""Restarted ascent for suprema of ratios of quasi-norms.

Every estimate in idealcalc is a sup of ``objective(x) / constraint(x)`` over
a cone where both functions are positively homogeneous of degree one. The
search evaluates a list of named witnesses first, then runs independent
restarts of a stochastic coordinate ascent, each on the unit sphere of the
constraint. Restarts may run on a thread pool; their results are merged by
maximum value with ties broken by candidate index, so the outcome depends
only on the seed.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence as Seq, Tuple

import numpy as np

from ..config import DEFAULT_ASCENT_STEPS, DEFAULT_RESTARTS, DEFAULT_SEED, settings
from ..errors import InvalidArgumentError, NumericFailureError
from .ensembles import ENSEMBLES, ginibre, make_rng, random_matrix
from .sequences import prefix_indicator, project_decreasing

logger = logging.getLogger(__name__)

Evaluation = Tuple[float, np.ndarray]
Proposer = Callable[[np.ndarray, float, int, np.random.Generator], List[np.ndarray]]

GROW = 1.2
SHRINK = 0.9
MIN_STEP = 1e-9


@dataclass(frozen=True)
class SearchBudget:
    restarts: int = DEFAULT_RESTARTS
    ascent_steps: int = DEFAULT_ASCENT_STEPS
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.ascent_steps < 1:
            raise InvalidArgumentError(
                f"budget needs restarts >= 1 and ascent_steps >= 1, got {self.restarts}, {self.ascent_steps}"
            )
        if self.seed < 0:
            raise InvalidArgumentError(f"seed must be non-negative, got {self.seed}")

    @classmethod
    def parse(cls, text: str, seed: int = DEFAULT_SEED) -> "SearchBudget":
        """``"R,S"`` -> SearchBudget(restarts=R, ascent_steps=S, seed=seed)."""
        try:
            restarts, steps = (int(v) for v in text.split(","))
        except ValueError as exc:
            raise InvalidArgumentError(f"budget must look like R,S, got {text!r}") from exc
        return cls(restarts=restarts, ascent_steps=steps, seed=seed)


@dataclass
class SearchResult:
    value: float
    witness: np.ndarray
    evaluations: int
    origin: str


class RatioSearch:
    """Maximise objective/constraint by seeded witnesses plus restarted ascent."""

    def __init__(
        self,
        objective: Callable[[np.ndarray], float],
        constraint: Callable[[np.ndarray], float],
        *,
        project: Callable[[np.ndarray], np.ndarray],
        propose: Proposer,
        random_start: Callable[[np.random.Generator, int], np.ndarray],
        budget: SearchBudget,
        threads: Optional[int] = None,
    ):
        self.objective = objective
        self.constraint = constraint
        self.project = project
        self.propose = propose
        self.random_start = random_start
        self.budget = budget
        self.threads = max(1, int(threads if threads is not None else settings.THREADS))

    def evaluate(self, x: np.ndarray) -> Optional[Evaluation]:
        """Project, rescale to the constraint's unit sphere, return (value, point)."""
        x = self.project(x)
        c = self.constraint(x)
        if not np.isfinite(c) or c <= 0.0:
            return None
        x = x / c
        value = self.objective(x)
        if not np.isfinite(value):
            return None
        return float(value), x

    def ascend(self, start: Evaluation, rng: np.random.Generator) -> Tuple[Evaluation, int]:
        value, x = start
        step = 0.5
        evaluations = 0
        for k in range(self.budget.ascent_steps):
            improved = False
            for candidate in self.propose(x, step, k, rng):
                result = self.evaluate(candidate)
                evaluations += 1
                if result is not None and result[0] > value:
                    value, x = result
                    improved = True
            step = min(1.0, step * GROW) if improved else max(MIN_STEP, step * SHRINK)
        return (value, x), evaluations

    def _restart(self, restart_id: int, start: Optional[Evaluation]) -> Tuple[Optional[Evaluation], int]:
        rng = make_rng(self.budget.seed, restart_id)
        evaluations = 0
        if start is None:
            attempt = 0
            while start is None and attempt < 8:
                start = self.evaluate(self.random_start(rng, restart_id))
                evaluations += 1
                attempt += 1
            if start is None:
                return None, evaluations
        result, used = self.ascend(start, rng)
        return result, evaluations + used

    def run(self, witnesses: Seq[Tuple[str, np.ndarray]]) -> SearchResult:
        candidates: List[Tuple[str, Optional[Evaluation]]] = []
        evaluations = 0
        seeded: List[Evaluation] = []
        for name, w in witnesses:
            result = self.evaluate(np.asarray(w))
            evaluations += 1
            candidates.append((f"witness:{name}", result))
            if result is not None:
                seeded.append(result)
        # best witnesses first, so restart 0 always refines the strongest one
        seeded.sort(key=lambda r: -r[0])

        starts = [seeded[i] if i < len(seeded) else None for i in range(self.budget.restarts)]
        jobs = list(range(self.budget.restarts))
        if self.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                outcomes = list(pool.map(lambda i: self._restart(i, starts[i]), jobs))
        else:
            outcomes = [self._restart(i, starts[i]) for i in jobs]
        for i, (result, used) in zip(jobs, outcomes):
            evaluations += used
            candidates.append((f"restart:{i}", result))

        valid = [(idx, name, res) for idx, (name, res) in enumerate(candidates) if res is not None]
        if not valid:
            raise NumericFailureError("ratio search found no admissible point", {"candidates": len(candidates)})
        idx, origin, (value, witness) = max(valid, key=lambda item: (item[2][0], -item[0]))
        logger.debug("ratio search: value=%.12g origin=%s evaluations=%d", value, origin, evaluations)
        return SearchResult(value=value, witness=witness, evaluations=evaluations, origin=origin)


# -- sequence cone: non-negative non-increasing eta --------------------------


def propose_decreasing(x: np.ndarray, step: float, k: int, rng: np.random.Generator) -> List[np.ndarray]:
    n = x.size
    i = k % n
    scale = float(np.max(x)) if x.size and np.max(x) > 0 else 1.0
    delta = step * scale
    bump = np.zeros(n)
    bump[i] = delta
    prefix = prefix_indicator(n, i + 1) * delta
    return [x + bump, x - bump, x + prefix, x - prefix]


def random_decreasing(rng: np.random.Generator, n: int) -> np.ndarray:
    eta = np.sort(rng.exponential(size=n))[::-1].copy()
    support = int(rng.integers(1, n + 1))
    eta[support:] = 0.0
    return eta


def sequence_search(
    objective: Callable[[np.ndarray], float],
    constraint: Callable[[np.ndarray], float],
    n: int,
    budget: SearchBudget,
    threads: Optional[int] = None,
) -> RatioSearch:
    return RatioSearch(
        objective,
        constraint,
        project=project_decreasing,
        propose=propose_decreasing,
        random_start=lambda rng, _restart: random_decreasing(rng, n),
        budget=budget,
        threads=threads,
    )


# -- matrix space: all complex n x n x ---------------------------------------


def propose_matrix(x: np.ndarray, step: float, k: int, rng: np.random.Generator) -> List[np.ndarray]:
    n = x.shape[0]
    scale = float(np.linalg.norm(x)) or 1.0
    direction = ginibre(rng, n)
    direction *= step * scale / (np.linalg.norm(direction) or 1.0)
    # walk through real and imaginary parts of each entry in turn
    slot = k % (2 * n * n)
    entry, imaginary = divmod(slot, 2)
    unit = np.zeros((n, n), dtype=np.complex128)
    unit[divmod(entry, n)] = (1j if imaginary else 1.0) * step * scale
    return [x + direction, x - direction, x + unit, x - unit]


def matrix_search(
    objective: Callable[[np.ndarray], float],
    constraint: Callable[[np.ndarray], float],
    n: int,
    budget: SearchBudget,
    threads: Optional[int] = None,
) -> RatioSearch:
    return RatioSearch(
        objective,
        constraint,
        project=lambda x: np.asarray(x, dtype=np.complex128),
        propose=propose_matrix,
        random_start=lambda rng, restart: random_matrix(rng, n, ENSEMBLES[restart % len(ENSEMBLES)]),
        budget=budget,
        threads=threads,
    )
