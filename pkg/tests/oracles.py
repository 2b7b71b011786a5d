"""Test helpers and brute-force grid oracles used to cross-check the estimators."""

from itertools import combinations_with_replacement

import numpy as np

from idealcalc.core.operators import ideal_norm
from idealcalc.core.sequences import decreasing_rearrangement
from idealcalc.core.spaces import SpaceSpec, seq_norm


def grid_multiplier_seq(F: SpaceSpec, G: SpaceSpec, xi, k: int = 40) -> float:
    """max ||xi* eta||_F / ||eta||_G over decreasing eta with eta_1 = 1 on a k-step grid of [0, 1].

    The ratio is scale invariant, so fixing eta_1 = 1 loses nothing.
    """
    s = decreasing_rearrangement(xi)
    grid = np.linspace(0.0, 1.0, k + 1)[::-1]
    best = 0.0
    # combinations of a descending grid come out non-increasing
    for tail in combinations_with_replacement(grid, s.size - 1):
        eta = np.concatenate([[1.0], tail])
        best = max(best, seq_norm(F, s * eta) / seq_norm(G, eta))
    return best


def grid_derivation_2x2(a: np.ndarray, I: SpaceSpec, J: SpaceSpec, steps: int = 20) -> float:
    """max ||[a, x]||_J / ||x||_I over real 2 x 2 unit vectors x, angles on multiples of pi/steps."""
    half = np.linspace(0.0, np.pi, steps + 1)
    full = np.linspace(0.0, 2 * np.pi, 2 * steps + 1)
    best = 0.0
    for t1 in half:
        for t2 in half:
            for t3 in full:
                x = np.array([
                    [np.cos(t1), np.sin(t1) * np.cos(t2)],
                    [np.sin(t1) * np.sin(t2) * np.cos(t3), np.sin(t1) * np.sin(t2) * np.sin(t3)],
                ])
                best = max(best, ideal_norm(J, a @ x - x @ a) / ideal_norm(I, x))
    return best


def random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
