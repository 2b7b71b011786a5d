"""Deterministic pseudo-random matrices and sequences.

Every generator is derived from ``numpy.random.SeedSequence([seed, *keys])``
so that a (seed, key) pair always yields the same stream, independent of the
order in which other streams are consumed or of how many workers run.
"""

from __future__ import annotations

from typing import Literal, Union

import numpy as np

from ..errors import InvalidArgumentError
from .operators import Matrix
from .sequences import Sequence

Ensemble = Literal["gaussian", "unitary", "diagonal"]
ENSEMBLES = ("gaussian", "unitary", "diagonal")

RngLike = Union[int, np.random.Generator]


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(k) for k in keys]]))


def _rng(rng: RngLike) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else make_rng(int(rng))


def ginibre(rng: RngLike, n: int) -> Matrix:
    """Complex Gaussian matrix, entries of unit variance, Frobenius norm ~ n."""
    g = _rng(rng)
    return (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))) / np.sqrt(2.0)


def random_unitary(rng: RngLike, n: int) -> Matrix:
    """Haar unitary from the QR factorisation of a Ginibre matrix with phase fix."""
    q, r = np.linalg.qr(ginibre(rng, n))
    d = np.diagonal(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases


def random_sequence(rng: RngLike, n: int, signed: bool = True) -> Sequence:
    g = _rng(rng)
    xi = g.standard_normal(n)
    return xi if signed else np.abs(xi)


def random_matrix(rng: RngLike, n: int, ensemble: str = "gaussian") -> Matrix:
    """One draw from the named ensemble.

    gaussian: Ginibre scaled by 1/sqrt(n), operator norm of order 2;
    unitary: Haar unitary; diagonal: diagonal matrix with Gaussian complex entries.
    """
    if n < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {n}")
    g = _rng(rng)
    if ensemble == "gaussian":
        return ginibre(g, n) / np.sqrt(n)
    if ensemble == "unitary":
        return random_unitary(g, n)
    if ensemble == "diagonal":
        return np.diag(g.standard_normal(n) + 1j * g.standard_normal(n)).astype(np.complex128)
    raise InvalidArgumentError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")
