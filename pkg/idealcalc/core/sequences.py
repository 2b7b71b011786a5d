from __future__ import annotations

from typing import Iterable, Tuple, Union

import numpy as np
import numpy.typing as npt

from ..config import SLACK_TOL
from ..errors import InvalidArgumentError


# A Sequence is a finite 1-D float64 array standing for an element of c_00.
Sequence = npt.NDArray[np.float64]
SequenceLike = Union[Sequence, Iterable[float], Iterable[complex]]


def as_sequence(values: SequenceLike) -> Sequence:
    """Coerce input to a finite real 1-D array.

    Complex entries are reduced to their absolute values; real signs are kept.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"sequence must be one-dimensional, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = np.abs(arr)
    arr = arr.astype(np.float64, copy=True)
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("sequence entries must be finite")
    return arr


def is_decreasing(xi: Sequence, tol: float = 0.0) -> bool:
    xi = np.asarray(xi, dtype=np.float64)
    if xi.size == 0:
        return True
    return bool(np.all(xi >= -tol) and np.all(np.diff(xi) <= tol))


def basis_vector(n: int, k: int = 0) -> Sequence:
    """e_{k+1} of length n."""
    if not 0 <= k < n:
        raise InvalidArgumentError(f"index {k} out of range for length {n}")
    e = np.zeros(n, dtype=np.float64)
    e[k] = 1.0
    return e


def prefix_indicator(n: int, k: int) -> Sequence:
    """Indicator of the first k indices, length n."""
    if not 0 <= k <= n:
        raise InvalidArgumentError(f"prefix length {k} out of range for length {n}")
    out = np.zeros(n, dtype=np.float64)
    out[:k] = 1.0
    return out


def pad_pair(xi: SequenceLike, eta: SequenceLike) -> Tuple[Sequence, Sequence]:
    """Zero-pad the shorter of two sequences to the longer length."""
    a, b = as_sequence(xi), as_sequence(eta)
    n = max(a.size, b.size)
    if a.size < n:
        a = np.concatenate([a, np.zeros(n - a.size)])
    if b.size < n:
        b = np.concatenate([b, np.zeros(n - b.size)])
    return a, b


def decreasing_rearrangement(xi: SequenceLike) -> Sequence:
    """xi*: |xi| sorted in non-increasing order."""
    a = np.abs(as_sequence(xi))
    return -np.sort(-a)


def dilate(xi: SequenceLike, m: int) -> Sequence:
    """sigma_m: every entry repeated m times; sigma_1 is the identity."""
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"dilation factor must be a positive integer, got {m}")
    return np.repeat(as_sequence(xi), int(m))


def hadamard(xi: SequenceLike, eta: SequenceLike) -> Sequence:
    a, b = pad_pair(xi, eta)
    return a * b


def _dominance_margin(lhs: Sequence, rhs: Sequence) -> Tuple[bool, float]:
    """Compare lhs <= rhs on the first len(lhs) entries of rhs."""
    n = lhs.size
    if n == 0:
        return True, 0.0
    slack = rhs[:n] - lhs
    margin = float(np.min(slack))
    return margin >= -SLACK_TOL, margin


def check_sum_rearrangement(xi: SequenceLike, eta: SequenceLike) -> Tuple[bool, float]:
    """(xi + eta)* <= sigma_2(xi* + eta*), entrywise on the common index range.

    Returns the verdict and the minimum slack. A False verdict means a bug.
    """
    a, b = pad_pair(xi, eta)
    lhs = decreasing_rearrangement(a + b)
    rhs = dilate(decreasing_rearrangement(a) + decreasing_rearrangement(b), 2)
    return _dominance_margin(lhs, rhs)


def check_product_rearrangement(xi: SequenceLike, eta: SequenceLike) -> Tuple[bool, float]:
    """(xi eta)* <= sigma_2(xi* eta*), entrywise on the common index range."""
    a, b = pad_pair(xi, eta)
    lhs = decreasing_rearrangement(a * b)
    rhs = dilate(decreasing_rearrangement(a) * decreasing_rearrangement(b), 2)
    return _dominance_margin(lhs, rhs)


def check_split_sum(xi: SequenceLike, eta: SequenceLike) -> Tuple[bool, float]:
    """(xi + eta)*_{i+j-1} <= xi*_i + eta*_j for all i, j inside the range."""
    a, b = pad_pair(xi, eta)
    n = a.size
    if n == 0:
        return True, 0.0
    s = decreasing_rearrangement(a + b)
    xs, es = decreasing_rearrangement(a), decreasing_rearrangement(b)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    inside = i + j < n
    slack = (xs[i] + es[j] - s[np.minimum(i + j, n - 1)])[inside]
    margin = float(np.min(slack))
    return margin >= -SLACK_TOL, margin


def isotonic_decreasing(y: SequenceLike) -> Sequence:
    """Least-squares fit of y by a non-increasing sequence (pool adjacent violators)."""
    y = as_sequence(y)
    if y.size <= 1:
        return y.copy()
    # Blocks as (mean, weight); merge while a later block exceeds its predecessor.
    means = []
    weights = []
    for value in y:
        means.append(float(value))
        weights.append(1.0)
        while len(means) > 1 and means[-2] < means[-1]:
            w = weights[-2] + weights[-1]
            m = (means[-2] * weights[-2] + means[-1] * weights[-1]) / w
            means[-2:] = [m]
            weights[-2:] = [w]
    return np.repeat(np.asarray(means), np.asarray(weights, dtype=np.int64))


def project_decreasing(y: SequenceLike) -> Sequence:
    """Euclidean projection onto {eta : eta_1 >= eta_2 >= ... >= 0}."""
    return np.maximum(isotonic_decreasing(y), 0.0)
