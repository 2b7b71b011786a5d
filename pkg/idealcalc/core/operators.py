"""Finite-dimensional operator layer.

Dense complex n x n matrices stand for truncations of compact operators.
Singular values come from one LAPACK SVD kernel; ideal quasi-norms follow the
Calkin correspondence ||x||_{C_E} = ||s(x)||_E.
"""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..config import SLACK_TOL
from ..errors import InvalidArgumentError, NumericFailureError
from .sequences import Sequence, SequenceLike, as_sequence, dilate
from .spaces import SpaceSpec, seq_norm

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.complex128]


def as_matrix(values) -> Matrix:
    """Coerce to a finite square complex128 array (real input is promoted)."""
    x = np.array(values, dtype=np.complex128, copy=True)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 1:
        raise InvalidArgumentError(f"expected a square n x n matrix with n >= 1, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("matrix entries must be finite")
    return x


def identity(n: int) -> Matrix:
    return np.eye(n, dtype=np.complex128)


def matrix_unit(n: int, i: int, j: int) -> Matrix:
    """E_{ij}: maps e_j to e_i (0-based indices)."""
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def rank_one(u: npt.ArrayLike, v: npt.ArrayLike) -> Matrix:
    """u (x) v*: the operator phi -> (phi, v) u."""
    return np.outer(np.asarray(u, dtype=np.complex128), np.conj(np.asarray(v, dtype=np.complex128)))


def adjoint(x: Matrix) -> Matrix:
    return np.conj(np.asarray(x)).T


def _diagnostics(x: Matrix) -> dict:
    finite = bool(np.all(np.isfinite(x)))
    diag = {"shape": tuple(x.shape), "finite": finite}
    if finite:
        diag["frobenius"] = float(np.linalg.norm(x))
        try:
            diag["condition"] = float(np.linalg.cond(x))
        except np.linalg.LinAlgError:
            diag["condition"] = float("inf")
    return diag


def _exact_diagonal(x: Matrix) -> bool:
    return bool(np.all(np.isfinite(x))) and not np.any(x[~np.eye(x.shape[0], dtype=bool)])


def _diagonal_svd(x: Matrix) -> Tuple[Matrix, Sequence, Matrix]:
    d = np.diagonal(x)
    s = np.abs(d)
    order = np.argsort(-s, kind="stable")
    phase = np.where(s > 0, d / np.where(s > 0, s, 1.0), 1.0)
    eye = np.eye(x.shape[0], dtype=np.complex128)
    return eye[:, order] * phase[order], s[order].astype(np.float64), eye[order]


def _lapack_svd(x: Matrix, compute_uv: bool):
    try:
        out = np.linalg.svd(x, compute_uv=compute_uv)
    except np.linalg.LinAlgError as exc:
        diagnostics = _diagnostics(x)
        logger.warning("SVD failed: %s %s", exc, diagnostics)
        raise NumericFailureError(f"singular value decomposition failed: {exc}", diagnostics) from exc
    parts = out if compute_uv else (out,)
    if not all(np.all(np.isfinite(part)) for part in parts):
        diagnostics = _diagnostics(x)
        logger.warning("SVD returned non-finite output %s", diagnostics)
        raise NumericFailureError("singular value decomposition returned non-finite values", diagnostics)
    return out


def svd(x: Matrix) -> Tuple[Matrix, Sequence, Matrix]:
    """x = u @ diag(s) @ vh with s non-increasing.

    Diagonal input is decomposed exactly: s is the sorted moduli of the
    diagonal and u, vh are (phased) permutations.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 2 and x.shape[0] == x.shape[1] and _exact_diagonal(x):
        return _diagonal_svd(x)
    u, s, vh = _lapack_svd(x, compute_uv=True)
    return u, s.astype(np.float64), vh


def singular_values(x: Matrix) -> Sequence:
    """s_1(x) >= ... >= s_n(x) >= 0; for diagonal x exactly the decreasing rearrangement of the diagonal."""
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {x.shape}")
    if _exact_diagonal(x):
        return np.sort(np.abs(np.diagonal(x)))[::-1].astype(np.float64)
    return _lapack_svd(x, compute_uv=False).astype(np.float64)


def rounding_slack(E: SpaceSpec, n: int) -> float:
    """Relative error of ideal_norm(E, x) caused by singular values at the rounding floor.

    A dense SVD returns the zero singular values of a rank-deficient x as
    values up to about 4 n eps s_1. For p >= 1 they are negligible; for
    Schatten p < 1 each one adds (4 n eps)^p, so the quasi-norm may exceed its
    exact value by the factor (1 + (n - 1) (4 n eps)^p)^(1/p).
    """
    floor = 4.0 * n * np.finfo(np.float64).eps
    if E.kind == "schatten" and E.p is not None and E.p < 1:
        p = float(E.p)
        return float((1.0 + (n - 1) * floor ** p) ** (1.0 / p) - 1.0)
    return float(n * floor)


def operator_norm(x: Matrix) -> float:
    s = singular_values(x)
    return float(s[0]) if s.size else 0.0


def frobenius_norm(x: Matrix) -> float:
    return float(np.linalg.norm(np.asarray(x)))


def modulus(x: Matrix) -> Matrix:
    """|x| = (x* x)^(1/2) = v diag(s) v*."""
    _, s, vh = svd(x)
    v = adjoint(vh)
    return (v * s) @ vh


def ideal_norm(E: SpaceSpec, x: Matrix) -> float:
    """||x||_{C_E} = ||s(x)||_E."""
    return seq_norm(E, singular_values(x))


def commutator(a: Matrix, x: Matrix) -> Matrix:
    """[a, x] = ax - xa."""
    a = np.asarray(a, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128)
    if a.shape != x.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"commutator needs equal square shapes, got {a.shape} and {x.shape}")
    return a @ x - x @ a


def diagonal(xi: SequenceLike) -> Matrix:
    """Diagonal operator x_xi with xi on the diagonal."""
    values = np.asarray(list(xi) if not isinstance(xi, np.ndarray) else xi)
    if values.ndim != 1 or values.size == 0:
        raise InvalidArgumentError("diagonal needs a non-empty one-dimensional sequence")
    return np.diag(values.astype(np.complex128))


def check_sv_sum(x: Matrix, y: Matrix) -> Tuple[bool, float]:
    """s(x + y) <= sigma_2(s(x) + s(y)) on the first n indices."""
    lhs = singular_values(np.asarray(x) + np.asarray(y))
    rhs = dilate(singular_values(x) + singular_values(y), 2)
    margin = float(np.min(rhs[: lhs.size] - lhs))
    return margin >= -SLACK_TOL, margin


def check_sv_product(x: Matrix, y: Matrix) -> Tuple[bool, float]:
    """s(xy) <= sigma_2(s(x) s(y)) on the first n indices."""
    lhs = singular_values(np.asarray(x) @ np.asarray(y))
    rhs = dilate(singular_values(x) * singular_values(y), 2)
    margin = float(np.min(rhs[: lhs.size] - lhs))
    return margin >= -SLACK_TOL, margin


def check_diagonal_commuting_p_convexity(E: SpaceSpec, family: Tuple[Sequence, ...]) -> Tuple[bool, float]:
    """||(sum |x_i|^p)^(1/p)||_E <= (sum ||x_i||_E^p)^(1/p) for commuting diagonal x_i, E = Schatten(p)."""
    if E.kind != "schatten":
        raise InvalidArgumentError("p-convexity spot-check is defined for Schatten spaces only")
    p = float(E.p)  # type: ignore[arg-type]
    arrays = [np.abs(as_sequence(f)) for f in family]
    n = max(a.size for a in arrays)
    stacked = np.stack([np.pad(a, (0, n - a.size)) for a in arrays])
    combined = np.sum(stacked ** p, axis=0) ** (1.0 / p)
    lhs = ideal_norm(E, diagonal(combined))
    rhs = float(np.sum([ideal_norm(E, diagonal(a)) ** p for a in arrays]) ** (1.0 / p))
    margin = rhs - lhs
    return margin >= -SLACK_TOL * max(1.0, rhs), margin

