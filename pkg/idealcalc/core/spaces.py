"""Registry of symmetric sequence-space quasi-norms.

Four families are registered: Schatten l_p (0 < p), Lorentz l_w^p and
Marcinkiewicz m_W^p (1 <= p, non-increasing positive weights) and the uniform
norm of c_0. Each carries its quasi-norm, its modulus of concavity and a
canonical textual form, e.g. ``schatten:p=0.5`` or
``lorentz:p=1:w=harmonic:n=64``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Tuple, Union

import numpy as np

from ..errors import InvalidArgumentError
from .sequences import (
    Sequence,
    SequenceLike,
    as_sequence,
    basis_vector,
    decreasing_rearrangement,
)

SpaceKind = Literal["schatten", "lorentz", "marcinkiewicz", "uniform"]
WHOLE_SPACE: Literal["whole-space"] = "whole-space"
WEIGHT_FAMILIES = ("harmonic", "power", "ones")


def weights(family: str, n: int, alpha: Optional[float] = None) -> Sequence:
    """Named weight families, all with w_1 = 1.

    harmonic: w_n = 1/n; power: w_n = n^-alpha with 0 < alpha < 1; ones: w_n = 1.
    """
    if n < 1:
        raise InvalidArgumentError(f"weight length must be >= 1, got {n}")
    idx = np.arange(1, n + 1, dtype=np.float64)
    if family == "harmonic":
        return 1.0 / idx
    if family == "power":
        if alpha is None or not 0.0 < alpha < 1.0:
            raise InvalidArgumentError(f"power weights need 0 < alpha < 1, got {alpha}")
        return idx ** (-float(alpha))
    if family == "ones":
        return np.ones(n, dtype=np.float64)
    raise InvalidArgumentError(f"unknown weight family {family!r}; expected one of {WEIGHT_FAMILIES}")


@dataclass(frozen=True)
class WeightSequence:
    w: Tuple[float, ...]

    def __post_init__(self) -> None:
        arr = np.asarray(self.w, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidArgumentError("weights must be a non-empty one-dimensional list")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise InvalidArgumentError("weights must be finite and strictly positive")
        if np.any(np.diff(arr) > 0):
            raise InvalidArgumentError("weights must be non-increasing")

    @property
    def array(self) -> Sequence:
        return np.asarray(self.w, dtype=np.float64)

    def partial_sums(self) -> Sequence:
        """W(j) = w_1 + ... + w_j."""
        return np.cumsum(self.array)

    def __len__(self) -> int:
        return len(self.w)


@dataclass(frozen=True)
class SpaceSpec:
    """Symbolic description of a symmetric sequence space.

    Build through the factories (``SpaceSpec.schatten(0.5)``, ...) or
    :func:`parse_space`. Instances are immutable and hashable.
    """

    kind: SpaceKind
    p: Optional[float] = None
    weights: Optional[WeightSequence] = None
    # Canonical text of the weights, e.g. "harmonic:n=64"; None for explicit lists.
    weight_label: Optional[str] = field(default=None, compare=False)
    unnormalized: bool = False

    def __post_init__(self) -> None:
        if self.kind == "schatten":
            if self.p is None or not (self.p > 0 and math.isfinite(self.p)):
                raise InvalidArgumentError(f"Schatten exponent must be a finite p > 0, got {self.p}")
            if self.weights is not None:
                raise InvalidArgumentError("Schatten spaces carry no weights")
        elif self.kind in ("lorentz", "marcinkiewicz"):
            if self.p is None or not (self.p >= 1 and math.isfinite(self.p)):
                raise InvalidArgumentError(f"{self.kind} exponent must be a finite p >= 1, got {self.p}")
            if self.weights is None:
                raise InvalidArgumentError(f"{self.kind} space needs a weight sequence")
            if not self.unnormalized and not math.isclose(self.weights.w[0], 1.0, rel_tol=0.0, abs_tol=1e-12):
                raise InvalidArgumentError(
                    f"{self.kind} weights must start at w_1 = 1 (got {self.weights.w[0]}); "
                    "pass unnormalized=True to allow general weights"
                )
        elif self.kind == "uniform":
            if self.p is not None or self.weights is not None:
                raise InvalidArgumentError("uniform space carries no parameters")
        else:
            raise InvalidArgumentError(f"unknown space kind {self.kind!r}")

    # -- factories -----------------------------------------------------------

    @classmethod
    def schatten(cls, p: float) -> "SpaceSpec":
        return cls(kind="schatten", p=float(p))

    @classmethod
    def uniform(cls) -> "SpaceSpec":
        return cls(kind="uniform")

    @classmethod
    def lorentz(cls, w: SequenceLike, p: float = 1.0, *, label: Optional[str] = None,
                unnormalized: bool = False) -> "SpaceSpec":
        return cls(kind="lorentz", p=float(p), weights=WeightSequence(tuple(as_sequence(w).tolist())),
                   weight_label=label, unnormalized=unnormalized)

    @classmethod
    def marcinkiewicz(cls, w: SequenceLike, p: float = 1.0, *, label: Optional[str] = None,
                      unnormalized: bool = False) -> "SpaceSpec":
        return cls(kind="marcinkiewicz", p=float(p), weights=WeightSequence(tuple(as_sequence(w).tolist())),
                   weight_label=label, unnormalized=unnormalized)

    # -- properties ----------------------------------------------------------

    @property
    def is_normalized(self) -> bool:
        return not self.unnormalized

    @property
    def capacity(self) -> Optional[int]:
        """Longest sequence the space can measure; None when unbounded."""
        return None if self.weights is None else len(self.weights)

    def canonical(self) -> str:
        if self.kind == "uniform":
            return "uniform"
        head = f"{self.kind}:p={_fmt(self.p)}"
        if self.kind == "schatten":
            return head
        assert self.weights is not None
        if self.weight_label:
            w = self.weight_label
        else:
            w = ",".join(_fmt(v) for v in self.weights.w)
        tail = ":unnormalized" if self.unnormalized else ""
        return f"{head}:w={w}{tail}"

    def __str__(self) -> str:
        return self.canonical()


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def parse_space(text: str) -> SpaceSpec:
    """Parse the canonical textual form.

    ``schatten:p=0.5``, ``uniform``, ``lorentz:p=1:w=harmonic:n=64``,
    ``marcinkiewicz:p=2:w=power:0.5:n=32``, ``lorentz:p=1:w=1,0.5,0.25``.
    A trailing ``:unnormalized`` admits weights with w_1 != 1.
    """
    tokens = [t.strip() for t in str(text).strip().split(":") if t.strip()]
    if not tokens:
        raise InvalidArgumentError("empty space spec")
    kind = tokens[0].lower()
    opts: dict = {}
    flags = set()
    last_key: Optional[str] = None
    for tok in tokens[1:]:
        if "=" in tok:
            key, _, value = tok.partition("=")
            last_key = key.strip().lower()
            opts[last_key] = value.strip()
        elif tok.lower() == "unnormalized":
            flags.add("unnormalized")
        elif last_key == "w":
            # power:alpha keeps its argument after a colon
            opts["w"] = f"{opts['w']}:{tok}"
        else:
            raise InvalidArgumentError(f"cannot parse token {tok!r} in space spec {text!r}")

    try:
        if kind == "uniform":
            if opts:
                raise InvalidArgumentError(f"uniform takes no parameters: {text!r}")
            return SpaceSpec.uniform()
        if "p" not in opts:
            raise InvalidArgumentError(f"missing p= in space spec {text!r}")
        p = float(opts["p"])
        if kind == "schatten":
            return SpaceSpec.schatten(p)
        if kind not in ("lorentz", "marcinkiewicz"):
            raise InvalidArgumentError(f"unknown space kind {kind!r}")
        if "w" not in opts:
            raise InvalidArgumentError(f"missing w= in space spec {text!r}")
        w, label = _parse_weights(opts["w"], opts.get("n"))
    except ValueError as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"bad number in space spec {text!r}: {exc}") from exc
    factory = SpaceSpec.lorentz if kind == "lorentz" else SpaceSpec.marcinkiewicz
    return factory(w, p, label=label, unnormalized="unnormalized" in flags)


def _parse_weights(w_text: str, n_text: Optional[str]) -> Tuple[Sequence, Optional[str]]:
    family, _, arg = w_text.partition(":")
    family = family.lower()
    if family in WEIGHT_FAMILIES:
        if n_text is None:
            raise InvalidArgumentError(f"weight family {family!r} needs n=")
        n = int(n_text)
        alpha = float(arg) if arg else None
        w = weights(family, n, alpha)
        label = f"{family}:{arg}:n={n}" if arg else f"{family}:n={n}"
        return w, label
    values = [float(v) for v in w_text.split(",") if v.strip()]
    if n_text is not None:
        raise InvalidArgumentError("n= is only valid with a named weight family")
    return as_sequence(values), None


def seq_norm(E: SpaceSpec, xi: SequenceLike) -> float:
    """Quasi-norm of xi in E, computed on the decreasing rearrangement."""
    s = decreasing_rearrangement(xi)
    if s.size == 0:
        return 0.0
    if E.kind == "uniform":
        return float(s[0])
    p = float(E.p)  # type: ignore[arg-type]
    top = s[0]
    if E.kind == "schatten":
        if top == 0.0:
            return 0.0
        # scale out the maximum to keep s**p away from under/overflow
        return float(top * np.sum((s / top) ** p) ** (1.0 / p))
    assert E.weights is not None
    if s.size > len(E.weights):
        raise InvalidArgumentError(
            f"{E.kind} space has {len(E.weights)} weights, sequence has length {s.size}"
        )
    if top == 0.0:
        return 0.0
    w = E.weights.array[: s.size]
    powers = (s / top) ** p
    if E.kind == "lorentz":
        return float(top * np.sum(powers * w) ** (1.0 / p))
    W = np.cumsum(w)
    return float(top * np.max(np.cumsum(powers) / W) ** (1.0 / p))


def concavity_modulus(E: SpaceSpec) -> float:
    """Least C with ||x + y|| <= C(||x|| + ||y||): 2^(1/p - 1) for Schatten p < 1, else 1."""
    if E.kind == "schatten" and E.p is not None and E.p < 1:
        return 2.0 ** (1.0 / E.p - 1.0)
    return 1.0


def dilation_bound(C: float, m: int) -> float:
    """Upper bound for ||sigma_m||_{E -> E} in terms of the concavity modulus.

    Splitting sigma_m(xi) into m disjoint copies of xi and peeling them off one
    at a time gives C + C^2 + ... + C^(m-1) + C^(m-1); for m = 2 that is 2C.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"dilation factor must be a positive integer, got {m}")
    m = int(m)
    if m == 1:
        return 1.0
    return float(sum(C ** k for k in range(1, m)) + C ** (m - 1))


def empirical_concavity(E: SpaceSpec, samples: int, rng: np.random.Generator, n: int = 8) -> float:
    """Sampled lower estimate of the modulus of concavity.

    The disjoint pair (e_1, e_2) is always included; for Schatten p < 1 it
    attains 2^(1/p - 1).
    """
    if E.capacity is not None:
        n = min(n, E.capacity)
    n = max(n, 2)
    e1, e2 = basis_vector(n, 0), basis_vector(n, 1)
    best = seq_norm(E, e1 + e2) / (seq_norm(E, e1) + seq_norm(E, e2))
    for _ in range(samples):
        xi = rng.standard_normal(n) * (rng.random(n) < 0.5)
        eta = rng.standard_normal(n) * (rng.random(n) < 0.5)
        denom = seq_norm(E, xi) + seq_norm(E, eta)
        if denom > 0:
            best = max(best, seq_norm(E, xi + eta) / denom)
    return float(best)


def analytic_multiplier_space(F: SpaceSpec, G: SpaceSpec) -> Union[SpaceSpec, Literal["whole-space"], None]:
    """Closed-form description of F : G where one is known.

    Schatten r : Schatten p is Schatten q with 1/q = 1/r - 1/p for r < p and the
    whole space for p <= r; Schatten p : Lorentz(w, p) is Marcinkiewicz(W, p).
    """
    if F == G:
        return WHOLE_SPACE
    if F.kind == "uniform":
        return WHOLE_SPACE
    if G.kind == "uniform":
        return F
    if F.kind == "schatten" and G.kind == "schatten":
        r, p = float(F.p), float(G.p)  # type: ignore[arg-type]
        if p <= r:
            return WHOLE_SPACE
        return SpaceSpec.schatten(1.0 / (1.0 / r - 1.0 / p))
    if F.kind == "schatten" and G.kind == "lorentz" and F.p == G.p:
        assert G.weights is not None
        return SpaceSpec(kind="marcinkiewicz", p=G.p, weights=G.weights,
                         weight_label=G.weight_label, unnormalized=G.unnormalized)
    return None


def registered_spaces(n: int = 64) -> Tuple[SpaceSpec, ...]:
    """Representative instances of every registered family."""
    return (
        SpaceSpec.schatten(0.5),
        SpaceSpec.schatten(2.0 / 3.0),
        SpaceSpec.schatten(1.0),
        SpaceSpec.schatten(2.0),
        parse_space(f"lorentz:p=1:w=harmonic:n={n}"),
        parse_space(f"lorentz:p=2:w=power:0.5:n={n}"),
        parse_space(f"marcinkiewicz:p=1:w=harmonic:n={n}"),
        parse_space(f"marcinkiewicz:p=2:w=harmonic:n={n}"),
        SpaceSpec.uniform(),
    )
