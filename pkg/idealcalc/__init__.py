"""idealcalc core package.

Numerical calculus for symmetric quasi-Banach ideals of compact operators at
finite matrix truncation. Ideal quasi-norms are computed from singular values
through the Calkin correspondence; multiplier (J-dual) norms and derivation
norms are estimated by supremum search and cross-checked against exact
oracles wherever one exists.

Design principles:
- Everything is finite: sequences are finite arrays, operators are dense
  complex n x n matrices
- Estimates are lower bounds by construction unless an exact oracle applies
- Deterministic for a fixed seed, regardless of worker count
"""

__all__ = [
    "core",
    "experiments",
]

__version__ = "0.1.0"
