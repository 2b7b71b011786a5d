"""
Calculation engines for idealcalc.

Modules:
- sequences: decreasing rearrangement, dilation, rearrangement inequalities, isotonic projection
- spaces: symmetric sequence-space registry (Schatten, Lorentz, Marcinkiewicz, uniform)
- operators: singular values, ideal quasi-norms, singular-value inequalities
- ensembles: seeded random matrices and sequences
- search: restarted ratio ascent shared by the estimators
- multipliers: multiplier (J-dual) norms of sequences and operators
- derivations: inner derivations, norm sandwich, generator recovery
"""

from . import sequences, spaces, operators, ensembles, search, multipliers, derivations

__all__ = [
    "sequences",
    "spaces",
    "operators",
    "ensembles",
    "search",
    "multipliers",
    "derivations",
]
