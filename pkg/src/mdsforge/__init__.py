"""Ultra-lightweight MDS diffusion matrices over rings of binary matrices.

Library layout:

- ``gf2``         polynomials, bit matrices, quotient rings F2[x]/(p)
- ``sympoly``     multivariate GF(2) polynomials and the symbolic MDS pre-check
- ``blockmat``    k x k matrices over a ring: MDS test, branch number, equivalence
- ``slp``         word-level linear straight-line programs, cost and depth
- ``treesearch``  exhaustive search for simplest implementation trees
- ``instantiate`` parameter assignment, lowest-cost and involutory catalogs
- ``catalogs``    bundled reference data
- ``cli``         command-line frontend
"""

from .gf2 import (
    BitMatrix,
    FormatError,
    NonUnitError,
    QuotientRing,
    RingElement,
    companion,
    is_invertible,
    poly_parse,
    poly_text,
    rank,
    ring,
    xor_count,
)

__all__ = [
    "BitMatrix",
    "FormatError",
    "NonUnitError",
    "QuotientRing",
    "RingElement",
    "companion",
    "is_invertible",
    "poly_parse",
    "poly_text",
    "rank",
    "ring",
    "xor_count",
]

__version__ = "0.1.0"
