"""Classical orthogonal polynomials on quadratic and q-quadratic lattices.

Forward direction: divided-difference equation -> three-term recurrence.
Inverse direction: three-term recurrence -> divided-difference equation,
linear change of variable and leading-coefficient ratio.
"""

from .kernel import (
    Poly,
    RatFunc,
    Symbol,
    SymbolKind,
    SymbolTable,
    poly_gcd,
    ratfunc_normalize,
    substitute,
)

__version__ = "0.1.0"

__all__ = [
    "Poly",
    "RatFunc",
    "Symbol",
    "SymbolKind",
    "SymbolTable",
    "poly_gcd",
    "ratfunc_normalize",
    "substitute",
    "__version__",
]
