"""Certified proof engine for the two exceptional singular-moduli cases.

The package re-derives, with certified interval arithmetic and exact
algebra, every constant and bound needed to prove that 1, x^m, y^n are
linearly independent over Q when the discriminant pair of the singular
moduli x, y is {-92, -23} or {-124, -31}, and emits an auditable
certificate of the derivation.
"""

__version__ = "0.1.0"

from .balls import ComplexBall, PrecisionError, RealBall

__all__ = [
    "ComplexBall",
    "PrecisionError",
    "RealBall",
    "__version__",
]
