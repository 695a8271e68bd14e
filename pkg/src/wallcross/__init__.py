"""Toric GIT wall-crossing calculator.

Computes chamber and anticone combinatorics for toric GIT data, fixed-point
localization data, analytic-continuation coefficients of the associated
hypergeometric series, and the pull-push transform on localized equivariant
K-theory, together with numerical verification suites tying them together.
"""

__version__ = "0.1.0"
