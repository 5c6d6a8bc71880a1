"""Exact-arithmetic engine for divided-power Hopf algebras over F_p.

The package computes with graded-commutative algebras presented by generators
(exterior, polynomial, truncated polynomial, divided power), runs brute-force
Tor oracles through the reduced bar complex, enumerates admissible words and
their degree combinatorics, classifies multifold coproducts, and carries out
the two spectral-sequence computations the CLI exposes: the truncated-
polynomial page collapse and the mod-p obstruction check for hitting the
top polynomial classes with a d^2 differential.

Everything is exact: coefficients live in F_p for a runtime-chosen odd prime.
"""

__version__ = "0.1.0"
