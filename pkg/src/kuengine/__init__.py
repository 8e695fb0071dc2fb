"""Connective complex K-theory of the mod-p Eilenberg-MacLane space K(Z/p, 2).

This package builds the closed-form answer charts (A_k, B_k, S_{k,l} and the
full even/odd-degree assemblies), replays the Adams spectral sequence that
produces them, and cross-checks everything against independent oracles:
a brute-force Ext computation over the (Q0, Q1) exterior subalgebra, Margolis
homology, the v-Bockstein relating the p-complete and mod-p theories, and
Poincare series bookkeeping for the summand that plays no role in the charts.
"""

__version__ = "0.1.0"
