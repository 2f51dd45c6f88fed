"""Directed Ramsey numbers and TT_k-free tournament catalogs.

Submodules: ``tournament`` (bitset tournaments and invariants), ``encoder``
(CNF encodings), ``solver`` (external SAT solver harness), ``catalog``
(isomorph-free generation), ``artifacts`` (embedded certificates) and
``cli``.
"""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
