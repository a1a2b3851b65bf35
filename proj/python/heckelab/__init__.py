"""Hecke orbits, p-adic spherical transforms, and covering experiments on H^n.

Thin python surface over the C++ core: exact integer linear algebra (det,
hnf_column, snf), Hecke coset enumeration and double-coset bucketing,
spherical transforms and normalized eigenvalues with an independent
symmetric-polynomial oracle, the symmetric space SL_n(R)/SO_n (distance,
reduction, ball volumes), and the covering/exponent pipeline.
"""

from heckelab._core import *  # noqa: F401,F403
from heckelab._core import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
