"""Exact arithmetic for polynomial functions and polynomial permutations
modulo prime powers, with enumeration oracles and a verification CLI."""

from .arith import PrimeLevel, alpha, beta, beta_sum, falling_eval, inv_mod_p, vp

__version__ = "0.1.0"

__all__ = [
    "PrimeLevel",
    "alpha",
    "beta",
    "beta_sum",
    "falling_eval",
    "inv_mod_p",
    "vp",
    "__version__",
]
