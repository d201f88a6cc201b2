"""Valuation arithmetic shared by every counting formula in the package.

Everything here is exact integer arithmetic: p-adic valuations, the
valuation-of-factorial function and its inverse, falling factorials
reduced modulo a prime power, and inverses modulo p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

SUPPORTED_PRIMES = (2, 3, 5, 7)

# Function tables are materialized as dense sequences of length p**n, so
# moduli are capped at a size that keeps every table comfortably in memory.
MAX_MODULUS = 1 << 16


def is_prime(m: int) -> bool:
    """Deterministic trial-division primality test."""
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")


def vp(p: int, m: int) -> int:
    """Largest e such that p**e divides m.

    Rejects m < 1; the valuation of 0 would be infinite.
    """
    _check_prime(p)
    if m < 1:
        raise ValueError(f"vp requires a positive integer, got {m}")
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


@lru_cache(maxsize=None)
def alpha(p: int, n: int) -> int:
    """Valuation of n! at p, computed as the finite sum of floor(n / p**k).

    The factorial itself is never formed; multiplying out n! is reserved
    for test oracles.
    """
    _check_prime(p)
    if n < 0:
        raise ValueError(f"alpha requires n >= 0, got {n}")
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


@lru_cache(maxsize=None)
def beta(p: int, n: int) -> int:
    """Least m with alpha(p, m) >= n, by linear scan with memoized alpha."""
    _check_prime(p)
    if n < 1:
        raise ValueError(f"beta requires n >= 1, got {n}")
    m = n
    while alpha(p, m) < n:
        m += 1
    return m


def beta_sum(p: int, n: int) -> int:
    """Sum of beta(p, k) for k = 1..n; the exponent of p in the count of
    polynomial functions at level n."""
    return sum(beta(p, k) for k in range(1, n + 1))


def falling_eval(x: int, k: int, modulus: int) -> int:
    """Value of x(x-1)...(x-k+1) reduced into [0, modulus).

    Reduces after every factor so intermediates stay below modulus**2.
    """
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    if not 0 <= x < modulus:
        raise ValueError(f"x must lie in [0, {modulus}), got {x}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    acc = 1 % modulus
    for i in range(k):
        acc = acc * ((x - i) % modulus) % modulus
    return acc


def inv_mod_p(a: int, p: int) -> int:
    """Multiplicative inverse of a nonzero residue modulo the prime p."""
    _check_prime(p)
    if not 0 <= a < p:
        raise ValueError(f"a must lie in [0, {p}), got {a}")
    if a == 0:
        raise ValueError("0 has no multiplicative inverse")
    return pow(a, -1, p)


@dataclass(frozen=True, order=True)
class PrimeLevel:
    """A prime p together with an exponent n, fixing the modulus p**n.

    Construction enforces the desk-scale bounds: p is one of the supported
    small primes and p**n fits in a dense table (p**n <= 2**16).
    """

    p: int
    n: int

    def __post_init__(self) -> None:
        if self.p not in SUPPORTED_PRIMES:
            _check_prime(self.p)
            raise ValueError(f"p must be one of {SUPPORTED_PRIMES}, got {self.p}")
        if self.n < 1:
            raise ValueError(f"level must be >= 1, got {self.n}")
        if self.p**self.n > MAX_MODULUS:
            raise ValueError(
                f"modulus {self.p}**{self.n} exceeds the table bound {MAX_MODULUS}"
            )

    @property
    def modulus(self) -> int:
        return self.p**self.n

    def down(self) -> "PrimeLevel":
        """The level directly below; rejects level 1."""
        if self.n == 1:
            raise ValueError("level 1 has no level below it")
        return PrimeLevel(self.p, self.n - 1)

    def __str__(self) -> str:
        return f"Z/{self.p}^{self.n}"
