"""The composition monoid of polynomial functions and its unit group,
materialized as explicit table sets at desk scale.

Orders always come from the closed formulas; enumeration over the canonical
coefficient lattice, when it fits the budget, is the independent oracle that
checks them.  The heavy lattice walk is vectorized, with the scalar
generator kept as the reference implementation.
"""

from __future__ import annotations

import bisect
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith, polyfun
from .arith import PrimeLevel
from .polyfun import CanonicalForm, FunctionTable, MonomialPoly

DEFAULT_BUDGET = 1 << 20

# Dense table storage caps out well before the element budget does.
_MAX_TABLE_ENTRIES = 1 << 28


class BudgetExceededError(RuntimeError):
    """An enumeration was requested whose element count exceeds the budget."""


def order_F(p: int, n: int) -> int:
    """Number of polynomial functions on Z/p^nZ: p**(beta(1)+...+beta(n))."""
    return p ** arith.beta_sum(p, n)


def order_G(p: int, n: int) -> int:
    """Number of polynomial permutations of Z/p^nZ.

    At level 1 every permutation of Z/pZ is polynomial, so this is p!.
    From level 2 on it is p! (p-1)^p p^p times p**beta(k) for each
    further level k.
    """
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    if n == 1:
        return math.factorial(p)
    tail = sum(arith.beta(p, k) for k in range(3, n + 1))
    return math.factorial(p) * (p - 1) ** p * p ** (p + tail)


def p_part_of_G(p: int, n: int) -> int:
    """Largest power of p dividing order_G(p, n), for n >= 2."""
    if n < 2:
        raise ValueError(f"defined for n >= 2, got {n}")
    tail = sum(arith.beta(p, k) for k in range(3, n + 1))
    return p ** (1 + p + tail)


def ideal_indices(p: int, n: int) -> tuple[int, int]:
    """Group indices of the two nested ideals of integer polynomials: those
    vanishing mod p**n at every integer, and the one generated by
    p**(n-k) (x^p - x)^k.  The indices agree exactly when n <= p."""
    index_vanishing = p ** arith.beta_sum(p, n)
    index_generated = p ** (p * n * (n + 1) // 2)
    return index_vanishing, index_generated


@dataclass(frozen=True, eq=False)
class CanonicalArrays:
    """Read-only vectorized view of every canonical vector of a context:
    lattice digits, lifted monomial coefficients, full tables, level-1
    tables, level-1 derivative tables, and the permutation mask."""

    ctx: PrimeLevel
    digits: np.ndarray
    monomial: np.ndarray
    tables: np.ndarray
    tables_mod_p: np.ndarray
    deriv_mod_p: np.ndarray
    perm_mask: np.ndarray


def _bijective_rows(a: np.ndarray) -> np.ndarray:
    width = a.shape[1]
    return (np.sort(a, axis=1) == np.arange(width, dtype=a.dtype)).all(axis=1)


@lru_cache(maxsize=4)
def canonical_arrays(ctx: PrimeLevel) -> CanonicalArrays:
    """Materialize every canonical vector of the context as numpy arrays.

    All arithmetic stays far below 2**63 (moduli are <= 2**16 and the basis
    change coefficients are small), so int64 is exact.
    """
    p, n, m = ctx.p, ctx.n, ctx.modulus
    mods = polyfun.canonical_moduli(ctx)
    width = len(mods)
    count = order_F(p, n)
    if count * m > _MAX_TABLE_ENTRIES:
        raise BudgetExceededError(
            f"{count} tables of length {m} exceed the storage cap"
        )

    idx = np.arange(count, dtype=np.int64)
    digits = np.empty((count, width), dtype=np.int64)
    div = 1
    for k, mk in enumerate(mods):
        digits[:, k] = idx // div % mk
        div *= mk

    basis = np.array(polyfun.falling_to_monomial_matrix(width), dtype=np.int64)
    monomial = digits @ basis % m

    xs = np.arange(m, dtype=np.int64)
    tables = np.zeros((count, m), dtype=np.int64)
    for i in range(width - 1, -1, -1):
        tables = (tables * xs + monomial[:, i : i + 1]) % m

    xs_p = np.arange(p, dtype=np.int64)
    coeffs_p = monomial % p
    tables_mod_p = np.zeros((count, p), dtype=np.int64)
    for i in range(width - 1, -1, -1):
        tables_mod_p = (tables_mod_p * xs_p + coeffs_p[:, i : i + 1]) % p

    dcoeffs = monomial[:, 1:] * np.arange(1, width, dtype=np.int64) % p
    deriv_mod_p = np.zeros((count, p), dtype=np.int64)
    for i in range(width - 2, -1, -1):
        deriv_mod_p = (deriv_mod_p * xs_p + dcoeffs[:, i : i + 1]) % p

    if n == 1:
        perm_mask = _bijective_rows(tables)
    else:
        perm_mask = _bijective_rows(tables_mod_p) & (deriv_mod_p != 0).all(axis=1)

    for a in (digits, monomial, tables, tables_mod_p, deriv_mod_p, perm_mask):
        a.flags.writeable = False
    return CanonicalArrays(ctx, digits, monomial, tables, tables_mod_p, deriv_mod_p, perm_mask)


def iter_canonical_polys(ctx: PrimeLevel):
    """Scalar walk of the canonical lattice, yielding (form, polynomial).

    Reference implementation for the vectorized arrays; use only at small
    scale.
    """
    for coeffs in itertools.product(
        *(range(mk) for mk in polyfun.canonical_moduli(ctx))
    ):
        form = CanonicalForm(coeffs, ctx)
        yield form, polyfun.canonical_lift(form)


def _sorted_tables(rows: np.ndarray, ctx: PrimeLevel) -> tuple[FunctionTable, ...]:
    values = sorted(map(tuple, rows.tolist()))
    return tuple(FunctionTable(v, ctx) for v in values)


@dataclass(frozen=True, eq=False)
class FnMonoid:
    """The monoid of polynomial functions at one level: its order, and the
    sorted element tables when they were enumerated."""

    ctx: PrimeLevel
    order: int
    elements: tuple[FunctionTable, ...] | None

    @property
    def enumerated(self) -> bool:
        return self.elements is not None

    def __contains__(self, table: FunctionTable) -> bool:
        if self.elements is None:
            raise BudgetExceededError("element set was not enumerated")
        i = bisect.bisect_left(self.elements, table.values, key=lambda t: t.values)
        return i < len(self.elements) and self.elements[i] == table


@dataclass(frozen=True, eq=False)
class GnGroup:
    """The group of polynomial permutations at one level; same layout as
    the monoid."""

    ctx: PrimeLevel
    order: int
    elements: tuple[FunctionTable, ...] | None

    @property
    def enumerated(self) -> bool:
        return self.elements is not None

    def __contains__(self, table: FunctionTable) -> bool:
        if self.elements is None:
            raise BudgetExceededError("element set was not enumerated")
        i = bisect.bisect_left(self.elements, table.values, key=lambda t: t.values)
        return i < len(self.elements) and self.elements[i] == table


@lru_cache(maxsize=16)
def enumerate_F(ctx: PrimeLevel, budget: int = DEFAULT_BUDGET) -> FnMonoid:
    """One table per canonical vector; order-only when over budget."""
    order = order_F(ctx.p, ctx.n)
    if order > budget:
        return FnMonoid(ctx, order, None)
    arrays = canonical_arrays(ctx)
    elements = _sorted_tables(arrays.tables, ctx)
    if len({t.values for t in elements}) != order:
        raise RuntimeError("canonical vectors produced duplicate tables")
    return FnMonoid(ctx, order, elements)


@lru_cache(maxsize=16)
def enumerate_G(ctx: PrimeLevel, budget: int = DEFAULT_BUDGET) -> GnGroup:
    """The permutation tables among enumerate_F; order-only when the
    underlying lattice walk exceeds the budget."""
    order = order_G(ctx.p, ctx.n)
    if order_F(ctx.p, ctx.n) > budget:
        return GnGroup(ctx, order, None)
    arrays = canonical_arrays(ctx)
    elements = _sorted_tables(arrays.tables[arrays.perm_mask], ctx)
    if len(elements) != order:
        raise RuntimeError(
            f"permutation count {len(elements)} disagrees with the formula {order}"
        )
    return GnGroup(ctx, order, elements)


def kernel_of_projection(
    ctx: PrimeLevel, budget: int = DEFAULT_BUDGET
) -> frozenset[FunctionTable]:
    """Permutations at the given level that project to the identity one
    level down.  The group-theoretic statement needs the lower level to be
    at least 2, so the given context must have n >= 3."""
    if ctx.n < 3:
        raise ValueError(f"kernel requires level >= 3, got {ctx.n}")
    if order_F(ctx.p, ctx.n) > budget:
        raise BudgetExceededError("kernel enumeration exceeds the budget")
    arrays = canonical_arrays(ctx)
    m_low = ctx.down().modulus
    identity = np.arange(m_low, dtype=np.int64)
    in_kernel = (arrays.tables[:, :m_low] % m_low == identity).all(axis=1)
    rows = arrays.tables[arrays.perm_mask & in_kernel]
    return frozenset(FunctionTable(tuple(r), ctx) for r in rows.tolist())


def projection_fiber_sizes(
    ctx: PrimeLevel, budget: int = DEFAULT_BUDGET
) -> Counter:
    """Counter of projected tables: fiber sizes of the monoid projection
    from the given level onto the one below."""
    if ctx.n < 2:
        raise ValueError(f"projection requires level >= 2, got {ctx.n}")
    if order_F(ctx.p, ctx.n) > budget:
        raise BudgetExceededError("fiber enumeration exceeds the budget")
    arrays = canonical_arrays(ctx)
    m_low = ctx.down().modulus
    projected = arrays.tables[:, :m_low] % m_low
    uniq, counts = np.unique(projected, axis=0, return_counts=True)
    return Counter(
        {tuple(row): int(c) for row, c in zip(uniq.tolist(), counts.tolist())}
    )


def level_summary(ctx: PrimeLevel, budget: int = DEFAULT_BUDGET) -> dict:
    """JSON-ready summary of one level: orders, whether elements were
    enumerated, and the kernel sizes p**beta(k) down the tower."""
    p, n = ctx.p, ctx.n
    return {
        "p": p,
        "n": n,
        "orderF": order_F(p, n),
        "orderG": order_G(p, n),
        "enumerated": order_F(p, n) <= budget,
        "kernelSizes": [p ** arith.beta(p, k) for k in range(3, n + 1)],
    }
