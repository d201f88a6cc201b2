"""The chain-rule monoid on pairs of mod-p tables and its unit group H.

An element is a pair (f, f') of functions on Z/pZ; the names are purely
formal and the pair is stored extensionally as two tables.  Composition
follows the chain rule, (f, f') * (g, g') = (f o g, (f' o g) * g'), which
makes the map sending a level-2 polynomial function to (its mod-p table,
its derivative's mod-p table) a homomorphism.  H consists of the pairs
with f bijective and f' nowhere zero; it sits strictly between the
permutation groups at levels 1 and 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from . import arith, fgroup, polyfun
from .arith import PrimeLevel, inv_mod_p
from .fgroup import DEFAULT_BUDGET, BudgetExceededError
from .polyfun import FunctionTable, MonomialPoly


@dataclass(frozen=True)
class EElement:
    """A pair (f, f') of functions on Z/pZ under chain-rule composition."""

    f: FunctionTable
    fprime: FunctionTable

    def __post_init__(self) -> None:
        if self.f.ctx != self.fprime.ctx:
            raise ValueError("component context mismatch")
        if self.f.ctx.n != 1:
            raise ValueError("components must live at level 1")

    @property
    def p(self) -> int:
        return self.f.ctx.p

    @property
    def is_unit(self) -> bool:
        """Whether the pair is invertible: f bijective, f' nowhere zero."""
        return self.f.is_bijective and 0 not in self.fprime.values


# The units form the group H; they are ordinary EElement values and the
# operations that need invertibility validate it at call time.
HElement = EElement


def from_raw(p: int, f: tuple[int, ...], fprime: tuple[int, ...]) -> EElement:
    ctx = PrimeLevel(p, 1)
    return EElement(FunctionTable(f, ctx), FunctionTable(fprime, ctx))


def e_identity(p: int) -> EElement:
    """The identity pair: identity function, constant derivative 1."""
    ctx = PrimeLevel(p, 1)
    return EElement(polyfun.identity_table(ctx), polyfun.constant_table(ctx, 1))


def e_compose(a: EElement, b: EElement) -> EElement:
    """(f, f') after (g, g'): the pair (f o g, (f' o g) * g')."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    p = a.p
    g = b.f.values
    f_new = tuple(a.f.values[v] for v in g)
    fp_new = tuple(
        a.fprime.values[g[x]] * b.fprime.values[x] % p for x in range(p)
    )
    ctx = a.f.ctx
    return EElement(FunctionTable(f_new, ctx), FunctionTable(fp_new, ctx))


def h_inverse(a: EElement) -> EElement:
    """Inverse of a unit: (g^{-1}, 1 / (g' o g^{-1}))."""
    if not a.is_unit:
        raise ValueError("element is not a unit")
    p = a.p
    g = a.f.values
    ginv = [0] * p
    for x, v in enumerate(g):
        ginv[v] = x
    fp_inv = tuple(inv_mod_p(a.fprime.values[ginv[x]], p) for x in range(p))
    ctx = a.f.ctx
    return EElement(FunctionTable(tuple(ginv), ctx), FunctionTable(fp_inv, ctx))


def pair_mod_p(g: MonomialPoly) -> EElement:
    """The pair ([g] mod p, [g'] mod p) of a polynomial at level >= 2.

    Well-defined on the induced function: the level-2 reduction already
    determines both components.
    """
    if g.ctx.n < 2:
        raise ValueError("defined for levels >= 2")
    return EElement(polyfun.table_mod_p(g), polyfun.deriv_table_mod_p(g))


def theta(g: MonomialPoly) -> EElement:
    """The bridge from level-2 polynomial functions into the pair monoid."""
    if g.ctx.n != 2:
        raise ValueError(f"theta expects a level-2 context, got n={g.ctx.n}")
    return pair_mod_p(g)


def theta_of_table(t: FunctionTable) -> EElement:
    """theta evaluated on a level-2 table, via canonical interpolation.

    Independent of the polynomial route: the table alone determines the
    pair.  Raises ValueError when the table is not polynomial.
    """
    if t.ctx.n != 2:
        raise ValueError(f"expected a level-2 table, got n={t.ctx.n}")
    return theta(polyfun.canonical_lift(polyfun.canonical_of_table(t)))


def psi(e: EElement) -> FunctionTable:
    """Forget the derivative component: the pair maps onto its function."""
    return e.f


def order_H(p: int) -> int:
    """p! (p-1)^p: bijections times nowhere-zero derivative choices."""
    return math.factorial(p) * (p - 1) ** p


def order_E(p: int) -> int:
    """All pairs of functions on Z/pZ: p**(2p)."""
    return p ** (2 * p)


@lru_cache(maxsize=8)
def enumerate_H(p: int, budget: int = DEFAULT_BUDGET) -> tuple[EElement, ...]:
    """All units, sorted: every (bijection, nowhere-zero function) pair."""
    if order_H(p) > budget:
        raise BudgetExceededError(f"|H| = {order_H(p)} exceeds the budget {budget}")
    ctx = PrimeLevel(p, 1)
    out = []
    for perm in sorted(permutations(range(p))):
        f = FunctionTable(perm, ctx)
        for deriv in product(range(1, p), repeat=p):
            out.append(EElement(f, FunctionTable(deriv, ctx)))
    return tuple(out)


def element_json(e: EElement) -> dict:
    """Wire format: one-line permutation plus derivative value list."""
    return {"perm": list(e.f.values), "deriv": list(e.fprime.values)}


@dataclass(frozen=True, eq=False)
class ThetaFiberReport:
    """Fiber statistics of the level-2 bridge map over one prime."""

    p: int
    fiber_size: int
    fiber_count: int
    uniform: bool
    surjective: bool
    unit_preimage_count: int
    unit_preimage_is_G2: bool
    g2_kernel_size: int


def theta_fibers(p: int, budget: int = DEFAULT_BUDGET) -> ThetaFiberReport:
    """Group all level-2 polynomial functions by their pair image.

    Every fiber must have exactly p**p elements, the image must be the whole
    pair monoid, and the preimage of the units must be exactly the level-2
    permutation group.
    """
    ctx = PrimeLevel(p, 2)
    if fgroup.order_F(p, 2) > budget:
        raise BudgetExceededError("level-2 enumeration exceeds the budget")
    arrays = fgroup.canonical_arrays(ctx)
    pairs = np.concatenate([arrays.tables_mod_p, arrays.deriv_mod_p], axis=1)
    uniq, counts = np.unique(pairs, axis=0, return_counts=True)
    expected = p**p
    uniform = bool((counts == expected).all())

    unit_tables = {
        tuple(row) for row in arrays.tables[arrays.perm_mask].tolist()
    }
    g2 = fgroup.enumerate_G(ctx, budget)
    g2_values = {t.values for t in g2.elements}

    identity_pair = tuple(range(p)) + (1,) * p
    kernel_mask = (
        pairs == np.array(identity_pair, dtype=np.int64)
    ).all(axis=1) & arrays.perm_mask

    return ThetaFiberReport(
        p=p,
        fiber_size=expected,
        fiber_count=len(uniq),
        uniform=uniform,
        surjective=len(uniq) == order_E(p),
        unit_preimage_count=len(unit_tables),
        unit_preimage_is_G2=unit_tables == g2_values,
        g2_kernel_size=int(kernel_mask.sum()),
    )
