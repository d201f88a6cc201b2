"""Sylow p-subgroups of the unit group H and their lifts up the tower.

Each Sylow subgroup of H is cut out by a descriptor: a cyclic order-p
subgroup C of the symmetric group together with a class, up to scalar, of
nowhere-zero functions phi.  The subgroup holds the pairs (f, f') with f in
C and f'(x) = phi(f(x)) / phi(x).  At levels n >= 2 the Sylow subgroups of
the polynomial permutation group are exactly the preimages of these under
the reduction onto H, so the same descriptors classify them.

Alongside the closed-form constructions, this module carries generic
brute-force oracles (subgroup closure, normalizers, conjugation orbits)
that recompute everything from first principles on enumerated groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

import numpy as np

from . import arith, fgroup, hgroup, polyfun
from .arith import PrimeLevel, inv_mod_p
from .fgroup import DEFAULT_BUDGET, BudgetExceededError
from .hgroup import EElement, e_compose, e_identity, from_raw, h_inverse
from .polyfun import FunctionTable, MonomialPoly

T = TypeVar("T", bound=Hashable)


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class CyclicSubgroup:
    """A cyclic order-p subgroup of the symmetric group on Z/pZ.

    The stored generator is the subgroup's unique element sending 0 to 1,
    which makes equal subgroups compare equal; powers list the p elements
    starting from the identity.
    """

    p: int
    generator: tuple[int, ...]
    powers: tuple[tuple[int, ...], ...]

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "CyclicSubgroup":
        p = len(perm)
        perm = tuple(perm)
        if sorted(perm) != list(range(p)):
            raise ValueError("not a permutation")
        powers = [tuple(range(p))]
        cur = perm
        while cur != powers[0]:
            powers.append(cur)
            cur = tuple(perm[v] for v in cur)
            if len(powers) > p:
                raise ValueError("permutation order exceeds p")
        if len(powers) != p:
            raise ValueError(f"permutation must have order exactly {p}")
        canonical = next(q for q in powers if q[0] == 1)
        ordered = [tuple(range(p))]
        cur = canonical
        while cur != ordered[0]:
            ordered.append(cur)
            cur = tuple(canonical[v] for v in cur)
        return cls(p, canonical, tuple(ordered))

    def __contains__(self, perm: tuple[int, ...]) -> bool:
        return perm in self.powers


@dataclass(frozen=True)
class PhiClass:
    """A nowhere-zero function on Z/pZ up to a nonzero scalar, represented
    by the unique member with value 1 at 0."""

    p: int
    phi: tuple[int, ...]

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "PhiClass":
        p = len(values)
        if any(v % p == 0 for v in values):
            raise ValueError("phi must be nowhere zero")
        scale = inv_mod_p(values[0] % p, p)
        return cls(p, tuple(v * scale % p for v in values))


@dataclass(frozen=True)
class SylowDescriptor:
    """A cyclic subgroup paired with a phi class; these pairs classify the
    Sylow p-subgroups."""

    cyclic: CyclicSubgroup
    phibar: PhiClass

    def __post_init__(self) -> None:
        if self.cyclic.p != self.phibar.p:
            raise ValueError("prime mismatch between components")

    @property
    def p(self) -> int:
        return self.cyclic.p


def standard_cycle(p: int) -> CyclicSubgroup:
    """The subgroup generated by x -> x + 1."""
    return CyclicSubgroup.from_permutation(tuple((x + 1) % p for x in range(p)))


def standard_descriptor(p: int) -> SylowDescriptor:
    """The standard cycle paired with the constant phi class."""
    return SylowDescriptor(standard_cycle(p), PhiClass.from_values((1,) * p))


def standard_sylow(p: int) -> frozenset[EElement]:
    """The subgroup of pairs (shift power, constant 1): order exactly p,
    which is the full p-part of |H|."""
    ones = (1,) * p
    return frozenset(
        from_raw(p, tuple((x + k) % p for x in range(p)), ones) for k in range(p)
    )


def descriptor_subgroup(d: SylowDescriptor) -> frozenset[EElement]:
    """The order-p subgroup a descriptor cuts out of H."""
    p = d.p
    phi = d.phibar.phi
    inv_phi = tuple(inv_mod_p(v, p) for v in phi)
    out = []
    for f in d.cyclic.powers:
        fprime = tuple(phi[f[x]] * inv_phi[x] % p for x in range(p))
        out.append(from_raw(p, f, fprime))
    return frozenset(out)


def enumerate_cyclic_subgroups(p: int) -> tuple[CyclicSubgroup, ...]:
    """All (p-2)! cyclic order-p subgroups, via their canonical generators:
    the p-cycles through 0 -> 1."""
    out = []
    for rest in permutations(range(2, p)):
        cycle = (0, 1) + rest
        one_line = [0] * p
        for i in range(p):
            one_line[cycle[i]] = cycle[(i + 1) % p]
        out.append(CyclicSubgroup.from_permutation(tuple(one_line)))
    return tuple(out)


def enumerate_phi_classes(p: int) -> tuple[PhiClass, ...]:
    """All (p-1)**(p-1) classes, each normalized to phi(0) = 1."""
    return tuple(
        PhiClass(p, (1,) + tail) for tail in product(range(1, p), repeat=p - 1)
    )


def sylow_count(p: int) -> int:
    """(p-1)! (p-1)**(p-2): the number of Sylow p-subgroups."""
    return math.factorial(p - 1) * (p - 1) ** (p - 2)


def enumerate_descriptors(
    p: int, budget: int = DEFAULT_BUDGET
) -> tuple[SylowDescriptor, ...]:
    count = sylow_count(p)
    if count > budget:
        raise BudgetExceededError(f"{count} descriptors exceed the budget {budget}")
    out = tuple(
        SylowDescriptor(c, phi)
        for c in enumerate_cyclic_subgroups(p)
        for phi in enumerate_phi_classes(p)
    )
    if len(out) != count:
        raise RuntimeError("descriptor count disagrees with the formula")
    return out


def normalizer_in_H(p: int) -> frozenset[EElement]:
    """Normalizer of the standard Sylow subgroup: pairs (g, g') with g
    affine of invertible slope and g' a nonzero constant; p(p-1)**2
    elements."""
    out = []
    for k in range(1, p):
        for c in range(p):
            g = tuple((k * x + c) % p for x in range(p))
            for m in range(1, p):
                out.append(from_raw(p, g, (m,) * p))
    return frozenset(out)


def normalizer_order(p: int) -> int:
    return p * (p - 1) ** 2


# ---------------------------------------------------------------------------
# conjugation


def conjugate(h: EElement, x: EElement) -> EElement:
    """h^{-1} x h via the generic compose and inverse plumbing."""
    return e_compose(e_compose(h_inverse(h), x), h)


def conjugate_standard(h: EElement, s: EElement) -> EElement:
    """Closed formula for conjugating a constant-derivative pair (f, 1):
    the first component becomes g^{-1} f g and the second
    g'(x) / g'((g^{-1} f g)(x))."""
    p = h.p
    if s.fprime.values != (1,) * p:
        raise ValueError("closed formula requires a constant derivative 1")
    g = h.f.values
    gp = h.fprime.values
    ginv = [0] * p
    for i, v in enumerate(g):
        ginv[v] = i
    f = s.f.values
    w = tuple(ginv[f[g[x]]] for x in range(p))
    second = tuple(gp[x] * inv_mod_p(gp[w[x]], p) % p for x in range(p))
    return from_raw(p, w, second)


def _conjugate_standard_raw(
    g: tuple[int, ...],
    gp: tuple[int, ...],
    ginv: tuple[int, ...],
    inv_gp: tuple[int, ...],
    f: tuple[int, ...],
    p: int,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    w = tuple(ginv[f[g[x]]] for x in range(p))
    return w, tuple(gp[x] * inv_gp[w[x]] % p for x in range(p))


@lru_cache(maxsize=8)
def brute_force_normalizer_H(p: int, budget: int = DEFAULT_BUDGET) -> frozenset[EElement]:
    """Normalizer of the standard Sylow subgroup recomputed from scratch:
    scan all of H for elements whose conjugation fixes the subgroup."""
    H = hgroup.enumerate_H(p, budget)
    cycles = tuple(tuple((x + k) % p for x in range(p)) for k in range(p))
    s_raw = {(c, (1,) * p) for c in cycles}
    inv_table = tuple(inv_mod_p(a, p) if a else 0 for a in range(p))
    out = []
    for h in H:
        g = h.f.values
        gp = h.fprime.values
        ginv = [0] * p
        for i, v in enumerate(g):
            ginv[v] = i
        ginv = tuple(ginv)
        inv_gp = tuple(inv_table[v] for v in gp)
        conj = {
            _conjugate_standard_raw(g, gp, ginv, inv_gp, c, p) for c in cycles
        }
        if conj == s_raw:
            out.append(h)
    return frozenset(out)


# ---------------------------------------------------------------------------
# intersections


def sylow_intersection_H(p: int, budget: int = DEFAULT_BUDGET) -> frozenset[EElement]:
    """Intersection of every Sylow p-subgroup of H.

    Computed literally, by intersecting all descriptor subgroups.  For odd
    p this collapses to the identity pair; at p = 2 the lone subgroup is H
    itself.  For p >= 5 the shortcut through two distinct cycle subgroups
    is checked against the literal intersection.
    """
    descriptors = enumerate_descriptors(p, budget)
    inter: set[EElement] | None = None
    for d in descriptors:
        sub = descriptor_subgroup(d)
        inter = set(sub) if inter is None else inter & sub
    assert inter is not None
    result = frozenset(inter)
    if p >= 5:
        if result != _intersection_fast_path(p):
            raise RuntimeError("shortcut and literal intersection disagree")
    return result


def _intersection_fast_path(p: int) -> frozenset[EElement]:
    """For p >= 5 there are at least two distinct cycle subgroups, which
    already intersect in the identity permutation alone; the derivative
    constraint then forces the constant 1."""
    cyclics = enumerate_cyclic_subgroups(p)
    if len(cyclics) < 2:
        raise ValueError("fast path needs at least two cyclic subgroups")
    common = set(cyclics[0].powers) & set(cyclics[1].powers)
    if common != {tuple(range(p))}:
        raise RuntimeError("distinct cycle subgroups intersected nontrivially")
    return frozenset({e_identity(p)})


# ---------------------------------------------------------------------------
# generic brute-force oracles


def closure(generators: Iterable[T], mul: Callable[[T, T], T]) -> frozenset[T]:
    """Multiplicative closure of a nonempty generating set in a finite
    group."""
    gens = list(generators)
    els = set(gens)
    frontier = list(els)
    while frontier:
        fresh = []
        for a in gens:
            for b in frontier:
                c = mul(a, b)
                if c not in els:
                    els.add(c)
                    fresh.append(c)
        frontier = fresh
    return frozenset(els)


def element_order(x: T, mul: Callable[[T, T], T], identity: T) -> int:
    order = 1
    y = x
    while y != identity:
        y = mul(y, x)
        order += 1
    return order


def order_p_subgroups(
    elements: Iterable[T], mul: Callable[[T, T], T], identity: T, p: int
) -> frozenset[frozenset[T]]:
    """Every subgroup of order p, found from its generators of order p."""
    subs = set()
    for x in elements:
        if x == identity:
            continue
        powers = [identity]
        y = x
        while y != identity:
            powers.append(y)
            y = mul(y, x)
            if len(powers) > p:
                break
        if len(powers) == p and y == identity:
            subs.add(frozenset(powers))
    return frozenset(subs)


def brute_force_normalizer(
    elements: Iterable[T],
    mul: Callable[[T, T], T],
    inv: Callable[[T], T],
    subgroup: frozenset[T],
) -> frozenset[T]:
    out = []
    for g in elements:
        gi = inv(g)
        if {mul(mul(gi, s), g) for s in subgroup} == subgroup:
            out.append(g)
    return frozenset(out)


def _has_p_power_order(
    x: T, mul: Callable[[T, T], T], identity: T, p: int, e: int
) -> bool:
    y = x
    for _ in range(e):
        acc = y
        for _ in range(p - 1):
            acc = mul(acc, y)
        y = acc
        if y == identity:
            return True
    return y == identity


def brute_force_sylow(
    elements: Sequence[T],
    mul: Callable[[T, T], T],
    inv: Callable[[T], T],
    identity: T,
    p: int,
) -> list[frozenset[T]]:
    """All Sylow p-subgroups of an enumerated group, from first principles.

    Grows one subgroup of full p-power order by repeatedly adjoining a
    p-power-order element of its normalizer, then takes the orbit of that
    subgroup under conjugation by the whole group.  The orbit size is
    checked against the index of the subgroup's normalizer.
    """
    order = len(elements)
    e = 0
    while order % p == 0:
        order //= p
        e += 1
    target = p**e
    sub: frozenset[T] = frozenset({identity})
    while len(sub) < target:
        grown = False
        for x in elements:
            if x in sub or not _has_p_power_order(x, mul, identity, p, e):
                continue
            xi = inv(x)
            if {mul(mul(xi, s), x) for s in sub} != sub:
                continue
            sub = closure(set(sub) | {x}, mul)
            grown = True
            break
        if not grown:
            raise RuntimeError("failed to grow a maximal p-subgroup")
    orbit = {sub}
    normalizer_size = 0
    for g in elements:
        gi = inv(g)
        conj = frozenset(mul(mul(gi, s), g) for s in sub)
        orbit.add(conj)
        if conj == sub:
            normalizer_size += 1
    if len(orbit) * normalizer_size != len(elements):
        raise RuntimeError("orbit size disagrees with the normalizer index")
    return list(orbit)


# ---------------------------------------------------------------------------
# lifts to level n


def _level1_membership_masks(
    arrays: fgroup.CanonicalArrays, d: SylowDescriptor
) -> np.ndarray:
    p = d.p
    cyc = np.array(d.cyclic.powers, dtype=np.int64)
    in_c = (arrays.tables_mod_p[:, None, :] == cyc[None, :, :]).all(axis=2).any(axis=1)
    phi = np.array(d.phibar.phi, dtype=np.int64)
    inv_phi = np.array([inv_mod_p(v, p) for v in d.phibar.phi], dtype=np.int64)
    ratio = phi[arrays.tables_mod_p] * inv_phi[np.newaxis, :] % p
    return in_c & (arrays.deriv_mod_p == ratio).all(axis=1)


@dataclass(frozen=True, eq=False)
class LiftedSylow:
    """A Sylow subgroup of the level-n permutation group, given by its
    descriptor's membership predicate plus the explicit tables when the
    level was enumerable."""

    descriptor: SylowDescriptor
    ctx: PrimeLevel
    order: int
    elements: tuple[FunctionTable, ...] | None

    def contains(self, f: MonomialPoly) -> bool:
        """Membership of the function induced by f: its mod-p table must
        lie in the cycle subgroup and its derivative must match the phi
        ratio.  Together these already force f to be a permutation."""
        if f.ctx != self.ctx:
            raise ValueError("context mismatch")
        p = self.ctx.p
        t1 = polyfun.table_mod_p(f).values
        if t1 not in self.descriptor.cyclic:
            return False
        phi = self.descriptor.phibar.phi
        expected = tuple(phi[t1[x]] * inv_mod_p(phi[x], p) % p for x in range(p))
        return polyfun.deriv_table_mod_p(f).values == expected


def lift_to_Gn(
    d: SylowDescriptor, ctx: PrimeLevel, budget: int = DEFAULT_BUDGET
) -> LiftedSylow:
    """The Sylow subgroup of the level-n permutation group lying over a
    descriptor; defined for n >= 2 only."""
    if ctx.p != d.p:
        raise ValueError("prime mismatch")
    if ctx.n < 2:
        raise ValueError("lifts exist at levels >= 2 only")
    order = fgroup.p_part_of_G(ctx.p, ctx.n)
    if fgroup.order_F(ctx.p, ctx.n) > budget:
        return LiftedSylow(d, ctx, order, None)
    arrays = fgroup.canonical_arrays(ctx)
    mask = _level1_membership_masks(arrays, d)
    rows = arrays.tables[mask]
    elements = fgroup._sorted_tables(rows, ctx)
    if len(elements) != order:
        raise RuntimeError(
            f"lift has {len(elements)} elements, formula says {order}"
        )
    return LiftedSylow(d, ctx, order, elements)


@dataclass(frozen=True, eq=False)
class CoreSubgroup:
    """The normal subgroup of level-n permutations reducing to the
    identity pair: mod-p table the identity, derivative constantly 1.  For
    odd p it is the intersection of all the lifted Sylow subgroups."""

    ctx: PrimeLevel
    order: int
    index: int
    elements: tuple[FunctionTable, ...] | None

    def contains(self, f: MonomialPoly) -> bool:
        if f.ctx != self.ctx:
            raise ValueError("context mismatch")
        p = self.ctx.p
        return (
            polyfun.table_mod_p(f).values == tuple(range(p))
            and polyfun.deriv_table_mod_p(f).values == (1,) * p
        )


def core_N(ctx: PrimeLevel, budget: int = DEFAULT_BUDGET) -> CoreSubgroup:
    """The kernel of the reduction of the level-n permutation group onto H."""
    if ctx.n < 2:
        raise ValueError("defined for levels >= 2 only")
    p, n = ctx.p, ctx.n
    tail = sum(arith.beta(p, k) for k in range(3, n + 1))
    order = p ** (p + tail)
    index = math.factorial(p) * (p - 1) ** p
    if fgroup.order_F(p, n) > budget:
        return CoreSubgroup(ctx, order, index, None)
    arrays = fgroup.canonical_arrays(ctx)
    identity_row = np.arange(p, dtype=np.int64)
    mask = (arrays.tables_mod_p == identity_row).all(axis=1) & (
        arrays.deriv_mod_p == 1
    ).all(axis=1)
    elements = fgroup._sorted_tables(arrays.tables[mask], ctx)
    if len(elements) != order:
        raise RuntimeError(f"core has {len(elements)} elements, formula says {order}")
    return CoreSubgroup(ctx, order, index, elements)


# ---------------------------------------------------------------------------
# reporting


def descriptor_json(d: SylowDescriptor) -> dict:
    return {"cycle": list(d.cyclic.generator), "phi": list(d.phibar.phi)}


def sylow_report(p: int, n: int, budget: int = DEFAULT_BUDGET) -> dict:
    """JSON-ready Sylow summary for one prime and level."""
    report: dict = {
        "p": p,
        "n": n,
        "subgroup_order_in_H": p,
        "count": sylow_count(p),
        "normalizer_order": normalizer_order(p),
    }
    if sylow_count(p) <= budget:
        descriptors = enumerate_descriptors(p, budget)
        report["descriptors"] = [descriptor_json(d) for d in descriptors]
        report["intersection_order"] = len(sylow_intersection_H(p, budget))
    else:
        report["descriptors"] = None
        report["intersection_order"] = None
    if n >= 2:
        core = core_N(PrimeLevel(p, n), budget)
        report["lift_order"] = fgroup.p_part_of_G(p, n)
        report["core"] = {"order": core.order, "index": core.index}
    else:
        report["lift_order"] = None
        report["core"] = None
    return report
