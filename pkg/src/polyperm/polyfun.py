"""Polynomial functions on Z/p^nZ in three representations.

A polynomial enters as a monomial coefficient list, gets a unique canonical
form in the falling-factorial basis (coefficient k reduced modulo
p**(n - alpha(k)), vector length beta(n)), and decomposes into layers along
powers of x**p - x.  The function a polynomial induces is a dense value
table, which is the notion of identity throughout: two polynomials are the
same element exactly when their tables agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import arith
from .arith import PrimeLevel


@dataclass(frozen=True)
class MonomialPoly:
    """Coefficient vector in the monomial basis, constant term first.

    Coefficients are reduced into [0, p**n) and trailing zeros trimmed, so
    the zero polynomial is the empty vector and degree is always len - 1.
    """

    coeffs: tuple[int, ...]
    ctx: PrimeLevel

    def __post_init__(self) -> None:
        m = self.ctx.modulus
        reduced = [c % m for c in self.coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        object.__setattr__(self, "coeffs", tuple(reduced))

    @property
    def degree(self) -> int:
        """Degree of the reduced coefficient vector; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def evaluate(self, x: int) -> int:
        m = self.ctx.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % m
        return acc

    def derivative(self) -> "MonomialPoly":
        return MonomialPoly(
            tuple(i * c for i, c in enumerate(self.coeffs) if i > 0), self.ctx
        )

    @classmethod
    def parse(cls, text: str, ctx: PrimeLevel) -> "MonomialPoly":
        """Parse a comma-separated coefficient list, constant term first."""
        text = text.strip()
        if not text:
            return cls((), ctx)
        try:
            coeffs = tuple(int(part.strip()) for part in text.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from None
        return cls(coeffs, ctx)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"


@dataclass(frozen=True)
class FunctionTable:
    """Dense value table of a function Z/p^nZ -> Z/p^nZ."""

    values: tuple[int, ...]
    ctx: PrimeLevel

    def __post_init__(self) -> None:
        m = self.ctx.modulus
        if len(self.values) != m:
            raise ValueError(
                f"table must have length {m}, got {len(self.values)}"
            )
        if any(not 0 <= v < m for v in self.values):
            raise ValueError("table entries must be residues in [0, modulus)")

    def __getitem__(self, x: int) -> int:
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_bijective(self) -> bool:
        return len(set(self.values)) == len(self.values)


@dataclass(frozen=True)
class CanonicalForm:
    """Falling-factorial coefficients of a polynomial function.

    Entry k is the coefficient of x(x-1)...(x-k+1), reduced modulo
    p**(n - alpha(k)); the vector has length beta(n).  These vectors are in
    bijection with the polynomial functions on Z/p^nZ.
    """

    coeffs: tuple[int, ...]
    ctx: PrimeLevel

    def __post_init__(self) -> None:
        p, n = self.ctx.p, self.ctx.n
        length = arith.beta(p, n)
        if len(self.coeffs) != length:
            raise ValueError(
                f"canonical vector must have length {length}, got {len(self.coeffs)}"
            )
        for k, a in enumerate(self.coeffs):
            bound = p ** (n - arith.alpha(p, k))
            if not 0 <= a < bound:
                raise ValueError(
                    f"coefficient {k} must lie in [0, {bound}), got {a}"
                )

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)


@dataclass(frozen=True)
class CarlitzForm:
    """Layers f_0, f_1, ... of the expansion f = sum f_m * (x^p - x)^m,
    each layer of degree below p."""

    layers: tuple[MonomialPoly, ...]
    ctx: PrimeLevel

    def __post_init__(self) -> None:
        for layer in self.layers:
            if layer.ctx != self.ctx:
                raise ValueError("layer context mismatch")
            if layer.degree >= self.ctx.p:
                raise ValueError("layers must have degree below p")


def canonical_moduli(ctx: PrimeLevel) -> tuple[int, ...]:
    """Per-coefficient moduli p**(n - alpha(k)) of the canonical form."""
    p, n = ctx.p, ctx.n
    return tuple(p ** (n - arith.alpha(p, k)) for k in range(arith.beta(p, n)))


def _divmod_linear(coeffs: list[int], a: int) -> tuple[list[int], int]:
    """Exact integer division of a polynomial by (x - a).

    Coefficients are constant term first; returns (quotient, remainder).
    """
    acc = 0
    out = []
    for c in reversed(coeffs):
        acc = acc * a + c
        out.append(acc)
    quotient = out[:-1][::-1]
    return quotient, out[-1]


def _mul_linear_add(poly: list[int], a: int, add: int, m: int) -> list[int]:
    """(x - a) * poly + add, coefficients mod m, constant term first."""
    out = [0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] = (out[i + 1] + c) % m
        out[i] = (out[i] - a * c) % m
    out[0] = (out[0] + add) % m
    while out and out[-1] == 0:
        out.pop()
    return out


def _divmod_monic(num: list[int], div: list[int], m: int) -> tuple[list[int], list[int]]:
    """Division with remainder by a monic divisor, coefficients mod m."""
    rem = [c % m for c in num]
    dn = len(div) - 1
    quo = [0] * max(0, len(rem) - dn)
    for i in range(len(rem) - 1, dn - 1, -1):
        c = rem[i]
        if c:
            quo[i - dn] = c
            for j, d in enumerate(div):
                rem[i - dn + j] = (rem[i - dn + j] - c * d) % m
    del rem[dn:]
    while rem and rem[-1] == 0:
        rem.pop()
    while quo and quo[-1] == 0:
        quo.pop()
    return quo, rem


def table_of(f: MonomialPoly) -> FunctionTable:
    """The function induced by f, by Horner evaluation at every residue."""
    return FunctionTable(
        tuple(f.evaluate(x) for x in range(f.ctx.modulus)), f.ctx
    )


def table_mod_p(f: MonomialPoly) -> FunctionTable:
    """The function induced by f on Z/pZ (context reduced to level 1)."""
    p = f.ctx.p
    values = []
    for x in range(p):
        acc = 0
        for c in reversed(f.coeffs):
            acc = (acc * x + c) % p
        values.append(acc)
    return FunctionTable(tuple(values), PrimeLevel(p, 1))


def deriv_table_mod_p(f: MonomialPoly) -> FunctionTable:
    """Table of the formal derivative of f on Z/pZ."""
    p = f.ctx.p
    dcoeffs = [i * c % p for i, c in enumerate(f.coeffs)][1:]
    values = []
    for x in range(p):
        acc = 0
        for c in reversed(dcoeffs):
            acc = (acc * x + c) % p
        values.append(acc)
    return FunctionTable(tuple(values), PrimeLevel(p, 1))


def to_canonical(f: MonomialPoly) -> CanonicalForm:
    """Unique canonical coefficient vector inducing the same function as f.

    Repeated synthetic division by (x - 0), (x - 1), ... expands f in the
    falling-factorial basis over the integers; coefficient k is then reduced
    modulo p**(n - alpha(k)).  The discarded multiples, and every coefficient
    of index >= beta(n), multiply falling factorials whose values are all
    divisible by p**n, so the induced function is unchanged.
    """
    ctx = f.ctx
    raw = []
    cur = list(f.coeffs)
    k = 0
    while cur:
        cur, r = _divmod_linear(cur, k)
        raw.append(r)
        k += 1
    mods = canonical_moduli(ctx)
    reduced = tuple(
        (raw[k] if k < len(raw) else 0) % mods[k] for k in range(len(mods))
    )
    return CanonicalForm(reduced, ctx)


def canonical_lift(c: CanonicalForm) -> MonomialPoly:
    """The monomial-basis polynomial with falling-factorial coefficients c."""
    m = c.ctx.modulus
    poly: list[int] = []
    for k in range(len(c.coeffs) - 1, -1, -1):
        poly = _mul_linear_add(poly, k, c.coeffs[k], m)
    return MonomialPoly(tuple(poly), c.ctx)


def canonical_of_table(t: FunctionTable) -> CanonicalForm:
    """Canonical form of the polynomial inducing the table t.

    Solves the triangular system t(x) = sum a_k (x)_k at x = 0..beta(n)-1;
    at step k the coefficient of a_k is k!, whose p-part p**alpha(k) must
    divide the running residue.  Raises ValueError when t is induced by no
    polynomial (either a divisibility obstruction or a mismatch at one of
    the remaining points).
    """
    ctx = t.ctx
    p, n, m = ctx.p, ctx.n, ctx.modulus
    mods = canonical_moduli(ctx)
    coeffs: list[int] = []
    factorial = 1
    for k in range(len(mods)):
        if k > 0:
            factorial *= k
        acc = t.values[k]
        for j, a in enumerate(coeffs):
            acc -= a * arith.falling_eval(k, j, m)
        acc %= m
        e = arith.alpha(p, k)
        pe = p**e
        if acc % pe:
            raise ValueError("table is not induced by any polynomial")
        unit = factorial // pe
        coeffs.append(acc // pe * pow(unit, -1, mods[k]) % mods[k])
    candidate = CanonicalForm(tuple(coeffs), ctx)
    if table_of(canonical_lift(candidate)) != t:
        raise ValueError("table is not induced by any polynomial")
    return candidate


def is_zero_function(f: MonomialPoly) -> bool:
    """Whether f induces the zero function, read off the canonical form."""
    return to_canonical(f).is_zero


def carlitz_decompose(f: MonomialPoly) -> CarlitzForm:
    """Layers of f along powers of x**p - x, by repeated division.

    The divisor is monic, so division with remainder is exact modulo p**n
    and the layers are unique.
    """
    ctx = f.ctx
    p, m = ctx.p, ctx.modulus
    divisor = [0] * (p + 1)
    divisor[1] = (-1) % m
    divisor[p] = 1
    layers = []
    cur = list(f.coeffs)
    while cur:
        cur, rem = _divmod_monic(cur, divisor, m)
        layers.append(MonomialPoly(tuple(rem), ctx))
    return CarlitzForm(tuple(layers), ctx)


def carlitz_reconstruct(cf: CarlitzForm) -> MonomialPoly:
    """Sum the layers back: f = sum f_m * (x^p - x)^m."""
    ctx = cf.ctx
    p, m = ctx.p, ctx.modulus
    acc: list[int] = []
    for layer in reversed(cf.layers):
        # acc = acc * (x^p - x) + layer
        shifted = [0] * (len(acc) + p)
        for i, c in enumerate(acc):
            shifted[i + p] = (shifted[i + p] + c) % m
            shifted[i + 1] = (shifted[i + 1] - c) % m
        for i, c in enumerate(layer.coeffs):
            if i < len(shifted):
                shifted[i] = (shifted[i] + c) % m
            else:
                shifted.append(c)
        acc = shifted
    return MonomialPoly(tuple(acc), ctx)


def carlitz_equal(f: MonomialPoly, g: MonomialPoly) -> bool:
    """Layer-wise congruence test, valid only for level n <= p.

    Layer k is compared coefficientwise modulo p**(n - k) for k < n.  For
    n > p this relation is strictly finer than equality of induced
    functions, so the call is rejected.
    """
    if f.ctx != g.ctx:
        raise ValueError("context mismatch")
    ctx = f.ctx
    p, n = ctx.p, ctx.n
    if n > p:
        raise ValueError(f"layer comparison requires n <= p, got n={n}, p={p}")
    lf = carlitz_decompose(f).layers
    lg = carlitz_decompose(g).layers
    for k in range(n):
        mod = p ** (n - k)
        a = lf[k].coeffs if k < len(lf) else ()
        b = lg[k].coeffs if k < len(lg) else ()
        width = max(len(a), len(b))
        for i in range(width):
            ai = a[i] if i < len(a) else 0
            bi = b[i] if i < len(b) else 0
            if (ai - bi) % mod:
                return False
    return True


def is_permutation(f: MonomialPoly) -> bool:
    """Whether f induces a permutation of Z/p^nZ.

    At level 1 this is plain bijectivity of the table.  At level n >= 2 the
    classical criterion applies: f must permute Z/pZ and its derivative must
    have no zero mod p.  Exhaustive bijectivity of the full table is the
    test oracle for this criterion.
    """
    if f.ctx.n == 1:
        return table_of(f).is_bijective
    return table_mod_p(f).is_bijective and 0 not in deriv_table_mod_p(f).values


def compose(f: FunctionTable, g: FunctionTable) -> FunctionTable:
    """Composition f after g: x -> f(g(x))."""
    if f.ctx != g.ctx:
        raise ValueError("context mismatch")
    return FunctionTable(tuple(f.values[v] for v in g.values), f.ctx)


def project(t: FunctionTable) -> FunctionTable:
    """Reduce a table one level: x -> t(x) mod p**(n-1).

    Well-defined only when t maps congruent arguments to congruent values,
    which holds for every polynomial table; arbitrary tables are checked and
    rejected otherwise.
    """
    ctx = t.ctx
    low = ctx.down()
    m_low = low.modulus
    values = tuple(v % m_low for v in t.values[:m_low])
    for x in range(m_low, ctx.modulus):
        if t.values[x] % m_low != values[x % m_low]:
            raise ValueError(
                "table does not preserve congruences; projection undefined"
            )
    return FunctionTable(values, low)


def identity_table(ctx: PrimeLevel) -> FunctionTable:
    return FunctionTable(tuple(range(ctx.modulus)), ctx)


def constant_table(ctx: PrimeLevel, value: int) -> FunctionTable:
    return FunctionTable((value % ctx.modulus,) * ctx.modulus, ctx)


def table_inverse(t: FunctionTable) -> FunctionTable:
    """Inverse of a bijective table."""
    if not t.is_bijective:
        raise ValueError("table is not bijective")
    values = [0] * len(t.values)
    for x, v in enumerate(t.values):
        values[v] = x
    return FunctionTable(tuple(values), t.ctx)


def falling_coeffs(k: int) -> tuple[int, ...]:
    """Integer monomial coefficients of x(x-1)...(x-k+1), constant first."""
    poly = [1]
    for i in range(k):
        shifted = [0] + poly
        poly = [s - i * c for s, c in zip(shifted, poly + [0])]
    return tuple(poly)


def falling_to_monomial_matrix(size: int) -> list[list[int]]:
    """Row k holds the monomial coefficients of (x)_k, padded to size."""
    rows = []
    for k in range(size):
        coeffs = list(falling_coeffs(k))
        rows.append(coeffs + [0] * (size - len(coeffs)))
    return rows


def monomial_to_falling_matrix(size: int) -> list[list[int]]:
    """Row i holds the falling-factorial coefficients of x**i.

    Entries are the Stirling partition numbers; row i of this matrix times
    the falling-factorial basis reproduces x**i exactly over the integers.
    """
    rows = [[0] * size for _ in range(size)]
    rows[0][0] = 1
    for i in range(1, size):
        for k in range(1, i + 1):
            rows[i][k] = k * rows[i - 1][k] + rows[i - 1][k - 1]
    return rows
