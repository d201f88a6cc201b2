import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyperm.arith import PrimeLevel, beta
from polyperm.polyfun import (
    CanonicalForm,
    FunctionTable,
    MonomialPoly,
    canonical_lift,
    canonical_moduli,
    canonical_of_table,
    carlitz_decompose,
    carlitz_equal,
    carlitz_reconstruct,
    compose,
    constant_table,
    deriv_table_mod_p,
    falling_coeffs,
    falling_to_monomial_matrix,
    identity_table,
    is_permutation,
    is_zero_function,
    monomial_to_falling_matrix,
    project,
    table_inverse,
    table_mod_p,
    table_of,
    to_canonical,
)

SMALL_CONTEXTS = [PrimeLevel(2, 1), PrimeLevel(2, 2), PrimeLevel(3, 1)]


def monomial_corpus(ctx):
    """All polynomials with degree < beta(n) and coefficients < p**n."""
    width = beta(ctx.p, ctx.n)
    m = ctx.modulus
    for coeffs in itertools.product(range(m), repeat=width):
        yield MonomialPoly(coeffs, ctx)


def canonical_corpus(ctx):
    """All canonical vectors of the context."""
    for coeffs in itertools.product(*(range(mk) for mk in canonical_moduli(ctx))):
        yield CanonicalForm(coeffs, ctx)


def contexts_strategy():
    return st.sampled_from(
        [PrimeLevel(2, 1), PrimeLevel(2, 2), PrimeLevel(2, 3), PrimeLevel(3, 1),
         PrimeLevel(3, 2), PrimeLevel(5, 1)]
    )


def poly_strategy(ctx):
    return st.lists(
        st.integers(min_value=-(2**20), max_value=2**20), min_size=0, max_size=9
    ).map(lambda cs: MonomialPoly(tuple(cs), ctx))


# ---------------------------------------------------------------------------
# construction and normalization


def test_monomial_normalization():
    ctx = PrimeLevel(2, 2)
    f = MonomialPoly((5, -1, 4, 0, 0), ctx)
    assert f.coeffs == (1, 3)
    assert f.degree == 1
    zero = MonomialPoly((0, 0), ctx)
    assert zero.coeffs == ()
    assert zero.degree == -1
    assert table_of(zero).values == (0, 0, 0, 0)


def test_monomial_parse_and_format():
    ctx = PrimeLevel(3, 2)
    f = MonomialPoly.parse("0, 0, 1", ctx)
    assert f.coeffs == (0, 0, 1)
    assert str(f) == "0,0,1"
    assert str(MonomialPoly((), ctx)) == "0"
    assert MonomialPoly.parse("", ctx).coeffs == ()
    with pytest.raises(ValueError):
        MonomialPoly.parse("1,x", ctx)


def test_function_table_validation():
    ctx = PrimeLevel(2, 2)
    with pytest.raises(ValueError):
        FunctionTable((0, 1), ctx)
    with pytest.raises(ValueError):
        FunctionTable((0, 1, 2, 4), ctx)
    assert FunctionTable((0, 1, 2, 3), ctx).is_bijective
    assert not FunctionTable((0, 0, 1, 1), ctx).is_bijective


def test_canonical_form_validation():
    ctx = PrimeLevel(2, 2)
    assert canonical_moduli(ctx) == (4, 4, 2, 2)
    CanonicalForm((3, 3, 1, 1), ctx)
    with pytest.raises(ValueError):
        CanonicalForm((0, 0, 2, 0), ctx)  # slot 2 is only defined mod 2
    with pytest.raises(ValueError):
        CanonicalForm((0, 0, 0), ctx)  # wrong length


# ---------------------------------------------------------------------------
# tables and evaluation


def test_table_of_examples():
    assert table_of(MonomialPoly((0, 1), PrimeLevel(2, 2))).values == (0, 1, 2, 3)
    assert table_of(MonomialPoly((0, 0, 1), PrimeLevel(2, 2))).values == (0, 1, 0, 1)
    assert table_of(MonomialPoly((0, 0, 0, 1), PrimeLevel(3, 1))).values == (0, 1, 2)


def test_compose_examples():
    ctx = PrimeLevel(3, 1)
    ident = identity_table(ctx)
    g = table_of(MonomialPoly((1, 1), ctx))
    assert compose(ident, g) == g
    two_x = table_of(MonomialPoly((0, 2), ctx))
    assert compose(g, two_x).values == (1, 0, 2)  # x -> 2x + 1
    with pytest.raises(ValueError):
        compose(g, identity_table(PrimeLevel(3, 2)))


def test_compose_with_inverse_is_identity():
    ctx = PrimeLevel(2, 3)
    g = table_of(MonomialPoly((1, 3), ctx))
    assert g.is_bijective
    assert compose(g, table_inverse(g)) == identity_table(ctx)
    assert compose(table_inverse(g), g) == identity_table(ctx)


def test_project_examples():
    assert project(identity_table(PrimeLevel(2, 2))) == identity_table(PrimeLevel(2, 1))
    t = table_of(MonomialPoly((0, 0, 1), PrimeLevel(2, 2)))
    assert project(t).values == (0, 1)


def test_project_naturality():
    rng = random.Random(7)
    for high in [PrimeLevel(2, 3), PrimeLevel(3, 2), PrimeLevel(5, 2)]:
        low = high.down()
        for _ in range(25):
            coeffs = tuple(rng.randrange(high.modulus) for _ in range(6))
            f_high = MonomialPoly(coeffs, high)
            f_low = MonomialPoly(coeffs, low)
            assert project(table_of(f_high)) == table_of(f_low)


def test_project_rejects_non_congruence_preserving():
    ctx = PrimeLevel(2, 2)
    with pytest.raises(ValueError):
        project(FunctionTable((0, 0, 0, 1), ctx))
    with pytest.raises(ValueError):
        project(identity_table(PrimeLevel(2, 1)))  # no level below 1


# ---------------------------------------------------------------------------
# canonical form


def test_to_canonical_examples():
    ctx = PrimeLevel(2, 2)
    assert to_canonical(MonomialPoly((), ctx)).coeffs == (0, 0, 0, 0)
    # the basis polynomial x(x-1) itself
    assert to_canonical(MonomialPoly((0, -1, 1), ctx)).coeffs == (0, 0, 1, 0)
    # x^2 = (x)_2 + (x)_1
    assert to_canonical(MonomialPoly((0, 0, 1), ctx)).coeffs == (0, 1, 1, 0)


def test_roundtrip_exhaustive_small():
    for ctx in SMALL_CONTEXTS:
        for f in monomial_corpus(ctx):
            assert table_of(canonical_lift(to_canonical(f))) == table_of(f)


def test_uniqueness_exhaustive_p2():
    # Canonical vectors biject with tables for p = 2 up to level 3.
    for ctx in [PrimeLevel(2, 1), PrimeLevel(2, 2), PrimeLevel(2, 3)]:
        seen = {}
        for c in canonical_corpus(ctx):
            t = table_of(canonical_lift(c))
            assert t not in seen, (c, seen[t])
            seen[t] = c
        # every polynomial reduces onto one of these representatives
        for f in monomial_corpus(ctx):
            assert table_of(f) in seen
            assert to_canonical(f) == seen[table_of(f)]


@settings(max_examples=300)
@given(ctx=contexts_strategy(), data=st.data())
def test_roundtrip_random(ctx, data):
    f = data.draw(poly_strategy(ctx))
    lifted = canonical_lift(to_canonical(f))
    assert table_of(lifted) == table_of(f)
    assert lifted.degree < beta(ctx.p, ctx.n)


@settings(max_examples=200)
@given(ctx=contexts_strategy(), data=st.data())
def test_canonical_is_stable_under_representative_change(ctx, data):
    f = data.draw(poly_strategy(ctx))
    c = to_canonical(f)
    assert to_canonical(canonical_lift(c)) == c


def test_canonical_of_table_inverts_lift():
    rng = random.Random(11)
    for ctx in [PrimeLevel(2, 2), PrimeLevel(2, 3), PrimeLevel(3, 2), PrimeLevel(5, 1)]:
        mods = canonical_moduli(ctx)
        for _ in range(40):
            c = CanonicalForm(tuple(rng.randrange(mk) for mk in mods), ctx)
            assert canonical_of_table(table_of(canonical_lift(c))) == c


def test_canonical_of_table_counts_polynomial_tables():
    # At (2,2) exactly 64 of the 256 tables come from polynomials.
    ctx = PrimeLevel(2, 2)
    accepted = 0
    for vals in itertools.product(range(4), repeat=4):
        t = FunctionTable(vals, ctx)
        try:
            c = canonical_of_table(t)
        except ValueError:
            continue
        accepted += 1
        assert table_of(canonical_lift(c)) == t
    assert accepted == 64


def test_is_zero_function():
    assert is_zero_function(MonomialPoly((0, 1, 1), PrimeLevel(2, 1)))  # x^2 - x mod 2
    assert is_zero_function(MonomialPoly((0, -1, 0, 1), PrimeLevel(3, 1)))  # x^3 - x mod 3
    assert is_zero_function(MonomialPoly((0, 2, 2), PrimeLevel(2, 2)))  # 2(x^2 - x) mod 4
    assert not is_zero_function(MonomialPoly((1,), PrimeLevel(2, 2)))


def test_is_zero_function_agrees_with_tables():
    for ctx in SMALL_CONTEXTS:
        zero = constant_table(ctx, 0)
        for f in monomial_corpus(ctx):
            assert is_zero_function(f) == (table_of(f) == zero)


# ---------------------------------------------------------------------------
# layer decomposition


def test_carlitz_examples():
    ctx = PrimeLevel(2, 2)
    low = MonomialPoly((1, 1), ctx)
    assert carlitz_decompose(low).layers == (low,)
    # x^p = x + (x^p - x)
    xp = MonomialPoly((0, 0, 1), ctx)
    assert [l.coeffs for l in carlitz_decompose(xp).layers] == [(0, 1), (1,)]
    # x^3 = x + (x+1)(x^2 - x) at p = 2
    cube = MonomialPoly((0, 0, 0, 1), ctx)
    assert [l.coeffs for l in carlitz_decompose(cube).layers] == [(0, 1), (1, 1)]


@settings(max_examples=200)
@given(ctx=contexts_strategy(), data=st.data())
def test_carlitz_reconstruction_is_exact(ctx, data):
    f = data.draw(poly_strategy(ctx))
    cf = carlitz_decompose(f)
    assert all(layer.degree < ctx.p for layer in cf.layers)
    assert carlitz_reconstruct(cf) == f


def test_carlitz_equal_examples():
    ctx = PrimeLevel(2, 2)
    f = MonomialPoly((0, 0, 0, 1), ctx)
    assert carlitz_equal(f, f)
    g = MonomialPoly((0, -2, 2, 1), ctx)  # x^3 + 2(x^2 - x)
    assert carlitz_equal(f, g)
    assert table_of(f) == table_of(g)
    assert not carlitz_equal(MonomialPoly((0, 1), ctx), MonomialPoly((1, 1), ctx))


def test_carlitz_equal_requires_low_level():
    ctx = PrimeLevel(2, 3)  # n = 3 > p = 2
    f = MonomialPoly((0, 1), ctx)
    with pytest.raises(ValueError):
        carlitz_equal(f, f)
    with pytest.raises(ValueError):
        carlitz_equal(f, MonomialPoly((0, 1), PrimeLevel(2, 2)))


def test_carlitz_equal_agrees_with_table_equality():
    for ctx in [PrimeLevel(2, 1), PrimeLevel(2, 2), PrimeLevel(3, 1)]:
        by_table = {}
        for f in monomial_corpus(ctx):
            by_table.setdefault(table_of(f), []).append(f)
        reps = []
        for group in by_table.values():
            rep = group[0]
            reps.append(rep)
            for f in group:
                assert carlitz_equal(f, rep)
        rng = random.Random(5)
        for _ in range(200):
            a, b = rng.sample(reps, 2)
            assert not carlitz_equal(a, b)


def test_carlitz_equal_sampled_at_3_2():
    ctx = PrimeLevel(3, 2)
    rng = random.Random(17)
    for _ in range(400):
        coeffs = tuple(rng.randrange(9) for _ in range(6))
        f = MonomialPoly(coeffs, ctx)
        g = MonomialPoly(tuple(rng.randrange(9) for _ in range(6)), ctx)
        assert carlitz_equal(f, g) == (table_of(f) == table_of(g))
        # perturb f by something inducing zero: p^(n-1) * (x^p - x)
        h = MonomialPoly(coeffs + (0,) * 4, ctx)
        bump = [0, -3, 0, 3]  # 3(x^3 - x)
        bumped = MonomialPoly(
            tuple(c + (bump[i] if i < 4 else 0) for i, c in enumerate(coeffs)), ctx
        )
        assert carlitz_equal(h, bumped)


# ---------------------------------------------------------------------------
# derivatives and the permutation criterion


def test_deriv_table_examples():
    assert deriv_table_mod_p(MonomialPoly((0, 1), PrimeLevel(2, 2))).values == (1, 1)
    assert deriv_table_mod_p(MonomialPoly((0, 0, 1), PrimeLevel(3, 2))).values == (0, 2, 1)
    # derivative of x^p vanishes mod p
    assert deriv_table_mod_p(MonomialPoly((0, 0, 0, 1), PrimeLevel(3, 2))).values == (0, 0, 0)


def test_deriv_matches_layer_identity():
    # [f']_p equals [f_0' - f_1]_p where f_i are the layers along x^p - x.
    rng = random.Random(3)
    for ctx in [PrimeLevel(2, 2), PrimeLevel(3, 2), PrimeLevel(5, 1)]:
        p = ctx.p
        for _ in range(150):
            f = MonomialPoly(tuple(rng.randrange(ctx.modulus) for _ in range(8)), ctx)
            layers = carlitz_decompose(f).layers
            f0 = layers[0] if layers else MonomialPoly((), ctx)
            f1 = layers[1] if len(layers) > 1 else MonomialPoly((), ctx)
            d0 = deriv_table_mod_p(f0)
            t1 = table_mod_p(f1)
            expected = tuple((a - b) % p for a, b in zip(d0.values, t1.values))
            assert deriv_table_mod_p(f).values == expected


def test_is_permutation_examples():
    assert is_permutation(MonomialPoly((0, 1), PrimeLevel(2, 2)))
    assert not is_permutation(MonomialPoly((0, 0, 1), PrimeLevel(2, 2)))
    # x^3 permutes Z/3 but its derivative vanishes mod 3
    assert not is_permutation(MonomialPoly((0, 0, 0, 1), PrimeLevel(3, 2)))
    assert is_permutation(MonomialPoly((0, 0, 0, 1), PrimeLevel(3, 1)))


def test_is_permutation_agrees_with_bijectivity():
    # The derivative criterion versus plain bijectivity of the full table.
    for ctx in [PrimeLevel(2, 2), PrimeLevel(2, 3), PrimeLevel(3, 2), PrimeLevel(5, 1)]:
        for c in canonical_corpus(ctx):
            f = canonical_lift(c)
            assert is_permutation(f) == table_of(f).is_bijective


# ---------------------------------------------------------------------------
# basis matrices


def test_falling_coeffs():
    assert falling_coeffs(0) == (1,)
    assert falling_coeffs(1) == (0, 1)
    assert falling_coeffs(2) == (0, -1, 1)
    assert falling_coeffs(3) == (0, 2, -3, 1)


def test_basis_matrices_are_inverse():
    for size in (1, 2, 5, 8):
        down = falling_to_monomial_matrix(size)
        up = monomial_to_falling_matrix(size)
        for i in range(size):
            composed = [
                sum(up[i][k] * down[k][j] for k in range(size)) for j in range(size)
            ]
            assert composed == [1 if j == i else 0 for j in range(size)]


def test_matrix_conversion_matches_synthetic_division():
    # The matrix route must agree with to_canonical before reduction.
    ctx = PrimeLevel(3, 2)
    size = beta(3, 2)
    up = monomial_to_falling_matrix(size)
    mods = canonical_moduli(ctx)
    rng = random.Random(23)
    for _ in range(100):
        coeffs = [rng.randrange(9) for _ in range(size)]
        via_matrix = tuple(
            sum(coeffs[i] * up[i][k] for i in range(size)) % mods[k]
            for k in range(size)
        )
        assert to_canonical(MonomialPoly(tuple(coeffs), ctx)).coeffs == via_matrix
