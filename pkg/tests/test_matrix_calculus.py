import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renormalg import birkhoff as bk
from renormalg import matrix_calculus as mc
from renormalg import rota_baxter as rb
from renormalg.convolution import (
    ConvolutionContext,
    character_from_generators,
    random_character,
    random_lie_element,
)
from renormalg.errors import PreconditionError
from renormalg.hopf import POLY, ROOTED_FORESTS
from renormalg.linalg import Matrix
from renormalg.scalars import LaurentRing

seeds = st.integers(0, 10**6)
RING = LaurentRing(4, 4)


def setup(hopf, d):
    ctx = ConvolutionContext(hopf, d, LaurentRing(d, d))
    B = mc.coideal_basis(hopf, d)
    return ctx, B, mc.coproduct_matrix(B)


def laurent_matrix(rows, ring=RING):
    return Matrix([[ring.parse(e) for e in row] for row in rows], ring.zero())


def test_bases():
    assert mc.coideal_basis(POLY, 2).keys == (0, 1, 2)
    forests = mc.coideal_basis(ROOTED_FORESTS, 2).keys
    assert [ROOTED_FORESTS.format_key(k) for k in forests] == ["1", "*", "* *", "[*]"]
    assert mc.coideal_basis(POLY, 3).is_left_coideal()


def test_poly_coproduct_matrix():
    _, B, M = setup(POLY, 2)
    x = POLY.parse
    assert M == Matrix([[x("1"), POLY.element(), POLY.element()],
                        [x("x"), x("1"), POLY.element()],
                        [x("x^2"), x("x") * 2, x("1")]], POLY.element())


@pytest.mark.parametrize("hopf", [POLY, ROOTED_FORESTS], ids=["poly", "forest"])
def test_unipotent_and_antipode(hopf):
    ctx, B, M = setup(hopf, 4)
    assert M.is_unipotent_lower(hopf.one())
    assert mc.psi_hopf(hopf.antipode, B, M) * M == mc.hopf_identity(hopf, B.size)
    assert mc.psi(ctx.unit(), B, M) == Matrix.identity(B.size, ctx.ring.one(), ctx.ring.zero())
    assert mc.normal_coordinates(B, M).is_lower_triangular(strict=True)


def test_poly_psi_and_log():
    ctx, B, M = setup(POLY, 2)
    c = ctx.ring.parse("2/z + 3")
    hat = mc.psi(character_from_generators(ctx, {1: c}), B, M)
    one, zero = ctx.ring.one(), ctx.ring.zero()
    assert hat == Matrix([[one, zero, zero], [c, one, zero], [c * c, c * 2, one]], zero)
    assert mc.matrix_log(hat, ctx.ring)[1, 0] == c
    _, B1, M1 = setup(POLY, 1)
    L = mc.normal_coordinates(B1, M1)
    assert L == Matrix([[POLY.element(), POLY.element()], [POLY.parse("x"), POLY.element()]], POLY.element())


def test_entrywise_projectors():
    assert not mc.matrix_R(Matrix.identity(3, RING.one(), RING.zero()))
    m = laurent_matrix([["1/z + 1"]])
    assert mc.matrix_R(m) == laurent_matrix([["1/z"]])


@given(seeds)
def test_entrywise_polar_is_rota_baxter(seed):
    rng = random.Random(seed)
    inst = rb.laurent_ms(-1, RING)
    sample = lambda: Matrix([[inst.sample(rng) if i >= j else RING.zero() for j in range(3)]
                             for i in range(3)], RING.zero())
    x, y = sample(), sample()
    R = mc.matrix_R
    assert R(x) * R(y) == R(R(x) * y + x * R(y) - x * y)


def test_two_by_two_birkhoff():
    hat = laurent_matrix([["1", "0"], ["1/z", "1"]])
    res = mc.matrix_birkhoff(hat, RING)
    assert res.minus == laurent_matrix([["1", "0"], ["-1/z", "1"]])
    assert res.plus == Matrix.identity(2, RING.one(), RING.zero())
    assert res.passed


def test_holomorphic_matrix_has_trivial_counterterm():
    hat = laurent_matrix([["1", "0", "0"], ["2 + z", "1", "0"], ["z^2", "3", "1"]])
    res = mc.matrix_birkhoff(hat, RING)
    assert res.minus == Matrix.identity(3, RING.one(), RING.zero()) and res.plus == hat


def test_poly_example_matches_functional_birkhoff():
    ctx, B, M = setup(POLY, 2)
    phi = character_from_generators(ctx, {1: ctx.ring.parse("1/z")})
    res = mc.matrix_birkhoff(mc.psi(phi, B, M), ctx.ring)
    pair = bk.birkhoff_decompose(phi)
    assert (res.minus, res.plus) == (mc.psi(pair.minus, B, M), mc.psi(pair.plus, B, M))


def test_negated_holomorphic_substitution_misses_plus_factor():
    ctx, B, M = setup(POLY, 2)
    phi = character_from_generators(ctx, {1: ctx.ring.parse("1/z + 1")})
    hat = mc.psi(phi, B, M)
    res = mc.matrix_birkhoff(hat, ctx.ring)
    negated = mc.closed_form(hat, lambda x: -x.holomorphic(), ctx.ring)
    assert res.plus[2, 0] == ctx.ring.one()
    assert negated[2, 0] == ctx.ring.constant(3)
    assert res.checks["plus_closed_form"]


def test_bch_factorization_examples():
    zero = Matrix.zeros(3, RING.zero())
    ident = Matrix.identity(3, RING.one(), RING.zero())
    assert mc.matrix_bch_factorize(zero, RING) == (ident, ident)
    Z = laurent_matrix([["0", "0"], ["1/z + 2", "0"]])
    minus, plus = mc.matrix_bch_factorize(Z, RING)
    assert minus == laurent_matrix([["1", "0"], ["-1/z", "1"]])
    assert plus == laurent_matrix([["1", "0"], ["2", "1"]])
    with pytest.raises(PreconditionError):
        mc.matrix_bch_factorize(ident, RING)


def test_change_of_basis_conjugates():
    hopf, d = ROOTED_FORESTS, 3
    ctx = ConvolutionContext(hopf, d, LaurentRing(d, d))
    B = mc.coideal_basis(hopf, d)
    rng = random.Random(17)
    keys = B.keys
    n = len(keys)
    # mix in lower-degree monomials only, so the new basis stays filtration ordered
    T = Matrix([[Fraction(1) if i == j else
                 (Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                  if hopf.degree(keys[j]) < hopf.degree(keys[i]) else Fraction(0))
                 for j in range(n)] for i in range(n)])
    B2 = mc.coideal_basis(hopf, d, T)
    M, M2 = mc.coproduct_matrix(B), mc.coproduct_matrix(B2)
    lift = lambda m: m.map(ctx.ring.constant, ctx.ring.zero())
    Tl = lift(T)
    Tinv = lift(mc.rational_inverse(T))
    for _ in range(3):
        f = random_character(ctx, rng)
        assert mc.psi(f, B2, M2) == Tl * mc.psi(f, B, M) * Tinv


def test_non_coideal_rejected():
    keys = POLY.basis_upto(2)
    T = Matrix([[Fraction(1) if i == j else Fraction(0) for j in range(3)] for i in range(3)])
    T = T.map_indexed(lambda i, j, x: Fraction(1) if (i, j) == (0, 2) else x)
    with pytest.raises(PreconditionError):
        mc.coideal_basis(POLY, 2, T)


@given(seeds, st.sampled_from([POLY, ROOTED_FORESTS]), st.integers(1, 4))
@settings(max_examples=12)
def test_psi_is_homomorphism(seed, hopf, d):
    ctx, B, M = setup(hopf, d)
    rng = random.Random(seed)
    f = random_character(ctx, rng)
    g = random_lie_element(ctx, rng) + ctx.unit()
    assert mc.psi(f * g, B, M) == mc.psi(f, B, M) * mc.psi(g, B, M)


@given(seeds, st.integers(2, 4))
@settings(max_examples=10)
def test_matrix_birkhoff_against_functional(seed, d):
    ctx, B, M = setup(ROOTED_FORESTS, d)
    phi = random_character(ctx, random.Random(seed))
    hat = mc.psi(phi, B, M)
    res = mc.matrix_birkhoff(hat, ctx.ring)
    pair = bk.birkhoff_decompose(phi)
    assert res.passed, res.checks
    assert mc.psi(pair.minus, B, M) == res.minus and mc.psi(pair.plus, B, M) == res.plus
    assert mc.psi(bk.bogoliubov_prep(phi), B, M) == res.prep
    L = mc.normal_coordinates(B, M)
    assert mc.matrix_log(hat, ctx.ring) == L.map(phi.apply, ctx.ring.zero())


@given(seeds)
@settings(max_examples=10)
def test_bch_factorization_equals_recursion(seed):
    rng = random.Random(seed)
    ring = LaurentRing(6, 6)
    Z = Matrix([[ring.element({k: Fraction(rng.randint(-2, 2)) for k in (-1, 0, 1)}) if i > j else ring.zero()
                 for j in range(4)] for i in range(4)], ring.zero())
    res = mc.matrix_birkhoff(mc.matrix_exp(Z, ring), ring)
    assert mc.matrix_bch_factorize(Z, ring) == (res.minus, res.plus)
