import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renormalg import birkhoff as bk
from renormalg.convolution import (
    ConvolutionContext,
    LinMap,
    character_from_generators,
    conv_distance,
    conv_exp,
    conv_log,
    inf_character_from_generators,
    is_character,
    random_character,
    random_lie_element,
    valuation,
)
from renormalg.errors import PreconditionError
from renormalg.filtered import bch_full
from renormalg.hopf import POLY, ROOTED_FORESTS

P = ConvolutionContext(POLY, 4)
F = ConvolutionContext(ROOTED_FORESTS, 4)
seeds = st.integers(0, 10**6)
z = P.ring.parse


def test_preparation_examples():
    assert not bk.bogoliubov_prep(P.unit())
    phi = character_from_generators(P, {1: z("1/z")})
    prep = bk.bogoliubov_prep(phi)
    assert prep.values[1] == z("1/z")
    # phi(x^2) - 2/z^2 with phi(x^2) = 1/z^2
    assert prep.values[2] == z("-1/z^2")


def test_one_step_decomposition():
    phi = character_from_generators(P, {1: z("1/z")})
    pair = bk.birkhoff_decompose(phi)
    assert pair.minus.values[1] == z("-1/z")
    assert pair.plus.values[1] == P.ring.zero()
    assert pair.minus.values[2] == z("1/z^2")
    # φ(x) = 1/z has φ(x^n) = 1/z^n, so φ_- is its inverse and φ_+ = e
    assert pair.plus == P.unit()


def test_holomorphic_character_is_already_renormalized():
    phi = character_from_generators(P, {1: z("3 + z")})
    pair = bk.birkhoff_decompose(phi)
    assert pair.minus == P.unit() and pair.plus == phi


def test_series_first_order_term():
    phi = random_character(F, random.Random(2))
    first = F.unit() + bk.MS.P(F.unit() - phi)
    pair = bk.birkhoff_decompose(phi)
    for k in F.keys:
        if ROOTED_FORESTS.degree(k) == 1:
            assert first.values[k] == pair.minus.values[k]
    assert bk.bogoliubov_series(F.unit(), bk.MS) == F.unit()


def test_commutative_chi_is_identity():
    a = inf_character_from_generators(P, {1: z("1/z + 1")})
    lie = random_lie_element(P, random.Random(4))
    assert bk.chi(lie) == lie
    assert bk.chi_theta(lie, 2) == lie
    assert bk.chi(a, bk.ZERO_SCHEME) == a


def test_zero_projector_on_forests():
    a = random_lie_element(F, random.Random(9))
    assert bk.chi(a, bk.ZERO_SCHEME) == a


def test_identity_projector_forms_agree():
    a = random_lie_element(F, random.Random(10))
    assert bk.chi_compact(a, bk.IDENTITY_SCHEME) == bk.chi(a, bk.IDENTITY_SCHEME)


def test_bch_factorization_examples():
    pair = bk.bch_factorize(P.zero())
    assert (pair.minus, pair.plus) == (P.unit(), P.unit())
    a = inf_character_from_generators(P, {1: z("1/z")})
    assert bk.bch_factorize(a).minus.values[1] == z("-1/z")


def test_chi_needs_lie_input():
    with pytest.raises(PreconditionError):
        bk.chi(F.unit())


def test_theta_minus_one_matches_chi():
    a = random_lie_element(F, random.Random(11))
    assert bk.chi_theta(a, -1) == bk.chi(a)


@given(seeds)
@settings(max_examples=15)
def test_decomposition_on_random_forest_characters(seed):
    phi = random_character(F, random.Random(seed))
    pair = bk.birkhoff_decompose(phi)
    assert all(bk.check_birkhoff_pair(phi, pair).values())
    assert is_character(pair.minus) and is_character(pair.plus)
    assert bk.bogoliubov_series(phi, bk.MS, "minus") == pair.minus
    assert bk.bogoliubov_series(phi, bk.MS, "plus") == pair.plus
    assert bk.bogoliubov_series(phi, bk.MS, "plus-inverse") == pair.plus
    assert pair.minus * (phi - F.unit()) == bk.bogoliubov_prep(phi)


@given(seeds)
@settings(max_examples=15)
def test_bch_route_identifies_factors(seed):
    phi = random_character(F, random.Random(seed))
    pair = bk.birkhoff_decompose(phi)
    fac = bk.bch_factorize(conv_log(phi))
    assert (fac.minus, fac.plus) == (pair.minus, pair.plus)


@given(seeds)
@settings(max_examples=15)
def test_chi_fixed_point_and_inverse(seed):
    a = random_lie_element(F, random.Random(seed))
    c = bk.chi(a)
    assert not bk.chi_residual(a, c)
    assert bch_full(bk.MS.P(c), bk.MS.Ptilde(c), F.carrier) == a
    assert bk.chi_inverse(c) == a and bk.chi(bk.chi_inverse(a)) == a
    assert bk.chi_compact(a) == c


@given(seeds, st.integers(1, 2))
@settings(max_examples=15)
def test_chi_correction_doubles_valuation(seed, i):
    a = random_lie_element(F, random.Random(seed), i)
    assert valuation(bk.chi(a) - a) >= 2 * i


@given(seeds)
@settings(max_examples=15)
def test_inverse_map_does_not_shrink_distance(seed):
    rng = random.Random(seed)
    a, b = random_lie_element(F, rng), random_lie_element(F, rng, rng.randint(1, 3))
    b = a + b
    assert conv_distance(bk.chi_inverse(a), bk.chi_inverse(b)) >= conv_distance(a, b)


@given(seeds, st.sampled_from([-1, 1, 2, "1/2"]))
@settings(max_examples=15)
def test_weighted_factorization(seed, theta):
    from fractions import Fraction
    theta = Fraction(theta)
    a = random_lie_element(F, random.Random(seed))
    c = bk.chi_theta(a, theta)
    assert bk.theta_factorization_holds(a, c, bk.MS.P, theta, F.carrier)


@given(seeds)
@settings(max_examples=10)
def test_noncommutative_spitzer(seed):
    alpha = random_lie_element(F, random.Random(seed))
    lhs = bk.bogoliubov_series(F.unit() - alpha, bk.MS, "minus")
    assert lhs == conv_exp(-bk.MS.P(bk.chi(conv_log(F.unit() - alpha))))
