import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from renormalg.errors import PreconditionError
from renormalg.filtered import bch, bch_full, commutator, fa_exp, fa_log
from renormalg.linalg import Matrix, nilpotent_carrier

N = 4
C = nilpotent_carrier(N)


def strictly_lower(rng, n=N):
    return Matrix([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if i > j else Fraction(0)
                    for j in range(n)] for i in range(n)])


seeds = st.integers(0, 10**6)


def test_exp_of_zero():
    assert fa_exp(Matrix.zeros(N), C) == Matrix.identity(N)


def test_square_zero_truncates():
    a = Matrix.zeros(N).map_indexed(lambda i, j, x: Fraction(5) if (i, j) == (3, 0) else x)
    assert a * a == Matrix.zeros(N)
    assert fa_exp(a, C) == Matrix.identity(N) + a


def test_exp_needs_positive_valuation():
    with pytest.raises(PreconditionError):
        fa_exp(Matrix.identity(N), C)


def test_bch_trivial_cases():
    x = strictly_lower(random.Random(3))
    assert bch(x, Matrix.zeros(N), C) == Matrix.zeros(N)
    assert bch(x, x * 2, C) == Matrix.zeros(N)


@given(seeds)
def test_log_exp_round_trip(seed):
    a = strictly_lower(random.Random(seed))
    assert fa_log(fa_exp(a, C), C) == a
    assert fa_exp(fa_log(Matrix.identity(N) + a, C), C) == Matrix.identity(N) + a


@given(seeds)
def test_bch_low_order_terms(seed):
    # products of four strictly lower 4x4 matrices vanish, so the series stops at degree 3
    rng = random.Random(seed)
    x, y = strictly_lower(rng), strictly_lower(rng)
    br = lambda a, b: commutator(a, b, C)
    expected = br(x, y) * Fraction(1, 2) + br(x, br(x, y)) * Fraction(1, 12) + br(y, br(y, x)) * Fraction(1, 12)
    assert bch(x, y, C) == expected
    assert bch_full(x, y, C) == x + y + expected


@given(seeds)
def test_exp_is_additive_on_commuting_pairs(seed):
    x = strictly_lower(random.Random(seed))
    y = x * x * 3 + x * Fraction(1, 2)
    assert fa_exp(x, C) * fa_exp(y, C) == fa_exp(x + y, C)
