"""Series, matrices, polynomials and tree literals."""
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from renormalg import trees as T
from renormalg.errors import InstanceMismatchError, PreconditionError
from renormalg.filtered import fa_exp, fa_log
from renormalg.linalg import Matrix, rational_inverse, unipotent_inverse
from renormalg.polynomials import Polynomial
from renormalg.series import SeriesSpace

from conftest import rationals

seeds = st.integers(0, 10**6)


def q_space(order=5, unit=Fraction(1)):
    return SeriesSpace(order, lambda a, b: a * b, Fraction(0), unit, "q")


def test_series_truncated_product():
    sp = q_space(3)
    geo = sp.series([1, 1, 1, 1])
    assert geo * sp.series([1, -1]) == sp.one()


def test_series_exp_log():
    sp = q_space(6)
    t = sp.monomial(Fraction(1), 1)
    e = fa_exp(t, sp.carrier())
    assert e.coeffs == tuple(Fraction(1, f) for f in (1, 1, 2, 6, 24, 120, 720))
    assert fa_log(e, sp.carrier()) == t


def test_augmented_unit_and_shift():
    sp = SeriesSpace(3, lambda a, b: a * b, Fraction(0), None, "aug")
    one = sp.one()
    assert one.scalar == 1 and one.valuation() == 0
    x = sp.monomial(Fraction(2), 1)
    assert one * x == x == x * one
    assert x.shift(1) == sp.monomial(Fraction(2), 2)
    with pytest.raises(InstanceMismatchError):
        one.shift()


def test_series_spaces_must_match():
    with pytest.raises(InstanceMismatchError):
        q_space(3).one() + q_space(4).one()


def test_polynomial_calculus():
    p = Polynomial([1, 2, 3])
    assert p.integrate() == Polynomial([0, 1, 1, 1])
    assert p.integrate().derivative() == p
    assert p(Fraction(2)) == 17
    assert Polynomial.s(2) * Polynomial.s(3) == Polynomial.s(5)


@given(st.lists(rationals, max_size=4), st.lists(rationals, max_size=4), rationals)
def test_polynomial_evaluation_is_a_morphism(a, b, x):
    p, q = Polynomial(a), Polynomial(b)
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)


def test_matrix_shapes():
    m = Matrix([[1, 0], [3, 1]])
    assert m.is_unipotent_lower(Fraction(1)) and m.is_lower_triangular()
    assert not m.is_lower_triangular(strict=True)
    assert m.transpose().is_upper_triangular()
    with pytest.raises(PreconditionError):
        unipotent_inverse(Matrix([[2, 0], [0, 1]]), Fraction(1))


@given(seeds)
def test_inverses_agree(seed):
    rng = random.Random(seed)
    n = 4
    m = Matrix([[Fraction(1) if i == j else (Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if i > j else 0)
                 for j in range(n)] for i in range(n)])
    assert unipotent_inverse(m, Fraction(1)) == rational_inverse(m)
    assert m * rational_inverse(m) == Matrix.identity(n)


def test_tree_literals():
    assert T.parse_tree("*") == T.VERTEX
    ladder = T.parse_tree("[[*]]")
    assert T.size(ladder) == 3 and T.format_tree(ladder) == "[[*]]"
    assert T.parse_forest("1") == ()
    assert T.parse_forest("[*] *") == T.parse_forest("* [*]")
    assert T.format_tree(T.parse_tree("[* [*]]")) == T.format_tree(T.parse_tree("[[*] *]"))
    with pytest.raises(ValueError):
        T.parse_forest("[*")
