from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from renormalg import trees as T
from renormalg.errors import PreconditionError
from renormalg.hopf import POLY, ROOTED_FORESTS, TensorElement, get_instance
from renormalg.verify import hopf_axiom_failures

F = ROOTED_FORESTS


def tensor(h, terms, legs=2):
    return TensorElement(h, legs, terms)


# ---------------------------------------------------------------- admissible-cut oracle


def _vertices(tree):
    """Flatten to (parent list, child lists) with vertex 0 as the root."""
    parent, children = [None], [[]]

    def walk(t, v):
        for c in t:
            w = len(parent)
            parent.append(v)
            children.append([])
            children[v].append(w)
            walk(c, w)
    walk(tree, 0)
    return parent, children


def _subtree(v, children, removed):
    return T.canonical_forest(_subtree(c, children, removed) for c in children[v] if c not in removed)


def cut_coproduct(tree):
    """Δ(t) by enumerating admissible cuts: no cut edge lies above another."""
    parent, children = _vertices(tree)
    n = len(parent)
    out = {((tree,), ()): 1}

    def below(v, w):
        while w is not None:
            if w == v:
                return True
            w = parent[w]
        return False

    for mask in product((0, 1), repeat=n - 1):
        cut = [v for v, m in zip(range(1, n), mask) if m]
        if any(a != b and below(a, b) for a in cut for b in cut):
            continue
        pruned = T.canonical_forest(_subtree(v, children, set()) for v in cut)
        trunk = _subtree(0, children, set(cut))
        legs = (pruned, (trunk,))
        out[legs] = out.get(legs, 0) + 1
    return out


@pytest.mark.parametrize("n", range(1, 6))
def test_tree_coproduct_matches_cut_enumeration(n):
    for tree in T.trees_of_size(n):
        assert F.coproduct_key((tree,)) == cut_coproduct(tree)


# ---------------------------------------------------------------- examples


def test_products():
    x = POLY.parse("x")
    assert POLY.product(x, x) == POLY.parse("x^2")
    assert POLY.product(POLY.one(), x) == x
    v = F.parse("*")
    assert F.product(v, v) == F.parse("* *")


def test_coproduct_examples():
    assert POLY.coproduct(POLY.parse_key("x")) == tensor(POLY, {(1, 0): 1, (0, 1): 1})
    assert POLY.coproduct(POLY.parse_key("x^2")) == tensor(POLY, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    t2 = F.parse_key("[*]")
    v = F.parse_key("*")
    assert F.coproduct(t2) == tensor(F, {(t2, ()): 1, ((), t2): 1, (v, v): 1})


def test_reduced_coproduct_examples():
    assert not POLY.reduced_coproduct(POLY.parse_key("x")).terms
    assert POLY.reduced_coproduct(POLY.parse_key("x^2")) == tensor(POLY, {(1, 1): 2})
    assert not F.reduced_coproduct(F.parse_key("*")).terms
    assert POLY.iterated_reduced_coproduct(POLY.parse_key("x^3"), 2) == tensor(POLY, {(1, 1, 1): 6}, 3)
    assert not POLY.iterated_reduced_coproduct(POLY.parse_key("x"), 2).terms


def test_reduced_coproduct_needs_augmentation_ideal():
    with pytest.raises(PreconditionError):
        POLY.reduced_coproduct(POLY.one())


def test_leg_degrees_of_reduced_coproduct():
    for n in range(1, 6):
        for k in F.basis(n):
            assert all(0 < a < n and a + b == n for a, b in F.reduced_coproduct(k).leg_degrees())


def test_antipode_examples():
    assert POLY.antipode(POLY.unit_key) == POLY.one()
    assert POLY.antipode(POLY.parse_key("x")) == -POLY.parse("x")
    assert POLY.antipode(POLY.parse_key("x^2")) == POLY.parse("x^2")
    # S([[*]]) = -{* * *} + 2{* [*]} - [[*]]
    expected = F.element({F.parse_key("* * *"): -1, F.parse_key("* [*]"): 2, F.parse_key("[[*]]"): -1})
    assert F.antipode(F.parse_key("[[*]]")) == expected


def test_poly_antipode_is_sign():
    for n in range(8):
        assert POLY.antipode(n) == POLY.key(n) * (-1) ** n


@pytest.mark.parametrize("name", ["poly", "rooted-forest"])
def test_axioms_through_degree_five(name):
    assert all(v is None for v in hopf_axiom_failures(get_instance(name), 5).values())


def test_forest_literals_round_trip():
    for n in range(6):
        for k in F.basis(n):
            assert F.parse_key(F.format_key(k)) == k
    assert F.format_key(()) == "1"


def test_forest_counts():
    # rooted trees 1, 1, 2, 4, 9, 20; forests 1, 1, 2, 4, 9, 20, 48
    assert [len(T.trees_of_size(n)) for n in range(1, 7)] == [1, 1, 2, 4, 9, 20]
    assert [len(F.basis(n)) for n in range(7)] == [1, 1, 2, 4, 9, 20, 48]


def test_unknown_instance():
    with pytest.raises(ValueError):
        get_instance("nope")


@given(st.integers(1, 5), st.integers(0, 30))
def test_coproduct_is_multiplicative_on_forests(n, pick):
    keys = F.basis_upto(n)
    a = keys[pick % len(keys)]
    b = keys[(pick * 7 + 3) % len(keys)]
    lhs = F.coproduct(F.mul_keys(a, b))
    rhs = {}
    for (a1, a2), m in F.coproduct_key(a).items():
        for (b1, b2), k in F.coproduct_key(b).items():
            legs = (F.mul_keys(a1, b1), F.mul_keys(a2, b2))
            rhs[legs] = rhs.get(legs, 0) + m * k
    assert lhs == tensor(F, rhs)


@given(st.integers(0, 40))
def test_three_antipodes_agree(pick):
    keys = F.basis_upto(5)
    k = keys[pick % len(keys)]
    assert F.antipode(k, "left") == F.antipode(k, "right") == F.antipode(k, "series")


def test_antipode_is_antimultiplicative_and_involutive_on_commutative():
    for a in F.basis_upto(3):
        for b in F.basis_upto(2):
            assert F.antipode(F.mul_keys(a, b)) == F.product(F.antipode(a), F.antipode(b))
        s = F.antipode(a)
        twice = F.element()
        for k, c in s.terms.items():
            twice = twice + F.antipode(k) * c
        assert twice == F.key(a)
