"""Connected graded Hopf algebras with monomial bases.

Two instances are provided:

* :class:`PolyHopf` -- polynomials in one primitive generator ``x``; basis
  keys are the exponents ``n`` (``x^n``), cocommutative.
* :class:`RootedForestHopf` -- the Connes--Kreimer Hopf algebra of rooted
  forests with the admissible-cut coproduct; basis keys are canonical forests
  (see :mod:`renormalg.trees`), not cocommutative.

Elements are finite rational combinations of basis keys
(:class:`HopfElement`); tensors of ``k`` legs are :class:`TensorElement`.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational
from typing import Hashable, Iterable, Mapping

from . import trees as T
from .errors import InstanceMismatchError, PreconditionError

Key = Hashable


class HopfAlgebra(ABC):
    """A connected graded Hopf algebra with a multiplicative monomial basis."""

    name: str
    unit_key: Key
    cocommutative: bool

    def __init__(self):
        self._antipode_cache: dict[tuple[str, Key], HopfElement] = {}

    # -- instance data
    @abstractmethod
    def degree(self, key: Key) -> int: ...

    @abstractmethod
    def mul_keys(self, a: Key, b: Key) -> Key: ...

    @abstractmethod
    def coproduct_key(self, key: Key) -> Mapping[tuple[Key, Key], int]:
        """Coproduct of a basis key as ``{(left, right): multiplicity}``."""

    @abstractmethod
    def basis(self, n: int) -> tuple[Key, ...]:
        """Basis keys of degree exactly ``n`` in canonical order."""

    @abstractmethod
    def generators(self, n: int) -> tuple[Key, ...]:
        """Algebra generators of degree exactly ``n``."""

    @abstractmethod
    def factor(self, key: Key) -> tuple[Key, ...]:
        """Write a basis key as a product of generators."""

    @abstractmethod
    def format_key(self, key: Key) -> str: ...

    @abstractmethod
    def parse_key(self, text: str) -> Key: ...

    @abstractmethod
    def key_order(self, key: Key): ...

    def basis_upto(self, n: int) -> tuple[Key, ...]:
        return tuple(k for d in range(n + 1) for k in self.basis(d))

    def __eq__(self, other):
        return isinstance(other, HopfAlgebra) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"{type(self).__name__}()"

    # -- elements
    def element(self, terms: Mapping[Key, object] | None = None) -> "HopfElement":
        return HopfElement(self, terms or {})

    def one(self) -> "HopfElement":
        return HopfElement(self, {self.unit_key: 1})

    def key(self, key: Key) -> "HopfElement":
        return HopfElement(self, {key: 1})

    def parse(self, text: str) -> "HopfElement":
        return self.key(self.parse_key(text))

    # -- structure maps on elements
    def product(self, a: "HopfElement", b: "HopfElement") -> "HopfElement":
        if a.algebra != self or b.algebra != self:
            raise InstanceMismatchError("product of elements from different Hopf algebras")
        out: dict[Key, Fraction] = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                k = self.mul_keys(ka, kb)
                out[k] = out.get(k, 0) + ca * cb
        return HopfElement(self, out)

    def coproduct(self, h: "HopfElement | Key") -> "TensorElement":
        if not isinstance(h, HopfElement):
            h = self.key(h)
        out: dict[tuple, Fraction] = {}
        for k, c in h.terms.items():
            for legs, m in self.coproduct_key(k).items():
                out[legs] = out.get(legs, 0) + c * m
        return TensorElement(self, 2, out)

    def counit(self, h: "HopfElement") -> Fraction:
        return h.terms.get(self.unit_key, Fraction(0))

    def reduced_coproduct(self, h: "HopfElement | Key") -> "TensorElement":
        """``Δh - h⊗1 - 1⊗h`` for ``h`` in the augmentation ideal."""
        if not isinstance(h, HopfElement):
            h = self.key(h)
        if self.counit(h):
            raise PreconditionError("reduced coproduct needs an element of Ker ε")
        out = dict(self.coproduct(h).terms)
        u = self.unit_key
        for k, c in h.terms.items():
            for legs in ((k, u), (u, k)):
                out[legs] = out.get(legs, 0) - c
        return TensorElement(self, 2, out)

    def iterated_reduced_coproduct(self, h: "HopfElement | Key", k: int) -> "TensorElement":
        """Apply the reduced coproduct ``k`` times, always to the last leg."""
        if k < 1:
            raise PreconditionError("iteration count must be >= 1")
        if not isinstance(h, HopfElement):
            h = self.key(h)
        tensor = self.reduced_coproduct(h)
        for _ in range(k - 1):
            out: dict[tuple, Fraction] = {}
            for legs, c in tensor.terms.items():
                for (a, b), m in self.reduced_coproduct(legs[-1]).terms.items():
                    nl = legs[:-1] + (a, b)
                    out[nl] = out.get(nl, 0) + c * m
            tensor = TensorElement(self, tensor.legs + 1, out)
        return tensor

    def multiply_legs(self, tensor: "TensorElement") -> "HopfElement":
        out: dict[Key, Fraction] = {}
        for legs, c in tensor.terms.items():
            k = legs[0]
            for other in legs[1:]:
                k = self.mul_keys(k, other)
            out[k] = out.get(k, 0) + c
        return HopfElement(self, out)

    # -- antipode
    def antipode(self, h: "HopfElement | Key", method: str = "left") -> "HopfElement":
        """Antipode by the left recursion (default), right recursion or
        geometric series (``method`` in ``left``, ``right``, ``series``)."""
        if not isinstance(h, HopfElement):
            h = self.key(h)
        out = self.element()
        for k, c in h.terms.items():
            out = out + self._antipode_key(k, method) * c
        return out

    def _antipode_key(self, key: Key, method: str) -> "HopfElement":
        cached = self._antipode_cache.get((method, key))
        if cached is not None:
            return cached
        if key == self.unit_key:
            result = self.one()
        elif method == "series":
            result = self.element()
            x = self.key(key)
            n = self.degree(key)
            result = -x
            for m in range(2, n + 1):
                # (uε - I)^{*m}(x) = (-1)^m m(Δ̃_{m-1} x)
                legs = self.iterated_reduced_coproduct(x, m - 1)
                result = result + self.multiply_legs(legs) * (-1) ** m
        elif method in ("left", "right"):
            result = -self.key(key)
            for (a, b), m in self.reduced_coproduct(key).terms.items():
                if method == "left":
                    term = self.product(self._antipode_key(a, method), self.key(b))
                else:
                    term = self.product(self.key(a), self._antipode_key(b, method))
                result = result - term * m
        else:
            raise ValueError(f"unknown antipode method {method!r}")
        self._antipode_cache[(method, key)] = result
        return result


class HopfElement:
    """Finite rational combination of basis keys of a fixed Hopf algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: HopfAlgebra, terms: Mapping[Key, object]):
        self.algebra = algebra
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}

    def _check(self, other: "HopfElement"):
        if other.algebra != self.algebra:
            raise InstanceMismatchError("elements from different Hopf algebras")

    def __add__(self, other):
        if isinstance(other, Rational):
            other = self.algebra.one() * other
        if not isinstance(other, HopfElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return HopfElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return HopfElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return HopfElement(self.algebra, {k: v * other for k, v in self.terms.items()})
        if isinstance(other, HopfElement):
            return self.algebra.product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, HopfElement):
            return self.algebra == other.algebra and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Largest degree of a key present (``-1`` for zero)."""
        return max((self.algebra.degree(k) for k in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({self.algebra.degree(k) for k in self.terms}) <= 1

    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.algebra
        parts = []
        for k in sorted(self.terms, key=alg.key_order):
            c = self.terms[k]
            lit = alg.format_key(k)
            if lit == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(lit if " " not in lit else f"{{{lit}}}")
            else:
                lit = lit if " " not in lit else f"{{{lit}}}"
                parts.append(f"{c} {lit}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"HopfElement({str(self)!r})"


class TensorElement:
    """Element of the ``legs``-fold tensor power of a Hopf algebra."""

    __slots__ = ("algebra", "legs", "terms")

    def __init__(self, algebra: HopfAlgebra, legs: int, terms: Mapping[tuple, object]):
        self.algebra = algebra
        self.legs = legs
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}

    def __add__(self, other: "TensorElement"):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(self.algebra, self.legs, out)

    def __sub__(self, other: "TensorElement"):
        return self + other * -1

    def __mul__(self, c):
        return TensorElement(self.algebra, self.legs, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, TensorElement):
            return (self.algebra, self.legs, self.terms) == (other.algebra, other.legs, other.terms)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def flip(self) -> "TensorElement":
        if self.legs != 2:
            raise PreconditionError("flip is defined on two legs")
        return TensorElement(self.algebra, 2, {(b, a): c for (a, b), c in self.terms.items()})

    def leg_degrees(self) -> set[tuple[int, ...]]:
        d = self.algebra.degree
        return {tuple(d(k) for k in legs) for legs in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.algebra
        return " + ".join(
            f"{c} " + " ⊗ ".join(alg.format_key(k) for k in legs)
            for legs, c in sorted(self.terms.items(), key=lambda kv: [alg.key_order(k) for k in kv[0]])
        )


# ---------------------------------------------------------------- instances


class PolyHopf(HopfAlgebra):
    """``k[x]`` with ``x`` primitive; the key ``n`` stands for ``x^n``."""

    name = "poly"
    unit_key = 0
    cocommutative = True

    def degree(self, key):
        return key

    def mul_keys(self, a, b):
        return a + b

    def coproduct_key(self, key):
        return _poly_coproduct(key)

    def basis(self, n):
        return (n,) if n >= 0 else ()

    def generators(self, n):
        return (1,) if n == 1 else ()

    def factor(self, key):
        return (1,) * key

    def format_key(self, key):
        return {0: "1", 1: "x"}.get(key, f"x^{key}")

    def parse_key(self, text):
        s = text.replace(" ", "")
        if s == "1":
            return 0
        if s == "x":
            return 1
        if s.startswith("x^") and s[2:].isdigit():
            return int(s[2:])
        raise ValueError(f"not a poly basis key: {text!r}")

    def key_order(self, key):
        return key


@lru_cache(maxsize=None)
def _poly_coproduct(n: int) -> dict:
    return {(k, n - k): comb(n, k) for k in range(n + 1)}


class RootedForestHopf(HopfAlgebra):
    """Connes--Kreimer Hopf algebra of rooted forests (admissible cuts)."""

    name = "rooted-forest"
    unit_key = ()
    cocommutative = False

    def degree(self, key):
        return T.forest_size(key)

    def mul_keys(self, a, b):
        return T.canonical_forest(a + b)

    def coproduct_key(self, key):
        return _forest_coproduct(key)

    def basis(self, n):
        return T.forests_of_size(n)

    def generators(self, n):
        return tuple((t,) for t in T.trees_of_size(n))

    def factor(self, key):
        return tuple((t,) for t in key)

    def format_key(self, key):
        return T.format_forest(key)

    def parse_key(self, text):
        return T.parse_forest(text)

    def key_order(self, key):
        return T.forest_key(key)


@lru_cache(maxsize=None)
def _tree_coproduct(tree: tuple) -> dict:
    # Δ(B+(F)) = B+(F) ⊗ 1 + (id ⊗ B+) Δ(F)
    out = {((tree,), ()): 1}
    for (left, right), m in _forest_coproduct(tuple(tree)).items():
        legs = (left, (T.graft(right),))
        out[legs] = out.get(legs, 0) + m
    return out


@lru_cache(maxsize=None)
def _forest_coproduct(forest: tuple) -> dict:
    out: dict = {((), ()): 1}
    for tree in forest:
        nxt: dict = {}
        for (l1, r1), m1 in out.items():
            for (l2, r2), m2 in _tree_coproduct(tree).items():
                legs = (T.canonical_forest(l1 + l2), T.canonical_forest(r1 + r2))
                nxt[legs] = nxt.get(legs, 0) + m1 * m2
        out = nxt
    return out


POLY = PolyHopf()
ROOTED_FORESTS = RootedForestHopf()

INSTANCES = {POLY.name: POLY, ROOTED_FORESTS.name: ROOTED_FORESTS}


def get_instance(name: str) -> HopfAlgebra:
    try:
        return INSTANCES[name]
    except KeyError:
        raise ValueError(f"unknown Hopf instance {name!r}; choose from {sorted(INSTANCES)}") from None
