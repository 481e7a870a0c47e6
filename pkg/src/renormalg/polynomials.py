"""Univariate rational polynomials with integration from 0."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping


class Polynomial:
    """Polynomial in ``s`` with rational coefficients; immutable."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | list | tuple = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        self._c = {int(k): Fraction(v) for k, v in items if v}

    @classmethod
    def s(cls, k: int = 1) -> "Polynomial":
        return cls({k: 1})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, k):
        return self._c.get(k, Fraction(0))

    def degree(self) -> int:
        return max(self._c, default=-1)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, Rational):
            return Polynomial({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return Polynomial(c)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Polynomial({k: v * other for k, v in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return Polynomial(c)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._c == other._c
        if isinstance(other, Rational):
            return self._c == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __bool__(self):
        return bool(self._c)

    def integrate(self) -> "Polynomial":
        """``s -> int_0^s p(u) du``."""
        return Polynomial({k + 1: v / (k + 1) for k, v in self._c.items()})

    def derivative(self) -> "Polynomial":
        return Polynomial({k - 1: v * k for k, v in self._c.items() if k})

    def __call__(self, x) -> Fraction:
        return sum((v * Fraction(x) ** k for k, v in self._c.items()), Fraction(0))

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for k in sorted(self._c):
            v = self._c[k]
            terms.append(str(v) if k == 0 else f"{v}*s" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self})"
