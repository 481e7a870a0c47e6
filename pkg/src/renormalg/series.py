"""Truncated formal power series in ``t`` over an algebra.

A :class:`SeriesSpace` fixes the truncation order, the coefficient product
and the coefficient zero.  When ``unit`` is ``None`` the space is the
augmentation ``(k.1 + A)[[t]]`` with a formal unit that is only allowed in
the constant term: this is how the dendriform unit is carried around, and
products like ``1 < 1`` simply cannot be formed.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Sequence

from .errors import InstanceMismatchError
from .filtered import FilteredCarrier


class SeriesSpace:
    def __init__(self, order: int, mul: Callable[[Any, Any], Any], zero: Any, unit: Any = None,
                 name: str = "series"):
        self.order = order
        self.mul = mul
        self.zero = zero
        self.unit = unit
        self.name = name

    @property
    def augmented(self) -> bool:
        return self.unit is None

    def series(self, coeffs: Sequence[Any] = (), scalar=0) -> "Series":
        return Series(self, coeffs, scalar)

    def zero_series(self) -> "Series":
        return Series(self, ())

    def one(self) -> "Series":
        return Series(self, (), 1)

    def monomial(self, coeff, n: int = 1) -> "Series":
        out = [self.zero] * (n + 1)
        out[n] = coeff
        return Series(self, out)

    def carrier(self) -> FilteredCarrier:
        """t-adic filtration with precision equal to the truncation order."""
        return FilteredCarrier(self.one(), self.zero_series(), Series.valuation, self.order)

    def compatible(self, other: "SeriesSpace") -> bool:
        return other is self or (
            (other.order, other.name, other.augmented) == (self.order, self.name, self.augmented)
        )

    def with_product(self, mul, unit=None, name=None) -> "SeriesSpace":
        return SeriesSpace(self.order, mul, self.zero, unit, name or self.name)


class Series:
    """``scalar * 1 + sum_{n<=T} coeffs[n] t^n``; immutable."""

    __slots__ = ("space", "scalar", "coeffs")

    def __init__(self, space: SeriesSpace, coeffs: Sequence[Any], scalar=0):
        c = list(coeffs)[: space.order + 1]
        c += [space.zero] * (space.order + 1 - len(c))
        scalar = Fraction(scalar)
        if space.unit is not None and scalar:
            c[0] = c[0] + space.unit * scalar
            scalar = Fraction(0)
        self.space = space
        self.scalar = scalar
        self.coeffs = tuple(c)

    def _check(self, other: "Series"):
        if not self.space.compatible(other.space):
            raise InstanceMismatchError("series from different spaces")

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __add__(self, other):
        if isinstance(other, Rational):
            other = Series(self.space, (), other)
        self._check(other)
        return Series(self.space, [a + b for a, b in zip(self.coeffs, other.coeffs)],
                      self.scalar + other.scalar)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.space, [-a for a in self.coeffs], -self.scalar)

    def __sub__(self, other):
        if isinstance(other, Rational):
            other = Series(self.space, (), other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Series(self.space, [a * other for a in self.coeffs], self.scalar * other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        sp, T = self.space, self.space.order
        out = [sp.zero] * (T + 1)
        a, b = self.coeffs, other.coeffs
        for i in range(T + 1):
            if not a[i]:
                continue
            for j in range(T + 1 - i):
                if b[j]:
                    out[i + j] = out[i + j] + sp.mul(a[i], b[j])
        for n in range(T + 1):
            if self.scalar and b[n]:
                out[n] = out[n] + b[n] * self.scalar
            if other.scalar and a[n]:
                out[n] = out[n] + a[n] * other.scalar
        return Series(sp, out, self.scalar * other.scalar)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.space.compatible(other.space) and self.scalar == other.scalar and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.scalar, self.coeffs))

    def __bool__(self):
        return bool(self.scalar) or any(bool(c) for c in self.coeffs)

    def valuation(self) -> int:
        if self.scalar:
            return 0
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.space.order + 1

    def map(self, fn: Callable[[Any], Any], space: SeriesSpace | None = None, scalar_image=None) -> "Series":
        """Apply ``fn`` to every coefficient.

        ``scalar_image`` maps the formal-unit coefficient; by default a
        formal unit is kept as it is (only valid when ``space`` is augmented).
        """
        space = space or self.space
        coeffs = [fn(c) for c in self.coeffs]
        if scalar_image is None:
            return Series(space, coeffs, self.scalar)
        if self.scalar:
            coeffs[0] = coeffs[0] + scalar_image * self.scalar
        return Series(space, coeffs)

    def shift(self, k: int = 1) -> "Series":
        """Multiply by ``t^k`` (the formal unit is not allowed to move)."""
        if self.scalar:
            raise InstanceMismatchError("cannot shift the formal unit")
        return Series(self.space, [self.space.zero] * k + list(self.coeffs))

    def __repr__(self):
        return f"Series(scalar={self.scalar}, coeffs={list(map(str, self.coeffs))})"
