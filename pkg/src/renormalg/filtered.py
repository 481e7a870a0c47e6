"""Exponential, logarithm and BCH over complete filtered algebras.

A :class:`FilteredCarrier` describes an associative algebra whose elements
support ``+``, ``-``, ``*`` and rational scaling, together with a valuation.
Everything of valuation above ``precision`` is treated as zero, so the series
below are finite sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import PreconditionError


@dataclass(frozen=True)
class FilteredCarrier:
    one: Any
    zero: Any
    valuation: Callable[[Any], int]
    precision: int
    mul: Callable[[Any, Any], Any] | None = None

    def times(self, a, b):
        return self.mul(a, b) if self.mul is not None else a * b

    def is_zero(self, a) -> bool:
        return self.valuation(a) > self.precision


def fa_exp(a, carrier: FilteredCarrier):
    """``exp(a) = sum a^n / n!`` for ``val(a) >= 1``."""
    if carrier.valuation(a) < 1:
        raise PreconditionError("exp needs an element of valuation >= 1")
    total, term, n = carrier.one, carrier.one, 0
    while True:
        n += 1
        term = carrier.times(term, a) * Fraction(1, n)
        if carrier.is_zero(term):
            return total
        total = total + term


def fa_log(u, carrier: FilteredCarrier):
    """``log(1 + a) = -sum (-a)^n / n`` for ``val(u - 1) >= 1``."""
    a = u - carrier.one
    if carrier.valuation(a) < 1:
        raise PreconditionError("log needs an element with val(u - 1) >= 1")
    total, power, n = carrier.zero, carrier.one, 0
    while True:
        n += 1
        power = carrier.times(power, a)
        if carrier.is_zero(power):
            return total
        total = total + power * Fraction((-1) ** (n + 1), n)


def commutator(x, y, carrier: FilteredCarrier):
    return carrier.times(x, y) - carrier.times(y, x)


def bch(x, y, carrier: FilteredCarrier):
    """``BCH(x, y) = log(exp(x) exp(y)) - x - y``, exact at the carrier precision."""
    return fa_log(carrier.times(fa_exp(x, carrier), fa_exp(y, carrier)), carrier) - x - y


def bch_full(x, y, carrier: FilteredCarrier):
    """``C(x, y) = x + y + BCH(x, y)``."""
    return fa_log(carrier.times(fa_exp(x, carrier), fa_exp(y, carrier)), carrier)


def fixed_point(step: Callable[[Any], Any], start, carrier: FilteredCarrier, what: str = "fixed point"):
    """Iterate ``x <- step(x)`` until exact stability.

    Each step gains at least one order of the filtration, so
    ``precision + 2`` rounds always suffice; exceeding that is a bug.
    """
    x = start
    for _ in range(carrier.precision + 3):
        nxt = step(x)
        if nxt == x:
            return x
        x = nxt
    raise RuntimeError(f"{what} iteration did not stabilise within the precision bound")
