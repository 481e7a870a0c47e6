"""Birkhoff decomposition of characters and the BCH recursion.

The renormalization scheme is minimal subtraction lifted to linear maps:
``P(f) = π o f`` keeps the polar part of every value.  The generic BCH
routines (:func:`bch_chi` and friends) work in any :class:`FilteredCarrier`
with any filtration-preserving linear projector, and are reused for the
t-adic and triangular-matrix carriers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .convolution import (
    LinMap,
    conv_exp,
    conv_inverse,
    is_character,
    valuation,
)
from .errors import PreconditionError
from .filtered import FilteredCarrier, bch, fa_exp, fixed_point

Projector = Callable[[Any], Any]


# ---------------------------------------------------------------- schemes


@dataclass(frozen=True)
class RenormScheme:
    """A projector ``P`` on linear maps together with ``P~ = Id - P``."""

    name: str
    value_projector: Callable

    def P(self, f: LinMap) -> LinMap:
        return f.map_values(self.value_projector)

    def Ptilde(self, f: LinMap) -> LinMap:
        return f - self.P(f)


MS = RenormScheme("minimal-subtraction", lambda v: v.polar())
ZERO_SCHEME = RenormScheme("zero", lambda v: v * 0)
IDENTITY_SCHEME = RenormScheme("identity", lambda v: v)


@dataclass(frozen=True)
class BirkhoffPair:
    minus: LinMap
    plus: LinMap

    def __iter__(self):
        return iter((self.minus, self.plus))


def check_birkhoff_pair(phi: LinMap, pair: BirkhoffPair) -> dict[str, bool]:
    """Evaluate every defining property of a Birkhoff pair for ``phi``."""
    ctx = phi.ctx
    unit = ctx.hopf.unit_key
    minus, plus = pair
    return {
        "minus_unital": minus[unit] == ctx.ring.one(),
        "minus_polar": all(v == v.polar() for k, v in minus.values.items() if k != unit),
        "plus_holomorphic": all(v == v.holomorphic() for v in plus.values.values()),
        "factorization": conv_inverse(minus) * plus == phi,
    }


# ---------------------------------------------------------------- recursion


def _decompose(phi: LinMap, scheme: RenormScheme):
    ctx = phi.ctx
    unit = ctx.hopf.unit_key
    if phi[unit] != ctx.ring.one():
        raise PreconditionError("Birkhoff decomposition needs phi(1) = 1")
    proj = scheme.value_projector
    zero = ctx.ring.zero()
    minus, plus, prep = {unit: ctx.ring.one()}, {unit: ctx.ring.one()}, {unit: zero}
    for k in ctx.keys:
        if k == unit:
            continue
        b = phi[k]
        for (left, right), m in ctx.coproducts[k]:
            if left == unit or right == unit:
                continue
            b = b + minus[left] * phi[right] * m
        polar = proj(b)
        minus[k] = -polar
        plus[k] = b - polar
        prep[k] = b
    return LinMap(ctx, minus), LinMap(ctx, plus), LinMap(ctx, prep)


def bogoliubov_prep(phi: LinMap, scheme: RenormScheme = MS) -> LinMap:
    """``B(phi) = phi_- * (phi - e)``, computed with the counterterm recursion."""
    return _decompose(phi, scheme)[2]


def birkhoff_decompose(phi: LinMap, scheme: RenormScheme = MS) -> BirkhoffPair:
    """``phi = phi_-^{-1} * phi_+`` by the degree-wise recursion."""
    e = phi.ctx.unit()
    if phi == e:
        return BirkhoffPair(e, e)
    minus, plus, _ = _decompose(phi, scheme)
    return BirkhoffPair(minus, plus)


def bogoliubov_series(phi: LinMap, scheme: RenormScheme = MS, variant: str = "minus") -> LinMap:
    """Iterated-projector series for the factors.

    ``minus``: ``e + P(α) + P(P(α)*α) + ...`` with ``α = e - phi``.
    ``plus``: ``e - P~(phi_- * α)`` with ``phi_-`` from the minus series.
    ``plus-inverse``: the implicit form ``phi_+ = e - P~(phi_+ * β)``,
    ``β = phi^{-1} - e``, solved by iteration.
    """
    ctx = phi.ctx
    e = ctx.unit()
    alpha = e - phi
    if variant == "minus":
        out, term = e, e
        while True:
            term = scheme.P(term * alpha)
            if not term:
                return out
            out = out + term
    if variant == "plus":
        minus = bogoliubov_series(phi, scheme, "minus")
        return e - scheme.Ptilde(minus * alpha)
    if variant == "plus-inverse":
        beta = conv_inverse(phi) - e
        return fixed_point(lambda p: e - scheme.Ptilde(p * beta), e, ctx.carrier, "phi_+ series")
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------- BCH recursion, generic


def bch_chi(a, P: Projector, carrier: FilteredCarrier):
    """Fixed point of ``χ = a - BCH(P(χ), P~(χ))`` with ``P~ = Id - P``."""
    return fixed_point(lambda x: a - bch(P(x), x - P(x), carrier), a, carrier, "BCH recursion")


def bch_chi_inverse(a, P: Projector, carrier: FilteredCarrier):
    """``χ^{-1}(a) = C(P(a), P~(a)) = a + BCH(P(a), P~(a))``."""
    return a + bch(P(a), a - P(a), carrier)


def bch_chi_compact(a, P: Projector, carrier: FilteredCarrier):
    """Fixed point of ``χ = a + BCH(-P(χ), a)``."""
    return fixed_point(lambda x: a + bch(-P(x), a, carrier), a, carrier, "compact BCH recursion")


def bch_chi_theta(a, P: Projector, theta, carrier: FilteredCarrier):
    """Weight-θ recursion ``χ = a - (1/θ) BCH(-P(χ), -θ a)``."""
    theta = Fraction(theta)
    if theta == 0:
        raise PreconditionError("weight-θ BCH recursion needs θ != 0; use the plain recursion")
    inv = 1 / theta
    return fixed_point(lambda x: a - bch(-P(x), a * -theta, carrier) * inv, a, carrier,
                       "weight-θ BCH recursion")


def theta_factorization_holds(a, chi, P: Projector, theta, carrier: FilteredCarrier) -> bool:
    """``exp(-θ a) = exp(P(χ)) exp(P~_θ(χ))`` with ``P~_θ = -θ Id - P``."""
    theta = Fraction(theta)
    lhs = fa_exp(a * -theta, carrier)
    rhs = carrier.times(fa_exp(P(chi), carrier), fa_exp(chi * -theta - P(chi), carrier))
    return lhs == rhs


# ---------------------------------------------------------------- BCH recursion on L(H, A)


def _lie_input(a: LinMap):
    if a[a.ctx.hopf.unit_key]:
        raise PreconditionError("BCH recursion needs a(1) = 0")


def chi(a: LinMap, scheme: RenormScheme = MS) -> LinMap:
    _lie_input(a)
    return bch_chi(a, scheme.P, a.ctx.carrier)


def chi_inverse(a: LinMap, scheme: RenormScheme = MS) -> LinMap:
    _lie_input(a)
    return bch_chi_inverse(a, scheme.P, a.ctx.carrier)


def chi_compact(a: LinMap, scheme: RenormScheme = MS) -> LinMap:
    _lie_input(a)
    return bch_chi_compact(a, scheme.P, a.ctx.carrier)


def chi_theta(a: LinMap, theta, scheme: RenormScheme = MS) -> LinMap:
    _lie_input(a)
    return bch_chi_theta(a, scheme.P, theta, a.ctx.carrier)


def chi_residual(a: LinMap, x: LinMap, scheme: RenormScheme = MS) -> LinMap:
    """``a - x - BCH(P(x), P~(x))``; zero exactly when ``x = χ(a)``."""
    return a - x - bch(scheme.P(x), scheme.Ptilde(x), a.ctx.carrier)


def bch_factorize(a: LinMap, scheme: RenormScheme = MS) -> BirkhoffPair:
    """``(exp(-P(χ(a))), exp(P~(χ(a))))`` for an infinitesimal character ``a``."""
    _lie_input(a)
    c = chi(a, scheme)
    return BirkhoffPair(conv_exp(-scheme.P(c)), conv_exp(scheme.Ptilde(c)))


def characters_in_characters_out(phi: LinMap, pair: BirkhoffPair) -> bool:
    return (not is_character(phi)) or (is_character(pair.minus) and is_character(pair.plus))


__all__ = [
    "RenormScheme",
    "MS",
    "ZERO_SCHEME",
    "IDENTITY_SCHEME",
    "BirkhoffPair",
    "check_birkhoff_pair",
    "bogoliubov_prep",
    "birkhoff_decompose",
    "bogoliubov_series",
    "bch_chi",
    "bch_chi_inverse",
    "bch_chi_compact",
    "bch_chi_theta",
    "theta_factorization_holds",
    "chi",
    "chi_inverse",
    "chi_compact",
    "chi_theta",
    "chi_residual",
    "bch_factorize",
    "characters_in_characters_out",
    "valuation",
]
