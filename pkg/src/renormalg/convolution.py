"""Linear maps ``H -> A`` under convolution.

A :class:`LinMap` stores one Laurent value per basis key of degree at most
the context cutoff.  Because every structure map respects the grading, all
group and series operations are exact at that precision.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Callable, Mapping

from .errors import InstanceMismatchError, PreconditionError
from .filtered import FilteredCarrier, fa_exp, fa_log
from .hopf import HopfAlgebra, HopfElement, get_instance
from .scalars import Laurent, LaurentRing, parse_rational


@dataclass(frozen=True)
class ConvolutionContext:
    """Hopf instance, degree cutoff and Laurent window shared by a family of maps."""

    hopf: HopfAlgebra
    cutoff: int
    ring: LaurentRing = field(default=None)

    def __post_init__(self):
        if self.cutoff < 0:
            raise PreconditionError("cutoff must be >= 0")
        if self.ring is None:
            object.__setattr__(self, "ring", LaurentRing(self.cutoff, self.cutoff))

    @cached_property
    def keys(self) -> tuple:
        return self.hopf.basis_upto(self.cutoff)

    @cached_property
    def coproducts(self) -> dict:
        return {k: tuple(self.hopf.coproduct_key(k).items()) for k in self.keys}

    def degree(self, key) -> int:
        return self.hopf.degree(key)

    def unit(self) -> "LinMap":
        """The counit map ``e = u o ε``."""
        one, zero = self.ring.one(), self.ring.zero()
        return LinMap(self, {k: one if k == self.hopf.unit_key else zero for k in self.keys})

    def zero(self) -> "LinMap":
        zero = self.ring.zero()
        return LinMap(self, {k: zero for k in self.keys})

    def from_function(self, fn: Callable[[object], Laurent]) -> "LinMap":
        return LinMap(self, {k: fn(k) for k in self.keys})

    @cached_property
    def carrier(self) -> FilteredCarrier:
        return FilteredCarrier(self.unit(), self.zero(), LinMap.valuation, self.cutoff)


class LinMap:
    """An element of ``L(H, A)`` truncated at the context cutoff."""

    __slots__ = ("ctx", "values")

    def __init__(self, ctx: ConvolutionContext, values: Mapping):
        self.ctx = ctx
        zero = ctx.ring.zero()
        self.values = {k: values.get(k, zero) for k in ctx.keys}

    def _check(self, other: "LinMap"):
        if other.ctx != self.ctx:
            raise InstanceMismatchError("linear maps from different contexts")

    def __getitem__(self, key) -> Laurent:
        return self.values[key]

    def apply(self, h: HopfElement) -> Laurent:
        out = self.ctx.ring.zero()
        for k, c in h.terms.items():
            out = out + self.values[k] * c
        return out

    def map_values(self, fn: Callable[[Laurent], Laurent]) -> "LinMap":
        return LinMap(self.ctx, {k: fn(v) for k, v in self.values.items()})

    # -- vector space
    def __add__(self, other):
        if isinstance(other, Rational):
            other = self.ctx.unit() * other
        self._check(other)
        return LinMap(self.ctx, {k: v + other.values[k] for k, v in self.values.items()})

    __radd__ = __add__

    def __neg__(self):
        return self.map_values(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.map_values(lambda v: v * other)
        if isinstance(other, LinMap):
            return convolve(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, LinMap):
            return self.ctx == other.ctx and self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.values.items()))

    def __bool__(self):
        return any(bool(v) for v in self.values.values())

    def valuation(self) -> int:
        return valuation(self)

    # -- serialization
    def to_json(self) -> dict:
        hopf = self.ctx.hopf
        return {
            "instance": hopf.name,
            "cutoff": self.ctx.cutoff,
            "window": [-self.ctx.ring.pole_order, self.ctx.ring.degree],
            "values": {hopf.format_key(k): str(v) for k, v in self.values.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping, ctx: ConvolutionContext | None = None) -> "LinMap":
        if ctx is None:
            lo, hi = obj["window"]
            ctx = ConvolutionContext(get_instance(obj["instance"]), int(obj["cutoff"]), LaurentRing(-lo, hi))
        hopf = ctx.hopf
        values = {hopf.parse_key(k): ctx.ring.parse(v) for k, v in obj["values"].items()}
        return cls(ctx, values)

    def __repr__(self):
        return f"LinMap({json.dumps(self.to_json()['values'])})"


# ---------------------------------------------------------------- operations


def convolve(f: LinMap, g: LinMap) -> LinMap:
    """``(f * g)(x) = sum f(x') g(x'')`` over the coproduct of each key."""
    f._check(g)
    ctx = f.ctx
    zero = ctx.ring.zero()
    fv, gv = f.values, g.values
    out = {}
    for k in ctx.keys:
        acc = zero
        for (a, b), m in ctx.coproducts[k]:
            x, y = fv[a], gv[b]
            if x and y:
                acc = acc + (x * y) * m
        out[k] = acc
    return LinMap(ctx, out)


def _require_group(f: LinMap):
    unit = f.ctx.hopf.unit_key
    if f.values[unit] != f.ctx.ring.one():
        raise PreconditionError("map must send the unit to 1 (element of G(A))")


def _require_lie(a: LinMap):
    if a.values[a.ctx.hopf.unit_key]:
        raise PreconditionError("map must vanish on the unit (element of g(A))")


def conv_inverse(f: LinMap) -> LinMap:
    """``f^{-1} = sum_m (e - f)^{*m}``; finite at the cutoff."""
    _require_group(f)
    e = f.ctx.unit()
    d = e - f
    out, power = e, e
    while True:
        power = power * d
        if not power:
            return out
        out = out + power


def conv_exp(a: LinMap) -> LinMap:
    _require_lie(a)
    return fa_exp(a, a.ctx.carrier)


def conv_log(f: LinMap) -> LinMap:
    _require_group(f)
    return fa_log(f, f.ctx.carrier)


def valuation(f: LinMap) -> int:
    """Smallest degree of a key with nonzero value; ``cutoff + 1`` for zero."""
    ctx = f.ctx
    return min((ctx.degree(k) for k, v in f.values.items() if v), default=ctx.cutoff + 1)


def conv_distance(f: LinMap, g: LinMap) -> Fraction:
    """Ultrametric ``2^{-val(f - g)}`` (zero when ``f == g`` at the cutoff)."""
    if f == g:
        return Fraction(0)
    return Fraction(1, 2 ** valuation(f - g))


def _key_pairs(ctx: ConvolutionContext):
    hopf = ctx.hopf
    for a in ctx.keys:
        if a == hopf.unit_key:
            continue
        for b in ctx.keys:
            if b == hopf.unit_key or hopf.degree(a) + hopf.degree(b) > ctx.cutoff:
                continue
            yield a, b, hopf.mul_keys(a, b)


def is_character(f: LinMap) -> bool:
    if f.values[f.ctx.hopf.unit_key] != f.ctx.ring.one():
        return False
    v = f.values
    return all(v[ab] == v[a] * v[b] for a, b, ab in _key_pairs(f.ctx))


def is_inf_character(a: LinMap) -> bool:
    """``a(1) = 0`` and ``a(xy) = 0`` for ``x, y`` in ``Ker ε``."""
    if a.values[a.ctx.hopf.unit_key]:
        return False
    v = a.values
    return all(not v[ab] for _, _, ab in _key_pairs(a.ctx))


def character_from_generators(ctx: ConvolutionContext, gen_values: Mapping) -> LinMap:
    """Multiplicative extension of values prescribed on algebra generators."""
    hopf, ring = ctx.hopf, ctx.ring
    out = {}
    for k in ctx.keys:
        val = ring.one()
        for g in hopf.factor(k):
            gv = gen_values.get(g)
            val = val * (gv if gv is not None else ring.zero())
        out[k] = val
    return LinMap(ctx, out)


def inf_character_from_generators(ctx: ConvolutionContext, gen_values: Mapping) -> LinMap:
    """Infinitesimal character: prescribed on generators, zero on products."""
    zero = ctx.ring.zero()
    return LinMap(ctx, {k: gen_values.get(k, zero) if len(ctx.hopf.factor(k)) == 1 else zero
                        for k in ctx.keys})


def _generator_key(hopf: HopfAlgebra, text: str):
    key = hopf.parse_key(text)
    if len(hopf.factor(key)) != 1:
        raise ValueError(f"{text!r} is not an algebra generator")
    return key


def char_from_spec(spec: Mapping, ring: LaurentRing | None = None) -> LinMap:
    """Build a character from a JSON spec.

    ``{"instance": "poly", "cutoff": 5, "values": {"x": "1/z"}}``; for
    rooted forests the value keys are tree literals such as ``"[*]"``.
    An optional ``"window": [-p, q]`` sets the Laurent window.
    """
    hopf = get_instance(spec["instance"])
    cutoff = int(spec["cutoff"])
    if ring is None and "window" in spec:
        lo, hi = spec["window"]
        ring = LaurentRing(-int(lo), int(hi))
    ctx = ConvolutionContext(hopf, cutoff, ring)
    gens = {}
    for lit, text in spec.get("values", {}).items():
        key = _generator_key(hopf, lit)
        if hopf.degree(key) > cutoff:
            raise PreconditionError(f"generator {lit!r} has degree above the cutoff {cutoff}")
        gens[key] = ctx.ring.parse(str(text)) if not isinstance(text, dict) else ctx.ring.from_json(text)
    return character_from_generators(ctx, gens)


# ---------------------------------------------------------------- sampling


def random_laurent(ring: LaurentRing, rng: random.Random, lo: int, hi: int, density: float = 0.6,
                   bound: int = 3) -> Laurent:
    coeffs = {}
    for k in range(max(lo, -ring.pole_order), min(hi, ring.degree) + 1):
        if rng.random() < density:
            coeffs[k] = Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2, 3)))
    return ring.element(coeffs)


def _generator_values(ctx: ConvolutionContext, rng: random.Random, min_degree: int = 1) -> dict:
    hopf = ctx.hopf
    gens = {}
    for n in range(max(1, min_degree), ctx.cutoff + 1):
        for g in hopf.generators(n):
            gens[g] = random_laurent(ctx.ring, rng, -n, n)
    return gens


def random_character(ctx: ConvolutionContext, rng: random.Random) -> LinMap:
    """Random character; the value on a generator of degree n has exponents in [-n, n]."""
    return character_from_generators(ctx, _generator_values(ctx, rng))


def random_inf_character(ctx: ConvolutionContext, rng: random.Random, min_degree: int = 1) -> LinMap:
    return inf_character_from_generators(ctx, _generator_values(ctx, rng, min_degree))


def random_lie_element(ctx: ConvolutionContext, rng: random.Random, min_degree: int = 1) -> LinMap:
    """Random element of ``g(A)`` (no multiplicativity), vanishing below ``min_degree``."""
    out = {}
    for k in ctx.keys:
        n = ctx.degree(k)
        out[k] = random_laurent(ctx.ring, rng, -n, n) if n >= max(1, min_degree) else ctx.ring.zero()
    return LinMap(ctx, out)
