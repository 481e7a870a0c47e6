"""Rota--Baxter algebras and their dendriform and pre-Lie products.

Convention: ``R`` has weight ``θ`` when
``R(x) R(y) = R(R(x) y + x R(y) + θ x y)``, and ``R~ = -θ Id - R``.
Scaling a weight ``-1`` idempotent projector by ``-θ`` gives weight ``θ``;
that is how the projector-based instances are produced at any weight.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from numbers import Rational
from typing import Any, Callable, Sequence

from .errors import InstanceMismatchError, PreconditionError
from .linalg import Matrix
from .polynomials import Polynomial
from .scalars import Laurent, LaurentRing


@dataclass(frozen=True)
class RBInstance:
    """A Rota--Baxter algebra: carrier arithmetic plus operator and weight."""

    name: str
    weight: Fraction
    operator: Callable[[Any], Any] = field(compare=False)
    one: Any = field(compare=False)
    zero: Any = field(compare=False)
    sampler: Callable[[random.Random], Any] = field(compare=False)
    commutative: bool = False

    def R(self, x):
        return self.operator(x)

    def Rtilde(self, x):
        return x * -self.weight - self.operator(x)

    def sample(self, rng: random.Random):
        return self.sampler(rng)


# ---------------------------------------------------------------- sequences


class FiniteSequence:
    """Finite sequence ``(f(1), ..., f(n))`` with pointwise operations."""

    __slots__ = ("values",)

    def __init__(self, values: Sequence):
        self.values = tuple(Fraction(v) for v in values)

    def _zip(self, other, op):
        if isinstance(other, Rational):
            other = FiniteSequence([other] * len(self.values))
        if len(other.values) != len(self.values):
            raise InstanceMismatchError("sequence lengths differ")
        return FiniteSequence([op(a, b) for a, b in zip(self.values, other.values)])

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    __radd__ = __add__

    def __neg__(self):
        return FiniteSequence([-a for a in self.values])

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return FiniteSequence([a * other for a in self.values])
        return self._zip(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if isinstance(other, FiniteSequence):
            return self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def __bool__(self):
        return any(self.values)

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"

    def __repr__(self):
        return f"FiniteSequence{self}"


def partial_sums(f: FiniteSequence, step, inclusive: bool) -> FiniteSequence:
    """``k -> step * sum_{i <= k} f(i)`` (inclusive) or ``sum_{i < k}`` (strict)."""
    out, acc = [], Fraction(0)
    for v in f.values:
        if inclusive:
            acc += v
            out.append(step * acc)
        else:
            out.append(step * acc)
            acc += v
    return FiniteSequence(out)


# ---------------------------------------------------------------- samplers


def _rat(rng: random.Random, bound: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2, 3)))


def _laurent_sampler(ring: LaurentRing, span: int = 1):
    def sample(rng):
        return ring.element({k: _rat(rng, 3) for k in range(-span, span + 1) if rng.random() < 0.7})
    return sample


def _upper_sampler(n: int):
    def sample(rng):
        return Matrix([[_rat(rng) if j >= i else Fraction(0) for j in range(n)] for i in range(n)])
    return sample


def _poly_sampler(max_degree: int = 2):
    def sample(rng):
        return Polynomial([_rat(rng) for _ in range(rng.randint(0, max_degree) + 1)])
    return sample


def _sequence_sampler(n: int):
    def sample(rng):
        return FiniteSequence([_rat(rng) for _ in range(n)])
    return sample


def _poly_matrix_sampler(n: int, max_degree: int = 1):
    def sample(rng):
        return Matrix([[Polynomial([_rat(rng, 2) for _ in range(rng.randint(0, max_degree) + 1)])
                        for _ in range(n)] for _ in range(n)], Polynomial())
    return sample


# ---------------------------------------------------------------- instances


def laurent_ms(weight=-1, ring: LaurentRing | None = None, span: int = 1) -> RBInstance:
    """Laurent polynomials with ``R = -θ·(polar part)``; ``θ = -1`` is minimal subtraction."""
    weight = Fraction(weight)
    if weight == 0:
        raise PreconditionError("projector instances need a nonzero weight")
    ring = ring or LaurentRing(16, 16)
    scale = -weight
    return RBInstance(f"laurent-ms[{weight}]", weight, lambda a: a.polar() * scale,
                      ring.one(), ring.zero(), _laurent_sampler(ring, span), commutative=True)


def strict_upper_projection(m: Matrix) -> Matrix:
    return m.map_indexed(lambda i, j, x: x if j > i else x * 0)


def upper_triangular(n: int = 4, weight=-1) -> RBInstance:
    """Upper-triangular rational matrices; ``R = -θ·(strictly upper part)``.

    The strictly upper part and the diagonal are both subalgebras, so the
    projector is Rota--Baxter of weight ``-1`` before scaling.
    """
    weight = Fraction(weight)
    if weight == 0:
        raise PreconditionError("projector instances need a nonzero weight")
    scale = -weight
    return RBInstance(f"upper-triangular-{n}[{weight}]", weight,
                      lambda m: strict_upper_projection(m) * scale,
                      Matrix.identity(n), Matrix.zeros(n), _upper_sampler(n))


def poly_integration() -> RBInstance:
    """Polynomials in ``s`` with ``R(p)(s) = int_0^s p``; weight 0."""
    return RBInstance("poly-integration", Fraction(0), Polynomial.integrate,
                      Polynomial({0: 1}), Polynomial(), _poly_sampler(), commutative=True)


def sequence_summation(theta=1, length: int = 6, inclusive: bool = True) -> RBInstance:
    """Sequences ``f(1..length)`` with Riemann partial sums of step ``θ``.

    The inclusive sum ``θ sum_{i<=k}`` has weight ``-θ`` and the strict sum
    ``θ sum_{i<k}`` has weight ``+θ`` in this package's convention.
    """
    theta = Fraction(theta)
    weight = -theta if inclusive else theta
    kind = "inclusive" if inclusive else "strict"
    return RBInstance(f"sequence-{kind}[{theta}]", weight,
                      lambda f: partial_sums(f, theta, inclusive),
                      FiniteSequence([1] * length), FiniteSequence([0] * length), _sequence_sampler(length),
                      commutative=True)


def poly_matrix_integration(n: int = 2) -> RBInstance:
    """``n x n`` matrices of polynomials with entrywise integration; weight 0."""
    zero = Polynomial()
    return RBInstance(f"poly-matrix-integration-{n}", Fraction(0),
                      lambda m: m.map(Polynomial.integrate),
                      Matrix.identity(n, Polynomial({0: 1}), zero), Matrix.zeros(n, zero),
                      _poly_matrix_sampler(n))


def default_instances() -> list[RBInstance]:
    return [
        laurent_ms(-1),
        laurent_ms(2),
        upper_triangular(4, -1),
        upper_triangular(3, Fraction(1, 2)),
        poly_integration(),
        sequence_summation(1, inclusive=True),
        sequence_summation(1, inclusive=False),
        sequence_summation(Fraction(1, 3), inclusive=True),
        poly_matrix_integration(2),
    ]


# ---------------------------------------------------------------- products


def rb_defect(inst: RBInstance, x, y):
    """``R(x)R(y) - R(R(x)y + xR(y) + θxy)``."""
    R = inst.R
    return R(x) * R(y) - R(R(x) * y + x * R(y) + x * y * inst.weight)


@dataclass
class RBReport:
    instance: str
    weight: Fraction
    samples: int
    passed: bool
    witness: tuple | None = None


def rb_verify(inst: RBInstance, samples: int = 200, rng: random.Random | None = None,
              weight=None) -> RBReport:
    """Check the Rota--Baxter relation exactly on sampled pairs.

    ``weight`` overrides the declared weight (used to show a wrong weight fails).
    """
    rng = rng or random.Random(0)
    w = inst.weight if weight is None else Fraction(weight)
    probe = inst if weight is None else RBInstance(inst.name, w, inst.operator, inst.one, inst.zero,
                                                   inst.sampler, inst.commutative)
    for _ in range(samples):
        x, y = inst.sample(rng), inst.sample(rng)
        if rb_defect(probe, x, y):
            return RBReport(inst.name, w, samples, False, (x, y))
    return RBReport(inst.name, w, samples, True)


def double_product(a, b, inst: RBInstance):
    """``a *_θ b = R(a) b + a R(b) + θ a b``."""
    return inst.R(a) * b + a * inst.R(b) + a * b * inst.weight


def dendriform_products(a, b, inst: RBInstance, which: str):
    """Dendriform and tri-dendriform operations.

    ``<`` is ``a R(b) + θ a b`` and ``>`` is ``R(a) b``; the primed pair
    puts the ``θ a b`` term on the other side.  ``lt``, ``gt`` and
    ``diamond`` are the tri-dendriform pieces ``a R(b)``, ``R(a) b``, ``θ a b``.
    """
    R, w = inst.R, inst.weight
    if which in ("<", "prec"):
        return a * R(b) + a * b * w
    if which in (">", "succ"):
        return R(a) * b
    if which in ("<'", "prec'", "lt"):
        return a * R(b)
    if which in (">'", "succ'"):
        return R(a) * b + a * b * w
    if which == "gt":
        return R(a) * b
    if which == "diamond":
        return a * b * w
    raise ValueError(f"unknown dendriform product {which!r}")


def prec(a, b, inst):
    return dendriform_products(a, b, inst, "<")


def succ(a, b, inst):
    return dendriform_products(a, b, inst, ">")


def prelie_products(a, b, inst: RBInstance, which: str):
    """``a ▷ b = R(a)b - bR(a) - θ b a`` and ``a ◁ b = aR(b) - R(b)a + θ a b``."""
    R, w = inst.R, inst.weight
    if which in ("left", "▷", "|>"):
        ra = R(a)
        return ra * b - b * ra - b * a * w
    if which in ("right", "◁", "<|"):
        rb = R(b)
        return a * rb - rb * a + a * b * w
    raise ValueError(f"unknown pre-Lie product {which!r}")


def left_prelie(a, b, inst):
    return prelie_products(a, b, inst, "left")


def right_prelie(a, b, inst):
    return prelie_products(a, b, inst, "right")


# ---------------------------------------------------------------- words


def words(a, inst: RBInstance, n: int, kind: str):
    """Iterated words in a single letter ``a``.

    ``w<``: ``a < w<^(n-1)``; ``w>``: ``w>^(n-1) > a``; both start from the
    dendriform unit at ``n = 0`` (returned as ``None``, since the unit is not
    an element of the carrier).  ``l``: left-nested ``▷``; ``r``: right-nested
    ``◁``; both need ``n >= 1``.
    """
    if kind in ("w<", "w>"):
        if n < 0:
            raise PreconditionError("word length must be >= 0")
        if n == 0:
            return None
        w = a
        for _ in range(n - 1):
            w = prec(a, w, inst) if kind == "w<" else succ(w, a, inst)
        return w
    if kind in ("l", "r"):
        if n < 1:
            raise PreconditionError("pre-Lie word length must be >= 1")
        w = a
        for _ in range(n - 1):
            w = left_prelie(w, a, inst) if kind == "l" else right_prelie(a, w, inst)
        return w
    raise ValueError(f"unknown word kind {kind!r}")


def compositions(n: int):
    """All compositions of ``n`` (ordered tuples of positive parts)."""
    for cuts in iproduct((False, True), repeat=n - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def composition_weight(parts: Sequence[int]) -> Fraction:
    """``1 / (i1 (i1+i2) ... (i1+...+ik))``."""
    denom, acc = 1, 0
    for p in parts:
        acc += p
        denom *= acc
    return Fraction(1, denom)


def _star_chain(items, inst):
    out = items[0]
    for x in items[1:]:
        out = double_product(out, x, inst)
    return out


def nc_spitzer_sum(a, inst: RBInstance, n: int, side: str):
    """Composition sums for ``w>^(n)`` (``side='succ'``) or ``w<^(n)`` (``'prec'``)."""
    l_words = {i: words(a, inst, i, "l" if side == "succ" else "r") for i in range(1, n + 1)}
    total = inst.zero
    for parts in compositions(n):
        factors = [l_words[i] for i in parts]
        if side == "prec":
            factors = factors[::-1]
        total = total + _star_chain(factors, inst) * composition_weight(parts)
    return total


@dataclass
class SpitzerWordReport:
    n: int
    succ_holds: bool
    prec_holds: bool

    @property
    def passed(self) -> bool:
        return self.succ_holds and self.prec_holds


def nc_spitzer_words(a, inst: RBInstance, n: int) -> SpitzerWordReport:
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return SpitzerWordReport(
        n,
        nc_spitzer_sum(a, inst, n, "succ") == words(a, inst, n, "w>"),
        nc_spitzer_sum(a, inst, n, "prec") == words(a, inst, n, "w<"),
    )
