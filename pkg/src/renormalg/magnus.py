"""Formal-series identities in Rota--Baxter algebras.

Two series spaces are attached to a Rota--Baxter instance and an order ``T``:

* the *dendriform* space ``(k.1 + A)[[t]]`` with the double product ``*_θ``
  and a formal unit ``1`` (where ``a < 1 = a = 1 > a``);
* the *ordinary* space ``A[[t]]`` with the algebra product and unit.

``R`` and ``R~`` send the formal unit to ``1`` and ``-1`` respectively.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any

from .birkhoff import bch_chi_theta
from .errors import InstanceMismatchError, PreconditionError
from .filtered import fa_exp, fa_log, fixed_point
from .rota_baxter import (
    RBInstance,
    double_product,
    left_prelie,
    prec,
    right_prelie,
    succ,
    words,
)
from .scalars import bernoulli
from .series import Series, SeriesSpace


@dataclass
class SeriesContext:
    inst: RBInstance
    order: int
    dend: SeriesSpace = field(init=False)
    ordinary: SeriesSpace = field(init=False)

    def __post_init__(self):
        if self.order < 0:
            raise PreconditionError("series order must be >= 0")
        inst = self.inst
        self.dend = SeriesSpace(self.order, lambda x, y: double_product(x, y, inst), inst.zero,
                                None, f"dend:{inst.name}")
        self.ordinary = SeriesSpace(self.order, lambda x, y: x * y, inst.zero, inst.one,
                                    f"ord:{inst.name}")

    # -- lifting
    def ta(self, a, space: SeriesSpace | None = None) -> Series:
        return (space or self.dend).monomial(a, 1)

    def to_ordinary(self, s: Series, op=None, unit_image=None) -> Series:
        """Apply ``op`` (default identity) coefficientwise into the ordinary space."""
        fn = op or (lambda x: x)
        scalar = unit_image if s.scalar else None
        if s.scalar and unit_image is None:
            raise InstanceMismatchError("the formal unit has no image in A without an explicit value")
        return s.map(fn, self.ordinary, scalar_image=scalar if scalar is not None else self.inst.zero)

    def to_dend(self, s: Series) -> Series:
        if s.scalar:
            raise InstanceMismatchError("ordinary series with a constant term")
        return Series(self.dend, s.coeffs)

    def R(self, s: Series) -> Series:
        return self.to_ordinary(s, self.inst.R, self.inst.one)

    def Rtilde(self, s: Series) -> Series:
        return self.to_ordinary(s, self.inst.Rtilde, -self.inst.one)

    # -- bilinear lifts to series
    def bilinear(self, op, u: Series, v: Series, space: SeriesSpace | None = None,
                 left_unit=None, right_unit=None) -> Series:
        """Coefficientwise bilinear extension of ``op``.

        ``left_unit(v_coeff)`` / ``right_unit(u_coeff)`` give ``op(1, y)`` and
        ``op(x, 1)``; using a formal unit where these are ``None`` is an error.
        """
        space = space or u.space
        T = space.order
        out = [space.zero] * (T + 1)
        for i in range(T + 1):
            if not u.coeffs[i]:
                continue
            for j in range(T + 1 - i):
                if v.coeffs[j]:
                    out[i + j] = out[i + j] + op(u.coeffs[i], v.coeffs[j])
        if u.scalar:
            if left_unit is None:
                raise InstanceMismatchError("product with the formal unit on the left is undefined")
            out = [o + left_unit(c) * u.scalar if c else o for o, c in zip(out, v.coeffs)]
        if v.scalar:
            if right_unit is None:
                raise InstanceMismatchError("product with the formal unit on the right is undefined")
            out = [o + right_unit(c) * v.scalar if c else o for o, c in zip(out, u.coeffs)]
        if u.scalar and v.scalar:
            raise InstanceMismatchError("1 < 1 and 1 > 1 are not defined")
        return Series(space, out)

    def prec(self, u, v):
        return self.bilinear(lambda x, y: prec(x, y, self.inst), u, v, right_unit=lambda x: x)

    def succ(self, u, v):
        return self.bilinear(lambda x, y: succ(x, y, self.inst), u, v, left_unit=lambda y: y)

    def left_prelie(self, u, v):
        return self.bilinear(lambda x, y: left_prelie(x, y, self.inst), u, v)

    def right_prelie(self, u, v):
        return self.bilinear(lambda x, y: right_prelie(x, y, self.inst), u, v)

    def dend_exp(self, s: Series) -> Series:
        return fa_exp(s, self.dend.carrier())

    def ord_exp(self, s: Series) -> Series:
        return fa_exp(s, self.ordinary.carrier())

    def ord_log(self, s: Series) -> Series:
        return fa_log(s, self.ordinary.carrier())

    def ord_inverse(self, s: Series) -> Series:
        one = self.ordinary.one()
        d = one - s
        out, power = one, one
        for _ in range(self.order):
            power = power * d
            out = out + power
        return out


# ---------------------------------------------------------------- fixed points


def solve_fixed_points(a, inst: RBInstance, T: int, ctx: SeriesContext | None = None):
    """``X = 1 + ta < X`` and ``Y = 1 - Y > ta`` in the dendriform space."""
    ctx = ctx or SeriesContext(inst, T)
    return _solve_xy(ctx, ctx.ta(a))


def _solve_xy(ctx: SeriesContext, b: Series):
    one = ctx.dend.one()
    carrier = ctx.dend.carrier()
    X = fixed_point(lambda x: one + ctx.prec(b, x), one, carrier, "X equation")
    Y = fixed_point(lambda y: one - ctx.succ(y, b), one, carrier, "Y equation")
    return X, Y


def word_series(a, inst: RBInstance, T: int, ctx: SeriesContext | None = None):
    """``sum t^n w<^(n)`` and ``sum (-t)^n w>^(n)``."""
    ctx = ctx or SeriesContext(inst, T)
    xs = [words(a, inst, n, "w<") if n else inst.zero for n in range(T + 1)]
    ys = [words(a, inst, n, "w>") * (-1) ** n if n else inst.zero for n in range(T + 1)]
    return ctx.dend.series(xs, 1), ctx.dend.series(ys, 1)


# ---------------------------------------------------------------- pre-Lie Magnus


def _bernoulli_series(ctx: SeriesContext, op, omega: Series, b: Series, signed: bool) -> Series:
    total, term = b, b
    for m in range(1, ctx.order + 1):
        term = op(omega, term)
        if not term:
            break
        c = bernoulli(m) / factorial(m)
        if signed and m % 2:
            c = -c
        if c:
            total = total + term * c
    return total


def _check_theta(inst: RBInstance, theta):
    if theta is not None and Fraction(theta) != inst.weight:
        raise InstanceMismatchError(f"θ = {theta} differs from the instance weight {inst.weight}")


def magnus_prelie(a, inst: RBInstance, theta=None, T: int = 6, form: str = "left",
                  ctx: SeriesContext | None = None, argument: Series | None = None) -> Series:
    """Pre-Lie Magnus element ``Ω'`` with ``exp^{*θ}(Ω') = X``.

    ``form='left'`` iterates ``Ω' = sum B_m/m! L_▷[Ω']^m(ta)`` (the generator);
    ``form='right'`` iterates ``Ω' = sum (-1)^m B_m/m! R_◁[Ω']^m(ta)``.
    ``argument`` replaces ``ta`` by any series without constant term.
    """
    _check_theta(inst, theta)
    if T < 1:
        raise PreconditionError("Magnus order must be >= 1")
    ctx = ctx or SeriesContext(inst, T)
    b = argument if argument is not None else ctx.ta(a)
    if b.valuation() < 1:
        raise PreconditionError("Magnus argument must have no constant term")
    if form == "left":
        step = lambda om: _bernoulli_series(ctx, ctx.left_prelie, om, b, signed=False)
    elif form == "right":
        step = lambda om: _bernoulli_series(ctx, lambda o, x: ctx.right_prelie(x, o), om, b, signed=True)
    else:
        raise ValueError(f"unknown Magnus form {form!r}")
    return fixed_point(step, b, ctx.dend.carrier(), "pre-Lie Magnus recursion")


def commutative_magnus_closed_form(a, inst: RBInstance, T: int, ctx: SeriesContext | None = None) -> Series:
    """``-θ^{-1} log(1 - θ t a)``: coefficient of ``t^n`` is ``θ^{n-1} a^n / n``."""
    ctx = ctx or SeriesContext(inst, T)
    w = inst.weight
    coeffs = [inst.zero]
    power = inst.one
    for n in range(1, T + 1):
        power = power * a
        coeffs.append(power * (w ** (n - 1) / n))
    return ctx.dend.series(coeffs)


@dataclass
class MagnusReport:
    order: int
    exp_equals_X: bool
    exp_minus_equals_Y: bool
    forms_agree: bool
    words_match: bool

    @property
    def passed(self) -> bool:
        return self.exp_equals_X and self.exp_minus_equals_Y and self.forms_agree and self.words_match


def verify_magnus(a, inst: RBInstance, T: int) -> MagnusReport:
    ctx = SeriesContext(inst, T)
    omega = magnus_prelie(a, inst, T=T, ctx=ctx)
    X, Y = solve_fixed_points(a, inst, T, ctx)
    WX, WY = word_series(a, inst, T, ctx)
    return MagnusReport(
        T,
        ctx.dend_exp(omega) == X,
        ctx.dend_exp(-omega) == Y,
        magnus_prelie(a, inst, T=T, form="right", ctx=ctx) == omega,
        (X, Y) == (WX, WY),
    )


# ---------------------------------------------------------------- classical Magnus


def magnus_classical(psi, T: int, inst: RBInstance | None = None, ctx: SeriesContext | None = None) -> Series:
    """``Ω = R(tΨ) + R(sum_{n>0} B_n/n! ad_Ω^n(tΨ))`` in a weight-0 instance."""
    from .rota_baxter import poly_matrix_integration

    inst = inst or poly_matrix_integration(psi.n)
    if inst.weight != 0:
        raise PreconditionError("classical Magnus needs a weight-0 instance")
    ctx = ctx or SeriesContext(inst, T)
    space = ctx.ordinary
    b = space.monomial(psi, 1)

    def ad(om, x):
        return om * x - x * om

    def step(om):
        total, term = b, b
        for n in range(1, T + 1):
            term = ad(om, term)
            if not term:
                break
            c = bernoulli(n) / factorial(n)
            if c:
                total = total + term * c
        return total.map(inst.R)

    return fixed_point(step, b.map(inst.R), space.carrier(), "classical Magnus recursion")


def picard_solution(psi, T: int, inst: RBInstance | None = None, ctx: SeriesContext | None = None) -> Series:
    """Series solution of ``Φ' = tΨΦ``, ``Φ(0) = 1``: ``Φ_n = R(Ψ Φ_{n-1})``."""
    from .rota_baxter import poly_matrix_integration

    inst = inst or poly_matrix_integration(psi.n)
    ctx = ctx or SeriesContext(inst, T)
    coeffs = [inst.one]
    for _ in range(T):
        coeffs.append(inst.R(psi * coeffs[-1]))
    return ctx.ordinary.series(coeffs)


# ---------------------------------------------------------------- Atkinson


@dataclass
class AtkinsonResult:
    Xhat: Series
    Yhat: Series
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def atkinson(a, inst: RBInstance, theta=None, T: int = 6, ctx: SeriesContext | None = None) -> AtkinsonResult:
    """``X^ = 1 - tR~(aX^)``, ``Y^ = 1 - tR(Y^a)`` and their identities.

    ``checks['preparation_plus_form']`` compares ``tY^a`` with ``exp^{*θ}(Ω') - 1``,
    which fails on generic samples; ``checks['preparation_minus_form']`` compares
    ``tY^a`` with ``1 - exp^{*θ}(-Ω')`` and ``exp^{*θ}(Ω') - 1`` with ``taX^``.
    """
    _check_theta(inst, theta)
    ctx = ctx or SeriesContext(inst, T)
    sp = ctx.ordinary
    one = sp.one()
    carrier = sp.carrier()
    ta = sp.monomial(a, 1)
    Rt = lambda s: s.map(inst.Rtilde)
    R = lambda s: s.map(inst.R)
    Xh = fixed_point(lambda x: one - Rt(ta * x), one, carrier, "X^ recursion")
    Yh = fixed_point(lambda y: one - R(y * ta), one, carrier, "Y^ recursion")
    w = inst.weight

    omega = magnus_prelie(a, inst, T=T, ctx=ctx)
    X, Y = solve_fixed_points(a, inst, T, ctx)
    R_om = ctx.to_ordinary(omega, inst.R)
    Rt_om = ctx.to_ordinary(omega, inst.Rtilde)
    Xh_inv, Yh_inv = ctx.ord_inverse(Xh), ctx.ord_inverse(Yh)
    exp_plus = ctx.dend_exp(omega) - ctx.dend.one()
    exp_minus = ctx.dend.one() - ctx.dend_exp(-omega)
    bbar = (Yh * ta)
    checks = {
        "factorization": Yh * (one - ta * w) * Xh == one,
        "Xhat_exponential": Xh == ctx.ord_exp(-Rt_om),
        "Yhat_exponential": Yh == ctx.ord_exp(-R_om),
        "Xhat_from_X": Xh == ctx.Rtilde(X) * -1,
        "Yhat_from_Y": Yh == ctx.R(Y),
        "Xhat_inverse_recursion": Xh_inv == one + Rt(Yh * ta),
        "Yhat_inverse_recursion": Yh_inv == one + R(ta * Xh),
        "Xhat_inverse_exponential": Xh_inv == ctx.ord_exp(Rt_om),
        "Yhat_inverse_exponential": Yh_inv == ctx.ord_exp(R_om),
        "spitzer_factorization": one - ta * w == ctx.ord_exp(R_om) * ctx.ord_exp(Rt_om),
        "preparation_plus_form": bbar.coeffs == exp_plus.coeffs and not exp_plus.scalar,
        "preparation_minus_form": bbar.coeffs == exp_minus.coeffs
        and (ta * Xh).coeffs == exp_plus.coeffs,
    }
    return AtkinsonResult(Xh, Yh, checks)


def word_spitzer(a, inst: RBInstance, T: int, ctx: SeriesContext | None = None) -> dict[str, bool]:
    """Word forms of the exponential factors.

    ``exp(-R(Ω')) = 1 + sum (-t)^m R(w>^(m))`` and
    ``exp(-R~(Ω')) = 1 - sum t^m R~(w<^(m))``; the key ``tilde_alternating``
    records the variant with ``(-t)^m`` in the second series.
    """
    ctx = ctx or SeriesContext(inst, T)
    sp = ctx.ordinary
    omega = magnus_prelie(a, inst, T=T, ctx=ctx)
    lhs_r = ctx.ord_exp(-ctx.to_ordinary(omega, inst.R))
    lhs_rt = ctx.ord_exp(-ctx.to_ordinary(omega, inst.Rtilde))
    wr = [inst.one] + [inst.R(words(a, inst, m, "w>")) * (-1) ** m for m in range(1, T + 1)]
    wt = [inst.one] + [inst.Rtilde(words(a, inst, m, "w<")) * -1 for m in range(1, T + 1)]
    wt_alt = [inst.one] + [inst.Rtilde(words(a, inst, m, "w<")) * (-1) ** m for m in range(1, T + 1)]
    return {
        "R_succ_words": lhs_r == sp.series(wr),
        "Rtilde_prec_words": lhs_rt == sp.series(wt),
        "tilde_alternating": lhs_rt == sp.series(wt_alt),
    }


# ---------------------------------------------------------------- commutative Spitzer


def integer_partitions(m: int):
    """Multiplicity vectors ``(λ_1..λ_m)`` with ``sum i λ_i = m``."""
    def rec(n, largest):
        if n == 0:
            yield {}
            return
        for k in range(min(n, largest), 0, -1):
            for rest in rec(n - k, k):
                d = dict(rest)
                d[k] = d.get(k, 0) + 1
                yield d
    for d in rec(m, m):
        yield tuple(d.get(i, 0) for i in range(1, m + 1))


@dataclass
class BaxterResult:
    r: list
    iterated: list
    partition: list
    exponential: Series
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def spitzer_commutative(a, inst: RBInstance, theta=None, T: int = 6) -> BaxterResult:
    """Baxter's identity ``exp(sum r_n t^n / n) = 1 + sum a_m t^m``.

    ``r_n = R((-θ)^{n-1} a^n)`` in this package's weight convention (this is
    ``R(θ'^{n-1} a^n)`` for an inclusive Riemann sum of step ``θ' = -θ``);
    ``a_m`` is both the partition sum and the iterated ``R(...R(R(a)a)...a)``.
    """
    _check_theta(inst, theta)
    if not inst.commutative:
        raise PreconditionError("Baxter's identity needs a commutative instance")
    ctx = SeriesContext(inst, T)
    w = inst.weight
    r = [None]
    power = inst.one
    for n in range(1, T + 1):
        power = power * a
        r.append(inst.R(power * (-w) ** (n - 1)))
    iterated = [inst.one]
    for m in range(1, T + 1):
        prev = iterated[-1]
        iterated.append(inst.R(a) if m == 1 else inst.R(prev * a))
    partition = [inst.one]
    for m in range(1, T + 1):
        total = inst.zero
        for lam in integer_partitions(m):
            term, denom = inst.one, 1
            for i, k in enumerate(lam, start=1):
                for _ in range(k):
                    term = term * r[i]
                denom *= i ** k * factorial(k)
            total = total + term * Fraction(1, denom)
        partition.append(total)
    expo = ctx.ord_exp(ctx.ordinary.series([inst.zero] + [r[n] * Fraction(1, n) for n in range(1, T + 1)]))
    checks = {
        "iterated_equals_partition": iterated == partition,
        "exponential_equals_iterated": expo == ctx.ordinary.series(iterated),
        "a1_equals_r1": T < 1 or iterated[1] == r[1],
    }
    return BaxterResult(r, iterated, partition, expo, checks)


# ---------------------------------------------------------------- χ vs Magnus


@dataclass
class ChiMagnusResult:
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def chi_vs_magnus(a, inst: RBInstance, theta=None, T: int = 5, alpha: Series | None = None) -> ChiMagnusResult:
    """Compare the weight-θ BCH recursion (``P = R``) with the pre-Lie Magnus element.

    ``Ω'_θ(ta) = χ_θ(-log(1 - θta)/θ)`` and, for a series ``α`` without
    constant term (default ``ta``), ``χ_θ(α) = Ω'_θ((1 - exp(-θα))/θ)``.
    """
    _check_theta(inst, theta)
    w = inst.weight
    if w == 0:
        raise PreconditionError("χ vs Magnus needs a nonzero weight")
    ctx = SeriesContext(inst, T)
    sp = ctx.ordinary
    carrier = sp.carrier()
    P = lambda s: s.map(inst.R)
    ta = sp.monomial(a, 1)
    one = sp.one()

    alpha_theta = ctx.ord_log(one - ta * w) * (-1 / w)
    chi1 = bch_chi_theta(alpha_theta, P, w, carrier)
    omega = magnus_prelie(a, inst, T=T, ctx=ctx)

    alpha = alpha if alpha is not None else ta
    chi2 = bch_chi_theta(alpha, P, w, carrier)
    arg = (one - ctx.ord_exp(alpha * -w)) * (1 / w)
    omega2 = magnus_prelie(None, inst, T=T, ctx=ctx, argument=ctx.to_dend(arg))

    # round trip: α -> (1 - exp(-θα))/θ -> -log(1 - θ·)/θ gives α back
    back = ctx.ord_log(one - arg * w) * (-1 / w)
    return ChiMagnusResult({
        "omega_equals_chi_of_log": ctx.to_dend(chi1) == omega,
        "chi_equals_omega_of_exp": ctx.to_dend(chi2) == omega2,
        "round_trip": back == alpha,
    })
