"""Seeded verification suite: every identity as a tagged, replayable check."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import birkhoff as bk
from . import bohnenblust as bs
from . import magnus as mg
from . import matrix_calculus as mc
from . import rota_baxter as rb
from .convolution import (
    ConvolutionContext,
    conv_exp,
    conv_inverse,
    conv_log,
    is_character,
    is_inf_character,
    random_character,
    random_inf_character,
    random_lie_element,
)
from .hopf import HopfAlgebra, TensorElement, get_instance
from .scalars import LaurentRing


@dataclass(frozen=True)
class RunConfig:
    instance: str = "rooted-forest"
    cutoff: int = 4
    order: int = 6
    theta: Fraction = Fraction(-1)
    seed: int = 0
    samples: int = 3
    pole_order: int | None = None
    degree: int | None = None

    def validate(self) -> None:
        get_instance(self.instance)
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.theta == 0:
            raise ValueError("theta must be nonzero (weight-0 checks use the integration instance)")
        for bound in (self.pole_order, self.degree):
            if bound is not None and bound < self.cutoff:
                raise ValueError("Laurent window bounds must be >= cutoff")

    @property
    def ring(self) -> LaurentRing:
        return LaurentRing(self.pole_order or self.cutoff, self.degree or self.cutoff)

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "cutoff": self.cutoff,
            "order": self.order,
            "theta": str(self.theta),
            "seed": self.seed,
            "samples": self.samples,
            "window": [-self.ring.pole_order, self.ring.degree],
        }


@dataclass
class CheckResult:
    tag: str
    passed: bool
    detail: str
    witness: str | None = None

    def to_json(self) -> dict:
        return {"tag": self.tag, "passed": self.passed, "detail": self.detail, "witness": self.witness}


Check = Callable[[RunConfig, random.Random], tuple[bool, str, str | None]]
REGISTRY: dict[str, Check] = {}


def identity(tag: str):
    def register(fn: Check) -> Check:
        REGISTRY[tag] = fn
        return fn
    return register


def _first(items, pred):
    for x in items:
        if not pred(x):
            return x
    return None


# ---------------------------------------------------------------- Hopf


def _tensor_coassoc(h: HopfAlgebra, key) -> bool:
    left, right = {}, {}
    for (a, b), m in h.coproduct_key(key).items():
        for (a1, a2), m1 in h.coproduct_key(a).items():
            left[(a1, a2, b)] = left.get((a1, a2, b), 0) + m * m1
        for (b1, b2), m2 in h.coproduct_key(b).items():
            right[(a, b1, b2)] = right.get((a, b1, b2), 0) + m * m2
    return {k: v for k, v in left.items() if v} == {k: v for k, v in right.items() if v}


def hopf_axiom_failures(h: HopfAlgebra, max_degree: int) -> dict[str, object]:
    """First failing key per axiom (``None`` when the axiom holds)."""
    keys = h.basis_upto(max_degree)
    u = h.unit_key

    def counit(k):
        cop = h.coproduct_key(k)
        return cop.get((k, u), 0) == 1 and cop.get((u, k), 0) == 1 and all(
            (a != u or b == k) and (b != u or a == k) for (a, b) in cop)

    def antipode(k):
        left, right = h.element(), h.element()
        for (a, b), m in h.coproduct_key(k).items():
            left = left + h.product(h.antipode(a), h.key(b)) * m
            right = right + h.product(h.key(a), h.antipode(b)) * m
        expected = h.one() if k == u else h.element()
        return left == expected == right

    def three_ways(k):
        return h.antipode(k, "left") == h.antipode(k, "right") == h.antipode(k, "series")

    def multiplicative(pair):
        a, b = pair
        lhs = h.coproduct(h.key(h.mul_keys(a, b)))
        prod = {}
        for (a1, a2), m in h.coproduct_key(a).items():
            for (b1, b2), n in h.coproduct_key(b).items():
                k = (h.mul_keys(a1, b1), h.mul_keys(a2, b2))
                prod[k] = prod.get(k, 0) + m * n
        return lhs == TensorElement(h, 2, prod)

    def graded(k):
        n = h.degree(k)
        return all(h.degree(a) + h.degree(b) == n for a, b in h.coproduct_key(k)) and \
            all(h.degree(x) == n for x in h.antipode(k).terms)

    pairs = [(a, b) for a in keys for b in keys if h.degree(a) + h.degree(b) <= max_degree]
    return {
        "coassociativity": _first(keys, lambda k: _tensor_coassoc(h, k)),
        "counit": _first(keys, counit),
        "antipode": _first(keys, antipode),
        "antipode_three_ways": _first(keys, three_ways),
        "multiplicativity": _first(pairs, multiplicative),
        "grading": _first(keys, graded),
    }


def _hopf_check(axiom):
    def check(cfg, rng):
        h = get_instance(cfg.instance)
        bad = hopf_axiom_failures(h, cfg.cutoff)[axiom]
        return bad is None, f"all basis keys of degree <= {cfg.cutoff}", None if bad is None else repr(bad)
    return check


for _axiom in ("coassociativity", "counit", "antipode", "antipode_three_ways", "multiplicativity", "grading"):
    identity(f"hopf.{_axiom}")(_hopf_check(_axiom))


# ---------------------------------------------------------------- convolution / Birkhoff


def _ctx(cfg: RunConfig) -> ConvolutionContext:
    return ConvolutionContext(get_instance(cfg.instance), cfg.cutoff, cfg.ring)


def _sampled(cfg, rng, make, pred, what):
    for i in range(cfg.samples):
        x = make(rng)
        if not pred(x):
            return False, what, f"sample {i}: {x!r}"
    return True, what, None


@identity("convolution.group_inverse")
def _(cfg, rng):
    ctx = _ctx(cfg)
    return _sampled(cfg, rng, lambda r: random_character(ctx, r),
                    lambda f: f * conv_inverse(f) == ctx.unit() == conv_inverse(f) * f,
                    "f * f^-1 = e = f^-1 * f on random characters")


@identity("convolution.inverse_is_antipode")
def _(cfg, rng):
    ctx = _ctx(cfg)
    h = ctx.hopf
    return _sampled(cfg, rng, lambda r: random_character(ctx, r),
                    lambda f: conv_inverse(f).values == {k: f.apply(h.antipode(k)) for k in ctx.keys},
                    "character inverse equals composition with the antipode")


@identity("convolution.exp_log")
def _(cfg, rng):
    ctx = _ctx(cfg)

    def ok(a):
        phi = conv_exp(a)
        return is_character(phi) and conv_log(phi) == a and is_inf_character(a)
    return _sampled(cfg, rng, lambda r: random_inf_character(ctx, r), ok,
                    "exp maps infinitesimal characters to characters; log inverts it")


@identity("birkhoff.factorization")
def _(cfg, rng):
    ctx = _ctx(cfg)

    def ok(phi):
        pair = bk.birkhoff_decompose(phi)
        return all(bk.check_birkhoff_pair(phi, pair).values()) and bk.characters_in_characters_out(phi, pair)
    return _sampled(cfg, rng, lambda r: random_character(ctx, r), ok,
                    "phi = phi_-^-1 * phi_+, polar/holomorphic supports, characters preserved")


@identity("birkhoff.series_forms")
def _(cfg, rng):
    ctx = _ctx(cfg)

    def ok(phi):
        pair = bk.birkhoff_decompose(phi)
        return (bk.bogoliubov_series(phi, bk.MS, "minus") == pair.minus
                and bk.bogoliubov_series(phi, bk.MS, "plus") == pair.plus
                and bk.bogoliubov_series(phi, bk.MS, "plus-inverse") == pair.plus)
    return _sampled(cfg, rng, lambda r: random_character(ctx, r), ok,
                    "iterated projector series equal the recursive factors")


@identity("birkhoff.bch_identification")
def _(cfg, rng):
    ctx = _ctx(cfg)

    def ok(phi):
        pair = bk.birkhoff_decompose(phi)
        fac = bk.bch_factorize(conv_log(phi))
        return (fac.minus, fac.plus) == (pair.minus, pair.plus)
    return _sampled(cfg, rng, lambda r: random_character(ctx, r), ok,
                    "exponential BCH factors equal the recursive Birkhoff factors")


@identity("birkhoff.chi_properties")
def _(cfg, rng):
    ctx = _ctx(cfg)

    def ok(a):
        c = bk.chi(a)
        return (not bk.chi_residual(a, c) and bk.chi_inverse(c) == a and bk.chi(bk.chi_inverse(a)) == a
                and bk.chi_compact(a) == c)
    return _sampled(cfg, rng, lambda r: random_lie_element(ctx, r), ok,
                    "fixed-point residual, inverse round trips, compact form")


@identity("birkhoff.chi_theta")
def _(cfg, rng):
    ctx = _ctx(cfg)

    def ok(a):
        c = bk.chi_theta(a, cfg.theta)
        return bk.theta_factorization_holds(a, c, bk.MS.P, cfg.theta, ctx.carrier)
    return _sampled(cfg, rng, lambda r: random_lie_element(ctx, r), ok,
                    f"exp(-θa) = exp(P χ_θ) exp(P~_θ χ_θ) at θ = {cfg.theta}")


@identity("birkhoff.nc_spitzer")
def _(cfg, rng):
    ctx = _ctx(cfg)
    e = ctx.unit()

    def ok(alpha):
        lhs = bk.bogoliubov_series(e - alpha, bk.MS, "minus")
        return lhs == conv_exp(-bk.MS.P(bk.chi(conv_log(e - alpha))))
    return _sampled(cfg, rng, lambda r: random_lie_element(ctx, r), ok,
                    "e + P(α) + P(P(α)*α) + ... = exp(-P(χ(log(e - α))))")


# ---------------------------------------------------------------- Rota--Baxter layer


def _rb_instances(cfg: RunConfig):
    return [
        rb.laurent_ms(cfg.theta),
        rb.upper_triangular(4, cfg.theta),
        rb.poly_integration(),
        rb.sequence_summation(-cfg.theta, inclusive=True),
        rb.sequence_summation(cfg.theta, inclusive=False),
        rb.poly_matrix_integration(2),
    ]


def _over_instances(cfg, rng, pred, what, instances=None):
    for inst in instances or _rb_instances(cfg):
        for i in range(cfg.samples):
            ok, witness = pred(inst, rng)
            if not ok:
                return False, what, f"{inst.name}, sample {i}: {witness}"
    return True, what, None


@identity("rota_baxter.relation")
def _(cfg, rng):
    def pred(inst, r):
        rep = rb.rb_verify(inst, 20, r)
        return rep.passed, repr(rep.witness)
    return _over_instances(cfg, rng, pred, "R(x)R(y) = R(R(x)y + xR(y) + θxy) on every instance")


@identity("rota_baxter.double_product")
def _(cfg, rng):
    def pred(inst, r):
        a, b, c = inst.sample(r), inst.sample(r), inst.sample(r)
        ab = rb.double_product(a, b, inst)
        ok = (inst.R(ab) == inst.R(a) * inst.R(b) and inst.Rtilde(ab) == -(inst.Rtilde(a) * inst.Rtilde(b))
              and rb.double_product(ab, c, inst) == rb.double_product(a, rb.double_product(b, c, inst), inst))
        return ok, (a, b, c)
    return _over_instances(cfg, rng, pred, "R and -R~ are morphisms from the associative double product")


def dendriform_axioms_hold(a, b, c, inst) -> bool:
    for primed in ("", "'"):
        lt = lambda x, y: rb.dendriform_products(x, y, inst, "<" + primed)
        gt = lambda x, y: rb.dendriform_products(x, y, inst, ">" + primed)
        star = lambda x, y: lt(x, y) + gt(x, y)
        if lt(lt(a, b), c) != lt(a, star(b, c)):
            return False
        if lt(gt(a, b), c) != gt(a, lt(b, c)):
            return False
        if gt(a, gt(b, c)) != gt(star(a, b), c):
            return False
        if star(a, b) != rb.double_product(a, b, inst):
            return False
    tri = lambda w: rb.dendriform_products(a, b, inst, w)
    return tri("<") == tri("lt") + tri("diamond") and tri(">'") == tri("gt") + tri("diamond")


def prelie_identities_hold(a, b, c, inst) -> bool:
    L = lambda x, y: rb.left_prelie(x, y, inst)
    Rr = lambda x, y: rb.right_prelie(x, y, inst)
    left = (L(L(a, b), c) - L(a, L(b, c))) == (L(L(b, a), c) - L(b, L(a, c)))
    right = (Rr(Rr(a, b), c) - Rr(a, Rr(b, c))) == (Rr(Rr(a, c), b) - Rr(a, Rr(c, b)))
    star = rb.double_product(a, b, inst) - rb.double_product(b, a, inst)
    bracket = star == L(a, b) - L(b, a) == Rr(a, b) - Rr(b, a)
    return left and right and bracket


@identity("rota_baxter.dendriform")
def _(cfg, rng):
    def pred(inst, r):
        a, b, c = inst.sample(r), inst.sample(r), inst.sample(r)
        return dendriform_axioms_hold(a, b, c, inst), (a, b, c)
    return _over_instances(cfg, rng, pred, "dendriform and tri-dendriform axioms for both splittings")


@identity("rota_baxter.pre_lie")
def _(cfg, rng):
    def pred(inst, r):
        a, b, c = inst.sample(r), inst.sample(r), inst.sample(r)
        return prelie_identities_hold(a, b, c, inst), (a, b, c)
    return _over_instances(cfg, rng, pred, "left/right pre-Lie identities and the common Lie bracket")


@identity("dendriform.nc_spitzer_words")
def _(cfg, rng):
    n = min(cfg.order, 5)

    def pred(inst, r):
        a = inst.sample(r)
        return all(rb.nc_spitzer_words(a, inst, k).passed for k in range(1, n + 1)), a
    return _over_instances(cfg, rng, pred, f"composition sums equal w> and w< words, n <= {n}")


@identity("dendriform.pre_lie_magnus")
def _(cfg, rng):
    def pred(inst, r):
        a = inst.sample(r)
        return mg.verify_magnus(a, inst, cfg.order).passed, a
    return _over_instances(cfg, rng, pred, f"exp(Ω') = X, exp(-Ω') = Y, both Bernoulli forms, t^{cfg.order}")


@identity("dendriform.commutative_magnus")
def _(cfg, rng):
    def pred(inst, r):
        a = inst.sample(r)
        ctx = mg.SeriesContext(inst, cfg.order)
        return mg.magnus_prelie(a, inst, T=cfg.order, ctx=ctx) == \
            mg.commutative_magnus_closed_form(a, inst, cfg.order, ctx), a
    insts = [i for i in _rb_instances(cfg) if i.commutative]
    return _over_instances(cfg, rng, pred, "commutative Ω' = -θ^-1 log(1 - θta)", insts)


@identity("dendriform.classical_magnus")
def _(cfg, rng):
    inst = rb.poly_matrix_integration(2)
    T = min(cfg.order, 5)

    def pred(inst_, r):
        psi = inst.sample(r)
        ctx = mg.SeriesContext(inst, T)
        omega = mg.magnus_classical(psi, T, inst, ctx)
        phi = ctx.ord_exp(omega)
        deriv = phi.map(lambda m: m.map(lambda p: p.derivative()))
        ode = deriv == ctx.ordinary.monomial(psi, 1) * phi
        prelie = mg.magnus_prelie(psi, inst, T=T, ctx=ctx)
        return (phi == mg.picard_solution(psi, T, inst, ctx) and ode
                and ctx.to_ordinary(prelie, inst.R) == omega), psi
    return _over_instances(cfg, rng, pred,
                           f"exp(Ω) solves Φ' = tΨΦ (Picard oracle), Ω = R(Ω'), t^{T}", [inst])


@identity("dendriform.atkinson")
def _(cfg, rng):
    def pred(inst, r):
        a = inst.sample(r)
        res = mg.atkinson(a, inst, T=cfg.order)
        checks = {k: v for k, v in res.checks.items() if k != "preparation_plus_form"}
        bad = [k for k, v in checks.items() if not v]
        return not bad, f"{bad} for a = {a!r}"
    return _over_instances(cfg, rng, pred,
                           "Y^(1 - θta)X^ = 1, exponential and inverse recursions, tY^a = 1 - exp(-Ω')")


@identity("dendriform.word_spitzer")
def _(cfg, rng):
    def pred(inst, r):
        a = inst.sample(r)
        res = mg.word_spitzer(a, inst, cfg.order)
        return res["R_succ_words"] and res["Rtilde_prec_words"], a
    return _over_instances(cfg, rng, pred, "exp(-R Ω') and exp(-R~ Ω') as word series")


@identity("dendriform.baxter")
def _(cfg, rng):
    def pred(inst, r):
        a = inst.sample(r)
        return mg.spitzer_commutative(a, inst, T=cfg.order).passed, a
    insts = [i for i in _rb_instances(cfg) if i.commutative]
    return _over_instances(cfg, rng, pred, "Baxter: exponential = partition sum = iterated R", insts)


@identity("dendriform.chi_vs_magnus")
def _(cfg, rng):
    T = min(cfg.order, 5)

    def pred(inst, r):
        a = inst.sample(r)
        return mg.chi_vs_magnus(a, inst, T=T).passed, a
    insts = [i for i in _rb_instances(cfg) if i.weight != 0]
    return _over_instances(cfg, rng, pred, f"Ω'_θ(ta) = χ_θ(α_θ) and its inverse form, t^{T}", insts)


@identity("dendriform.bohnenblust_spitzer")
def _(cfg, rng):
    inst = rb.upper_triangular(3, cfg.theta)
    n = min(cfg.order, 4)

    def pred(inst_, r):
        for k in range(1, n + 1):
            letters = [inst.sample(r) for _ in range(k)]
            if not bs.bohnenblust_spitzer(letters, inst).passed:
                return False, letters
        return True, None
    return _over_instances(cfg, rng, pred, f"permutation = partition = packet sums, n <= {n}", [inst])


# ---------------------------------------------------------------- matrices


def _matrix_setup(cfg):
    d = min(cfg.cutoff, 4)
    ctx = ConvolutionContext(get_instance(cfg.instance), d, cfg.ring)
    basis = mc.coideal_basis(ctx.hopf, d)
    return ctx, basis, mc.coproduct_matrix(basis)


@identity("matrix.psi_homomorphism")
def _(cfg, rng):
    ctx, B, M = _matrix_setup(cfg)
    return _sampled(cfg, rng, lambda r: (random_character(ctx, r), random_lie_element(ctx, r)),
                    lambda fg: mc.psi(fg[0] * fg[1], B, M) == mc.psi(fg[0], B, M) * mc.psi(fg[1], B, M),
                    "Ψ[f * g] = Ψ[f] Ψ[g]")


@identity("matrix.antipode_inverse")
def _(cfg, rng):
    ctx, B, M = _matrix_setup(cfg)
    S = mc.psi_hopf(ctx.hopf.antipode, B, M)
    ok = S * M == mc.hopf_identity(ctx.hopf, B.size) and M.is_unipotent_lower(ctx.hopf.one())
    return ok, "Ψ[S] M = 1 and M unipotent lower triangular", None if ok else str(M)


@identity("matrix.normal_coordinates")
def _(cfg, rng):
    ctx, B, M = _matrix_setup(cfg)
    L = mc.normal_coordinates(B, M)
    return _sampled(cfg, rng, lambda r: random_character(ctx, r),
                    lambda f: mc.matrix_log(mc.psi(f, B, M), ctx.ring) == L.map(f.apply, ctx.ring.zero()),
                    "log Ψ[φ] = φ(log M)")


@identity("matrix.birkhoff")
def _(cfg, rng):
    ctx, B, M = _matrix_setup(cfg)

    def ok(phi):
        hat = mc.psi(phi, B, M)
        res = mc.matrix_birkhoff(hat, ctx.ring)
        pair = bk.birkhoff_decompose(phi)
        zm, zp = mc.matrix_bch_factorize(mc.matrix_log(hat, ctx.ring), ctx.ring)
        return (res.passed and mc.psi(pair.minus, B, M) == res.minus and mc.psi(pair.plus, B, M) == res.plus
                and mc.psi(bk.bogoliubov_prep(phi), B, M) == res.prep and (zm, zp) == (res.minus, res.plus))
    return _sampled(cfg, rng, lambda r: random_character(ctx, r), ok,
                    "recursive = closed form = Ψ-image of Birkhoff = matrix BCH factors")


# ---------------------------------------------------------------- driver


def run_suite(cfg: RunConfig, tags: list[str] | None = None) -> list[CheckResult]:
    """Run the selected checks; each gets its own RNG derived from seed and tag."""
    cfg.validate()
    out = []
    for tag in sorted(tags or REGISTRY):
        rng = random.Random(f"{cfg.seed}:{tag}")
        passed, detail, witness = REGISTRY[tag](cfg, rng)
        out.append(CheckResult(tag, bool(passed), detail, witness))
    return out
