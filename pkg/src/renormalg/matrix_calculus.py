"""Matrix representation of the convolution algebra on a left coideal.

Index convention: for a basis ``x_1..x_m`` of the coideal ``J``, the
coproduct matrix is defined by ``Δ(x_i) = sum_j M[i][j] ⊗ x_j``.  With a
filtration-ordered basis ``M`` is lower triangular with unit diagonal, and
``Ψ[f] = f(M)`` (entrywise) turns convolution into matrix multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .birkhoff import bch_chi
from .convolution import LinMap
from .errors import PreconditionError
from .filtered import fa_exp, fa_log, fixed_point
from .hopf import HopfAlgebra, HopfElement
from .linalg import Matrix, nilpotent_carrier, rational_inverse, unipotent_inverse
from .scalars import Laurent, LaurentRing


# ---------------------------------------------------------------- coideal bases


@dataclass
class CoidealBasis:
    """Basis ``y = T x`` of ``J = H^d``, where ``x`` is the monomial basis."""

    hopf: HopfAlgebra
    degree: int
    keys: tuple
    transition: Matrix
    elements: tuple = field(init=False)
    _inverse: Matrix = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.keys)
        if self.transition.n != n:
            raise PreconditionError("transition matrix size does not match the coideal")
        self._inverse = rational_inverse(self.transition)
        self.elements = tuple(
            self.hopf.element({k: self.transition[i, j] for j, k in enumerate(self.keys)})
            for i in range(n)
        )
        if not self.is_filtration_ordered():
            raise PreconditionError("basis is not filtration ordered")

    @property
    def size(self) -> int:
        return len(self.keys)

    def is_filtration_ordered(self) -> bool:
        degs = [e.degree() for e in self.elements]
        return all(a <= b for a, b in zip(degs, degs[1:]))

    def is_left_coideal(self) -> bool:
        allowed = set(self.keys)
        return all(legs[1] in allowed
                   for e in self.elements for legs in self.hopf.coproduct(e).terms)

    def coordinates(self, key) -> dict[int, Fraction]:
        """Coordinates of a monomial key of ``J`` in this basis."""
        r = self.keys.index(key)
        return {l: self._inverse[r, l] for l in range(self.size) if self._inverse[r, l]}


def coideal_basis(hopf: HopfAlgebra, d: int, transition: Matrix | None = None) -> CoidealBasis:
    """``J = H^d`` with its canonical monomial basis (or ``y = T x``)."""
    keys = hopf.basis_upto(d)
    T = transition if transition is not None else Matrix.identity(len(keys))
    basis = CoidealBasis(hopf, d, keys, T)
    if not basis.is_left_coideal():
        raise PreconditionError("basis does not span a left coideal")
    return basis


def hopf_identity(hopf: HopfAlgebra, n: int) -> Matrix:
    return Matrix.identity(n, hopf.one(), hopf.element())


def coproduct_matrix(B: CoidealBasis) -> Matrix:
    """``M`` with ``Δ(y_i) = sum_j M[i][j] ⊗ y_j``; checked unipotent lower triangular."""
    hopf, n = B.hopf, B.size
    rows = [[hopf.element() for _ in range(n)] for _ in range(n)]
    for i, y in enumerate(B.elements):
        for (left, right), c in hopf.coproduct(y).terms.items():
            try:
                coords = B.coordinates(right)
            except ValueError:
                raise PreconditionError(f"right leg {hopf.format_key(right)} is not in the coideal") from None
            for l, t in coords.items():
                rows[i][l] = rows[i][l] + hopf.key(left) * (c * t)
    M = Matrix(rows, hopf.element())
    if not M.is_unipotent_lower(hopf.one()):
        raise PreconditionError("coproduct matrix is not unipotent lower triangular")
    return M


def psi(f: LinMap, B: CoidealBasis, M: Matrix | None = None) -> Matrix:
    """``Ψ[f] = f(M)`` with Laurent entries."""
    M = M if M is not None else coproduct_matrix(B)
    return M.map(f.apply, f.ctx.ring.zero())


def psi_hopf(fn: Callable[[HopfElement], HopfElement], B: CoidealBasis, M: Matrix | None = None) -> Matrix:
    """``Ψ`` of an ``H``-valued linear map (e.g. the antipode) over ``H``."""
    M = M if M is not None else coproduct_matrix(B)
    return M.map(fn)


def normal_coordinates(B: CoidealBasis, M: Matrix | None = None) -> Matrix:
    """``L = log M`` over the commutative ring ``H``."""
    M = M if M is not None else coproduct_matrix(B)
    carrier = nilpotent_carrier(B.size, B.hopf.one(), B.hopf.element())
    return fa_log(M, carrier)


def laurent_carrier(n: int, ring: LaurentRing):
    return nilpotent_carrier(n, ring.one(), ring.zero())


def matrix_log(m: Matrix, ring: LaurentRing) -> Matrix:
    return fa_log(m, laurent_carrier(m.n, ring))


def matrix_exp(m: Matrix, ring: LaurentRing) -> Matrix:
    return fa_exp(m, laurent_carrier(m.n, ring))


# ---------------------------------------------------------------- Rota--Baxter on matrices


def matrix_R(tau: Matrix) -> Matrix:
    """Entrywise polar part."""
    return tau.map(Laurent.polar)


def matrix_Rtilde(tau: Matrix) -> Matrix:
    """Entrywise holomorphic part (``Id - R``, weight -1)."""
    return tau.map(Laurent.holomorphic)


@dataclass
class MatrixBirkhoff:
    minus: Matrix
    plus: Matrix
    prep: Matrix
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _chain_sum(sig: Matrix, proj: Callable[[Laurent], Laurent], i: int, j: int, zero: Laurent) -> Laurent:
    """``sum_k (-1)^k proj(proj(...proj(sig[i,l1]) sig[l1,l2]) ... sig[l_{k-1},j])``
    over strictly decreasing chains ``i > l1 > ... > j``."""
    total = zero

    def walk(node, acc, k):
        nonlocal total
        for nxt in range(node - 1, j - 1, -1):
            s = sig[node, nxt]
            if not s:
                continue
            val = proj(acc * s if acc is not None else s)
            if not val:
                continue
            if nxt == j:
                total = total + (val if (k + 1) % 2 == 0 else -val)
            else:
                walk(nxt, val, k + 1)

    walk(i, None, 0)
    return total


def closed_form(sig: Matrix, proj: Callable[[Laurent], Laurent], ring: LaurentRing) -> Matrix:
    """Unit-diagonal matrix with chain-sum entries below the diagonal."""
    n = sig.n
    off = sig - Matrix.identity(n, ring.one(), ring.zero())
    return Matrix([[ring.one() if i == j else (_chain_sum(off, proj, i, j, ring.zero()) if i > j else ring.zero())
                    for j in range(n)] for i in range(n)], ring.zero())


def matrix_birkhoff(phi_hat: Matrix, ring: LaurentRing) -> MatrixBirkhoff:
    """Matrix Birkhoff factors by the Bogoliubov recursion, checked against closed forms."""
    one = Matrix.identity(phi_hat.n, ring.one(), ring.zero())
    if not phi_hat.is_unipotent_lower(ring.one()):
        raise PreconditionError("matrix Birkhoff needs a unipotent lower-triangular matrix")
    carrier = laurent_carrier(phi_hat.n, ring)
    d = phi_hat - one
    minus = fixed_point(lambda m: one - matrix_R(m * d), one, carrier, "matrix counterterm recursion")
    prep = minus * d
    plus = one + matrix_Rtilde(prep)
    phi_inv = unipotent_inverse(phi_hat, ring.one())
    plus_inv = fixed_point(lambda p: one - matrix_Rtilde(d * p), one, carrier, "inverse renormalized recursion")
    checks = {
        "factorization": unipotent_inverse(minus, ring.one()) * plus == phi_hat,
        "minus_from_prep": minus == one - matrix_R(prep),
        "plus_recursion": plus == one - matrix_Rtilde(plus * (phi_inv - one)),
        "plus_inverse_recursion": plus_inv * plus == one,
        "minus_closed_form": closed_form(phi_hat, Laurent.polar, ring) == minus,
        "plus_closed_form": closed_form(phi_inv, Laurent.holomorphic, ring) == plus,
    }
    return MatrixBirkhoff(minus, plus, prep, checks)


def matrix_bch_factorize(Z: Matrix, ring: LaurentRing) -> tuple[Matrix, Matrix]:
    """``(exp(-R(χ(Z))), exp(R~(χ(Z))))`` for strictly lower-triangular ``Z``."""
    if not Z.is_lower_triangular(strict=True):
        raise PreconditionError("expected a strictly lower-triangular matrix")
    carrier = laurent_carrier(Z.n, ring)
    c = bch_chi(Z, matrix_R, carrier)
    return fa_exp(-matrix_R(c), carrier), fa_exp(matrix_Rtilde(c), carrier)


def matrix_to_json(m: Matrix) -> list:
    return m.to_json(lambda x: x.to_json() if isinstance(x, Laurent) else str(x))
