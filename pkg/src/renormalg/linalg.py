"""Immutable square matrices over an arbitrary (possibly non-commutative) ring.

Entries may be ``Fraction``, :class:`~renormalg.scalars.Laurent`,
:class:`~renormalg.hopf.HopfElement`, polynomials, ... -- anything with
``+``, ``-``, ``*``, rational scaling and truthiness meaning "nonzero".
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Sequence

import sympy

from .errors import InstanceMismatchError, PreconditionError
from .filtered import FilteredCarrier


class Matrix:
    __slots__ = ("rows", "n", "zero", "_hash")

    def __init__(self, rows: Sequence[Sequence[Any]], zero: Any = Fraction(0)):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise PreconditionError("only square matrices are supported")
        self.zero = zero
        self._hash = None

    @classmethod
    def identity(cls, n: int, one: Any = Fraction(1), zero: Any = Fraction(0)) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], zero)

    @classmethod
    def zeros(cls, n: int, zero: Any = Fraction(0)) -> "Matrix":
        return cls([[zero] * n for _ in range(n)], zero)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: "Matrix"):
        if other.n != self.n:
            raise InstanceMismatchError("matrix sizes differ")

    def map(self, fn: Callable[[Any], Any], zero: Any = None) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows], self.zero if zero is None else zero)

    def map_indexed(self, fn: Callable[[int, int, Any], Any]) -> "Matrix":
        return Matrix([[fn(i, j, x) for j, x in enumerate(r)] for i, r in enumerate(self.rows)], self.zero)

    def __add__(self, other):
        if isinstance(other, Rational):
            other = Matrix.identity(self.n, self.zero + 1, self.zero) * other
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.zero)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda x: -x)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            n = self.n
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = self.zero
                    for a, b in zip(r, c):
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Matrix(out, self.zero)
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __bool__(self):
        return any(bool(x) for r in self.rows for x in r)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)), self.zero)

    # -- shape predicates
    def is_lower_triangular(self, strict: bool = False) -> bool:
        return all(not self.rows[i][j] for i in range(self.n) for j in range(self.n)
                   if j > i or (strict and j == i))

    def is_upper_triangular(self, strict: bool = False) -> bool:
        return self.transpose().is_lower_triangular(strict)

    def is_unipotent_lower(self, one: Any) -> bool:
        return self.is_lower_triangular() and all(self.rows[i][i] == one for i in range(self.n))

    def lower_valuation(self) -> int:
        """``min(i - j)`` over nonzero entries (``n`` for the zero matrix)."""
        vals = [i - j for i in range(self.n) for j in range(self.n) if self.rows[i][j]]
        return min(vals, default=self.n)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"Matrix({self})"

    def to_json(self, entry: Callable[[Any], Any] = str) -> list:
        return [[entry(x) for x in r] for r in self.rows]


def nilpotent_carrier(n: int, one: Any = Fraction(1), zero: Any = Fraction(0)) -> FilteredCarrier:
    """Lower-triangular ``n x n`` matrices filtered by distance below the diagonal."""
    return FilteredCarrier(Matrix.identity(n, one, zero), Matrix.zeros(n, zero),
                           Matrix.lower_valuation, n - 1)


def unipotent_inverse(m: Matrix, one: Any) -> Matrix:
    """Inverse of a unipotent lower-triangular matrix by the finite geometric series."""
    if not m.is_unipotent_lower(one):
        raise PreconditionError("expected a unipotent lower-triangular matrix")
    ident = Matrix.identity(m.n, one, m.zero)
    nil = ident - m
    out, power = ident, ident
    for _ in range(m.n - 1):
        power = power * nil
        out = out + power
    return out


def rational_inverse(m: Matrix) -> Matrix:
    """Inverse of an invertible rational matrix (exact, via sympy)."""
    sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.rows])
    inv = sm.inv()
    return Matrix([[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(m.n)] for i in range(m.n)])
