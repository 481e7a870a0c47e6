"""Exact scalars and the truncated Laurent-series target algebra.

The target algebra of every character in this package is a ring of Laurent
polynomials in ``z`` with rational coefficients, restricted to a fixed
exponent window ``[-pole_order, degree]``.  Products that leave the window
raise :class:`~renormalg.errors.WindowOverflowError` instead of truncating.

The minimal-subtraction splitting sends a Laurent element to its polar part
(negative exponents) and its holomorphic part (non-negative exponents).
"""
from __future__ import annotations

import re
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterator, Mapping

from .errors import InstanceMismatchError, PreconditionError, WindowOverflowError

__all__ = [
    "bernoulli",
    "override_bernoulli",
    "format_rational",
    "parse_rational",
    "LaurentRing",
    "Laurent",
    "ms_project",
]


# ---------------------------------------------------------------- rationals


def format_rational(q: Fraction) -> str:
    """Render ``q`` as ``n/d`` (always with a denominator)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = str(text).strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


# ---------------------------------------------------------------- Bernoulli

_bernoulli_table: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()
_bernoulli_overrides: dict[int, Fraction] = {}


def _extend_table(m: int) -> None:
    with _bernoulli_lock:
        table = _bernoulli_table
        for n in range(len(table), m + 1):
            # sum_{j<=n} C(n+1, j) B_j = 0
            s = sum(comb(n + 1, j) * table[j] for j in range(n))
            table.append(-Fraction(s) / (n + 1))


def bernoulli(m: int) -> Fraction:
    """Bernoulli number ``B_m`` with the generating series ``z/(exp(z)-1)``.

    So ``B_1 = -1/2``.
    """
    if m < 0:
        raise PreconditionError("Bernoulli index must be >= 0")
    if m in _bernoulli_overrides:
        return _bernoulli_overrides[m]
    if m >= len(_bernoulli_table):
        _extend_table(m)
    return _bernoulli_table[m]


@contextmanager
def override_bernoulli(m: int, value) -> Iterator[None]:
    """Temporarily replace ``B_m`` (fault injection for the verification CLI)."""
    previous = _bernoulli_overrides.get(m)
    _bernoulli_overrides[m] = Fraction(value)
    try:
        yield
    finally:
        if previous is None:
            _bernoulli_overrides.pop(m, None)
        else:
            _bernoulli_overrides[m] = previous


# ---------------------------------------------------------------- Laurent


@dataclass(frozen=True)
class LaurentRing:
    """Laurent polynomials in ``z`` with exponents in ``[-pole_order, degree]``."""

    pole_order: int
    degree: int

    def __post_init__(self):
        if self.pole_order < 0 or self.degree < 0:
            raise PreconditionError("Laurent window bounds must be >= 0")

    @property
    def window(self) -> tuple[int, int]:
        return (self.pole_order, self.degree)

    def contains(self, exponent: int) -> bool:
        return -self.pole_order <= exponent <= self.degree

    def element(self, coeffs: Mapping[int, object] | None = None) -> "Laurent":
        return Laurent(self, coeffs or {})

    def zero(self) -> "Laurent":
        return Laurent(self, {})

    def one(self) -> "Laurent":
        return Laurent(self, {0: 1})

    def constant(self, c) -> "Laurent":
        return Laurent(self, {0: c})

    def z(self, k: int = 1, coeff=1) -> "Laurent":
        return Laurent(self, {k: coeff})

    def parse(self, text: str) -> "Laurent":
        return Laurent(self, _parse_laurent_terms(text))

    def from_json(self, obj: Mapping) -> "Laurent":
        if "window" in obj:
            lo, hi = obj["window"]
            if (-int(lo), int(hi)) != self.window:
                raise InstanceMismatchError(
                    f"JSON window {obj['window']} differs from ring window "
                    f"[{-self.pole_order}, {self.degree}]"
                )
        return Laurent(self, {int(k): parse_rational(v) for k, v in obj["coeffs"].items()})


_TERM_RE = re.compile(
    r"""^(?P<coef>\(\s*-?\d+(?:\s*/\s*\d+)?\s*\)|-?\d+(?:/\d+)?)?\s*
        (?P<z>/\s*z(?:\^(?P<neg>\d+))?|\*?\s*z(?:\^(?P<pos>-?\d+))?)?$""",
    re.VERBOSE,
)


def _split_terms(text: str) -> list[str]:
    terms, buf, depth = [], "", 0
    s = text.replace(" ", "")
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "^(":
            terms.append(buf)
            buf = "" if ch == "+" else "-"
            continue
        buf += ch
    terms.append(buf)
    return [t for t in terms if t not in ("", "+")]


def _parse_laurent_terms(text: str) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    if text.strip() in ("", "0"):
        return out
    for term in _split_terms(text):
        sign = 1
        if term.startswith("-") and (len(term) > 1 and term[1] in "z("):
            sign, term = -1, term[1:]
        m = _TERM_RE.match(term)
        if m is None or (m.group("coef") is None and m.group("z") is None):
            raise ValueError(f"cannot parse Laurent term {term!r} in {text!r}")
        coef = parse_rational(m.group("coef")) if m.group("coef") else Fraction(1)
        zpart = m.group("z")
        if zpart is None:
            k = 0
        elif zpart.lstrip().startswith("/"):
            k = -int(m.group("neg") or 1)
        else:
            k = int(m.group("pos") or 1)
        out[k] = out.get(k, Fraction(0)) + sign * coef
    return {k: v for k, v in out.items() if v}


class Laurent:
    """An element of a :class:`LaurentRing`; immutable, exact."""

    __slots__ = ("ring", "_c", "_hash")

    def __init__(self, ring: LaurentRing, coeffs: Mapping[int, object]):
        c = {}
        for k, v in coeffs.items():
            v = Fraction(v)
            if v:
                k = int(k)
                if not ring.contains(k):
                    raise WindowOverflowError(k, ring.window)
                c[k] = v
        self.ring = ring
        self._c = c
        self._hash = None

    # -- access
    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def exponents(self) -> list[int]:
        return sorted(self._c)

    # -- arithmetic
    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            if other.ring != self.ring:
                raise InstanceMismatchError("Laurent elements live in different windows")
            return other
        if isinstance(other, Rational):
            return Laurent(self.ring, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return Laurent(self.ring, c)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.ring, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Laurent(self.ring, {k: v * other for k, v in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        for k, v in c.items():
            if v and not self.ring.contains(k):
                raise WindowOverflowError(k, self.ring.window)
        return Laurent(self.ring, c)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise PreconditionError("negative powers are not supported")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    # -- minimal subtraction
    def polar(self) -> "Laurent":
        return Laurent(self.ring, {k: v for k, v in self._c.items() if k < 0})

    def holomorphic(self) -> "Laurent":
        return Laurent(self.ring, {k: v for k, v in self._c.items() if k >= 0})

    # -- comparison / hashing
    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.ring == other.ring and self._c == other._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(sorted(self._c.items()))))
        return self._hash

    # -- rendering
    def to_json(self) -> dict:
        return {
            "window": [-self.ring.pole_order, self.ring.degree],
            "coeffs": {str(k): format_rational(v) for k, v in sorted(self._c.items())},
        }

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            v = self._c[k]
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if k == 0:
                body = str(a)
            else:
                if a.denominator != 1:
                    coef = f"({a})"
                elif a != 1 or k < 0:
                    coef = str(a)
                else:
                    coef = ""
                if k < 0:
                    body = f"{coef}/z" + (f"^{-k}" if k < -1 else "")
                else:
                    body = (coef + " " if coef else "") + "z" + (f"^{k}" if k > 1 else "")
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Laurent({str(self)!r}, window={list(self.ring.window)})"


def ms_project(a: Laurent) -> tuple[Laurent, Laurent]:
    """Minimal-subtraction split ``a -> (polar part, holomorphic part)``."""
    return a.polar(), a.holomorphic()
