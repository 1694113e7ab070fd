"""Univariate Laurent polynomials with exact or multiprecision coefficients.

A :class:`LaurentPoly` is an immutable, sparse map ``exponent -> coefficient``
where exponents are (possibly negative) integers.  Every polynomial carries a
:class:`Representation`:

* ``EXACT`` stores ``gmpy2.mpq`` rationals, always in lowest terms.
* ``Representation.floating(bits)`` stores ``gmpy2.mpfr`` values rounded to
  ``bits`` mantissa bits, with all arithmetic done in a private context of that
  precision.

Zero coefficients are never stored, so structural equality is mathematical
equality.  Float coefficients are dropped only when they are exactly zero.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

import gmpy2

from .errors import ContractError, PoleError, RepresentationError

DEFAULT_PRECISION = 256

_MPZ = type(gmpy2.mpz(0))
_MPQ = type(gmpy2.mpq(0))
_MPFR = type(gmpy2.mpfr(0))


@dataclass(frozen=True)
class Representation:
    """Coefficient representation of a polynomial: exact or ``bits``-bit float."""

    precision: int | None = None

    @classmethod
    def floating(cls, bits: int = DEFAULT_PRECISION) -> "Representation":
        if int(bits) < 2:
            raise ContractError(f"precision must be at least 2 bits, got {bits}")
        return cls(int(bits))

    @property
    def exact(self) -> bool:
        return self.precision is None

    @property
    def context(self):
        if self.precision is None:
            return None
        return _context(self.precision)

    def coerce(self, value):
        """Convert ``value`` to a coefficient of this representation."""
        if self.precision is None:
            if isinstance(value, (int, _MPZ, _MPQ)):
                return gmpy2.mpq(value)
            if isinstance(value, Rational):
                return gmpy2.mpq(int(value.numerator), int(value.denominator))
            if isinstance(value, str):
                f = Fraction(value)
                return gmpy2.mpq(f.numerator, f.denominator)
            if isinstance(value, (float, _MPFR)):
                if not gmpy2.is_finite(value):
                    raise ContractError(f"non-finite coefficient {value!r}")
                num, den = value.as_integer_ratio()
                return gmpy2.mpq(int(num), int(den))
            raise ContractError(f"cannot represent {value!r} exactly")
        if isinstance(value, (Fraction, _MPQ)) or (
                isinstance(value, Rational) and not isinstance(value, (int, _MPZ))):
            num = gmpy2.mpfr(int(value.numerator), self.precision)
            den = gmpy2.mpfr(int(value.denominator), self.precision)
            return self.context.div(num, den)
        return gmpy2.mpfr(value, self.precision)

    def __str__(self) -> str:
        return "exact" if self.exact else f"float{self.precision}"


EXACT = Representation()


@functools.lru_cache(maxsize=None)
def _context(precision: int):
    return gmpy2.context(precision=precision)


class LaurentPoly:
    """Immutable sparse Laurent polynomial in one variable."""

    __slots__ = ("_terms", "_rep")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = (),
                 rep: Representation = EXACT):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, object] = {}
        ctx = rep.context
        for exp, coef in items:
            c = rep.coerce(coef)
            e = int(exp)
            if e in acc:
                acc[e] = acc[e] + c if ctx is None else ctx.add(acc[e], c)
            else:
                acc[e] = c
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        self._rep = rep

    @classmethod
    def _raw(cls, terms: dict, rep: Representation) -> "LaurentPoly":
        # terms must already be canonical coefficients; zeros are dropped here.
        obj = cls.__new__(cls)
        obj._terms = {e: terms[e] for e in sorted(terms) if terms[e] != 0}
        obj._rep = rep
        return obj

    @classmethod
    def constant(cls, value, rep: Representation = EXACT) -> "LaurentPoly":
        return cls({0: value}, rep)

    @classmethod
    def monomial(cls, exponent: int, coefficient=1, rep: Representation = EXACT) -> "LaurentPoly":
        return cls({exponent: coefficient}, rep)

    @classmethod
    def zero(cls, rep: Representation = EXACT) -> "LaurentPoly":
        return cls._raw({}, rep)

    @property
    def rep(self) -> Representation:
        return self._rep

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exponent(self) -> int | None:
        return next(iter(self._terms)) if self._terms else None

    @property
    def max_exponent(self) -> int | None:
        return next(reversed(self._terms)) if self._terms else None

    def coefficient(self, exponent: int):
        return self._terms.get(exponent, self._rep.coerce(0))

    def __len__(self) -> int:
        return len(self._terms)

    def _check(self, other: "LaurentPoly") -> None:
        if self._rep != other._rep:
            raise RepresentationError(f"cannot combine {self._rep} and {other._rep} polynomials")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(other, self._rep)

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        ctx = self._rep.context
        out = dict(self._terms)
        for e, c in other._terms.items():
            if e in out:
                out[e] = out[e] + c if ctx is None else ctx.add(out[e], c)
            else:
                out[e] = c
        return LaurentPoly._raw(out, self._rep)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self._rep)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        ctx = self._rep.context
        out: dict[int, object] = {}
        if ctx is None:
            for a, ca in self._terms.items():
                for b, cb in other._terms.items():
                    e = a + b
                    out[e] = out[e] + ca * cb if e in out else ca * cb
        else:
            # collect products per exponent and round each sum once
            parts: dict[int, list] = {}
            for a, ca in self._terms.items():
                for b, cb in other._terms.items():
                    parts.setdefault(a + b, []).append(ctx.mul(ca, cb))
            out = {e: (p[0] if len(p) == 1 else ctx.fsum(p)) for e, p in parts.items()}
        return LaurentPoly._raw(out, self._rep)

    __rmul__ = __mul__

    def derivative(self) -> "LaurentPoly":
        ctx = self._rep.context
        if ctx is None:
            out = {e - 1: e * c for e, c in self._terms.items() if e != 0}
        else:
            out = {e - 1: ctx.mul(c, e) for e, c in self._terms.items() if e != 0}
        return LaurentPoly._raw(out, self._rep)

    def evaluate(self, x):
        """Value at ``x``; exact when the polynomial is exact and ``x`` rational."""
        rep = self._rep
        if not self._terms:
            return rep.coerce(0)
        xv = rep.coerce(x)
        if xv == 0:
            if self.min_exponent < 0:
                raise PoleError("Laurent polynomial with negative powers evaluated at 0")
            return self._terms.get(0, rep.coerce(0))
        lo, hi = self.min_exponent, self.max_exponent
        ctx = rep.context
        # Horner over the dense span, then scale by x**lo
        acc = rep.coerce(0)
        for e in range(hi, lo - 1, -1):
            c = self._terms.get(e)
            if ctx is None:
                acc = acc * xv + c if c is not None else acc * xv
            else:
                acc = ctx.fma(acc, xv, c) if c is not None else ctx.mul(acc, xv)
        if lo == 0:
            return acc
        if ctx is None:
            return acc * xv ** lo
        return ctx.mul(acc, ctx.pow(xv, lo))

    __call__ = evaluate

    def to_representation(self, rep: Representation) -> "LaurentPoly":
        return LaurentPoly(self._terms, rep)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction, _MPZ, _MPQ, _MPFR)):
                return self == LaurentPoly.constant(other, self._rep)
            return NotImplemented
        return self._rep == other._rep and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._rep, tuple(self._terms.items())))

    def debug_terms(self) -> list[tuple[int, str]]:
        """``(exponent, coefficient string)`` pairs in ascending exponent order.

        Exact coefficients print as ``p`` or ``p/q``; float coefficients print
        with enough decimal digits to round-trip at their precision.
        """
        return [(e, format_coefficient(c, self._rep)) for e, c in self._terms.items()]

    @classmethod
    def from_debug(cls, pairs: Iterable[tuple[int, str]], rep: Representation = EXACT) -> "LaurentPoly":
        if rep.exact:
            return cls(((e, Fraction(s)) for e, s in pairs), rep)
        return cls(((e, gmpy2.mpfr(s, rep.precision)) for e, s in pairs), rep)

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {s}" for e, s in self.debug_terms())
        return f"LaurentPoly({{{body}}}, {self._rep})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, s in self.debug_terms():
            parts.append(s if e == 0 else f"{s}*x^{e}")
        return " + ".join(parts)


def format_coefficient(c, rep: Representation) -> str:
    if rep.exact:
        return str(c)
    digits = math.ceil(rep.precision * math.log10(2)) + 1
    return format(c, f".{digits}g")


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    p._check(q)
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    p._check(q)
    return p * q


def differentiate(p: LaurentPoly) -> LaurentPoly:
    return p.derivative()


def evaluate(p: LaurentPoly, x):
    return p.evaluate(x)
