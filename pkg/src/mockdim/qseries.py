"""Truncated q-series on exponent grids q^(n/h).

A :class:`QSeries` stores coefficients for exponents ``n/h`` with
``start <= n < prec``.  Coefficients at or beyond ``prec/h`` are unknown and
asking for them raises :class:`TruncationError`; nothing is ever silently
treated as zero past the window.

Two coefficient rings are provided: :data:`EXACT` (``fractions.Fraction``)
and :data:`APPROX` (``complex`` with an absolute tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Mapping

import numpy as np


class TruncationError(ValueError):
    """A coefficient outside the valid window was requested."""


class RingMismatchError(TypeError):
    pass


class ExactRing:
    name = "exact"
    eps = 0

    def convert(self, x):
        if isinstance(x, complex):
            raise TypeError("cannot place a complex float in the exact ring")
        if isinstance(x, float):
            return Fraction(x)
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    def is_zero(self, x):
        return x == 0

    def equal(self, a, b):
        return a == b

    def __repr__(self):
        return "ExactRing()"


class ApproxRing:
    name = "approx"

    def __init__(self, eps=1e-12):
        self.eps = eps
        self.zero = 0j
        self.one = 1 + 0j

    def convert(self, x):
        if isinstance(x, Rational):
            return complex(float(x))
        return complex(x)

    def is_zero(self, x):
        return abs(x) <= self.eps

    def equal(self, a, b):
        return abs(a - b) <= self.eps * max(1.0, abs(a), abs(b))

    def __eq__(self, other):
        return isinstance(other, ApproxRing) and other.eps == self.eps

    def __hash__(self):
        return hash(("approx", self.eps))

    def __repr__(self):
        return f"ApproxRing(eps={self.eps})"


EXACT = ExactRing()
APPROX = ApproxRing()


def _same_ring(a, b):
    if a.ring is b.ring or a.ring == b.ring:
        return a.ring
    raise RingMismatchError(f"{a.ring!r} vs {b.ring!r}")


def _as_exponent(e) -> Fraction:
    return Fraction(e)


class QSeries:
    """Sum of c_n q^(n/h) for start <= n < prec (numerators on the grid)."""

    __slots__ = ("h", "start", "prec", "_c", "ring")

    def __init__(self, coeffs, start: int, prec: int, h: int = 1, ring=EXACT):
        if h < 1:
            raise ValueError("grid denominator must be positive")
        coeffs = [ring.convert(c) for c in coeffs]
        if prec < start:
            raise ValueError("prec below start")
        if len(coeffs) > prec - start:
            coeffs = coeffs[: prec - start]
        coeffs = coeffs + [ring.zero] * (prec - start - len(coeffs))
        self.h = h
        self.start = start
        self.prec = prec
        self._c = tuple(coeffs)
        self.ring = ring

    # -- construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, terms: Mapping, prec, h: int = 1, ring=EXACT) -> "QSeries":
        """Build from ``{exponent: coefficient}``; ``prec`` is an exponent."""
        prec_num = _as_exponent(prec) * h
        if prec_num.denominator != 1:
            raise ValueError("precision must lie on the grid")
        nums = {}
        for e, c in terms.items():
            n = _as_exponent(e) * h
            if n.denominator != 1:
                raise ValueError(f"exponent {e} is not on the 1/{h} grid")
            if n >= prec_num:
                raise TruncationError(f"term q^{e} lies beyond precision {prec}")
            nums[int(n)] = c
        start = min(nums) if nums else int(prec_num)
        start = min(start, int(prec_num))
        coeffs = [nums.get(n, 0) for n in range(start, int(prec_num))]
        return cls(coeffs, start, int(prec_num), h, ring)

    @classmethod
    def monomial(cls, exponent, prec, coeff=1, h: int = 1, ring=EXACT) -> "QSeries":
        return cls.from_dict({exponent: coeff}, prec, h, ring)

    @classmethod
    def zero(cls, prec, h: int = 1, ring=EXACT) -> "QSeries":
        return cls.from_dict({}, prec, h, ring)

    # -- inspection ---------------------------------------------------------

    @property
    def precision(self) -> Fraction:
        """Exponent bound: coefficients are known for exponents < precision."""
        return Fraction(self.prec, self.h)

    @property
    def valuation(self) -> Fraction:
        n = self._valuation_num()
        return Fraction(n, self.h)

    def _valuation_num(self) -> int:
        for i, c in enumerate(self._c):
            if not self.ring.is_zero(c):
                return self.start + i
        return self.prec

    @property
    def e_min(self) -> Fraction:
        return Fraction(self.start, self.h)

    def __getitem__(self, e):
        return self.coefficient(e)

    def coefficient(self, e):
        n = _as_exponent(e) * self.h
        if n >= self.prec:
            raise TruncationError(
                f"coefficient of q^{e} requested but series is only known below q^{self.precision}"
            )
        if n.denominator != 1 or n < self.start:
            return self.ring.zero
        return self._c[int(n) - self.start]

    def terms(self) -> dict:
        """Nonzero terms as ``{Fraction exponent: coefficient}``."""
        return {
            Fraction(self.start + i, self.h): c
            for i, c in enumerate(self._c)
            if not self.ring.is_zero(c)
        }

    def coefficients(self, first=None, last=None) -> list:
        """Coefficients for the integer-grid numerators ``first..last-1``."""
        first = self.start if first is None else first
        last = self.prec if last is None else last
        return [self.coefficient(Fraction(n, self.h)) for n in range(first, last)]

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self._c)

    def __repr__(self):
        parts = []
        for e, c in self.terms().items():
            parts.append(f"({c})*q^({e})")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(q^({self.precision}))"

    # -- grid handling ------------------------------------------------------

    def regrid(self, h: int) -> "QSeries":
        if h % self.h:
            raise ValueError(f"cannot move a 1/{self.h} grid onto 1/{h}")
        k = h // self.h
        if k == 1:
            return self
        coeffs = [self.ring.zero] * ((self.prec - self.start) * k)
        for i, c in enumerate(self._c):
            coeffs[i * k] = c
        return QSeries(coeffs, self.start * k, self.prec * k, h, self.ring)

    def truncate(self, prec) -> "QSeries":
        p = _as_exponent(prec) * self.h
        if p.denominator != 1:
            raise ValueError("precision must lie on the grid")
        p = int(p)
        if p > self.prec:
            raise TruncationError("cannot extend precision by truncation")
        start = min(self.start, p)
        return QSeries(self._c[: max(0, p - self.start)], start, p, self.h, self.ring)

    def change_ring(self, ring) -> "QSeries":
        if ring is EXACT:
            coeffs = [Fraction(c) if not isinstance(c, complex) else _exact_from_complex(c)
                      for c in self._c]
        else:
            coeffs = [ring.convert(c) for c in self._c]
        return QSeries(coeffs, self.start, self.prec, self.h, ring)

    # -- arithmetic ---------------------------------------------------------

    def _aligned(self, other):
        ring = _same_ring(self, other)
        h = lcm(self.h, other.h)
        return self.regrid(h), other.regrid(h), ring, h

    def __add__(self, other):
        if not isinstance(other, QSeries):
            if self.prec <= 0:
                raise TruncationError("series precision too low to absorb a constant")
            other = QSeries.monomial(0, self.precision, other, self.h, self.ring)
        a, b, ring, h = self._aligned(other)
        start = min(a.start, b.start)
        prec = min(a.prec, b.prec)
        start = min(start, prec)
        coeffs = [a.coefficient(Fraction(n, h)) + b.coefficient(Fraction(n, h))
                  if n >= a.start or n >= b.start else ring.zero
                  for n in range(start, prec)]
        return QSeries(coeffs, start, prec, h, ring)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self._c], self.start, self.prec, self.h, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "QSeries":
        k = self.ring.convert(k)
        return QSeries([k * c for c in self._c], self.start, self.prec, self.h, self.ring)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        a, b, ring, h = self._aligned(other)
        va, vb = a._valuation_num(), b._valuation_num()
        prec = min(a.prec + vb, b.prec + va)
        start = min(va + vb, prec)
        out = [ring.zero] * (prec - start)
        for i in range(va, a.prec):
            ca = a._c[i - a.start]
            if ring.is_zero(ca):
                continue
            jmax = prec - i
            for j in range(vb, min(b.prec, jmax)):
                cb = b._c[j - b.start]
                out[i + j - start] += ca * cb
        return QSeries(out, start, prec, h, ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            rel = self.prec - self._valuation_num()
            return QSeries.monomial(0, Fraction(rel, self.h), 1, self.h, self.ring)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def inverse(self) -> "QSeries":
        """Multiplicative inverse via leading-term factorisation."""
        v = self._valuation_num()
        if v >= self.prec:
            raise ZeroDivisionError("series vanishes on its whole window")
        lead = self._c[v - self.start]
        rel = self.prec - v  # relative precision in grid steps
        a = [self._c[v - self.start + i] for i in range(rel)]
        inv0 = self.ring.one / lead
        b = [inv0]
        for k in range(1, rel):
            acc = self.ring.zero
            for j in range(1, k + 1):
                acc += a[j] * b[k - j]
            b.append(-inv0 * acc)
        return QSeries(b, -v, -v + rel, self.h, self.ring)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        try:
            a, b, ring, h = self._aligned(other)
        except RingMismatchError:
            return False
        prec = min(a.prec, b.prec)
        lo = min(a.start, b.start)
        return all(ring.equal(a.coefficient(Fraction(n, h)), b.coefficient(Fraction(n, h)))
                   for n in range(lo, prec))

    __hash__ = None

    # -- calculus -----------------------------------------------------------

    def theta(self) -> "QSeries":
        """q d/dq, termwise."""
        return QSeries([c * self.ring.convert(Fraction(self.start + i, self.h))
                        for i, c in enumerate(self._c)],
                       self.start, self.prec, self.h, self.ring)

    def map_exponents(self, factor) -> "QSeries":
        """Substitute q -> q^factor (factor a positive rational)."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("exponent factor must be positive")
        terms = {e * factor: c for e, c in self.terms().items()}
        h = self.h * factor.denominator
        out = QSeries.from_dict(terms, self.precision * factor, h, self.ring)
        return out.simplify_grid()

    def simplify_grid(self) -> "QSeries":
        """Coarsest grid that still carries every stored term and the bound."""
        g = self.h
        for n in [self.start, self.prec] + [self.start + i for i, c in enumerate(self._c)
                                            if not self.ring.is_zero(c)]:
            g = gcd(g, n)
        if g <= 1:
            return self
        coeffs = self._c[::g]
        return QSeries(coeffs, self.start // g, self.prec // g, self.h // g, self.ring)

    def evaluate(self, q: complex) -> complex:
        """Partial sum at a numeric q (fractional powers via the principal log)."""
        if self.h == 1:
            total = 0j
            for i, c in enumerate(self._c):
                if c:
                    total += complex(c) * q ** (self.start + i)
            return total
        logq = np.log(complex(q))
        return sum(complex(c) * np.exp(logq * (self.start + i) / self.h)
                   for i, c in enumerate(self._c) if c)


def _exact_from_complex(c: complex) -> Fraction:
    if abs(c.imag) > 1e-9:
        raise ValueError("complex coefficient has an imaginary part")
    return Fraction(c.real).limit_denominator(10**12)


@dataclass(frozen=True)
class LaurentData:
    """One-variable Laurent expansion sum_k coeffs[k] z^k (k >= -1)."""

    coeffs: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        if any(k < -1 for k in self.coeffs):
            raise ValueError("only a simple pole at z = 0 is supported")


def series_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def series_invert(s: QSeries) -> QSeries:
    return s.inverse()


def series_compose_laurent(L: LaurentData, s: QSeries) -> QSeries:
    """Formal substitution z -> s in a Laurent expansion with at most a simple pole."""
    v = s._valuation_num()
    if v <= 0:
        raise ValueError("inner series must have positive valuation")
    if v >= s.prec:
        raise ValueError("inner series is zero on its window")
    lead = s._c[v - s.start]
    ring = s.ring
    if ring is EXACT and lead == 0:
        raise ValueError("leading coefficient is not a unit")
    coeffs = {k: ring.convert(c) for k, c in L.coeffs.items() if not ring.is_zero(ring.convert(c))}
    # valid windows: s^-1 -> prec - 2v, s^k -> prec + (k-1) v
    prec = s.prec - 2 * v if -1 in coeffs else s.prec
    result = QSeries.zero(Fraction(prec, s.h), s.h, ring)
    if -1 in coeffs:
        result = result + s.inverse().truncate(Fraction(prec, s.h)).scale(coeffs[-1])
    if 0 in coeffs:
        result = result + QSeries.monomial(0, Fraction(prec, s.h), coeffs[0], s.h, ring)
    positive = sorted(k for k in coeffs if k > 0)
    if positive:
        trunc = s.truncate(Fraction(prec, s.h)) if prec < s.prec else s
        power = trunc
        k = 1
        for target in positive:
            if target * v >= prec:
                break
            while k < target:
                power = power * trunc
                power = power.truncate(Fraction(min(power.prec, prec), s.h))
                k += 1
            result = result + power.scale(coeffs[target])
    return result


@dataclass(frozen=True)
class PrincipalPart:
    """Non-positive part of a series; ``polar`` excludes the constant term."""

    series: QSeries
    polar: dict
    constant: object


def principal_part(f: QSeries) -> PrincipalPart:
    terms = {e: c for e, c in f.terms().items() if e <= 0}
    const = f.coefficient(0)
    polar = {e: c for e, c in terms.items() if e < 0}
    series = QSeries.from_dict(terms, Fraction(1, f.h), f.h, f.ring)
    return PrincipalPart(series, polar, const)
