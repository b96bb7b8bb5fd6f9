"""Hecke, U, B and Atkin-Lehner operators on q-series and on cusp data.

A weight-0 harmonic Maass form f for Gamma_0(M), M square-free, is modelled
by its *cusp data*: for every exact divisor Q of M, the principal part and
constant term of the integral q-expansion of f|W_Q.  Two forms with equal cusp
data differ by a constant, and every operator used below maps coefficients of
index <= 0 to coefficients of index <= 0, so the data propagates exactly.

Rules (f of level M, p | M prime, Q | M exact):

* f|W_R at cusp Q is f at cusp Q*R, with Q*R = QR/gcd(Q,R)^2;
* T_m, gcd(m, M) = 1, commutes with every W_Q;
* U_p commutes with W_Q for p not dividing Q, and for p | Q
  (f|U_p)|W_p = f|U_p|B_p + (1/p) f|W_p|B_p - (1/p) f;
* for g of level M and d coprime to M, (g|B_d) viewed at level M e (d | e)
  has cusp Q1 Q2a Q2b (Q1 | M, Q2a | d, Q2b | e/d) equal to g|W_Q1|B_{Q2b d/Q2a}.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from sympy import divisor_sigma, divisors, factorint, primefactors

from .qseries import EXACT, QSeries, TruncationError


class UnsupportedOperation(NotImplementedError):
    """The requested operator interaction is outside the implemented rule set."""


# -- q-series operators -------------------------------------------------------

def apply_hecke(f: QSeries, m: int, N: int, k: int = 0) -> QSeries:
    """b(n) = sum_{d | gcd(m,n), gcd(d,N)=1} d^(k-1) a(mn/d^2)."""
    if m < 1:
        raise ValueError("m must be positive")
    if f.h != 1:
        raise ValueError("Hecke operators need an integral exponent grid")
    prec = -(-f.prec // m)
    start = f.start * m if f.start < 0 else 0
    if prec <= start:
        raise TruncationError("Hecke image has an empty window")
    ring = f.ring
    ds = [d for d in divisors(m) if math.gcd(d, N) == 1]
    coeffs = []
    for n in range(start, prec):
        acc = ring.zero
        for d in ds:
            if n % d:
                continue
            e = m * n // (d * d)
            if e < f.start:
                continue
            a = f._c[e - f.start]
            if a:
                acc = acc + ring.convert(Fraction(d) ** (k - 1)) * a
        coeffs.append(acc)
    return QSeries(coeffs, start, prec, 1, ring)


def apply_U(f: QSeries, m: int) -> QSeries:
    """(f|U_m) has coefficient a(m e) at q^e."""
    if m < 1:
        raise ValueError("m must be positive")
    lo = -((-f.start) // m)
    hi = -(-f.prec // m)
    coeffs = [f._c[m * n - f.start] for n in range(lo, hi)]
    return QSeries(coeffs, lo, max(hi, lo), f.h, f.ring)


def apply_B(f: QSeries, m: int) -> QSeries:
    """(f|B_m)(tau) = f(m tau)."""
    if m < 1:
        raise ValueError("m must be positive")
    coeffs = []
    for i, c in enumerate(f._c):
        coeffs.append(c)
        if i < len(f._c) - 1:
            coeffs.extend([f.ring.zero] * (m - 1))
    return QSeries(coeffs, f.start * m, f.prec * m - (m - 1), f.h, f.ring).regrid(f.h)


# -- symbolic constants ---------------------------------------------------------

ONE = "1"
C_INF = "c"


def cusp_symbol(Q: int) -> str:
    return C_INF if Q == 1 else f"c[{Q}]"


class SymbolicConstant:
    """Rational linear combination of the formal symbols 1, c, c[Q]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for k, v in (coeffs or {}).items():
            v = Fraction(v)
            if v:
                clean[k] = v
        self.coeffs = clean

    @classmethod
    def symbol(cls, name: str) -> "SymbolicConstant":
        return cls({name: 1})

    @classmethod
    def number(cls, x) -> "SymbolicConstant":
        return cls({ONE: x})

    def __add__(self, other):
        other = _as_symbolic(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SymbolicConstant(out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicConstant({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_symbolic(other))

    def __rsub__(self, other):
        return _as_symbolic(other) - self

    def __mul__(self, x):
        if isinstance(x, SymbolicConstant):
            if set(x.coeffs) <= {ONE}:
                x = x.coeffs.get(ONE, 0)
            elif set(self.coeffs) <= {ONE}:
                return x * self.coeffs.get(ONE, 0)
            else:
                raise TypeError("product of two non-scalar symbolic constants")
        x = Fraction(x)
        return SymbolicConstant({k: v * x for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, x):
        return self * (1 / Fraction(x))

    def __eq__(self, other):
        try:
            other = _as_symbolic(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __getitem__(self, key):
        return self.coeffs.get(key, Fraction(0))

    def evaluate(self, values: dict):
        total = 0
        for k, v in self.coeffs.items():
            total += v * (1 if k == ONE else values[k])
        return total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, key=lambda s: (s != ONE, len(s), s)):
            v = self.coeffs[k]
            parts.append(str(v) if k == ONE else f"{v}*{k}")
        return " + ".join(parts)

    def to_record(self) -> dict:
        return {k: str(v) for k, v in sorted(self.coeffs.items())}


def _as_symbolic(x) -> SymbolicConstant:
    if isinstance(x, SymbolicConstant):
        return x
    if isinstance(x, (int, Fraction)):
        return SymbolicConstant.number(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a symbolic constant")


ZERO = SymbolicConstant()


# -- cusp data -----------------------------------------------------------------

def star(Q: int, R: int) -> int:
    g = math.gcd(Q, R)
    return Q * R // (g * g)


def exact_divisors(M: int) -> list:
    return sorted(Q for Q in divisors(M) if math.gcd(Q, M // Q) == 1)


def _check_squarefree(M: int):
    if any(e > 1 for e in factorint(M).values()):
        raise UnsupportedOperation(f"level {M} is not square-free")


@dataclass(frozen=True)
class CuspExpansion:
    """Principal part {n < 0: coefficient} and symbolic constant of one expansion."""

    polar: dict = field(default_factory=dict)
    constant: SymbolicConstant = ZERO

    def __post_init__(self):
        object.__setattr__(self, "polar", {int(n): Fraction(c) for n, c in self.polar.items()
                                           if Fraction(c) != 0})
        if any(n >= 0 for n in self.polar):
            raise ValueError("polar exponents must be negative")
        object.__setattr__(self, "constant", _as_symbolic(self.constant))

    def __add__(self, other):
        polar = dict(self.polar)
        for n, c in other.polar.items():
            polar[n] = polar.get(n, 0) + c
        return CuspExpansion(polar, self.constant + other.constant)

    def scale(self, x):
        return CuspExpansion({n: c * Fraction(x) for n, c in self.polar.items()}, self.constant * x)

    def B(self, m: int):
        return CuspExpansion({n * m: c for n, c in self.polar.items()}, self.constant)

    def U(self, m: int):
        return CuspExpansion({n // m: c for n, c in self.polar.items() if n % m == 0}, self.constant)

    def T(self, m: int):
        """Weight-0 Hecke operator with gcd(m, level) = 1 on the non-positive part."""
        polar = {}
        lowest = min(self.polar, default=0)
        for n in range(lowest * m, 0):
            acc = Fraction(0)
            for d in divisors(math.gcd(m, -n)):
                e = m * n // (d * d)
                acc += Fraction(self.polar.get(e, 0), d)
            if acc:
                polar[n] = acc
        return CuspExpansion(polar, self.constant * Fraction(int(divisor_sigma(m)), m))

    def __eq__(self, other):
        return self.polar == other.polar and self.constant == other.constant

    def __hash__(self):
        return hash((frozenset(self.polar.items()), self.constant))

    def __repr__(self):
        terms = [f"{c}*q^{n}" for n, c in sorted(self.polar.items())]
        terms.append(repr(self.constant))
        return " + ".join(terms)


@dataclass(frozen=True)
class CuspData:
    """Cusp data of a level-``level`` form: {exact divisor Q: expansion of f|W_Q}."""

    level: int
    cusps: dict
    constant_ambiguous: bool = True

    def __post_init__(self):
        _check_squarefree(self.level)
        if sorted(self.cusps) != exact_divisors(self.level):
            raise ValueError("cusp data must cover exactly the exact divisors of the level")

    def __getitem__(self, Q):
        return self.cusps[Q]

    def __add__(self, other):
        if isinstance(other, (int, Fraction, SymbolicConstant)):
            k = CuspExpansion({}, _as_symbolic(other))
            return CuspData(self.level, {Q: e + k for Q, e in self.cusps.items()}, self.constant_ambiguous)
        if other.level != self.level:
            M = math.lcm(self.level, other.level)
            return embed(self, M) + embed(other, M)
        return CuspData(self.level, {Q: self.cusps[Q] + other.cusps[Q] for Q in self.cusps},
                        self.constant_ambiguous or other.constant_ambiguous)

    __radd__ = __add__

    def scale(self, x) -> "CuspData":
        return CuspData(self.level, {Q: e.scale(x) for Q, e in self.cusps.items()}, self.constant_ambiguous)

    def __rmul__(self, x):
        return self.scale(x)

    def __sub__(self, other):
        if isinstance(other, CuspData):
            return self + other.scale(-1)
        return self + (-_as_symbolic(other))

    def poles(self) -> dict:
        return {Q: e.polar for Q, e in self.cusps.items() if e.polar}

    def constants(self) -> dict:
        return {Q: e.constant for Q, e in self.cusps.items()}

    def __repr__(self):
        body = "; ".join(f"[{Q}] {e!r}" for Q, e in sorted(self.cusps.items()))
        return f"CuspData(level={self.level}: {body})"


def zhat_cuspdata(N: int) -> CuspData:
    """Z^_E: q^-1 + c at infinity, the constant c[Q] at every other cusp."""
    cusps = {1: CuspExpansion({-1: 1}, SymbolicConstant.symbol(C_INF))}
    for Q in exact_divisors(N)[1:]:
        cusps[Q] = CuspExpansion({}, SymbolicConstant.symbol(cusp_symbol(Q)))
    return CuspData(N, cusps)


def op_W(cd: CuspData, R: int) -> CuspData:
    if cd.level % R or math.gcd(R, cd.level // R) != 1:
        raise UnsupportedOperation(f"W_{R} is not an Atkin-Lehner operator at level {cd.level}")
    return CuspData(cd.level, {Q: cd.cusps[star(Q, R)] for Q in cd.cusps}, cd.constant_ambiguous)


def op_T_coprime(cd: CuspData, m: int) -> CuspData:
    if math.gcd(m, cd.level) != 1:
        raise UnsupportedOperation(f"T_{m} is not coprime to the level {cd.level}")
    return CuspData(cd.level, {Q: e.T(m) for Q, e in cd.cusps.items()}, cd.constant_ambiguous)


def op_U_prime(cd: CuspData, p: int) -> CuspData:
    M = cd.level
    if M % p:
        raise UnsupportedOperation(f"U_{p} with p not dividing the level {M} changes the level")
    out = {}
    for Q, e in cd.cusps.items():
        if Q % p:
            out[Q] = e.U(p)
        else:
            # (g|U_p)|W_p for g = f|W_{Q/p}
            g1, gp = cd.cusps[Q // p], e
            out[Q] = g1.U(p).B(p) + gp.B(p).scale(Fraction(1, p)) + g1.scale(Fraction(-1, p))
    return CuspData(M, out, cd.constant_ambiguous)


def op_U(cd: CuspData, m: int) -> CuspData:
    for p, e in factorint(m).items():
        for _ in range(e):
            cd = op_U_prime(cd, p)
    return cd


def op_T(cd: CuspData, m: int, level: int | None = None) -> CuspData:
    """T_m^{(level)}: T_{m'} times U_{p^a} for the part of m supported on the level."""
    level = level or cd.level
    if level != cd.level:
        cd = embed(cd, level)
    bad = 1
    for p, e in factorint(m).items():
        if level % p == 0:
            bad *= p ** e
    cd = op_T_coprime(cd, m // bad) if m // bad > 1 else cd
    return op_U(cd, bad) if bad > 1 else cd


def op_B(cd: CuspData, d: int, new_level: int | None = None) -> CuspData:
    """g|B_d regarded at level new_level (default level * d)."""
    M = cd.level
    if math.gcd(d, M) != 1:
        cd = descend(cd, math.gcd(d, M))
        M = cd.level
    new_level = new_level or M * d
    if new_level % (M * d):
        raise UnsupportedOperation(f"B_{d} on level {M} cannot be viewed at level {new_level}")
    _check_squarefree(new_level)
    e = new_level // M
    out = {}
    for Q in exact_divisors(new_level):
        Q1 = math.gcd(Q, M)
        Q2 = Q // Q1
        Q2a = math.gcd(Q2, d)
        Q2b = Q2 // Q2a
        out[Q] = cd.cusps[Q1].B((d // Q2a) * Q2b)
    return CuspData(new_level, out, cd.constant_ambiguous)


def embed(cd: CuspData, new_level: int) -> CuspData:
    """View a level-M form as a form of level new_level (a multiple of M)."""
    if new_level == cd.level:
        return cd
    return op_B(cd, 1, new_level)


def descend(cd: CuspData, r: int) -> CuspData:
    """Regard a level-M form as a form of level M/r; its data must be B-compatible."""
    M = cd.level
    if M % r or math.gcd(r, M // r) != 1:
        raise UnsupportedOperation(f"cannot descend level {M} by {r}")
    low = M // r
    lower = CuspData(low, {Q: cd.cusps[Q] for Q in exact_divisors(low)}, cd.constant_ambiguous)
    if embed(lower, M).cusps != cd.cusps:
        raise UnsupportedOperation(f"cusp data at level {M} is not of level {low}")
    return lower


# -- operator words -----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    kind: str
    param: int
    level: int | None = None

    def __post_init__(self):
        if self.kind not in "TUBW" or len(self.kind) != 1:
            raise ValueError(f"unknown operator {self.kind!r}")
        if self.param < 1:
            raise ValueError("operator parameters must be positive")

    def __str__(self):
        return f"{self.kind}{self.param}"


@dataclass(frozen=True)
class OperatorWord:
    atoms: tuple

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        atoms = []
        for tok in filter(None, (t.strip() for t in text.split(","))):
            m = re.fullmatch(r"([TUBW])(\d+)(?:\^\((\d+)\))?", tok)
            if not m:
                raise ValueError(f"cannot parse operator {tok!r}")
            level = int(m.group(3)) if m.group(3) else None
            atoms.append(Atom(m.group(1), int(m.group(2)), level))
        return cls(tuple(atoms))

    def __str__(self):
        return ",".join(map(str, self.atoms))


def constant_calculus_apply(cd: CuspData, word: OperatorWord | str) -> CuspData:
    """Propagate cusp data through a word of operators, left to right (f|A|B...)."""
    if isinstance(word, str):
        word = OperatorWord.parse(word)
    for atom in word.atoms:
        if atom.kind == "W":
            if atom.param > 1:
                cd = op_W(cd, atom.param)
        elif atom.kind == "T":
            cd = op_T(cd, atom.param, atom.level)
        elif atom.kind == "U":
            cd = op_U(cd, atom.param)
        else:
            if atom.param > 1 or atom.level:
                cd = op_B(cd, atom.param, atom.level)
    return cd


# -- closed forms and Poincare series ---------------------------------------------

def sigma(n: int) -> int:
    return int(divisor_sigma(n))


def uw_closed_form(N: int, p: int, a: int, nu: int = 1) -> CuspExpansion:
    """-p^{a+1} f|U_{p^{a+1}}|W_p at infinity: q^{-p^a nu} - (p-1) sigma(p^a) c - c_p."""
    c, cp = SymbolicConstant.symbol(C_INF), SymbolicConstant.symbol(cusp_symbol(p))
    return CuspExpansion({-(p ** a) * nu: 1}, -(p - 1) * sigma(p ** a) * c - cp)


def uw_recursion(cd: CuspData, p: int, r: int) -> dict:
    """f|U_{p^r}|W_p by recursion in r, at the cusps Q with p not dividing Q.

    f|U_{p^r}|W_p = f|U_{p^r}|B_p + (1/p) f|U_{p^(r-1)}|W_p|B_p - (1/p) f|U_{p^(r-1)}.
    The single terms are not of level M; B_p commutes with W_Q for p not
    dividing Q, which is all this oracle needs.
    """
    cusps = [Q for Q in cd.cusps if Q % p]
    if r == 0:
        w = op_W(cd, p)
        return {Q: w.cusps[Q] for Q in cusps}
    prev_w = uw_recursion(cd, p, r - 1)
    fu, prev = op_U(cd, p ** r), op_U(cd, p ** (r - 1))
    return {Q: fu.cusps[Q].B(p) + prev_w[Q].B(p).scale(Fraction(1, p))
            + prev.cusps[Q].scale(Fraction(-1, p)) for Q in cusps}


@dataclass
class PoincareData:
    index: int
    level: int
    terms: list
    data: CuspData


_P1_CACHE: dict = {}


def poincare_P1(M: int, N: int) -> CuspData:
    """P_1 of level M | N built from Z^_E of level N by repeated descent.

    P_1^{(M/p)} = P_1^{(M)} + p P_1^{(M)}|W_p|U_p (up to a constant), a level M/p form.
    """
    key = (M, N)
    if key in _P1_CACHE:
        return _P1_CACHE[key]
    if M == N:
        cd = zhat_cuspdata(N)
    else:
        p = min(primefactors(N // M))
        upper = poincare_P1(M * p, N)
        cd = descend(upper + op_U(op_W(upper, p), p).scale(p), p)
    _P1_CACHE[key] = cd
    return cd


def poincare_principal_part(nu: int, N: int, prime_order=None) -> PoincareData:
    """P_nu^{(N)} = sum_{d | gcd(N, nu)} (nu/d) P_1^{(N/d)}|T_{nu/d}^{(N/d)}|B_d."""
    if nu < 1:
        raise ValueError("nu must be positive")
    _check_squarefree(N)
    total = None
    terms = []
    for d in divisors(math.gcd(N, nu)):
        base = poincare_P1(N // d, N) if prime_order is None else poincare_P1_ordered(N // d, N, prime_order)
        img = op_T(base, nu // d)
        img = op_B(img, d, N) if d > 1 else img
        piece = img.scale(nu // d)
        terms.append((d, nu // d))
        total = piece if total is None else total + piece
    poles = total.poles()
    if poles != {1: {-nu: Fraction(1)}}:
        raise ArithmeticError(f"P_{nu} at level {N} has principal parts {poles}")
    return PoincareData(nu, N, terms, total)


def poincare_P1_ordered(M: int, N: int, order) -> CuspData:
    """As poincare_P1 but descending through the primes in the given order."""
    if M == N:
        return zhat_cuspdata(N)
    missing = [p for p in order if (N // M) % p == 0]
    p = missing[0]
    upper = poincare_P1_ordered(M * p, N, order)
    return descend(upper + op_U(op_W(upper, p), p).scale(p), p)
