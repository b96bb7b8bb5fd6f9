"""Dimension formulas for orbifold VOAs attached to genus-one levels.

Three evaluators live here:

* the closed prime-level formula and the newform pairing identity;
* an assembly of ch_{V^G} from cusp data, which re-derives the constant
  terms of all F_a from the operator calculus;
* the printed composite-level formula, kept as a cross-check only.

The character of V^G at cusp W_Q (integral q-expansion of ch|W_Q) has the
principal part

    (1/Q) q^{-Q} + (1/Q) sum dim W^{(ci,cj)}_h q^{Q h - Q},   c = N/Q,

summed over (i, j) mod Q and weights h < 1.  The F_a constant equals the cusp
width Q times the constant of ch|W_Q, so dim V_1 + (orbifold dims) is
sum_Q Q * const(ch|W_Q).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from sympy import factorint, primefactors

from . import heckealg as H
from .heckealg import (C_INF, CuspData, CuspExpansion, SymbolicConstant, cusp_symbol,
                       exact_divisors, sigma)

PRIME_CE = {11: Fraction(-24, 10), 17: Fraction(-24, 16), 19: Fraction(-24, 18)}


class TableError(ValueError):
    """Malformed dimension table."""


@dataclass(frozen=True)
class DimensionTable:
    """dim V_1^G and the twisted dimensions dim W^{(i,j)}_h with 0 <= h < 1."""

    level: int
    dim_v1_fixed: int
    twisted: dict = field(default_factory=dict)  # (i, j, h: Fraction) -> dim

    def __post_init__(self):
        N = self.level
        if N < 2 or any(e > 1 for e in factorint(N).values()):
            raise TableError("level must be square-free and > 1")
        if int(self.dim_v1_fixed) != self.dim_v1_fixed or self.dim_v1_fixed < 0:
            raise TableError("dim V_1^G must be a non-negative integer")
        clean = {}
        for (i, j, h), dim in self.twisted.items():
            h = Fraction(h)
            if not (0 <= i < N and 0 <= j < N):
                raise TableError(f"index ({i},{j}) out of range for level {N}")
            if (h * N).denominator != 1 or not 0 <= h < 1:
                raise TableError(f"weight {h} is not on the 1/{N} grid in [0, 1)")
            if (i, j) == (0, 0):
                raise TableError("W^(0,0) is V^G itself; give dim V_1^G instead")
            if (int(h * N) - i * j) % N:
                raise TableError(f"weight {h} of W^({i},{j}) is not in ij/N + Z")
            if int(dim) != dim or dim < 0:
                raise TableError("dimensions must be non-negative integers")
            if dim:
                clean[(i, j, h)] = clean.get((i, j, h), 0) + int(dim)
        object.__setattr__(self, "twisted", clean)

    # the vacuum W^(0,0)_0 has dimension 1
    def dim(self, i: int, j: int, h) -> int:
        N = self.level
        i, j, h = i % N, j % N, Fraction(h)
        if (i, j) == (0, 0):
            return 1 if h == 0 else (self.dim_v1_fixed if h == 1 else 0)
        return self.twisted.get((i, j, h), 0)

    @classmethod
    def from_prime_dims(cls, p: int, dim_v1_fixed: int, dims: dict) -> "DimensionTable":
        """Table from {(i, n): dim V(g^i)_{n/p}}, 1 <= i, n < p."""
        twisted = {}
        for (i, n), d in dims.items():
            if not (0 < i < p and 0 < n < p):
                raise TableError("prime tables need 1 <= i, n < p")
            j = n * pow(i, -1, p) % p
            twisted[(i, j, Fraction(n, p))] = twisted.get((i, j, Fraction(n, p)), 0) + d
        return cls(p, dim_v1_fixed, twisted)

    def prime_weights(self) -> dict:
        """{n: sum_i dim V(g^i)_{n/p}} for a prime level."""
        p = self.level
        out = {}
        for (i, j, h), d in self.twisted.items():
            n = int(h * p)
            if n == 0:
                raise TableError("prime-level formula needs positive twisted weights")
            out[n] = out.get(n, 0) + d
        return out

    def to_record(self) -> dict:
        return {"level": self.level, "dim_v1_fixed": self.dim_v1_fixed,
                "twisted": [{"i": i, "j": j, "num": h.numerator, "den": h.denominator, "dim": d}
                            for (i, j, h), d in sorted(self.twisted.items())]}

    @classmethod
    def from_record(cls, rec: dict) -> "DimensionTable":
        try:
            twisted = {}
            for e in rec.get("twisted", []):
                key = (int(e["i"]), int(e["j"]), Fraction(int(e["num"]), int(e["den"])))
                twisted[key] = twisted.get(key, 0) + int(e["dim"])
            return cls(int(rec["level"]), int(rec["dim_v1_fixed"]), twisted)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise TableError(f"malformed table record: {exc}") from exc

    @classmethod
    def load(cls, path) -> "DimensionTable":
        return cls.from_record(json.loads(Path(path).read_text()))

    def dump(self, path):
        Path(path).write_text(json.dumps(self.to_record(), indent=2) + "\n")


def random_table(N: int, rng, max_dim: int = 6, density: float = 0.3,
                 zero_weight: bool = False) -> DimensionTable:
    """A random table respecting the weight congruence (and positivity unless zero_weight)."""
    twisted = {}
    for i in range(N):
        for j in range(N):
            if (i, j) == (0, 0) or rng.random() > density:
                continue
            m = i * j % N
            if m == 0 and not zero_weight:
                continue
            twisted[(i, j, Fraction(m, N))] = int(rng.integers(0, max_dim + 1))
    return DimensionTable(N, int(rng.integers(0, 40)), twisted)


# -- prime level ------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeResult:
    value: object
    S: int


def sigma_sum(t: DimensionTable) -> int:
    """S = sum_{i,n} sigma(p - n) dim V(g^i)_{n/p}."""
    p = t.level
    return sum(sigma(p - n) * d for n, d in t.prime_weights().items())


def dim_formula_prime(t: DimensionTable, C=None) -> PrimeResult:
    """(p+1) dim V_1^G - (p-1) C + C S; C defaults to -24/(p-1) for p = 11, 17, 19."""
    p = t.level
    if len(primefactors(p)) != 1:
        raise TableError("prime-level formula needs a prime level")
    if C is None:
        if p not in PRIME_CE:
            raise TableError(f"no C_E known for p = {p}; supply C")
        C = PRIME_CE[p]
    S = sigma_sum(t)
    return PrimeResult((p + 1) * t.dim_v1_fixed - (p - 1) * C + C * S, S)


def newform_pairing_identity(t: DimensionTable, f) -> int:
    """sum a(p-n) dim V(g^i)_{n/p} - (-eps p - a(p)); f is a NewformData."""
    p = t.level
    eps = f.atkin_lehner[p]
    lhs = sum(int(f[p - n]) * d for n, d in t.prime_weights().items())
    return lhs - (-eps * p - int(f[p]))


def newform_cusp_data(f) -> dict:
    """{Q: coefficient function of f|W_Q} with f|W_Q = eps_Q f."""
    out = {1: lambda n: int(f[n]) if n > 0 else 0}
    for Q, eps in f.atkin_lehner.items():
        out[Q] = (lambda e: (lambda n: e * int(f[n]) if n > 0 else 0))(eps)
    return out


def bruinier_funke_pairing(g: dict, f: CuspData):
    """sum_Q sum_{n <= 0} a_Q(-n) b_Q(n) over W_Q-normalised expansions.

    g maps each exact divisor Q to either a QSeries or a callable n -> a_Q(n).
    """
    if sorted(g) != sorted(f.cusps):
        raise ValueError("cusp sets of the two forms differ")
    total = Fraction(0)
    const = SymbolicConstant()
    for Q, exp in f.cusps.items():
        gq = g[Q]
        coeff = gq if callable(gq) else (lambda s: (lambda n: s.coefficient(n)))(gq)
        for n, b in exp.polar.items():
            total += Fraction(coeff(-n)) * b
        a0 = Fraction(coeff(0))
        if a0:
            const = const + exp.constant * a0
    return total if not const.coeffs else const + total


# -- character assembly -----------------------------------------------------------

def character_principal_parts(t: DimensionTable) -> CuspData:
    """Principal parts of ch_{V^G} at every cusp, constants left at zero."""
    N = t.level
    cusps = {}
    for Q in exact_divisors(N):
        c = N // Q
        polar = {-Q: Fraction(1, Q)}
        for (i, j, h), d in t.twisted.items():
            if i % c or j % c:
                continue
            e = int(Q * h) - Q
            polar[e] = polar.get(e, 0) + Fraction(d, Q)
        cusps[Q] = CuspExpansion(polar, SymbolicConstant())
    return CuspData(N, cusps)


@dataclass(frozen=True)
class Assembly:
    character: CuspData
    total: SymbolicConstant
    shift: SymbolicConstant


def _finish(t: DimensionTable, model: CuspData) -> Assembly:
    target = character_principal_parts(t)
    if model.poles() != target.poles():
        raise ArithmeticError(f"assembled principal parts {model.poles()} differ from {target.poles()}")
    shift = SymbolicConstant.number(t.dim_v1_fixed) - model.cusps[1].constant
    ch = model + shift
    total = SymbolicConstant()
    for Q, e in ch.cusps.items():
        total = total + e.constant * Q
    return Assembly(ch, total, shift)


def assemble_character_prime(t: DimensionTable) -> Assembly:
    """ch_{V^G} as the explicit combination of Z^_E images from the prime-level proof."""
    p = t.level
    if len(primefactors(p)) != 1:
        raise TableError("prime-level assembly needs a prime level")
    Z = H.zhat_cuspdata(p)
    Zw = H.op_W(Z, p)
    model = Z
    for n, d in sorted(t.prime_weights().items()):
        model = model + H.op_T(Zw, p - n).scale(Fraction((p - n) * d, p))
    inner = H.op_U(Z, p).scale(p) + Zw  # a level-1 form
    model = model + (H.op_B(inner, p) + H.op_U(Zw, p).scale(p)).scale(Fraction(1, p))
    return _finish(t, model)


def proof_constant_prime(t: DimensionTable) -> SymbolicConstant:
    """The constant C = c + (c_p/p) S + (1/p)(p c + (p+1) c_p) of the prime-level proof."""
    p = t.level
    c, cp = SymbolicConstant.symbol(C_INF), SymbolicConstant.symbol(cusp_symbol(p))
    return c + cp * Fraction(sigma_sum(t), p) + (c * p + cp * (p + 1)) / p


def assemble_character(t: DimensionTable, prime_order=None) -> Assembly:
    """ch_{V^G} from Poincare series placed at each cusp (any square-free level)."""
    N = t.level
    target = character_principal_parts(t)
    model = None
    for Q, exp in sorted(target.cusps.items()):
        for n, coeff in sorted(exp.polar.items()):
            P = H.poincare_principal_part(-n, N, prime_order).data
            piece = (H.op_W(P, Q) if Q > 1 else P).scale(coeff)
            model = piece if model is None else model + piece
    return _finish(t, model)


def closed_form_prime_symbolic(t: DimensionTable) -> SymbolicConstant:
    """The prime formula with C = c - c_p kept formal."""
    p = t.level
    C = SymbolicConstant.symbol(C_INF) - SymbolicConstant.symbol(cusp_symbol(p))
    return _as_sym(dim_formula_prime(t, C).value)


def _as_sym(x):
    return x if isinstance(x, SymbolicConstant) else SymbolicConstant.number(x)


# -- composite level --------------------------------------------------------------

def _split(n: int, p1: int, p2: int):
    a = b = 0
    while n % p1 == 0:
        n //= p1
        a += 1
    while n % p2 == 0:
        n //= p2
        b += 1
    return a, b, n


def printed_formula_composite(t: DimensionTable) -> SymbolicConstant:
    """Literal transcription of the printed composite formula.

    Bare "p^{a_m}" is read as p_1^{a_m} and c_N as c_{E,N}(0); the vacuum
    W^(0,0)_0 contributes to the m = 0 terms.
    """
    N = t.level
    p1, p2 = primefactors(N)
    if len(primefactors(N)) != 2 or p1 * p2 != N:
        raise TableError("composite formula needs N = p1 p2")
    c = SymbolicConstant.symbol(C_INF)
    c1, c2, cN = (SymbolicConstant.symbol(cusp_symbol(Q)) for Q in (p1, p2, N))
    F = Fraction
    psi = (p1 + 1) * (p2 + 1)
    total = c * 0 + t.dim_v1_fixed * psi + cN * N + c1 * p1 + c2 * p2
    for m in range(N):
        a, b, r = _split(N - m, p1, p2)
        dims = sum(t.dim(i, j, F(m, N)) for i in range(N) for j in range(N) if (i * j - m) % N == 0)
        if dims:
            br = cN + c1 * p2 ** (b + 1) + c2 * (p1 ** (a + 1) + p1 ** a) \
                - c * (p1 ** (a + 1) + p1 ** a + p2 ** (b + 1) + p2 ** b)
            total = total + br * (sigma(r) * dims)
    for m in range(p2):
        a, b, r = _split(N - p1 * m, p1, p2)
        dims = sum(t.dim(p1 * i, p1 * j, F(m, p2)) for i in range(p2) for j in range(p2)
                   if (p1 * i * j - m) % p2 == 0)
        if dims:
            br = cN * F(p1, p2) + c1 * (p1 * (p2 ** (b + 1) + p2 ** b - F(1, p2))) \
                - c2 * (p1 ** (a + 2) + p1 ** (a + 1) + F(p1, p2)) \
                + c * ((p1 + 1) * (p1 ** (a + 1) - p2 ** (b + 1)) + F(p1, p2))
            total = total + br * (sigma(r) * dims)
    for m in range(p1):
        a, b, r = _split(N - p2 * m, p1, p2)
        dims = sum(t.dim(p2 * i, p2 * j, F(m, p1)) for i in range(p1) for j in range(p1)
                   if (p2 * i * j - m) % p1 == 0)
        if dims:
            br = cN * F(p2, p1) - c1 * (p2 * (p2 ** (b + 1) + p2 ** b - F(1, p1))) \
                + c2 * (p2 * (p1 ** (a + 1) + p1 ** a - F(1, p1))) \
                + c * ((p2 + 1) * p2 ** (b + 1) - p2 * (p1 ** (a + 1) + p1 ** a) + F(p2, p1))
            total = total + br * (sigma(r) * dims)
    return total


@dataclass(frozen=True)
class CompositeResult:
    assembly: SymbolicConstant
    printed: SymbolicConstant
    residual: SymbolicConstant
    assembly_value: float | None = None
    printed_value: float | None = None

    @property
    def numeric_residual(self):
        if self.assembly_value is None:
            return None
        return self.printed_value - self.assembly_value


def dim_formula_composite(t: DimensionTable, constants: dict | None = None) -> CompositeResult:
    """Four-term orbifold dimension sum: assembly (authoritative) and printed formula.

    constants maps the symbols "c", "c[Q]" to numbers; when given, both paths are
    also evaluated numerically.
    """
    if len(primefactors(t.level)) != 2:
        raise TableError("composite formula needs two prime factors")
    asm = assemble_character(t).total
    printed = printed_formula_composite(t)
    res = printed - asm
    if constants is None:
        return CompositeResult(asm, printed, res)
    return CompositeResult(asm, printed, res, float(asm.evaluate(constants)),
                           float(printed.evaluate(constants)))


def numeric_constants(level: int) -> dict:
    """{"c": c_E(0), "c[Q]": c_{E,Q}(0)} from the mock modular form of the optimal curve."""
    from . import curves, mockform

    E = curves.curve(level)
    out = {C_INF: mockform.constant_term(E).real}
    for Q, v in mockform.all_cusp_constants(E).items():
        out[cusp_symbol(Q)] = v.real
    return out
