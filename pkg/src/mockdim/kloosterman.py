"""Kloosterman sums, the Selberg identity and weight-0 Maass-Poincare coefficients.

For n >= 1 the n-th coefficient of the weight-0 Poincare series with principal
part q^-m at infinity on Gamma_0(N) is

    2 pi sqrt(m/n) sum_{c >= 1} K(-m, n, N c)/(N c) I_1(4 pi sqrt(mn)/(N c)).

The sign of the first Kloosterman argument is the corrected one; for N = 1,
m = 1 this reproduces the coefficients of j - 744.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import divisors, primefactors, reduced_totient

from . import heckealg

SERIES_CUTOFF = 15.0


def _units(c: int) -> np.ndarray:
    mask = np.ones(c, dtype=bool)
    for p in primefactors(c):
        mask[::p] = False
    if c == 1:
        mask[0] = True
    return np.flatnonzero(mask).astype(np.int64)


def _mulmod(a, b, c):
    return (a * b) % c


@lru_cache(maxsize=256)
def _unit_inverse_pairs(c: int):
    """(d, d^-1 mod c) over the units, by vectorised exponentiation."""
    d = _units(c)
    if c == 1:
        return np.zeros(1, np.int64), np.zeros(1, np.int64)
    e = int(reduced_totient(c)) - 1
    result = np.ones_like(d)
    base = d.copy()
    while e:
        if e & 1:
            result = _mulmod(result, base, c)
        base = _mulmod(base, base, c)
        e >>= 1
    return d, result


def kloosterman_sum(m: int, n: int, c: int) -> float:
    """K(m, n, c) = sum over units d mod c of e((m dbar + n d)/c)."""
    if c < 1:
        raise ValueError("c must be positive")
    d, dbar = _unit_inverse_pairs(c)
    phase = (m * dbar + n * d) % c
    z = np.exp(2j * np.pi * phase / c).sum()
    if abs(z.imag) > 1e-12 * max(1.0, c / 100):
        raise ArithmeticError(f"Kloosterman sum K({m},{n},{c}) is not real")
    return float(z.real)


def selberg_check(m: int, n: int, c: int) -> float:
    """|K(m,n,c) - sum_{d | gcd(m,n,c)} d K(1, mn/d^2, c/d)|."""
    g = math.gcd(math.gcd(m, n), c)
    rhs = sum(d * kloosterman_sum(1, m * n // (d * d), c // d) for d in divisors(g))
    return abs(kloosterman_sum(m, n, c) - rhs)


# -- Bessel I_1 -------------------------------------------------------------------

def _i1_series(x: float) -> float:
    h = x / 2
    term, total, k = h, h, 0
    while term > 1e-17 * total:
        k += 1
        term *= h * h / (k * (k + 1))
        total += term
    return total


def _i1_asymptotic(x: float) -> float:
    # e^x / sqrt(2 pi x) * sum_k (-1)^k prod_{j<=k} (4 - (2j-1)^2) / (k! (8x)^k)
    term, total, k = 1.0, 1.0, 0
    while True:
        k += 1
        nxt = -term * (4 - (2 * k - 1) ** 2) / (k * 8 * x)
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17:
            break
        term = nxt
        total += term
    return math.exp(x) / math.sqrt(2 * math.pi * x) * total


def bessel_I1(x: float) -> float:
    """Modified Bessel function I_1 for x >= 0."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0.0
    return _i1_series(x) if x < SERIES_CUTOFF else _i1_asymptotic(x)


# -- Poincare coefficients ------------------------------------------------------------

class TailError(ArithmeticError):
    """The estimated truncation error of a Kloosterman-Bessel series is too large."""


@dataclass(frozen=True)
class SeriesValue:
    value: float
    tail: float
    c_max: int

    def __float__(self):
        return self.value


def _poincare_terms(requests, N: int, c_max: int) -> dict:
    """Term arrays t_c (c = 1..c_max) for each requested (m, n).

    K(-m, n, M) = K(1, -mn, M) when gcd(m, M) = 1, so one cosine table per
    modulus serves every request through the distinct products mn.
    """
    out = np.zeros((len(requests), c_max))
    scale = np.array([2 * math.pi * math.sqrt(m / n) for m, n in requests])
    roots = [4 * math.pi * math.sqrt(m * n) for m, n in requests]
    for c in range(1, c_max + 1):
        mod = N * c
        d, dbar = _unit_inverse_pairs(c=mod) if mod < 4096 else _unit_inverse_pairs.__wrapped__(mod)
        table = np.cos(2 * np.pi * np.arange(mod) / mod)
        cache = {}
        K = np.empty(len(requests))
        for i, (m, n) in enumerate(requests):
            if math.gcd(m, mod) == 1:
                t = (-m * n) % mod
                if t not in cache:
                    cache[t] = table[(dbar + t * d) % mod].sum()
                K[i] = cache[t]
            else:
                K[i] = table[((-m % mod) * dbar + (n % mod) * d) % mod].sum()
        bes = np.array([bessel_I1(r / mod) for r in roots])
        out[:, c - 1] = scale * K / mod * bes
    return {req: out[i] for i, req in enumerate(requests)}


def _summarize(terms: np.ndarray, c_max: int) -> SeriesValue:
    # ascending c with pairwise reduction keeps the order fixed
    value = float(np.sum(terms))
    block = terms[c_max // 2:]
    # Kloosterman signs behave like a random walk: the energy beyond c_max is
    # about a third of the energy in (c_max/2, c_max]; report three sigma
    tail = 3.0 * math.sqrt(float(np.sum(block ** 2)) / 3.0)
    return SeriesValue(value, tail, c_max)


def poincare_coefficients(requests, N: int, c_max: int = 2000) -> dict:
    """{(m, n): SeriesValue} for several coefficients of level-N Poincare series."""
    requests = sorted(set(requests))
    for m, n in requests:
        if m < 1 or n < 1:
            raise ValueError("indices must be positive")
    terms = _poincare_terms(requests, N, c_max)
    return {req: _summarize(t, c_max) for req, t in terms.items()}


def poincare_coefficient(m: int, n: int, N: int, k: int = 0, c_max: int = 2000,
                         tol: float | None = None) -> SeriesValue:
    """n-th coefficient of the level-N weight-0 Poincare series with pole q^-m."""
    if k != 0:
        raise NotImplementedError("only weight 0 is implemented")
    res = poincare_coefficients([(m, n)], N, c_max)[(m, n)]
    if tol is not None and res.tail > tol:
        raise TailError(f"tail estimate {res.tail:.3e} exceeds tolerance {tol:.1e} at c_max={c_max}")
    return res


@dataclass(frozen=True)
class HeckePoincareReport:
    nu: int
    level: int
    residual: float
    tail: float
    lhs: dict
    rhs: dict


def verify_hecke_poincare(nu: int, N: int, n_range=range(1, 9), c_max: int = 2000,
                          tol: float | None = None) -> HeckePoincareReport:
    """Compare positive coefficients of P_nu with the Hecke-Poincare combination."""
    heckealg._check_squarefree(N)
    n_range = list(n_range)
    # right side: sum_d (nu/d) P_1^{(N/d)} | T_{nu/d}^{(N/d)} | B_d
    plan = []
    need = {}
    for d in divisors(math.gcd(N, nu)):
        M, m = N // d, nu // d
        plan.append((d, M, m))
        for n in n_range:
            if n % d:
                continue
            n1 = n // d
            for e in divisors(math.gcd(m, n1)):
                if math.gcd(e, M) == 1:
                    need.setdefault(M, set()).add((1, m * n1 // (e * e)))
    need.setdefault(N, set()).update((nu, n) for n in n_range)
    streams = {M: poincare_coefficients(sorted(req), M, c_max) for M, req in need.items()}
    lhs = streams[N]
    rhs, tails, residual = {}, {}, 0.0
    for n in n_range:
        total, tail = 0.0, lhs[(nu, n)].tail
        for d, M, m in plan:
            if n % d:
                continue
            n1 = n // d
            for e in divisors(math.gcd(m, n1)):
                if math.gcd(e, M) == 1:
                    sv = streams[M][(1, m * n1 // (e * e))]
                    total += m * sv.value / e
                    tail += m * sv.tail / e
        rhs[n] = total
        tails[n] = tail
        residual = max(residual, abs(total - lhs[(nu, n)].value))
    worst_tail = max(tails.values())
    if tol is not None and worst_tail > tol:
        raise TailError(f"tail estimate {worst_tail:.3e} exceeds tolerance {tol:.1e} at c_max={c_max}")
    return HeckePoincareReport(nu, N, residual, worst_tail,
                               {n: lhs[(nu, n)].value for n in n_range}, rhs)


def j_coefficients(n_max: int) -> list:
    """Coefficients of q^0 .. q^n_max in j = E_4^3/Delta, exact (independent oracle)."""
    from sympy import divisor_sigma

    L = n_max + 2
    e4 = [1] + [240 * int(divisor_sigma(n, 3)) for n in range(1, L)]
    e4sq = _mul(e4, e4, L)
    e4cube = _mul(e4sq, e4, L)
    # Delta / q = prod (1 - q^n)^24
    eta = [1] + [0] * (L - 1)
    for n in range(1, L):
        for _ in range(24):
            for i in range(L - 1, n - 1, -1):
                eta[i] -= eta[i - n]
    inv = [0] * L
    inv[0] = 1
    for i in range(1, L):
        inv[i] = -sum(eta[k] * inv[i - k] for k in range(1, i + 1))
    j = _mul(e4cube, inv, L)
    # j = q^-1 (j[0] + j[1] q + ...)
    return [j[k + 1] for k in range(n_max + 1)]


def _mul(a, b, L):
    out = [0] * L
    for i, x in enumerate(a[:L]):
        if x:
            for k, y in enumerate(b[: L - i]):
                out[i + k] += x * y
    return out
