"""Strong Weil curves of conductor 11, 14, 15, 17, 19, 21 and their newforms.

The minimal models are the optimal curves 11a1, 14a1, 15a1, 17a1, 19a1,
21a1 of the standard tables.  They are not taken on trust: :func:`validate`
checks discriminant support, Hasse bounds and (for 11, 14, 15) the eta
product identities.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime, primerange

LEVELS = (11, 14, 15, 17, 19, 21)

# [a1, a2, a3, a4, a6]
_MODELS = {
    11: (0, -1, 1, -10, -20),
    14: (1, 0, 1, 4, -6),
    15: (1, 1, 1, -10, -10),
    17: (1, -1, 1, -1, -14),
    19: (0, 1, 1, -9, -15),
    21: (1, 0, 0, -4, -1),
}


@dataclass(frozen=True)
class EllipticCurveModel:
    conductor: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self) -> int:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self) -> int:
        b2, b4, b6, _ = self.b_invariants
        return -b2 ** 3 + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(self.c4 ** 3, self.discriminant)

    @property
    def g2(self) -> Fraction:
        """Invariant of the model y^2 = 4x^3 - g2 x - g3 with the same lattice."""
        return Fraction(self.c4, 12)

    @property
    def g3(self) -> Fraction:
        return Fraction(self.c6, 216)

    def short_j_invariant(self) -> Fraction:
        g2, g3 = self.g2, self.g3
        return 1728 * g2 ** 3 / (g2 ** 3 - 27 * g3 ** 2)


def curve(level: int) -> EllipticCurveModel:
    if level not in _MODELS:
        raise ValueError(f"no genus-one square-free level {level}; choose from {LEVELS}")
    return EllipticCurveModel(level, *_MODELS[level])


def count_points_mod_p(E: EllipticCurveModel, p: int) -> int:
    """#E(F_p) for the reduction of the long Weierstrass model (singular point included)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    a1, a2, a3, a4, a6 = (a % p for a in E.ainvs)
    if p <= 61:
        x = np.arange(p, dtype=np.int64)[:, None]
        y = np.arange(p, dtype=np.int64)[None, :]
        lhs = (y * y + a1 * x * y + a3 * y) % p
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        return 1 + int(np.count_nonzero(lhs == rhs))
    # odd p: y^2 + B y - C = 0 has 1 + chi(B^2 + 4C) roots
    x = np.arange(p, dtype=np.int64)
    B = (a1 * x + a3) % p
    C = (((x * x) % p * x) % p + a2 * x * x % p + a4 * x + a6) % p
    D = (B * B + 4 * C) % p
    squares = np.zeros(p, dtype=bool)
    squares[(x * x) % p] = True
    chi = np.where(D == 0, 0, np.where(squares[D], 1, -1))
    return 1 + p + int(chi.sum())


def _bad_prime_ap(E: EllipticCurveModel, p: int) -> int:
    # multiplicative reduction: E_ns(F_p) is F_p^* (split) or the norm-one torus
    # (non-split), of order p - a_p
    ns = count_points_mod_p(E, p) - 1
    ap = p - ns
    if ap not in (-1, 1):
        raise ArithmeticError(f"reduction at {p} is not multiplicative (a_p = {ap})")
    return ap


class NewformData:
    """Coefficients a_E(n) of the newform attached to ``E`` with a grow-only cache."""

    def __init__(self, E: EllipticCurveModel, n_max: int = 100):
        if n_max < 1:
            raise ValueError("n_max must be at least 1")
        self.curve = E
        self.level = E.conductor
        self._lock = threading.Lock()
        self._a = np.zeros(1, dtype=np.int64)
        self._ap = {}
        self.extend(n_max)

    @property
    def n_max(self) -> int:
        return len(self._a) - 1

    def extend(self, n_max: int) -> None:
        if n_max <= self.n_max:
            return
        with self._lock:
            if n_max <= self.n_max:
                return
            n_max = max(n_max, 2 * self.n_max)
            for p in primerange(2, n_max + 1):
                if p not in self._ap:
                    if self.level % p == 0:
                        self._ap[p] = _bad_prime_ap(self.curve, p)
                    else:
                        self._ap[p] = p + 1 - count_points_mod_p(self.curve, p)
            self._a = _multiplicative_fill(self._ap, self.level, n_max)

    def __getitem__(self, n: int) -> int:
        if n < 1:
            return 0
        self.extend(n)
        return int(self._a[n])

    def coefficients(self, n_max: int) -> np.ndarray:
        """a(0..n_max) as an int array with a(0) = 0."""
        self.extend(n_max)
        return self._a[: n_max + 1].copy()

    def ap(self, p: int) -> int:
        self.extend(p)
        return self._ap[p]

    @property
    def atkin_lehner(self) -> dict:
        N = self.level
        return {Q: atkin_lehner_eigenvalue(self.curve, Q) for Q in exact_divisors(N) if Q > 1}


def _multiplicative_fill(ap: dict, N: int, n_max: int) -> np.ndarray:
    a = np.zeros(n_max + 1, dtype=np.int64)
    a[1] = 1
    # prime powers
    pp = {}
    for p, app in ap.items():
        if p > n_max:
            continue
        vals = [1, app]
        q = p
        while q * p <= n_max:
            if N % p == 0:
                vals.append(vals[-1] * app)
            else:
                vals.append(app * vals[-1] - p * vals[-2])
            q *= p
        pp[p] = vals
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in pp:
        block = spf[p::p]
        block[block == 0] = p
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        a[n] = pp[p][k] * a[m]
    return a


def newform_coefficients(E: EllipticCurveModel, n_max: int) -> NewformData:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return _cached_newform(E, n_max)


@lru_cache(maxsize=None)
def _newform_for(E: EllipticCurveModel) -> NewformData:
    return NewformData(E, 100)


def _cached_newform(E, n_max):
    nf = _newform_for(E)
    nf.extend(n_max)
    return nf


def exact_divisors(N: int) -> list:
    """Divisors Q of N with gcd(Q, N/Q) = 1, ascending."""
    return sorted(Q for Q in range(1, N + 1) if N % Q == 0 and math.gcd(Q, N // Q) == 1)


def atkin_lehner_eigenvalue(E: EllipticCurveModel, Q: int) -> int:
    """Eigenvalue of f_E under W_Q: product of -a_p over primes p | Q."""
    N = E.conductor
    if Q <= 1 or N % Q or math.gcd(Q, N // Q) != 1:
        raise ValueError(f"{Q} is not an exact divisor > 1 of {N}")
    nf = _newform_for(E)
    eps = 1
    for p in factorint(Q):
        eps *= -nf.ap(p)
    return eps


def l_value_series(E: EllipticCurveModel, tol: float = 1e-16) -> float:
    """L(E,1) = (1 + w) sum a_n/n exp(-2 pi n / sqrt N), w = -eps_N."""
    N = E.conductor
    w = -atkin_lehner_eigenvalue(E, N)
    if w == -1:
        return 0.0
    n_max = int(math.ceil(-math.log(tol) * math.sqrt(N) / (2 * math.pi))) + 5
    a = newform_coefficients(E, n_max).coefficients(n_max)
    n = np.arange(1, n_max + 1)
    return float(2 * np.sum(a[1:] / n * np.exp(-2 * np.pi * n / math.sqrt(N))))


def l_value_quadrature(E: EllipticCurveModel, nodes: int = 64) -> float:
    """2 pi int_0^inf f(iy) dy with the lower half folded up by the Fricke relation."""
    N = E.conductor
    eps = atkin_lehner_eigenvalue(E, N)
    y0 = 1 / math.sqrt(N)
    upper = integrate_newform_vertical(E, y0, nodes)
    return float(2 * math.pi * (1 - eps) * upper)


def integrate_newform_vertical(E, y0: float, nodes: int = 64, x0: float = 0.0) -> complex:
    """int_{y0}^inf f_E(x0 + i y) dy by composite Gauss-Legendre quadrature."""
    # f decays like exp(-2 pi y); beyond y0 + 7 the integrand is below 1e-19
    ymax = y0 + 7.5
    edges = [y0]
    step = min(y0, 0.5)
    while edges[-1] < ymax:
        edges.append(min(edges[-1] + step, ymax))
        step *= 2
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    ys, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        ys.append(0.5 * (hi - lo) * xg + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * wg)
    ys = np.concatenate(ys)
    ws = np.concatenate(ws)
    vals = newform_values(E, x0 + 1j * ys)
    total = np.sum(ws * vals)
    return complex(total) if x0 else float(total.real)


def newform_values(E, tau: np.ndarray, tol: float = 1e-18) -> np.ndarray:
    """f_E at an array of points, summing the q-series to relative accuracy ``tol``."""
    tau = np.atleast_1d(np.asarray(tau, dtype=complex))
    ymin = float(tau.imag.min())
    if ymin <= 0:
        raise ValueError("points must lie in the upper half-plane")
    n_max = int(math.ceil(-math.log(tol) / (2 * math.pi * ymin))) + 2
    a = newform_coefficients(E, n_max).coefficients(n_max)
    return _qsum(a, tau)


def _qsum(coeffs: np.ndarray, tau: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """sum_n coeffs[n] q^n at each tau (coeffs indexed from n = 0)."""
    out = np.zeros(tau.shape, dtype=complex)
    n_all = np.arange(len(coeffs))
    nz = np.nonzero(coeffs)[0]
    for lo in range(0, len(nz), chunk):
        idx = nz[lo: lo + chunk]
        phase = np.exp(2j * np.pi * np.multiply.outer(tau, n_all[idx]))
        out += phase @ coeffs[idx].astype(complex)
    return out


def l_value_at_1(E: EllipticCurveModel, tol: float = 1e-9) -> float:
    """L(E,1), computed by the smoothed series and cross-checked by quadrature."""
    a = l_value_series(E)
    b = l_value_quadrature(E)
    if abs(a - b) > tol:
        raise ArithmeticError(
            f"L(E,1) oracles disagree for N={E.conductor}: {a!r} vs {b!r}"
        )
    return a


def eta_product_coefficients(exponents: dict, n_max: int) -> list:
    """Integer q-expansion of prod_d eta(d tau)^{r_d} for a weight-2 eta quotient.

    Returns coefficients of q^0..q^{n_max} after removing the q^{sum d r_d / 24}
    prefactor, which must be an integer power of q.
    """
    shift = Fraction(sum(d * r for d, r in exponents.items()), 24)
    if shift.denominator != 1:
        raise ValueError("eta quotient is not an integral power of q")
    shift = int(shift)
    series = [0] * (n_max + 1)
    series[0] = 1
    for d, r in exponents.items():
        if r < 0:
            raise ValueError("only eta products are supported")
        for _ in range(r):
            k = d
            while k <= n_max:
                # multiply by (1 - q^k)
                for n in range(n_max, k - 1, -1):
                    series[n] -= series[n - k]
                k += d
    out = [0] * (n_max + 1)
    for n in range(n_max + 1 - shift):
        out[n + shift] = series[n]
    return out


ETA_PRODUCTS = {
    11: {1: 2, 11: 2},
    14: {1: 1, 2: 1, 7: 1, 14: 1},
    15: {1: 1, 3: 1, 5: 1, 15: 1},
}


def validate(level: int, n_check: int = 200) -> None:
    """Self-check of the embedded model; raises ``AssertionError`` on failure."""
    E = curve(level)
    disc = E.discriminant
    assert disc != 0, "singular model"
    assert set(factorint(abs(disc))) == set(factorint(level)), "discriminant support differs from N"
    assert E.j_invariant == E.short_j_invariant()
    nf = newform_coefficients(E, n_check)
    for p in primerange(2, n_check + 1):
        ap = nf.ap(p)
        if level % p:
            assert ap * ap <= 4 * p, f"Hasse bound fails at p={p}"
        else:
            assert ap in (-1, 1)
    if level in ETA_PRODUCTS:
        eta = eta_product_coefficients(ETA_PRODUCTS[level], 60)
        assert list(nf.coefficients(60)) == eta, "eta-product identity fails"
