"""Period lattices, Eisenstein series and the completed Weierstrass zeta function."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curves import EllipticCurveModel

LAURENT_RADIUS = 0.45
DEFAULT_TERMS = 40


class LatticeError(ArithmeticError):
    pass


def agm(a: float, b: float, tol: float = 4e-16, max_iter: int = 60) -> float:
    """Arithmetic-geometric mean of two positive reals."""
    if not (a > 0 and b > 0):
        raise LatticeError("AGM needs positive arguments")
    for _ in range(max_iter):
        if abs(a - b) <= tol * a:
            return 0.5 * (a + b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise LatticeError("AGM did not converge")


def g2n_exact(g2: Fraction, g3: Fraction, n_max: int) -> list:
    """[G_4, ..., G_{2 n_max}] as exact rationals from the recursion of (p')^2 = 4p^3 - g2 p - g3.

    With p(z) = z^-2 + sum_{k>=1} b_k z^{2k} one has b_k = (2k+1) G_{2k+2}.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    g2, g3 = Fraction(g2), Fraction(g3)
    b = [None, g2 / 20, g3 / 28]
    for k in range(3, n_max):
        acc = sum(b[j] * b[k - 1 - j] for j in range(1, k - 1))
        b.append(Fraction(3, (2 * k + 3) * (k - 2)) * acc)
    return [b[k] / (2 * k + 1) for k in range(1, n_max)]


@dataclass
class PeriodLattice:
    omega1: complex
    omega2: complex
    g2: Fraction
    g3: Fraction
    n_terms: int = DEFAULT_TERMS
    eta1: complex = field(init=False)
    eta2: complex = field(init=False)
    s: complex = field(init=False)
    c: complex = field(init=False)

    def __post_init__(self):
        if (self.omega2 / self.omega1).imag <= 0:
            raise LatticeError("basis must satisfy Im(omega2/omega1) > 0")
        exact = g2n_exact(self.g2, self.g3, self.n_terms)
        self.G_exact = exact
        self._G = np.array([float(x) for x in exact])
        # ascending exponents 3, 5, ..., 2 n_terms - 1 of the zeta Laurent tail
        self._pows = np.arange(3, 2 * self.n_terms, 2)
        self.shortest = min(abs(self.omega1), abs(self.omega2), abs(self.omega1 + self.omega2),
                            abs(self.omega1 - self.omega2))
        self.eta1 = 2 * self._zeta_small(self.omega1 / 2)
        self.eta2 = 2 * self._zeta_small(self.omega2 / 2)
        self.s, self.c = _solve_completion(self)

    @property
    def covolume(self) -> float:
        return (self.omega1.conjugate() * self.omega2).imag

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    def legendre_residual(self) -> float:
        return abs(self.eta1 * self.omega2 - self.eta2 * self.omega1 - 2j * math.pi)

    def coordinates(self, z: complex):
        """Real (x, y) with z = x omega1 + y omega2."""
        M = np.array([[self.omega1.real, self.omega2.real], [self.omega1.imag, self.omega2.imag]])
        return np.linalg.solve(M, [z.real, z.imag])

    def distance_to_lattice(self, z: complex) -> float:
        x, y = self.coordinates(z)
        best = math.inf
        for m in (math.floor(x), math.ceil(x)):
            for n in (math.floor(y), math.ceil(y)):
                best = min(best, abs(z - m * self.omega1 - n * self.omega2))
        return best

    # evaluation
    def _laurent(self, z: complex):
        """(zeta, wp, wp') at small z from the truncated Laurent series."""
        zp = z ** self._pows
        zeta = 1 / z - np.dot(self._G, zp)
        wp = 1 / z ** 2 + np.dot(self._G * self._pows, zp / z)
        wpd = -2 / z ** 3 + np.dot(self._G * self._pows * (self._pows - 1), zp / z ** 2)
        return complex(zeta), complex(wp), complex(wpd)

    def _zeta_small(self, z: complex, extra: int = 0) -> complex:
        k = extra
        while abs(z) / 2 ** k >= LAURENT_RADIUS * self.shortest:
            k += 1
        zeta, x, y = self._laurent(z / 2 ** k)
        g2 = float(self.g2)
        for _ in range(k):
            m = (12 * x * x - g2) / (2 * y)
            x2 = m * m / 4 - 2 * x
            y2 = -(m * x2 + (y - m * x))
            zeta = 2 * zeta + m / 2
            x, y = x2, y2
        return zeta

    def reduce(self, z: complex):
        """(z0, m, n) with z = z0 + m omega1 + n omega2 and z0 in the centred cell."""
        x, y = self.coordinates(z)
        m, n = int(np.floor(x + 0.5)), int(np.floor(y + 0.5))
        return z - m * self.omega1 - n * self.omega2, m, n


def _solve_completion(L: PeriodLattice):
    A = np.array([[L.omega1, L.omega1.conjugate()], [L.omega2, L.omega2.conjugate()]])
    if abs(np.linalg.det(A)) < 1e-14:
        raise LatticeError("singular periodicity system; periods are corrupt")
    s, c = np.linalg.solve(A, [L.eta1, L.eta2])
    return complex(s), complex(c)


def compute_periods(E: EllipticCurveModel, n_terms: int = DEFAULT_TERMS) -> PeriodLattice:
    """Lattice of y^2 = 4x^3 - g2 x - g3 by the AGM (real-curve algorithm)."""
    disc = E.discriminant
    if disc == 0:
        raise LatticeError("singular curve")
    g2, g3 = float(E.g2), float(E.g3)
    roots = np.roots([4.0, 0.0, -g2, -g3])
    if disc > 0:
        e1, e2, e3 = sorted(roots.real, reverse=True)
        w1 = math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
        w2 = 1j * math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e2 - e3))
    else:
        e1 = float(roots[np.argmin(abs(roots.imag))].real)
        a = 3 * e1
        b = math.sqrt(3 * e1 * e1 - g2 / 4)
        w1 = 2 * math.pi / agm(2 * math.sqrt(b), math.sqrt(2 * b + a))
        w2 = -w1 / 2 + 1j * math.pi / agm(2 * math.sqrt(b), math.sqrt(2 * b - a))
    return PeriodLattice(complex(w1), complex(w2), E.g2, E.g3, n_terms)


def eisenstein_g2n(L: PeriodLattice, n_max: int) -> list:
    """[G_4, ..., G_{2 n_max}] of the lattice as floats."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    return [float(x) for x in g2n_exact(L.g2, L.g3, n_max)]


def eisenstein_qseries(L: PeriodLattice, k: int, terms: int = 80) -> complex:
    """G_k(Lambda) = 2 zeta(k) E_k(tau) / omega1^k, an oracle independent of g2, g3."""
    from scipy.special import bernoulli, zeta

    tau = L.tau
    q = cmath.exp(2j * math.pi * tau)
    n = np.arange(1, terms + 1)
    sigma = np.array([sum(d ** (k - 1) for d in range(1, m + 1) if m % d == 0) for m in n], dtype=float)
    Ek = 1 - 2 * k / bernoulli(k)[k] * np.sum(sigma * q ** n)
    return complex(2 * zeta(k) * Ek / L.omega1 ** k)


def lattice_sum(L: PeriodLattice, k: int, R: int = 400) -> complex:
    """Truncated sum' over |m|,|n| <= R of omega^-k, for the faster-converging k >= 8."""
    m = np.arange(-R, R + 1)
    M, Nn = np.meshgrid(m, m, indexing="ij")
    w = M * L.omega1 + Nn * L.omega2
    w[R, R] = 1.0
    terms = w ** (-k)
    terms[R, R] = 0.0
    return complex(terms.sum())


def weierstrass_zeta_eval(L: PeriodLattice, z: complex, extra_halvings: int = 0) -> complex:
    """zeta(Lambda; z) via lattice reduction, halving and the Laurent series."""
    z = complex(z)
    if L.distance_to_lattice(z) < 1e-8:
        raise LatticeError("argument too close to a lattice point")
    z0, m, n = L.reduce(z)
    return L._zeta_small(z0, extra_halvings) + m * L.eta1 + n * L.eta2


def completion_constants(L: PeriodLattice):
    """(s, c) such that zeta(z) - s z - c conj(z) is Lambda-periodic."""
    return L.s, L.c


def completed_zeta_eval(L: PeriodLattice, z: complex) -> complex:
    z = complex(z)
    return weierstrass_zeta_eval(L, z) - L.s * z - L.c * z.conjugate()
