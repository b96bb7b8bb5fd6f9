"""Eichler integrals, the Weierstrass mock modular form and its cusp constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import factorint

from . import curves
from .curves import EllipticCurveModel, NewformData
from .lattice import LatticeError, PeriodLattice, completed_zeta_eval, compute_periods
from .qseries import APPROX, EXACT, LaurentData, QSeries, series_compose_laurent


def eichler_integral(f: NewformData, order: int) -> QSeries:
    """sum_{n <= order} a(n)/n q^n, exact."""
    if order < 1:
        raise ValueError("order must be at least 1")
    a = f.coefficients(order)
    return QSeries([0] + [Fraction(int(a[n]), n) for n in range(1, order + 1)], 0, order + 1)


def zeta_laurent_data(L: PeriodLattice, n_terms: int | None = None) -> LaurentData:
    """Laurent data of zeta(z) - s z: 1/z - s z - sum G_{2n} z^{2n-1}."""
    G = [complex(float(g)) for g in L.G_exact]
    if n_terms is not None:
        G = G[: n_terms - 1]
    coeffs = {-1: 1, 1: -L.s}
    for i, g in enumerate(G):
        coeffs[2 * i + 3] = -g
    return LaurentData(coeffs)


@dataclass
class MockModularForm:
    level: int
    qexp: QSeries
    c0: complex
    lattice: PeriodLattice
    newform: NewformData
    cusp_constants: dict = field(default_factory=dict)


def weierstrass_mock_qexp(E: EllipticCurveModel, L: PeriodLattice | None = None,
                          order: int = 30) -> MockModularForm:
    """q-expansion of zeta(Lambda; E(tau)) - s E(tau) to O(q^order)."""
    L = L or lattice_for(E)
    nf = curves.newform_coefficients(E, order + 2)
    # 1/s loses two orders of the window, so start two further out
    eich = eichler_integral(nf, order + 2).change_ring(APPROX)
    Z = series_compose_laurent(zeta_laurent_data(L), eich)
    if Z.precision < order:
        raise ValueError("composition window shorter than the requested order")
    Z = Z.truncate(order)
    return MockModularForm(E.conductor, Z, Z.coefficient(0), L, nf)


@lru_cache(maxsize=None)
def lattice_for(E: EllipticCurveModel) -> PeriodLattice:
    return compute_periods(E)


def eichler_values(E: EllipticCurveModel, tau, tol: float = 1e-17) -> np.ndarray:
    """E_E(tau) = sum a(n)/n q^n at an array of points."""
    tau = np.atleast_1d(np.asarray(tau, dtype=complex))
    ymin = float(tau.imag.min())
    if ymin <= 0:
        raise ValueError("points must lie in the upper half-plane")
    if ymin < 2e-4:
        raise ValueError("imaginary part too small for direct q-series summation")
    n_max = int(math.ceil(-math.log(tol) / (2 * math.pi * ymin))) + 2
    a = curves.newform_coefficients(E, n_max).coefficients(n_max)
    c = np.zeros(n_max + 1)
    c[1:] = a[1:] / np.arange(1, n_max + 1)
    return curves._qsum(c, tau)


def eichler_value_path(E: EllipticCurveModel, tau: complex, nodes: int = 64) -> complex:
    """E_E(tau) = 2 pi int_{Im tau}^inf f(Re tau + i t) dt (vertical path oracle)."""
    return 2 * math.pi * curves.integrate_newform_vertical(E, tau.imag, nodes, x0=tau.real + 0j)


def eichler_value(E: EllipticCurveModel, tau: complex) -> complex:
    return complex(eichler_values(E, [tau])[0])


def evaluate_completed_Z(E: EllipticCurveModel, L: PeriodLattice | None, tau: complex) -> complex:
    """Z^_E(tau) = zeta^(Lambda; E_E(tau)) with M_E = 0."""
    L = L or lattice_for(E)
    if complex(tau).imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    w = eichler_value(E, tau)
    if L.distance_to_lattice(w) < 1e-8:
        raise LatticeError("E_E(tau) is too close to the period lattice")
    return completed_zeta_eval(L, w)


def atkin_lehner_matrix(N: int, Q: int):
    """Integer matrix (Q x, y; N, Q) of determinant Q representing W_Q (W_N is (0, -1; N, 0))."""
    if Q == N:
        return (0, -1, N, 0)
    R = N // Q
    if N % Q or math.gcd(Q, R) != 1:
        raise ValueError(f"{Q} is not an exact divisor of {N}")
    # Q x - R y = 1
    x = pow(Q, -1, R)
    y = (Q * x - 1) // R
    return (Q * x, y, N, Q)


def mobius(M, tau: complex) -> complex:
    a, b, c, d = M
    return (a * tau + b) / (c * tau + d)


def _inverse(M):
    a, b, c, d = M
    return (d, -b, -c, a)


def cusp_period_omega(E: EllipticCurveModel, Q: int, nodes: int = 64, method: str = "quadrature") -> complex:
    """Omega_{W_Q}(f_E) = E_E(W_Q^{-1} oo), via E(W^-1 w) - eps_Q E(w) at a balanced w."""
    N = E.conductor
    eps = curves.atkin_lehner_eigenvalue(E, Q)
    M = atkin_lehner_matrix(N, Q)
    a, b, c, d = M
    # both w and W^-1 w then have imaginary part sqrt(Q)/(N |c|)
    w = complex(float(Fraction(a, c)), math.sqrt(Q) / (N * abs(c)))
    w_back = mobius(_inverse(M), w)
    if method == "quadrature":
        e1 = eichler_value_path(E, w_back, nodes)
        e2 = eichler_value_path(E, w, nodes)
    elif method == "series":
        e1, e2 = eichler_values(E, [w_back, w])
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(e1 - eps * e2)


def cusp_constant(E: EllipticCurveModel, Q: int, validate: bool = True) -> complex:
    """c_{E,Q}(0) = zeta^(Lambda; -eps_Q Omega_{W_Q})."""
    L = lattice_for(E)
    eps = curves.atkin_lehner_eigenvalue(E, Q)
    omega = cusp_period_omega(E, Q)
    if L.distance_to_lattice(-eps * omega) < 1e-8:
        raise LatticeError("cusp period lies in the lattice: the form has a pole there")
    value = completed_zeta_eval(L, -eps * omega)
    if validate:
        direct = cusp_constant_direct(E, Q)
        if max(abs(value - x) for x in direct) > 1e-6:
            raise ArithmeticError(f"cusp constant sign check failed for N={E.conductor}, Q={Q}")
    return value


def cusp_constant_direct(E: EllipticCurveModel, Q: int, heights=(4, 6, 8)) -> list:
    """Z^_E(W_Q i y) for large y; tends to c_{E,Q}(0) up to O(exp(-2 pi y))."""
    M = atkin_lehner_matrix(E.conductor, Q)
    return [evaluate_completed_Z(E, None, mobius(M, 1j * y)) for y in heights]


def constant_term(E: EllipticCurveModel) -> complex:
    """c_E(0) read off the formal composition."""
    return weierstrass_mock_qexp(E, order=4).c0


def all_cusp_constants(E: EllipticCurveModel) -> dict:
    return {Q: cusp_constant(E, Q) for Q in curves.exact_divisors(E.conductor) if Q > 1}


@dataclass(frozen=True)
class CEResult:
    value: float
    residual: float
    points_f2: int
    zeta_hat: float


def constant_C_E(E: EllipticCurveModel) -> CEResult:
    """C_E = -(3 - #E(F_2))/2 - zeta^(Lambda; L(E,1)) and its distance from -24/(p-1)."""
    p = E.conductor
    if len(factorint(p)) != 1 or factorint(p)[p] != 1:
        raise ValueError("C_E is defined for prime levels only")
    n2 = curves.count_points_mod_p(E, 2)
    zh = completed_zeta_eval(lattice_for(E), curves.l_value_at_1(E))
    C = -(3 - n2) / 2 - zh.real
    return CEResult(C, abs(C + 24 / (p - 1)), n2, zh.real)


def modular_group_sample(N: int, rng: np.random.Generator, c_mult_max: int = 2):
    """A random element (a, b, c, d) of Gamma_0(N) with small lower row."""
    while True:
        c = N * int(rng.integers(1, c_mult_max + 1)) * int(rng.choice([-1, 1]))
        d = int(rng.integers(-6, 7))
        if math.gcd(c, d) != 1:
            continue
        # a d - b c = 1
        a = pow(d, -1, abs(c)) if abs(c) > 1 else 1
        b = (a * d - 1) // c
        assert a * d - b * c == 1
        return (a, b, c, d)
