import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from mockdim import curves, kloosterman, mockform


def j_minus_744(tau):
    q = cmath.exp(2j * math.pi * tau)
    return 1 / q + sum(c * q ** k for k, c in enumerate(kloosterman.j_coefficients(60)) if k)


def test_eichler_integral_coefficients():
    nf = curves.newform_coefficients(curves.curve(11), 6)
    assert mockform.eichler_integral(nf, 6).coefficients(1, 7) == [1, -1, Fraction(-1, 3), Fraction(1, 2),
                                                                 Fraction(1, 5), Fraction(1, 3)]


@pytest.mark.parametrize("N", curves.LEVELS)
def test_mock_form_starts_with_simple_pole(N):
    Z = mockform.weierstrass_mock_qexp(curves.curve(N), order=6).qexp
    assert abs(Z[-1] - 1) < 1e-12
    a2 = curves.newform_coefficients(curves.curve(N), 2)[2]
    assert abs(Z[0] + a2 / 2) < 1e-10


def test_qexp_matches_direct_evaluation():
    E = curves.curve(15)
    Z = mockform.weierstrass_mock_qexp(E, order=30).qexp
    tau = 0.13 + 0.9j
    q = cmath.exp(2j * math.pi * tau)
    # the holomorphic part alone: add back the completion - c conj(E(tau))
    L = mockform.lattice_for(E)
    e = mockform.eichler_value(E, tau)
    assert abs(Z.evaluate(q) - L.c * e.conjugate() - mockform.evaluate_completed_Z(E, L, tau)) < 1e-9


def test_modular_group_sample(rng):
    for _ in range(20):
        a, b, c, d = mockform.modular_group_sample(14, rng)
        assert a * d - b * c == 1
        assert c % 14 == 0


@pytest.mark.parametrize("N,Q", [(11, 11), (14, 2), (14, 7), (15, 5), (21, 21)])
def test_atkin_lehner_matrix(N, Q):
    a, b, c, d = mockform.atkin_lehner_matrix(N, Q)
    assert a * d - b * c == Q
    assert c % N == 0 and a % Q == 0 and d % Q == 0


@pytest.mark.parametrize("N", (11, 17, 19))
def test_trace_to_level_one_is_j(N):
    # Z^ + p Z^|W_p|U_p has level one, a single pole q^-1 and constant c + p c_p
    E = curves.curve(N)
    W = mockform.atkin_lehner_matrix(N, N)
    const = mockform.constant_term(E) + N * mockform.cusp_constant(E, N)
    for tau in (1j, 0.1 + 1.1j, -0.3 + 0.8j):
        g = mockform.evaluate_completed_Z(E, None, tau)
        g += sum(mockform.evaluate_completed_Z(E, None, mockform.mobius(W, (tau + k) / N)) for k in range(N))
        assert abs(g - j_minus_744(tau) - const) < 1e-9


def test_trace_constant_11():
    E = curves.curve(11)
    const = mockform.constant_term(E) + 11 * mockform.cusp_constant(E, 11)
    assert abs(const - 38.4) < 1e-9


def test_cusp_constant_methods_agree():
    E = curves.curve(14)
    for Q in (2, 7, 14):
        direct = mockform.cusp_constant_direct(E, Q)
        assert max(abs(mockform.cusp_constant(E, Q, validate=False) - x) for x in direct) < 1e-6
        a = mockform.cusp_period_omega(E, Q)
        b = mockform.cusp_period_omega(E, Q, method="series")
        assert abs(a - b) < 1e-9


@pytest.mark.parametrize("p,count", [(11, 5), (17, 4), (19, 3)])
def test_C_E(p, count):
    res = mockform.constant_C_E(curves.curve(p))
    assert res.points_f2 == count
    assert abs(res.value + 24 / (p - 1)) < 1e-6


def test_C_E_composite_rejected():
    with pytest.raises(ValueError):
        mockform.constant_C_E(curves.curve(15))


def test_eichler_values_reject_lower_half_plane():
    with pytest.raises(ValueError):
        mockform.evaluate_completed_Z(curves.curve(11), None, -1j)


def test_invariance_on_grid(rng):
    E = curves.curve(21)
    L = mockform.lattice_for(E)
    g = mockform.modular_group_sample(21, rng)
    taus = np.array([0.2 + 0.5j, -0.4 + 0.35j])
    for t in taus:
        gt = mockform.mobius(g, t)
        assert abs(mockform.evaluate_completed_Z(E, L, gt) - mockform.evaluate_completed_Z(E, L, t)) < 1e-8
