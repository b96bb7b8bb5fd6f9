import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mockdim import curves, lattice, mockform

OMEGA_11 = 1.26920930427955  # real period of 11a1
GAUSS_AGM = 1.1981402347355922074  # agm(1, sqrt 2)


def lat(N):
    return mockform.lattice_for(curves.curve(N))


def test_agm():
    assert abs(lattice.agm(1.0, math.sqrt(2)) - GAUSS_AGM) < 1e-15
    with pytest.raises(lattice.LatticeError):
        lattice.agm(-1.0, 2.0)


def test_real_period_11():
    assert abs(lat(11).omega1 - OMEGA_11) < 1e-13


@pytest.mark.parametrize("N", curves.LEVELS)
def test_g4_g6_from_invariants(N):
    L = lat(N)
    G4, G6 = lattice.g2n_exact(L.g2, L.g3, 3)
    assert G4 == Fraction(L.g2) / 60
    assert G6 == Fraction(L.g3) / 140


@pytest.mark.parametrize("N", (11, 15, 19))
def test_g8_against_lattice_sum(N):
    L = lat(N)
    G8 = float(lattice.g2n_exact(L.g2, L.g3, 4)[-1])
    assert abs(lattice.lattice_sum(L, 8) - G8) < 1e-12


@pytest.mark.parametrize("N", curves.LEVELS)
def test_antiholomorphic_constant_is_pi_over_covolume(N):
    L = lat(N)
    assert abs(L.c - math.pi / L.covolume) < 1e-12
    assert L.legendre_residual() < 1e-10


def test_zeta_has_simple_pole():
    L = lat(17)
    z = 1e-4 + 2e-4j
    assert abs(lattice.weierstrass_zeta_eval(L, z) - 1 / z) < 1e-6


def test_lattice_point_rejected():
    L = lat(11)
    with pytest.raises(lattice.LatticeError):
        lattice.completed_zeta_eval(L, L.omega1 + L.omega2)


@given(st.sampled_from(curves.LEVELS), st.floats(0.05, 0.95), st.floats(0.05, 0.95),
       st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=60, deadline=None)
def test_completed_zeta_is_periodic_and_odd(N, x, y, m, n):
    L = lat(N)
    z = x * L.omega1 + y * L.omega2
    base = lattice.completed_zeta_eval(L, z)
    shifted = lattice.completed_zeta_eval(L, z + m * L.omega1 + n * L.omega2)
    assert abs(shifted - base) < 1e-9
    assert abs(lattice.completed_zeta_eval(L, -z) + base) < 1e-9


def test_zeta_hat_at_L_value_11():
    E = curves.curve(11)
    v = lattice.completed_zeta_eval(lat(11), curves.l_value_at_1(E))
    assert abs(v - 3.4) < 1e-9
