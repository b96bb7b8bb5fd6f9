"""From an elliptic curve to the constant C_E.

Walks through the level-11 curve: its newform, period lattice, the completed
Weierstrass zeta at L(E,1), and the resulting constant C_E, then repeats the
last step for the other prime levels.

    python3 demos/zeta_at_L_value.py
"""

from mockdim import curves, lattice, mockform

E = curves.curve(11)
nf = curves.newform_coefficients(E, 12)
print("model:", E.ainvs, " discriminant:", E.discriminant)
print("a(n), n = 1..12:", [int(a) for a in nf.coefficients(12)[1:]])

L = mockform.lattice_for(E)
print(f"periods: {L.omega1:.12g}, {L.omega2:.12g}")
print(f"Legendre relation residual: {L.legendre_residual():.2e}")

# the completion is zeta(z) - s z - (pi/A) conj(z)
print(f"s = {L.s.real:.12g}, pi/A = {L.c.real:.12g}")

lval = curves.l_value_at_1(E)
print(f"L(E,1) = {lval:.12g}")
print(f"zeta^(L(E,1)) = {lattice.completed_zeta_eval(L, lval).real:.12g}  (17/5 = 3.4)")

Z = mockform.weierstrass_mock_qexp(E, order=6).qexp
print("mock modular form:", {str(k): round(v.real, 10) for k, v in Z.terms().items()})

for p in (11, 17, 19):
    r = mockform.constant_C_E(curves.curve(p))
    print(f"p = {p}: #E(F_2) = {r.points_f2}, C_E = {r.value:.12g}, -24/(p-1) = {-24 / (p - 1):.12g}")
