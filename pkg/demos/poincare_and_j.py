"""The level-one trace of the Weierstrass mock modular form is j.

Z^ + p Z^|W_p|U_p has level one and a single simple pole, so it equals
j - 744 plus a constant.  The cusp calculus predicts that constant
symbolically; here it is compared with direct evaluation, and the
Kloosterman-Bessel series for the same Poincare series is summed.

    python3 demos/poincare_and_j.py
"""

import cmath
import math

from mockdim import curves, heckealg, kloosterman, mockform

N = 11
E = curves.curve(N)
P = heckealg.poincare_P1(1, N)
const = P.cusps[1].constant
values = {"c": mockform.constant_term(E).real, "c[11]": mockform.cusp_constant(E, 11).real}
print("predicted constant:", const, "=", f"{float(const.evaluate(values)):.12g}")

W = mockform.atkin_lehner_matrix(N, N)
jc = kloosterman.j_coefficients(50)
for tau in (1j, 0.25 + 0.9j):
    g = mockform.evaluate_completed_Z(E, None, tau)
    g += sum(mockform.evaluate_completed_Z(E, None, mockform.mobius(W, (tau + k) / N)) for k in range(N))
    q = cmath.exp(2j * math.pi * tau)
    j = 1 / q + sum(c * q ** k for k, c in enumerate(jc))
    print(f"tau = {tau}: trace - (j - 744) = {g - j + 744:.12g}")

print("\nKloosterman-Bessel coefficients of P_1 at level 1:")
vals = kloosterman.poincare_coefficients([(1, n) for n in (1, 2, 3)], 1, c_max=1000)
for n in (1, 2, 3):
    sv = vals[(1, n)]
    print(f"  n = {n}: {sv.value:.12g} (tail ~{sv.tail:.1e}), exact {jc[n]}")

print("\nHecke relation for P_2 at level 11 (n = 1..4):")
rep = kloosterman.verify_hecke_poincare(2, 11, range(1, 5), c_max=1000)
for n in rep.lhs:
    print(f"  n = {n}: P_2 {rep.lhs[n]:.9f}   combination {rep.rhs[n]:.9f}")
print(f"  max residual {rep.residual:.2e}, tail estimate {rep.tail:.2e}")
