"""Invariant suites behind ``mockdim verify``.

Every check reports a residual and the tolerance it is held to; a suite passes
when all of its checks do.  Random sweeps draw from a seeded generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import curves, dimformula, heckealg, kloosterman, lattice, mockform
from .qseries import QSeries

ZETA_AT_L = {11: Fraction(17, 5), 14: Fraction(8, 3), 15: Fraction(9, 4),
             17: Fraction(2), 19: Fraction(4, 3), 21: Fraction(7, 4)}
POINCARE_CASES = ((2, 11), (3, 11), (2, 15), (3, 14))
SUITES = ("lattice", "curves", "operators", "kloosterman", "poincare", "dimensions")


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float
    detail: str = ""
    report_only: bool = False

    @property
    def passed(self) -> bool:
        if self.report_only:
            return True
        return bool(self.residual < self.tol) if self.tol > 0 else self.residual == 0


# -- lattice ------------------------------------------------------------------------

def zeta_at_l_value(level: int) -> complex:
    E = curves.curve(level)
    return lattice.completed_zeta_eval(mockform.lattice_for(E), curves.l_value_at_1(E))


def periodicity_residual(level: int, rng, n_points: int = 100) -> float:
    L = mockform.lattice_for(curves.curve(level))
    worst = 0.0
    for _ in range(n_points):
        x, y = rng.uniform(0.05, 0.95, 2)
        z = x * L.omega1 + y * L.omega2
        base = lattice.completed_zeta_eval(L, z)
        for w in (L.omega1, L.omega2):
            worst = max(worst, abs(lattice.completed_zeta_eval(L, z + w) - base))
    return worst


def invariance_residuals(level: int, rng, n_samples: int = 20):
    """max |Z^(g tau) - Z^(tau)| and max dist(E(g tau) - E(tau), Lambda)."""
    E = curves.curve(level)
    L = mockform.lattice_for(E)
    worst_z = worst_e = 0.0
    for _ in range(n_samples):
        g = mockform.modular_group_sample(level, rng)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.3, 0.6))
        gt = mockform.mobius(g, tau)
        e1, e2 = mockform.eichler_values(E, [tau, gt])
        worst_e = max(worst_e, L.distance_to_lattice(e2 - e1))
        worst_z = max(worst_z, abs(lattice.completed_zeta_eval(L, e2) - lattice.completed_zeta_eval(L, e1)))
    return worst_z, worst_e


def suite_lattice(rng, **_) -> list:
    out = []
    for N in curves.LEVELS:
        v = zeta_at_l_value(N)
        out.append(Check(f"zeta^(L(E,1)) = {ZETA_AT_L[N]} [N={N}]", abs(v - float(ZETA_AT_L[N])), 1e-6,
                         f"value {v.real:.12g}"))
    for N in curves.LEVELS:
        L = mockform.lattice_for(curves.curve(N))
        out.append(Check(f"Legendre relation [N={N}]", L.legendre_residual(), 1e-10))
        out.append(Check(f"periodicity, 100 points [N={N}]", periodicity_residual(N, rng), 1e-9))
        for k in (4, 6):
            g = float(lattice.g2n_exact(L.g2, L.g3, k // 2)[-1])
            out.append(Check(f"G{k} vs Eisenstein q-series [N={N}]",
                             abs(g - lattice.eisenstein_qseries(L, k)), 1e-10 * max(1, abs(g))))
    for N in curves.LEVELS:
        rz, re = invariance_residuals(N, rng)
        out.append(Check(f"Z^ modular invariance, 20 samples [N={N}]", rz, 1e-8))
        out.append(Check(f"E(g tau) - E(tau) in Lambda [N={N}]", re, 1e-8))
    return out


# -- curves -------------------------------------------------------------------------

def suite_curves(rng, **_) -> list:
    out = []
    for N in curves.LEVELS:
        E = curves.curve(N)
        try:
            curves.validate(N)
            out.append(Check(f"model self-check [N={N}]", 0.0, 0.5))
        except AssertionError as exc:
            out.append(Check(f"model self-check [N={N}]", 1.0, 0.5, str(exc)))
        a, b = curves.l_value_series(E), curves.l_value_quadrature(E)
        out.append(Check(f"L(E,1) series vs quadrature [N={N}]", abs(a - b), 1e-9, f"L(E,1) = {a:.12g}"))
        c0 = mockform.constant_term(E)
        a2 = curves.newform_coefficients(E, 2)[2]
        out.append(Check(f"c_E(0) = -a(2)/2 [N={N}]", abs(c0 + a2 / 2), 1e-10))
    for p in (11, 17, 19):
        res = mockform.constant_C_E(curves.curve(p))
        out.append(Check(f"C_E = -24/(p-1) [p={p}]", res.residual, 1e-6,
                         f"C_E = {res.value:.12g}, #E(F_2) = {res.points_f2}"))
    return out


# -- operators ------------------------------------------------------------------------

def random_series(rng, order: int = 40, lo: int = -2) -> QSeries:
    coeffs = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(lo, order)]
    return QSeries(coeffs, lo, order)


def hecke_multiplicativity_residual(rng, m: int = 2, n: int = 3, N: int = 11) -> int:
    f = random_series(rng, 120)
    lhs = heckealg.apply_hecke(heckealg.apply_hecke(f, m, N), n, N)
    rhs = heckealg.apply_hecke(f, m * n, N)
    prec = min(lhs.prec, rhs.prec)
    return sum(1 for e in range(rhs.start, prec) if lhs.coefficient(e) != rhs.coefficient(e))


def eigenform_mismatches(level: int, order: int = 40) -> int:
    nf = curves.newform_coefficients(curves.curve(level), order * 12 + 1)
    bad = 0
    for m in range(1, 13):
        if math.gcd(m, level) != 1:
            continue
        f = QSeries([int(x) for x in nf.coefficients(order * m)], 0, order * m + 1)
        g = heckealg.apply_hecke(f, m, level, k=2).truncate(order)
        bad += sum(1 for e in range(order) if g.coefficient(e) != nf[m] * f.coefficient(e))
    return bad


def suite_operators(rng, **_) -> list:
    out = []
    for _ in range(5):
        out.append(Check("T2 T3 = T6 on a random rational series", hecke_multiplicativity_residual(rng), 0))
    for N in curves.LEVELS:
        out.append(Check(f"f_E|T_m = a(m) f_E, m <= 12, order 40 [N={N}]", eigenform_mismatches(N), 0))
    for N in curves.LEVELS:
        Z = heckealg.zhat_cuspdata(N)
        for p in heckealg.primefactors(N):
            for a in range(3):
                got = heckealg.op_W(heckealg.op_U(Z, p ** (a + 1)), p).scale(-p ** (a + 1)).cusps[1]
                want = heckealg.uw_closed_form(N, p, a)
                out.append(Check(f"U/W closed form, p={p}, a={a} [N={N}]", int(got != want), 0))
                rec = heckealg.uw_recursion(Z, p, a + 1)
                direct = heckealg.op_W(heckealg.op_U(Z, p ** (a + 1)), p)
                out.append(Check(f"U/W recursion, p={p}, r={a + 1} [N={N}]",
                                 sum(1 for Q in rec if rec[Q] != direct.cusps[Q]), 0))
        failures = 0
        for nu in range(1, 2 * N + 1):
            try:
                heckealg.poincare_principal_part(nu, N)
            except ArithmeticError:
                failures += 1
        out.append(Check(f"Poincare principal parts nu <= {2 * N} [N={N}]", failures, 0))
    return out


# -- Kloosterman ------------------------------------------------------------------------

def kloosterman_sweep(m_max: int = 12, c_max: int = 60):
    selberg = asym = imag = 0.0
    for c in range(1, c_max + 1):
        d, dbar = kloosterman._unit_inverse_pairs(c)
        for m in range(1, m_max + 1):
            for n in range(1, m_max + 1):
                z = np.exp(2j * np.pi * ((m * dbar + n * d) % c) / c).sum()
                imag = max(imag, abs(z.imag))
                asym = max(asym, abs(kloosterman.kloosterman_sum(m, n, c) - kloosterman.kloosterman_sum(n, m, c)))
                selberg = max(selberg, kloosterman.selberg_check(m, n, c))
    return selberg, asym, imag


def suite_kloosterman(rng, **_) -> list:
    s, a, i = kloosterman_sweep()
    out = [Check("Selberg identity, m,n <= 12, c <= 60", s, 1e-10),
           Check("K(m,n,c) = K(n,m,c)", a, 1e-10),
           Check("Kloosterman sums are real", i, 1e-12),
           Check("K(1,1,5) = 0.381966", abs(kloosterman.kloosterman_sum(1, 1, 5) - (3 - math.sqrt(5)) / 2), 1e-12)]
    from scipy.special import i1

    worst = max(abs(kloosterman.bessel_I1(x) / i1(x) - 1) for x in np.linspace(0.05, 60, 400))
    out.append(Check("I_1 relative accuracy on (0, 60]", worst, 1e-12))
    return out


# -- Poincare ---------------------------------------------------------------------------

def suite_poincare(rng, c_max: int = 4000, tail_tol: float = 1e-2, **_) -> list:
    out = []
    for nu, N in POINCARE_CASES:
        rep = kloosterman.verify_hecke_poincare(nu, N, range(1, 9), c_max)
        detail = f"tail estimate {rep.tail:.3e} at c_max={c_max}"
        out.append(Check(f"Hecke-Poincare relation nu={nu} [N={N}]", rep.residual, 1e-3, detail))
        out.append(Check(f"tail estimate nu={nu} [N={N}]", rep.tail, tail_tol, detail))
    return out


# -- dimensions ----------------------------------------------------------------------------

def constructed_table(p: int, f, rng) -> dimformula.DimensionTable:
    """Random table adjusted at weight (p-1)/p so that the newform identity holds."""
    eps = f.atkin_lehner[p]
    target = -eps * p - int(f[p])
    while True:
        dims = {}
        for n in range(1, p - 1):
            if rng.random() < 0.3:
                dims[(int(rng.integers(1, p)), n)] = int(rng.integers(0, 3))
        rest = target - sum(int(f[p - n]) * d for (_, n), d in dims.items())
        if rest >= 0:
            dims[(int(rng.integers(1, p)), p - 1)] = rest
            return dimformula.DimensionTable.from_prime_dims(p, int(rng.integers(0, 30)), dims)


def suite_dimensions(rng, n_tables: int = 50, **_) -> list:
    out = []
    for p in (11, 17, 19):
        bad = 0
        for _ in range(n_tables):
            t = dimformula.random_table(p, rng)
            asm = dimformula.assemble_character_prime(t).total
            bad += asm != dimformula.closed_form_prime_symbolic(t)
        out.append(Check(f"assembly = closed form, {n_tables} tables [p={p}]", bad, 0))
        f = curves.newform_coefficients(curves.curve(p), 100)
        eps = f.atkin_lehner[p]
        bad_id = bad_bf = 0
        for _ in range(10):
            t = constructed_table(p, f, rng)
            bad_id += dimformula.newform_pairing_identity(t, f) != 0
        for _ in range(10):
            t = dimformula.random_table(p, rng)
            bf = dimformula.bruinier_funke_pairing(dimformula.newform_cusp_data(f),
                                                   dimformula.character_principal_parts(t))
            bad_bf += dimformula.newform_pairing_identity(t, f) != eps * p * bf
        out.append(Check(f"newform identity on constructed tables [p={p}]", bad_id, 0))
        out.append(Check(f"newform identity = eps p BF pairing [p={p}]", bad_bf, 0))
    for N in (14, 15, 21):
        p1, p2 = heckealg.primefactors(N)
        consts = dimformula.numeric_constants(N)
        asym = 0
        worst = 0.0
        for _ in range(10):
            t = dimformula.random_table(N, rng)
            a = dimformula.assemble_character(t, (p1, p2)).total
            b = dimformula.assemble_character(t, (p2, p1)).total
            asym += a != b
            res = dimformula.dim_formula_composite(t, consts)
            worst = max(worst, abs(res.numeric_residual))
        out.append(Check(f"composite assembly p1 <-> p2 symmetric [N={N}]", asym, 0))
        zero = dimformula.dim_formula_composite(dimformula.DimensionTable(N, 0, {}), consts)
        out.append(Check(f"composite zero table = 72 [N={N}]", abs(zero.assembly_value - 72), 1e-6))
        out.append(Check(f"printed formula minus assembly, 10 tables [N={N}]", worst, 0,
                         "reported, not asserted", report_only=True))
    return out


RUNNERS = {"lattice": suite_lattice, "curves": suite_curves, "operators": suite_operators,
           "kloosterman": suite_kloosterman, "poincare": suite_poincare,
           "dimensions": suite_dimensions}


def run_suite(name: str, seed: int = 0, **options) -> list:
    if name == "all":
        return [c for s in SUITES for c in run_suite(s, seed, **options)]
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return RUNNERS[name](np.random.default_rng(seed), **options)
