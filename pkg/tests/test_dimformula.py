from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mockdim import curves, dimformula as D
from mockdim.checks import constructed_table

PSI = {14: 24, 15: 24, 21: 32}


def test_prime_formula_by_hand():
    # (p+1) d - (p-1) C + C S with d = 2, S = sigma(1) = 1, C = -12/5
    t = D.DimensionTable.from_prime_dims(11, 2, {(1, 10): 1})
    res = D.dim_formula_prime(t)
    assert res.S == 1
    assert res.value == Fraction(228, 5)


def test_from_prime_dims_places_weights():
    t = D.DimensionTable.from_prime_dims(11, 0, {(3, 5): 2})
    # j = 5 * 3^-1 = 9 mod 11, and 3 * 9 = 5 mod 11
    assert t.twisted == {(3, 9, Fraction(5, 11)): 2}
    assert t.prime_weights() == {5: 2}
    assert D.sigma_sum(t) == 2 * 12  # sigma(11 - 5)


@pytest.mark.parametrize("bad", [
    dict(level=12, dim_v1_fixed=0, twisted={}),
    dict(level=11, dim_v1_fixed=-1, twisted={}),
    dict(level=11, dim_v1_fixed=0, twisted={(0, 0, 0): 1}),
    dict(level=11, dim_v1_fixed=0, twisted={(1, 2, Fraction(3, 11)): 1}),
    dict(level=11, dim_v1_fixed=0, twisted={(1, 2, Fraction(1, 7)): 1}),
    dict(level=11, dim_v1_fixed=0, twisted={(1, 2, Fraction(2, 11)): -1}),
])
def test_table_validation(bad):
    with pytest.raises(D.TableError):
        D.DimensionTable(**bad)


def test_record_round_trip(tmp_path, rng):
    t = D.random_table(15, rng)
    path = tmp_path / "t.json"
    t.dump(path)
    assert D.DimensionTable.load(path) == t
    with pytest.raises(D.TableError):
        D.DimensionTable.from_record({"level": 11})


@given(st.sampled_from([11, 17, 19]), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_assembly_equals_closed_form(p, seed):
    t = D.random_table(p, np.random.default_rng(seed))
    asm = D.assemble_character_prime(t)
    assert asm.total == D.closed_form_prime_symbolic(t)
    # the solved shift is dim V_1^G minus the constant named in the proof
    assert asm.shift == t.dim_v1_fixed - D.proof_constant_prime(t)
    assert D.assemble_character(t).total == asm.total


@given(st.sampled_from([11, 17, 19]), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_monotone_in_twisted_dimensions(p, seed):
    rng = np.random.default_rng(seed)
    t = D.random_table(p, rng)
    base = D.dim_formula_prime(t).value
    i, n = int(rng.integers(1, p)), int(rng.integers(1, p))
    j = n * pow(i, -1, p) % p
    bumped = dict(t.twisted)
    key = (i, j, Fraction(n, p))
    bumped[key] = bumped.get(key, 0) + 1
    assert D.dim_formula_prime(D.DimensionTable(p, t.dim_v1_fixed, bumped)).value < base


@pytest.mark.parametrize("p", [11, 17, 19])
def test_newform_identity_and_pairing(p, rng):
    f = curves.newform_coefficients(curves.curve(p), 100)
    eps = f.atkin_lehner[p]
    for _ in range(5):
        assert D.newform_pairing_identity(constructed_table(p, f, rng), f) == 0
        t = D.random_table(p, rng)
        bf = D.bruinier_funke_pairing(D.newform_cusp_data(f), D.character_principal_parts(t))
        assert D.newform_pairing_identity(t, f) == eps * p * bf


def test_character_principal_parts_at_infinity():
    t = D.DimensionTable(14, 0, {(1, 3, Fraction(3, 14)): 2, (2, 2, Fraction(4, 14)): 1})
    ch = D.character_principal_parts(t)
    assert ch.cusps[1].polar == {-1: 1}
    # cusp 14 sees every twisted sector, with width 14
    assert ch.cusps[14].polar == {-14: Fraction(1, 14), -11: Fraction(2, 14), -10: Fraction(1, 14)}
    # cusp 2 (c = 7) sees no sector here, cusp 7 (c = 2) sees (2, 2)
    assert ch.cusps[2].polar == {-2: Fraction(1, 2)}
    assert ch.cusps[7].polar == {-7: Fraction(1, 7), -5: Fraction(1, 7)}


@pytest.mark.parametrize("N", [14, 15, 21])
def test_composite_empty_table(N):
    consts = D.numeric_constants(N)
    for d in (0, 3):
        res = D.dim_formula_composite(D.DimensionTable(N, d, {}), consts)
        assert abs(res.assembly_value - (PSI[N] * d + 72)) < 1e-6
        assert res.printed_value is not None


@pytest.mark.parametrize("N", [14, 15, 21])
def test_composite_symmetry(N, rng):
    p1, p2 = curves.exact_divisors(N)[1:3]
    for _ in range(5):
        t = D.random_table(N, rng)
        assert D.assemble_character(t, (p1, p2)).total == D.assemble_character(t, (p2, p1)).total


def test_prime_formula_rejects_composite():
    with pytest.raises(D.TableError):
        D.dim_formula_prime(D.DimensionTable(15, 0, {}))
    with pytest.raises(D.TableError):
        D.dim_formula_prime(D.DimensionTable(13, 0, {}))
