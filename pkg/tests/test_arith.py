"""Arithmetic oracles: representation counts, characters, divisor series."""

from fractions import Fraction

import pytest

from thetaver.arith import (
    LAMBERT_VARIANTS,
    divisor_class_count,
    divisors,
    kronecker_m1,
    kronecker_m2,
    lambert_logderiv_series,
    s2_formula,
    s2_lattice,
    s12_formula,
    s12_lattice,
    triangular,
)
from thetaver.cyclotomic import imag_unit, to_complex


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(49) == [1, 7, 49]
    with pytest.raises(ValueError):
        divisors(0)


def test_divisor_class_count():
    assert divisor_class_count(12, 1, 4) == 1  # just 1
    assert divisor_class_count(12, 0, 4) == 2  # 4 and 12
    assert divisor_class_count(15, 3, 4) == 2  # 3 and 15
    assert divisor_class_count(15, -1, 4) == 2  # j reduced mod k


def test_counts_match_lattice_small():
    for n in range(0, 600):
        assert s2_formula(n) == s2_lattice(n), n
        assert s12_formula(n) == s12_lattice(n), n


def test_count_spot_values():
    assert s2_formula(5) == 8
    assert s2_formula(3) == 0
    assert s2_formula(25) == 12
    assert s12_formula(1) == 2
    assert s12_formula(2) == 2
    assert s12_formula(3) == 4
    assert s12_formula(9) == 6
    with pytest.raises(ValueError):
        s2_formula(-1)


def test_characters():
    values_m1 = [kronecker_m1(n) for n in range(1, 9)]
    assert values_m1 == [1, 0, -1, 0, 1, 0, -1, 0]
    values_m2 = [kronecker_m2(n) for n in range(1, 9)]
    assert values_m2 == [1, 0, 1, 0, -1, 0, -1, 0]
    # period 8 for (-2/n)
    assert all(kronecker_m2(n) == kronecker_m2(n + 8) for n in range(1, 50))


def test_triangular():
    assert [triangular(n) for n in range(6)] == [0, 1, 3, 6, 10, 15]
    assert triangular(-1) == 0


def test_lambert_constant_terms():
    # constants are i/2, i*(sqrt2/2) -/+ i/2
    for variant, approx in (
        ("half", 0.5j),
        ("quarter", (2 ** 0.5 / 2 - 0.5) * 1j),
        ("threequarter", (2 ** 0.5 / 2 + 0.5) * 1j),
    ):
        s = lambert_logderiv_series(variant, 2, 40)
        assert abs(to_complex(s.coefficient_num(0)) - approx) < 1e-15
    with pytest.raises(ValueError):
        lambert_logderiv_series("third", 2, 40)


def test_lambert_half_encodes_s2():
    # theta[0,0](2tau)^2 = -2i * lambert(half): coefficient of q^n is S2(n)
    s = lambert_logderiv_series("half", 1, 200)
    i = imag_unit()
    for n in range(0, 101):
        coeff = (-2 * i) * s.coefficient_num(2 * n)
        assert coeff.is_rational()
        assert coeff.as_rational() == s2_formula(n), n


def test_lambert_quarter_pair_encodes_s12():
    # -(sqrt2/2)*i*(quarter + threequarter): coefficient of q^n is S12(n)
    q = lambert_logderiv_series("quarter", 1, 200)
    t = lambert_logderiv_series("threequarter", 1, 200)
    for n in range(0, 101):
        val = to_complex(q.coefficient_num(2 * n) + t.coefficient_num(2 * n))
        want = s12_formula(n) / (2 ** 0.5 / 2) * 1j
        assert abs(val - want) < 1e-11, n


def test_lambert_variants_tuple():
    assert LAMBERT_VARIANTS == ("half", "quarter", "threequarter")
