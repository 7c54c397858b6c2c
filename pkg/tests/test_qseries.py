"""Truncated series ring: windows, convolution, inversion, restructuring."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thetaver.cyclotomic import CycloNumber, from_rational, zeta
from thetaver.qseries import CutoffError, GradingError, InversionError, QSeries


def _series_strategy(grading=4, cutoff=40):
    coeff = st.builds(
        lambda r, p: from_rational(r) * (zeta(8) ** p),
        st.fractions(min_value=-5, max_value=5, max_denominator=3),
        st.integers(min_value=0, max_value=7),
    )
    entry = st.tuples(st.integers(min_value=0, max_value=cutoff), coeff)
    return st.lists(entry, max_size=6).map(
        lambda pairs: QSeries(grading, cutoff, dict(pairs))
    )


def _assert_equal_series(a: QSeries, b: QSeries):
    assert a.grading == b.grading
    assert a.cutoff == b.cutoff
    ta, tb = a.terms, b.terms
    assert set(ta) == set(tb)
    for e in ta:
        assert ta[e] == tb[e], e


def test_constructor_prunes():
    s = QSeries(4, 10, {0: 1, 3: 0, 11: 5, 7: Fraction(2, 3)})
    assert set(s.terms) == {0, 7}
    assert s.coefficient_num(7) == Fraction(2, 3)
    assert s.lead() == 0
    assert not s.is_zero()
    assert QSeries(4, 10, {}).is_zero()
    assert QSeries.zero(4, 10).lead() is None


def test_coefficient_window():
    s = QSeries(2, 8, {4: 3})
    # x-exponent 2 is monomial numerator 4 at grading 2
    assert s.coefficient(2) == 3
    assert s.coefficient(Fraction(1, 2)) == 0  # within window, absent
    assert s.coefficient(Fraction(1, 3)) == 0  # non-integral numerator
    with pytest.raises(CutoffError):
        s.coefficient(5)
    with pytest.raises(CutoffError):
        s.coefficient_num(9)


def test_ring_ops_against_brute_force():
    series = _series_strategy()

    def conv(a: QSeries, b: QSeries) -> QSeries:
        la = a.lead() if a.lead() is not None else a.cutoff + 1
        lb = b.lead() if b.lead() is not None else b.cutoff + 1
        cutoff = min(a.cutoff + lb, b.cutoff + la)
        acc: dict[int, CycloNumber] = {}
        for (ea, ca), (eb, cb) in itertools.product(
            a.terms.items(), b.terms.items()
        ):
            e = ea + eb
            if e > cutoff:
                continue
            prev = acc.get(e)
            acc[e] = ca * cb if prev is None else prev + ca * cb
        return QSeries(a.grading, cutoff, acc)

    @settings(max_examples=40, deadline=None)
    @given(series, series)
    def check(a, b):
        _assert_equal_series(a * b, conv(a, b))
        s = a + b
        assert s.cutoff == min(a.cutoff, b.cutoff)
        for e in set(a.terms) | set(b.terms):
            if e <= s.cutoff:
                want = a.terms.get(e, 0) + b.terms.get(e, 0)
                got = s.terms.get(e)
                if got is None:
                    assert want == 0 or (
                        hasattr(want, "is_zero") and want.is_zero()
                    )
                else:
                    assert got == want
        d = a - a
        assert d.is_zero()

    check()


def test_mul_cutoff_rule():
    a = QSeries(1, 10, {2: 1})
    b = QSeries(1, 7, {3: 1})
    prod = a * b
    # min(10 + 3, 7 + 2) = 9
    assert prod.cutoff == 9
    assert prod.terms == {5: prod.terms[5]}


def test_scalar_ops_and_pow():
    s = QSeries(4, 20, {0: 1, 4: 2})
    assert (s * Fraction(1, 2)).coefficient_num(4) == 1
    assert (s * zeta(4)).coefficient_num(0) == zeta(4)
    cube = s ** 3
    assert cube.coefficient_num(4) == 6
    assert (s ** 0).terms == {0: (s ** 0).terms[0]}
    with pytest.raises(ValueError):
        s ** -1


def test_invert():
    s = QSeries(2, 30, {2: zeta(8) * 2, 4: 1, 7: Fraction(1, 3)})
    inv = s.invert()
    one = s * inv
    assert one.lead() == 0
    assert one.coefficient_num(0) == 1
    assert all(c.is_zero() for e, c in one.terms.items() if e != 0)
    with pytest.raises(InversionError):
        QSeries.zero(2, 10).invert()
    with pytest.raises(InversionError):
        QSeries(2, 10, {0: zeta(8) + 1}).invert()


def test_grading_mismatch():
    a = QSeries(2, 10, {0: 1})
    b = QSeries(3, 10, {0: 1})
    with pytest.raises(GradingError):
        a + b
    with pytest.raises(GradingError):
        a * b


def test_regrade_and_rescale():
    s = QSeries(2, 10, {1: 1, 4: 3})
    r = s.regrade(6)
    assert r.grading == 6 and r.cutoff == 30
    assert r.terms.keys() == {3, 12}
    with pytest.raises(GradingError):
        s.regrade(3)
    t = s.rescale_tau(3)
    assert t.grading == 2 and t.cutoff == 30
    assert t.terms.keys() == {3, 12}
    # f(k*tau) composed with regrade commutes
    _assert_equal_series(s.rescale_tau(2).regrade(4), s.regrade(4).rescale_tau(2))


def test_shift_and_truncate():
    s = QSeries(4, 12, {0: 1, 8: 2})
    sh = s.shift(3)
    assert sh.terms.keys() == {3, 11} and sh.cutoff == 15
    tr = s.truncate(6)
    assert tr.cutoff == 6 and tr.terms.keys() == {0}
    assert s.truncate(100).cutoff == 12


def test_monomial_and_one():
    m = QSeries.monomial(4, 5, zeta(8), 20)
    assert m.terms.keys() == {5}
    one = QSeries.one(4, 20)
    _assert_equal_series(one * m, m)
