import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from numauto.quadfield import (CFExpansion, FieldMismatchError, Independence, ParseError, QuadExt, cf_expand,
                               complete_quotient, convergents, difference, gamma_data, is_pisot,
                               mult_independent, pumping_constant, same_field)

from conftest import rationals

SQ2, SQ3, SQ5 = QuadExt.sqrt(2), QuadExt.sqrt(3), QuadExt.sqrt(5)
PHI = (1 + SQ5) / 2


def elements(d):
    return st.builds(lambda a, b: QuadExt(a, b, d), rationals(), rationals())


# --- arithmetic ---------------------------------------------------------------

def test_conjugate_norm_identity():
    assert (1 + SQ2) * (SQ2 - 1) == 1
    assert PHI.conjugate() == Fraction(1, 2) - SQ5 / 2
    assert (3 + 2 * SQ2).compare((1 + SQ2) ** 2) == 0


def test_squarefree_reduction():
    assert QuadExt(0, 1, 8) == 2 * SQ2
    assert QuadExt(0, 1, 9) == 3
    assert QuadExt.sqrt(12).d == 3


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        SQ2 + SQ3
    assert (SQ2 + Fraction(1, 3)).d == 2


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        SQ2 / QuadExt(0)


@given(elements(2), elements(2), elements(2))
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    if y != 0:
        assert (x / y) * y == x


@given(elements(5), elements(5))
def test_compare_matches_floats(x, y):
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9 * max(1.0, abs(fx)):
        assert x.compare(y) == (1 if fx > fy else -1)
    assert x.compare(x) == 0
    assert (x < y) == (y > x)


@given(elements(3))
def test_floor_and_ceil(x):
    f = x.floor()
    assert f <= x < f + 1
    assert x.ceil() - 1 < x <= x.ceil()


@given(elements(2))
def test_text_round_trip(x):
    assert QuadExt.parse(str(x)) == x


def test_parse_forms():
    assert QuadExt.parse("1/2+1/2√5") == PHI
    assert QuadExt.parse("(1+sqrt5)/2") == PHI
    assert QuadExt.parse("sqrt(2)") == SQ2
    assert QuadExt.parse("3+2sqrt2") == 3 + 2 * SQ2


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        QuadExt.parse("1+*2")
    assert info.value.pos == 2


# --- continued fractions ----------------------------------------------------------

@pytest.mark.parametrize("x, text", [(PHI, "[1; (1)]"), (SQ2, "[1; (2)]"), (1 + SQ2, "[2; (2)]"),
                                     (SQ3, "[1; (1 2)]"), ((3 + SQ2) / 7, "[0; 1 1 1 (2)]")])
def test_cf_expand(x, text):
    cf = cf_expand(x)
    assert str(cf) == text
    assert CFExpansion.parse(text) == cf
    assert cf.value() == x


def test_cf_expand_rejects_rationals():
    with pytest.raises(ValueError):
        cf_expand(QuadExt(Fraction(3, 2)))


small = st.builds(lambda a, b, c: QuadExt(Fraction(a, c), Fraction(b, c), 7),
                  st.integers(-12, 12), st.integers(-6, 6).filter(bool), st.integers(1, 6))


@given(small)
def test_cf_round_trip(x):
    if x.is_rational:
        return
    cf = cf_expand(x)
    assert cf.value() == x
    assert cf_expand(cf.value()) == cf
    assert all(cf[k] >= 1 for k in range(1, 20))


def test_convergents_examples():
    assert convergents(cf_expand(SQ2), 3) == (17, 12)
    assert convergents(cf_expand(PHI), 5) == (13, 8)
    assert convergents(cf_expand(SQ3), 0) == (1, 1)
    assert convergents(cf_expand(SQ2), -1) == (1, 0)


@pytest.mark.parametrize("x", [SQ2, PHI])
def test_recurrence_identities(x):
    cf = cf_expand(x)
    for k in range(0, 31):
        p, q = convergents(cf, k)
        pm, qm = convergents(cf, k - 1)
        assert p * qm - pm * q == (-1) ** (k + 1)
        assert math.gcd(p, q) == 1
        if k >= 1:
            assert difference(cf, k) == cf[k] * difference(cf, k - 1) + difference(cf, k - 2) if k >= 2 else True
        assert (difference(cf, k) > 0) == (k % 2 == 0)


def test_differences_and_complete_quotients():
    cf = cf_expand(SQ2)
    assert difference(cf, 0) == SQ2 - 1
    assert difference(cf, 1) == 2 * SQ2 - 3
    assert difference(cf, 2) == 5 * SQ2 - 7
    assert complete_quotient(cf, 0) == SQ2
    assert complete_quotient(cf, 1) == 1 + SQ2
    assert complete_quotient(cf_expand(PHI), 1) == PHI


# --- period matrix ------------------------------------------------------------

def test_gamma_data_sqrt2():
    g = gamma_data(cf_expand(SQ2))
    assert g.gamma_alpha == ((2, 1), (1, 0))
    assert g.det == -1
    assert g.norm == 1 + SQ2
    c = g.constants[0]
    assert (c.C, c.D, c.E) == ((2 + SQ2) / 4, (2 - SQ2) / 4, SQ2 - 1)


@pytest.mark.parametrize("x", [SQ2, PHI, SQ3, (3 + SQ2) / 7, 1 + SQ5])
def test_shifting_identities(x):
    cf = cf_expand(x)
    g = gamma_data(cf)
    assert g.det in (-1, 1)
    assert g.norm > 1 and abs(g.conj) < abs(g.norm)
    for k, c in enumerate(g.constants):
        for n in range(c.m, c.m + 11):
            idx = n * g.period + k
            assert convergents(cf, idx)[1] == c.C * g.norm ** n + c.D * g.conj ** n
            assert difference(cf, idx) == c.E * g.conj ** n


# --- Pisot and independence ------------------------------------------------------

def test_is_pisot():
    assert is_pisot(1 + SQ2)
    assert not is_pisot(SQ2)
    assert is_pisot(PHI)
    assert is_pisot(QuadExt(3))
    assert not is_pisot(QuadExt(Fraction(5, 2)))


def test_multiplicative_independence():
    assert mult_independent(SQ2, SQ3) is Independence.INDEPENDENT
    assert mult_independent(1 + SQ2, 3 + 2 * SQ2) is Independence.DEPENDENT
    assert same_field(SQ2, 2 + SQ2)
    assert mult_independent(SQ2, 2 + SQ2) is not Independence.DEPENDENT


# --- pumping ---------------------------------------------------------------

def test_pumping_sqrt2():
    r = pumping_constant("1", "0", "", cf_expand(SQ2))
    assert r.constant == (2 + SQ2) / 4
    assert abs(r.ratios[-1][1] - float(r.constant)) < 1e-6


def test_pumping_phi_converges():
    r = pumping_constant("", "1", "", cf_expand(PHI))
    assert abs(r.ratios[-1][1] - float(r.constant)) < 1e-6


def test_pumping_rejects_zero_words():
    with pytest.raises(ValueError):
        pumping_constant("0", "0", "0", cf_expand(SQ2))
