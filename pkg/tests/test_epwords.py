import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from numauto.epwords import (EpWord, NumSystem, add, compare, convert_phi, eval_word, format_word,
                             greedy_power_rep, is_admissible, is_normalized, normalize, ostrowski_rep,
                             parse_word, quasi_greedy_one, regroup, represent, ungroup)
from numauto.quadfield import OrbitCapError, ParseError, QuadExt, cf_expand

from conftest import field_elements, system

SQ2, SQ5 = QuadExt.sqrt(2), QuadExt.sqrt(5)
PHI = (1 + SQ5) / 2
W = parse_word


# --- literals -------------------------------------------------------------------

@pytest.mark.parametrize("text", ["100100.0", "0.(10)", "0.1", "12.3(45)", "0.0"])
def test_literal_round_trip(text):
    assert format_word(W(text)) == text


def test_comma_literal():
    w = W("2,0,0.0,(1,0)")
    assert w == W("200.(01)")
    assert format_word(w, commas=True) == "2,0,0.(0,1)"
    assert W(format_word(w, commas=True)) == w


def test_canonical_form():
    assert W("0012.300") == W("12.3")
    assert W("0.1(0)") == W("0.1")
    assert W("0.(1010)") == W("0.(10)")
    assert W("0.1(01)") == W("0.(10)")
    assert W("0.(10)").frac_period == (1, 0)


def test_wide_digits_use_commas():
    w = EpWord((12, 0), (), (3,))
    assert format_word(w) == "12,0.(3)"
    assert W("12,0.(3)") == w


@pytest.mark.parametrize("bad", ["", "1", "1.2(", "a.0", "1.(2"])
def test_malformed_literal(bad):
    with pytest.raises(ParseError):
        W(bad)


def test_negative_digits_rejected():
    with pytest.raises(ValueError):
        EpWord((1, -1))


# --- systems and evaluation -------------------------------------------------------

def test_system_descriptors():
    S = NumSystem.parse("power:1+sqrt2")
    assert S.is_power and S.M == 2 and S.base == 1 + SQ2
    O = NumSystem.parse("ostrowski:√2")
    assert not O.is_power and O.M == 2
    assert [O.weight(i) for i in range(4)] == [1, 2, 5, 12]
    assert O.weight(-1) == SQ2 - 1
    assert NumSystem.parse("power:(1+sqrt5)/2").M == 1
    with pytest.raises(ValueError):
        NumSystem.parse("binary:2")


def test_eval_examples():
    g = system("power:1+sqrt2")
    assert eval_word(W("1.0"), g) == 1
    assert eval_word(W("0.(10)"), g) == QuadExt(1, 0) / 2
    assert eval_word(W("0.1"), system("ostrowski:sqrt2")) == SQ2 - 1


def test_eval_accepts_any_digits():
    g = system("power:(1+sqrt5)/2")
    assert eval_word(W("2.0"), g) == 2
    assert eval_word(W("0.(3)"), g) == 3 / (PHI - 1)


# --- representations ----------------------------------------------------------

def test_greedy_examples():
    assert format_word(greedy_power_rep(QuadExt(1), 1 + SQ2)) == "1.0"
    assert format_word(greedy_power_rep(SQ2 - 1, 3 + 2 * SQ2)) == "0.(2)"
    assert format_word(greedy_power_rep(QuadExt(1) / 2, 1 + SQ2)) == "0.(10)"


def test_ostrowski_examples():
    assert format_word(ostrowski_rep(QuadExt(10), cf_expand(PHI))) == "100100.0"
    assert format_word(ostrowski_rep(QuadExt(10), cf_expand(SQ2))) == "200.0"
    assert format_word(ostrowski_rep(SQ2 - 1, cf_expand(SQ2))) == "0.1"


def test_negative_input_rejected():
    with pytest.raises(ValueError):
        represent(-SQ2, system("power:1+sqrt2"))
    with pytest.raises(ValueError):
        represent(QuadExt(-1), system("ostrowski:sqrt2"))


def test_orbit_cap_reported():
    with pytest.raises(OrbitCapError):
        greedy_power_rep(QuadExt(1) / 7, 1 + SQ2, cap=2)


def _round_trip(S, x):
    w = represent(x, S)
    assert eval_word(w, S) == x
    assert is_normalized(w, S)
    assert w.max_digit <= S.M


@given(field_elements(5))
def test_round_trip_power_phi(x):
    _round_trip(system("power:phi"), x)


@given(field_elements(2))
def test_round_trip_power_silver(x):
    _round_trip(system("power:1+sqrt2"), x)
    _round_trip(system("power:3+2sqrt2"), x)


@given(field_elements(5))
def test_round_trip_ostrowski_phi(x):
    _round_trip(system("ostrowski:phi"), x)


@given(field_elements(2))
def test_round_trip_ostrowski_sqrt2(x):
    _round_trip(system("ostrowski:sqrt2"), x)


@given(field_elements(3, max_int=12, max_den=4))
def test_round_trip_ostrowski_sqrt3(x):
    _round_trip(NumSystem.ostrowski(QuadExt.sqrt(3)), x)


def _below(w: EpWord, j: int) -> EpWord:
    """The word keeping only the digits at indices < j."""
    if j >= 0:
        ints = tuple(w.digit(i) for i in range(j - 1, -1, -1)) or (0,)
        return EpWord(ints, w.frac_pre, w.frac_period)
    k, pre = -j, len(w.frac_pre)
    per = len(w.frac_period) or 1
    n = max(k, pre)
    n += (pre - n) % per
    return EpWord((0,), tuple(0 if t <= k else w.frac_digit(t) for t in range(1, n + 1)), w.frac_period)


@pytest.mark.parametrize("gamma", [PHI, 1 + SQ2, 3 + 2 * SQ2])
@given(data=st.data())
def test_greedy_inequality(gamma, data):
    x = data.draw(field_elements(gamma.d, max_int=20))
    S = NumSystem.power(gamma)
    w = greedy_power_rep(x, gamma)
    for j in range(-30, 30):
        assert eval_word(_below(w, j), S) < S.weight(j)


# --- uniqueness of integer representations ------------------------------------------

def _ostrowski_strings(cf, length):
    """All digit vectors (index 0 first) obeying the integer digit rules."""
    def extend(prefix):
        i = len(prefix)
        if i == length:
            yield prefix
            return
        top = cf[i + 1] - (1 if i == 0 else 0)
        for d in range(top + 1):
            if i > 0 and d == cf[i + 1] and prefix[-1] != 0:
                continue
            yield from extend(prefix + [d])
    yield from extend([])


@pytest.mark.parametrize("alpha, length", [(SQ2, 10), (PHI, 15)])
def test_integer_representations_unique(alpha, length):
    cf = cf_expand(alpha)
    S = NumSystem.ostrowski(cf)
    counts = {}
    for ds in _ostrowski_strings(cf, length):
        v = sum(d * S.weight(i) for i, d in enumerate(ds))
        counts[v] = counts.get(v, 0) + 1
    assert all(counts.get(QuadExt(n), 0) == 1 for n in range(501))


# --- order ---------------------------------------------------------------------

def test_compare_examples():
    O = system("ostrowski:phi")
    assert compare(W("0.0"), W("0.1"), O) == -1
    assert compare(W("0.01"), W("0.0"), O) == -1
    assert compare(W("0.10"), W("0.0"), O) == 1
    w = W("100100.0")
    assert compare(w, w, O) == 0


@pytest.mark.parametrize("name", ["power:phi", "power:1+sqrt2", "ostrowski:phi", "ostrowski:sqrt2"])
def test_compare_agrees_with_values(name):
    S = system(name)
    rng = random.Random(7)
    for _ in range(300):
        x, y = (QuadExt(rng.randint(0, 30), rng.randint(-8, 8), S.d) / rng.randint(1, 6) for _ in range(2))
        x, y = abs(x), abs(y)
        assert compare(represent(x, S), represent(y, S), S) == x.compare(y)


def test_ostrowski_parity_rule():
    O = system("ostrowski:sqrt2")
    for k in range(1, 7):
        zeros = "0" * (k - 1)
        lo, hi = W(f"1.{zeros}0"), W(f"1.{zeros}1")
        assert is_normalized(lo, O) and is_normalized(hi, O)
        expected = -1 if k % 2 == 1 else 1
        assert compare(lo, hi, O) == expected
        assert eval_word(lo, O).compare(eval_word(hi, O)) == expected


# --- normal forms and addition ----------------------------------------------------

def test_normalization_examples():
    assert normalize(W("0.110"), system("power:phi")) == W("1.0")
    assert is_normalized(W("0.(2)"), system("power:3+2sqrt2"))
    assert add(W("1.0"), W("1.0"), system("power:1+sqrt2")) == W("2.0")
    assert not is_normalized(W("1.0"), system("ostrowski:phi"))
    assert is_normalized(W("10.0"), system("ostrowski:phi"))
    assert not is_normalized(W("0.01"), system("ostrowski:phi"))
    assert is_admissible(W("0.01"), system("ostrowski:phi"))


def test_quasi_greedy_expansions():
    assert quasi_greedy_one(1 + SQ2) == ((), (2, 0))
    assert quasi_greedy_one(3 + 2 * SQ2) == ((5,), (4,))
    assert quasi_greedy_one(PHI) == ((), (1, 0))


@given(field_elements(2, max_int=20), field_elements(2, max_int=20))
def test_add_matches_values(x, y):
    S = system("ostrowski:sqrt2")
    assert eval_word(add(represent(x, S), represent(y, S), S), S) == x + y


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6), st.lists(st.integers(0, 3), max_size=4),
       st.lists(st.integers(0, 3), max_size=3))
def test_normalize_preserves_value(ints, pre, per):
    S = system("power:1+sqrt2")
    w = EpWord(tuple(ints), tuple(pre), tuple(per))
    n = normalize(w, S)
    assert eval_word(n, S) == eval_word(w, S)
    assert is_normalized(n, S)
    assert normalize(n, S) == n


# --- base changes ------------------------------------------------------------------

def test_regroup_examples():
    g = 1 + SQ2
    assert regroup(W("2.0"), g, 2) == W("2.0")
    w = W("12.0(1)")
    assert regroup(w, g, 1) == normalize(w, NumSystem.power(g))
    half = greedy_power_rep(QuadExt(1) / 2, g)
    assert regroup(ungroup(half, g, 2), g, 2) == half


def test_convert_phi_examples():
    cf, gamma = cf_expand(SQ2), 3 + 2 * SQ2
    assert convert_phi(W("0.1"), cf, gamma) == W("0.(2)")
    assert convert_phi(W("1.0"), cf, gamma) == W("1.0")


def test_convert_phi_rejects_non_units():
    with pytest.raises(ValueError):
        convert_phi(W("1.0"), cf_expand(SQ2), 2 + SQ2)
    with pytest.raises(ValueError):
        convert_phi(W("1.0"), cf_expand(SQ2), PHI)


@pytest.mark.parametrize("alpha, gamma", [(SQ2, 3 + 2 * SQ2), (SQ2, 1 + SQ2), (PHI, PHI), (PHI, PHI ** 2)])
def test_convert_phi_preserves_value(alpha, gamma):
    cf = cf_expand(alpha)
    O, G = NumSystem.ostrowski(cf), NumSystem.power(gamma)
    rng = random.Random(3)
    seen = {}
    for _ in range(40):
        x = abs(QuadExt(rng.randint(0, 25), rng.randint(-9, 9), alpha.d) / rng.randint(1, 5))
        w = ostrowski_rep(x, cf)
        out = convert_phi(w, cf, gamma)
        assert eval_word(out, G) == x
        assert is_normalized(out, G)
        assert seen.setdefault(out, w) == w
