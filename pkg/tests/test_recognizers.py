import random

import pytest

from numauto.epwords import EpWord, NumSystem, compare, eval_word, is_normalized, normalize, parse_word, represent
from numauto.omega import accepts, complement, intersection, is_empty
from numauto.quadfield import QuadExt
from numauto.recognizers import (IneligibleSystemError, addition_automaton, domain_automaton, feasibility_check,
                                 nat_automaton, normalization_automaton, order_automaton, par_decode, par_encode,
                                 seq_decode, seq_encode, tau_automaton, u_automaton, v_automaton, valid_language)

from conftest import SYSTEMS, random_value, system

W = parse_word
SQ2, SQ5 = QuadExt.sqrt(2), QuadExt.sqrt(5)
ALL = sorted(SYSTEMS)


def seq(*words):
    return seq_encode([W(w) if isinstance(w, str) else w for w in words])


def samples(S, n, seed=0):
    rng = random.Random(seed)
    return [represent(random_value(S, rng), S) for _ in range(n)]


# --- encodings ------------------------------------------------------------------------

def test_encode_decode_round_trip():
    ws = [W("12.0(1)"), W("0.10"), W("1.(01)")]
    assert seq_decode(seq_encode(ws), 3) == ws
    assert par_decode(par_encode(ws), 3) == ws
    assert seq_decode(seq_encode(ws, int_len=5), 3) == ws


# --- valid language -------------------------------------------------------------------

def test_valid_language_examples():
    O = system("ostrowski:phi")
    V = valid_language(O)
    assert not accepts(V, seq("1.0"))
    assert accepts(V, seq("10.0"))
    assert accepts(valid_language(system("power:3+2sqrt2")), seq("0.(2)"))
    G = system("power:1+sqrt2")
    assert not accepts(valid_language(G), seq("3.0"))
    assert accepts(valid_language(G), seq("2.0"))
    # leading zeros are allowed
    assert accepts(V, seq_encode([W("10.0")], int_len=6))


@pytest.mark.parametrize("name", ALL)
def test_valid_language_accepts_representations(name):
    S = system(name)
    V = valid_language(S)
    for w in samples(S, 40):
        assert accepts(V, seq(w)), w


@pytest.mark.parametrize("name", ALL)
def test_valid_language_matches_is_normalized(name):
    S = system(name)
    V = valid_language(S)
    rng = random.Random(1)
    for _ in range(150):
        w = EpWord(tuple(rng.randint(0, S.M) for _ in range(rng.randint(1, 4))),
                   tuple(rng.randint(0, S.M) for _ in range(rng.randint(0, 3))),
                   tuple(rng.randint(0, S.M) for _ in range(rng.randint(1, 3))))
        assert accepts(V, seq(w)) == is_normalized(w, S), w


@pytest.mark.parametrize("name", ["power:phi", "ostrowski:sqrt2"])
def test_valid_language_disjoint_from_complement(name):
    V = valid_language(system(name))
    assert is_empty(intersection(V, complement(V)))


def test_domain_contains_valid():
    S = system("ostrowski:phi")
    D, V = domain_automaton(S), valid_language(S)
    assert is_empty(intersection(V, complement(D)))


def test_ineligible_power_base():
    with pytest.raises(IneligibleSystemError):
        valid_language(NumSystem.power("sqrt2"))


# --- order ------------------------------------------------------------------------------

def test_order_examples():
    S = system("power:1+sqrt2")
    A = order_automaton(S)
    one, two = represent(1, S), represent(2, S)
    assert accepts(A, seq(one, two))
    assert not accepts(A, seq(two, one))
    assert not accepts(A, seq(two, two))


@pytest.mark.parametrize("name", ALL)
def test_order_matches_compare(name):
    S = system(name)
    A = order_automaton(S)
    ws = samples(S, 24, seed=2)
    for a in ws:
        for b in ws[:8]:
            assert accepts(A, seq(a, b)) == (compare(a, b, S) < 0), (a, b)


def test_ostrowski_parity_rule():
    # in O_phi a larger digit at an even fractional depth gives a smaller value
    S = system("ostrowski:phi")
    A = order_automaton(S)
    found = 0
    ws = samples(S, 60, seed=3)
    for a in ws:
        for b in ws:
            depth = next((k for k in range(1, 40) if a.frac_digit(k) != b.frac_digit(k)), None)
            if a.int_digits != b.int_digits or depth is None or depth % 2:
                continue
            bigger_digit = a if a.frac_digit(depth) > b.frac_digit(depth) else b
            other = b if bigger_digit is a else a
            assert compare(bigger_digit, other, S) < 0
            assert accepts(A, seq(bigger_digit, other))
            found += 1
    assert found


# --- addition --------------------------------------------------------------------------

def test_addition_examples():
    S = system("power:1+sqrt2")
    A = addition_automaton(S)
    r = lambda x: represent(x, S)
    assert accepts(A, seq(r(1), r(1), r(2)))
    assert accepts(A, seq("0.(10)", "0.(10)", "1.0"))
    assert not accepts(A, seq(r(1), r(1), r(3)))


@pytest.mark.parametrize("name", ALL)
def test_addition_matches_eval(name):
    S = system(name)
    A = addition_automaton(S)
    rng = random.Random(4)
    for _ in range(12):
        x, y = random_value(S, rng), random_value(S, rng)
        rx, ry = represent(x, S), represent(y, S)
        assert accepts(A, seq(rx, ry, represent(x + y, S)))
        # functional: nearby sums are rejected
        for delta in (1, QuadExt(1, 0) / 2, S.weight(1)):
            assert not accepts(A, seq(rx, ry, represent(x + y + delta, S)))


# --- normalization -------------------------------------------------------------------------

def test_normalization_examples():
    S = system("power:phi")
    A = normalization_automaton(S)
    assert accepts(A, seq("0.110", "1.0"))
    assert not accepts(A, seq("0.110", "0.11"))
    B = normalization_automaton(S, M_in=2)
    assert eval_word(W("10.01"), S) == 2
    assert accepts(B, seq("2.0", "10.01"))
    # 10.1 evaluates to sqrt5, not 2
    assert eval_word(W("10.1"), S) == SQ5
    assert not accepts(B, seq("2.0", "10.1"))
    with pytest.raises(ValueError):
        normalization_automaton(S, M_in=0)
    with pytest.raises(ValueError):
        normalization_automaton(S, M_in=5)


@pytest.mark.parametrize("name", ["power:phi", "power:1+sqrt2", "ostrowski:phi"])
def test_normalization_matches_normalize(name):
    S = system(name)
    M_in = S.M + 1
    A = normalization_automaton(S, M_in)
    for w in samples(S, 15, seed=5):
        assert accepts(A, seq(w, w))
    rng = random.Random(6)
    for _ in range(25):
        w = EpWord(tuple(rng.randint(0, M_in) for _ in range(rng.randint(1, 3))),
                   tuple(rng.randint(0, M_in) for _ in range(rng.randint(0, 2))),
                   tuple(rng.randint(0, M_in) for _ in range(rng.randint(1, 2))))
        if eval_word(w, S) < 0:
            continue
        n = normalize(w, S)
        assert accepts(A, seq(w, n)), w
        assert not accepts(A, seq(w, represent(eval_word(w, S) + 1, S)))


# --- units, naturals, V_i, tau ----------------------------------------------------------------

def test_u_automaton():
    S = system("ostrowski:sqrt2")
    U = u_automaton(S)
    q2 = S.weight(2)
    assert q2 == 5
    assert accepts(U, seq(represent(q2, S)))
    assert not accepts(U, seq(represent(3, S)))
    for i in range(-4, 5):
        u = S.weight(i)
        if u >= 0:
            assert accepts(U, seq(represent(u, S))), i


def test_v_automaton():
    S = system("ostrowski:sqrt2")
    assert format(represent(10, S).int_digits) == format((2, 0, 0))
    V2 = v_automaton(S, 2)
    assert accepts(V2, seq(represent(10, S), represent(S.weight(2), S)))
    assert not accepts(V2, seq(represent(10, S), represent(S.weight(1), S)))
    assert accepts(v_automaton(S, 0), seq(represent(10, S), represent(S.weight(1), S)))
    with pytest.raises(ValueError):
        v_automaton(S, 3)


@pytest.mark.parametrize("name", ["ostrowski:sqrt2", "ostrowski:phi", "power:1+sqrt2"])
def test_nat_automaton(name):
    S = system(name)
    N = nat_automaton(S)
    assert not accepts(N, seq("0.(10)"))
    for n in range(0, 30):
        r = represent(n, S)
        # power systems may need a fractional part for an integer (3 = "10.11" in base 1+sqrt2)
        assert accepts(N, seq(r)) == (not any(r.frac_pre + r.frac_period))
        if not S.is_power:
            assert accepts(N, seq(r))
    if not S.is_power:
        # for Ostrowski systems N_S is exactly the natural numbers
        assert accepts(N, seq("100100.0")) == is_normalized(W("100100.0"), S)
        for x in (QuadExt(1, 0) / 2, SQ2 - 1 if S.d == 2 else (SQ5 - 1) / 2):
            assert not accepts(N, seq(represent(x, S)))
    else:
        assert accepts(N, seq("100100.0"))


def _single_one(w):
    digits = w.int_digits + w.frac_pre + w.frac_period
    return sorted(digits)[-1] == 1 and digits.count(1) == 1 and sum(digits) == 1


@pytest.mark.parametrize("name", ["power:1+sqrt2", "ostrowski:sqrt2", "ostrowski:phi"])
def test_tau_matches_value_relation(name):
    S = system(name)
    T = tau_automaton(S)
    # units whose normalized word is a single 1; for O_phi this drops U_-1 = phi-1 ("10.01")
    units = {i: S.weight(i) for i in range(-5, 6)}
    units = {i: u for i, u in units.items() if u >= 0 and _single_one(represent(u, S))}
    nonneg = sorted(units)
    pairs = {(units[i], units[-i]) for i in units if -i in units}
    for i in nonneg:
        for j in nonneg:
            got = accepts(T, par_encode([represent(units[i], S), represent(units[j], S)]))
            assert got == ((units[i], units[j]) in pairs), (i, j)


# --- feasibility ----------------------------------------------------------------------------

def test_feasibility_power():
    assert feasibility_check(system("power:1+sqrt2")).criterion_k == 1
    assert feasibility_check(system("power:phi")).criterion_k == 2


def test_feasibility_ostrowski_spaced_words():
    r = feasibility_check(system("ostrowski:phi"), K=4)
    assert r.criterion_k is None
    assert r.least_verified_k == 1
    assert not r.details[0] and r.details[1] and r.details[3]
    # the all-ones witness, mirrored around the radix point
    assert is_normalized(W("1010.(01)"), system("ostrowski:phi"))
    assert not is_normalized(W("1010.10"), system("ostrowski:phi"))
    text = r.to_text()
    assert "k=1: ok" in text
    assert r.to_json()["least_verified_k"] == 1
