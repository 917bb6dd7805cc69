"""Automata for the basic relations of a numeration system.

Sequential encoding of a k-tuple of words: integer parts padded to a common
length with leading zeros, one radix symbol (STAR,)*k, then the fractional
digits; each symbol is a k-tuple. Parallel encoding: position p carries, per
track, the pair (digit at index p, digit at index -p-1).

The arithmetic relations are built from residue machines: a k-track word is
read as the linear form sum_j coef_j * value(track_j) + const, and the machine
keeps the scaled partial value; runs whose residue leaves a computed bound are
decided (for order) or killed (for equality).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .epwords import EpWord, NumSystem, is_normalized, quasi_greedy_one, represent
from .omega import (DEFAULT_STATE_CAP, STAR, BuchiAutomaton, UpWord, cylinder, explore, from_upword, intersection,
                    project, seq_to_parallel, simplify, union)
from .quadfield import QuadExt, complete_quotient, is_pisot


class IneligibleSystemError(ValueError):
    pass


def check_eligible(S: NumSystem) -> None:
    if S.is_power and not is_pisot(S.base):
        raise IneligibleSystemError(f"{S.base} is not a Pisot number")


# ---------------------------------------------------------------------------
# Encodings
# ---------------------------------------------------------------------------


def star_symbol(k: int) -> tuple:
    return tuple(STAR for _ in range(k))


def seq_alphabet(k: int, M: int) -> list[tuple]:
    return list(itertools.product(range(M + 1), repeat=k)) + [star_symbol(k)]


def _frac_loop(words: Sequence[EpWord]) -> tuple[int, int]:
    pre = max((len(w.frac_pre) for w in words), default=0)
    per = math.lcm(*[len(w.frac_period) or 1 for w in words]) if words else 1
    return pre, per


def seq_encode(words: Sequence[EpWord], int_len: int | None = None) -> UpWord:
    """Sequential encoding; ``int_len`` pads integer parts further with leading zeros."""
    k = len(words)
    n = max(len(w.int_digits) for w in words)
    if int_len is not None:
        n = max(n, int_len)
    ints = [(0,) * (n - len(w.int_digits)) + w.int_digits for w in words]
    stem = [tuple(ints[j][i] for j in range(k)) for i in range(n)]
    stem.append(star_symbol(k))
    pre, per = _frac_loop(words)
    stem += [tuple(w.frac_digit(d) for w in words) for d in range(1, pre + 1)]
    loop = [tuple(w.frac_digit(d) for w in words) for d in range(pre + 1, pre + per + 1)]
    return UpWord(stem, loop)


def par_encode(words: Sequence[EpWord]) -> UpWord:
    n = max(len(w.int_digits) for w in words)
    pre, per = _frac_loop(words)
    stem_len = max(n, pre)
    per = math.lcm(per, 1)

    def sym(p):
        return tuple((w.digit(p), w.frac_digit(p + 1)) for w in words)

    return UpWord([sym(p) for p in range(stem_len)], [sym(p) for p in range(stem_len, stem_len + per)])


def seq_decode(w: UpWord, k: int) -> list[EpWord]:
    star = star_symbol(k)
    if star not in w.stem:
        raise ValueError("radix symbol must occur in the stem")
    pos = w.stem.index(star)
    ints, fracs = w.stem[:pos], w.stem[pos + 1:]
    return [EpWord(tuple(s[j] for s in ints) or (0,), tuple(s[j] for s in fracs), tuple(s[j] for s in w.loop))
            for j in range(k)]


def par_decode(w: UpWord, k: int) -> list[EpWord]:
    out = []
    for j in range(k):
        if any(s[j][0] for s in w.loop):
            raise ValueError("integer digits do not vanish")
        ints = tuple(s[j][0] for s in w.stem)[::-1] or (0,)
        out.append(EpWord(ints, tuple(s[j][1] for s in w.stem), tuple(s[j][1] for s in w.loop)))
    return out


# ---------------------------------------------------------------------------
# Index bookkeeping for Ostrowski systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _OstrowskiIndex:
    """Partial quotients seen by digits, by integer index class and fractional depth class.

    Integer index i uses a_{i+1}. Indices i < T are tracked exactly (class i);
    larger ones by phase (class T + (i - T) mod P). Fractional depth d uses a_d;
    depths d <= T are exact, deeper ones are reduced to T+1..T+P.
    """

    T: int
    P: int
    a_int: tuple[int, ...]
    a_frac: tuple[int, ...]
    zeta_next: tuple[QuadExt, ...]

    @classmethod
    def of(cls, S: NumSystem) -> "_OstrowskiIndex":
        cf = S.cf
        T, P = len(cf.preperiod), cf.P
        a_int = tuple(cf[i + 1] for i in range(T + P))
        a_frac = tuple(cf[d] if d else 0 for d in range(T + P + 1))
        zeta = tuple(complete_quotient(cf, d + 1) for d in range(T + P + 1))
        return cls(T, P, a_int, a_frac, zeta)

    @property
    def int_classes(self) -> range:
        return range(self.T + self.P)

    def below(self, c: int) -> list[int]:
        """Possible classes of index i-1 given the class of index i (-1 means the radix)."""
        T, P = self.T, self.P
        if c < T:
            return [c - 1] if c > 0 else [-1]
        ph = c - T
        out = [T + (ph - 1) % P]
        if ph == 0:
            out.append(T - 1)  # i == T, so i - 1 is the exact index T - 1 (or the radix)
        return out

    def next_depth(self, d: int) -> int:
        T, P = self.T, self.P
        d += 1
        return d if d <= T else T + 1 + (d - T - 1) % P


@lru_cache(maxsize=None)
def _ostrowski_index(S: NumSystem) -> _OstrowskiIndex:
    return _OstrowskiIndex.of(S)


# ---------------------------------------------------------------------------
# Residue machines
# ---------------------------------------------------------------------------


POS = ("pos",)


def _dot(coefs: Sequence[int], sym: Sequence[int]) -> int:
    return sum(c * d for c, d in zip(coefs, sym))


def linear_automaton(S: NumSystem, coefs: Sequence[int], const: int = 0, relation: str = "eq",
                     digit_bound: int | None = None, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Tracks whose values satisfy sum_j coefs[j]*x_j + const  == 0  (relation 'eq') or > 0 ('gt').

    Exact for words with digits at most ``digit_bound`` (default S.M).
    """
    check_eligible(S)
    if relation not in ("eq", "gt"):
        raise ValueError("relation must be 'eq' or 'gt'")
    M = S.M if digit_bound is None else digit_bound
    k = len(coefs)
    alphabet = seq_alphabet(k, M)
    star = star_symbol(k)
    digits = alphabet[:-1]
    cmax = sum(abs(c) for c in coefs) * M
    gt = relation == "gt"
    if S.is_power:
        moves, init = _power_residue(S, coefs, const, cmax, digits, star, gt)
    else:
        moves, init = _ostrowski_residue(S, coefs, const, cmax, digits, star, gt)

    if gt:
        acc = lambda key: key == POS
    else:
        acc = lambda key: key[0] == "f"
    A, _ = explore(alphabet, init, moves, acc, cap)
    return simplify(A)


def _power_residue(S, coefs, const, cmax, digits, star, gt):
    g = S.base
    bound = Fraction(cmax) / (g - 1) + abs(const)
    alphabet = digits + [star]

    def settle(phase, r):
        # None: keep going; POS / "dead": decided
        if abs(r) <= bound:
            return (phase, r)
        return POS if gt and r > 0 else None

    def moves(key):
        if key == POS:
            for a in alphabet:
                yield a, POS
            return
        phase, r = key
        for a in digits:
            nxt = settle(phase, g * r + _dot(coefs, a))
            if nxt is not None:
                yield a, nxt
        if phase == "i":
            nxt = settle("f", r + const)
            if nxt is not None:
                yield star, nxt

    return moves, [("i", QuadExt(0))]


def _sign_on(X: int, Y: int, s0: Fraction, s1: Fraction, K: int) -> int:
    """+1/-1 if |X + Y s| > K for every s in [s0, s1] (with that sign), else 0."""
    f0, f1 = X + Y * s0, X + Y * s1
    if f0 > K and f1 > K:
        return 1
    if f0 < -K and f1 < -K:
        return -1
    return 0


def _ostrowski_residue(S, coefs, const, cmax, digits, star, gt):
    ix = _ostrowski_index(S)
    cf = S.cf
    K = 5 * cmax + abs(const) + 1
    B = 3 * cmax + 1
    beta0 = cf.value() * 1 - cf.a0  # beta_0 = q_0 alpha - p_0
    alphabet = digits + [star]

    def frac_state(d, r, parity):
        if abs(r) <= B:
            return ("f", d, r, parity)
        # total sign is -sign(r) * (-1)^depth
        sign = -(1 if r > 0 else -1) * (1 if parity == 0 else -1)
        return POS if gt and sign > 0 else None

    def moves(key):
        if key == POS:
            for a in alphabet:
                yield a, POS
            return
        tag = key[0]
        if tag == "s":
            for c in ix.int_classes:
                for a in digits:
                    yield a, ("i", c, _dot(coefs, a), 0)
            return
        if tag == "i":
            _, c, X, Y = key
            for c2 in ix.below(c):
                if c2 == -1:
                    # radix: index 0 was just read, V_0 = X
                    if abs(X) > K:
                        if gt and X > 0:
                            yield star, POS
                        continue
                    r0 = QuadExt(-(X + const)) / beta0
                    nxt = frac_state(0, r0, 0)
                    if nxt is not None:
                        yield star, nxt
                    continue
                a_i = ix.a_int[c2]
                sgn = _sign_on(X, Y, Fraction(1, a_i + 1), Fraction(1, a_i), K)
                if sgn:
                    if gt and sgn > 0:
                        for a in digits:
                            yield a, POS
                    continue
                for a in digits:
                    yield a, ("i", c2, X * a_i + Y + _dot(coefs, a), X)
            return
        _, d, r, parity = key
        d2 = ix.next_depth(d)
        z = ix.zeta_next[d2]
        for a in digits:
            nxt = frac_state(d2, -z * (r - _dot(coefs, a)), parity ^ 1)
            if nxt is not None:
                yield a, nxt

    return moves, [("s",)]


# ---------------------------------------------------------------------------
# Digit languages
# ---------------------------------------------------------------------------


def _power_language(S: NumSystem, strict: bool, cap: int) -> BuchiAutomaton:
    # Parry's condition: m counts the leading digits of d*(1) matched by the current
    # suffix; 0 means no pending match. The eventual condition forbids matching forever.
    pre, per = quasi_greedy_one(S.base)
    t = pre + per
    L = len(t)
    alphabet = seq_alphabet(1, S.M)
    star = star_symbol(1)

    def advance(m, d):
        want = t[m] if m < L else t[len(pre)]
        if d < want:
            return 0
        if d > want:
            return None
        return m + 1 if m < L else len(pre) + 1

    def moves(key):
        phase, m = key
        for (d,) in alphabet[:-1]:
            m2 = advance(m, d)
            if m2 is not None:
                yield (d,), ("f" if phase == "f" else "i", m2)
        if phase == "i":
            yield star, ("f", m)

    acc = (lambda key: key[0] == "f" and key[1] == 0) if strict else (lambda key: key[0] == "f")
    A, _ = explore(alphabet, [("s", 0)], moves, acc, cap)
    return simplify(A)


def _ostrowski_language(S: NumSystem, strict: bool, cap: int) -> BuchiAutomaton:
    ix = _ostrowski_index(S)
    alphabet = seq_alphabet(1, S.M)
    star = star_symbol(1)
    digits = [a[0] for a in alphabet[:-1]]

    def int_moves(c, last_max, nonzero):
        a = ix.a_int[c]
        for d in digits:
            if d > a or (last_max and d):
                continue
            yield (d,), ("i", c, d == a, nonzero or d > 0)

    def moves(key):
        tag = key[0]
        if tag == "s":
            for c in ix.int_classes:
                yield from int_moves(c, False, False)
            return
        if tag == "i":
            _, c, last_max, nonzero = key
            for c2 in ix.below(c):
                if c2 == -1:
                    if not last_max:
                        yield star, ("f", 0, 0, False, "pos" if nonzero else "zero", False)
                    continue
                yield from int_moves(c2, last_max, nonzero)
            return
        _, d, parity, prev_nonzero, sign, _good = key
        d2 = ix.next_depth(d)
        a = ix.a_frac[d2]
        parity2 = parity ^ 1  # parity of the depth being read: 1 means odd
        for b in digits:
            if b > a:
                continue
            if d == 0 and b == a:
                continue
            if d != 0 and b == a and prev_nonzero:
                continue
            sign2 = sign
            if sign == "zero" and b:
                if parity2 == 0:
                    continue
                sign2 = "pos"
            good = parity2 == 1 and b < a
            yield (b,), ("f", d2, parity2, b > 0, sign2, good)

    if strict:
        acc = lambda key: key[0] == "f" and key[5]
    else:
        acc = lambda key: key[0] == "f"
    A, _ = explore(alphabet, [("s",)], moves, acc, cap)
    return simplify(A)


@lru_cache(maxsize=None)
def valid_language(S: NumSystem, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Sequential encodings (any leading zeros) of S-normalized words."""
    check_eligible(S)
    return _power_language(S, True, cap) if S.is_power else _ostrowski_language(S, True, cap)


@lru_cache(maxsize=None)
def domain_automaton(S: NumSystem, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Closure of the normalized language: digit rules without the eventual conditions.

    Every word accepted here has a nonnegative value, and every such value has an
    accepted word, so value-determined relations can be decided on this domain.
    """
    check_eligible(S)
    return _power_language(S, False, cap) if S.is_power else _ostrowski_language(S, False, cap)


def tracks_in(A: BuchiAutomaton, S: NumSystem, k: int, positions: Sequence[int], digit_bound: int | None = None):
    """Cylinder of a |positions|-track automaton into k tracks."""
    M = S.M if digit_bound is None else digit_bound
    return cylinder(A, seq_alphabet(k, M), positions)


def product_domain(S: NumSystem, k: int, base: BuchiAutomaton | None = None, digit_bound: int | None = None):
    """k-fold product of a one-track language (default: the domain)."""
    base = domain_automaton(S) if base is None else base
    M = S.M if digit_bound is None else digit_bound
    alphabet = seq_alphabet(k, M)
    if k == 0:
        return BuchiAutomaton(1, [()], [(0, (), 0)], [0], [0])
    out = None
    for j in range(k):
        A = cylinder(base, alphabet, [j])
        out = A if out is None else intersection(out, A)
    return simplify(out)


# ---------------------------------------------------------------------------
# Relations on normalized words
# ---------------------------------------------------------------------------


def _on_normalized(S: NumSystem, A: BuchiAutomaton, k: int) -> BuchiAutomaton:
    return simplify(intersection(A, product_domain(S, k, valid_language(S))))


@lru_cache(maxsize=None)
def order_automaton(S: NumSystem) -> BuchiAutomaton:
    """Pairs of normalized words (w1, w2) with value(w1) < value(w2)."""
    return _on_normalized(S, linear_automaton(S, (-1, 1), 0, "gt"), 2)


@lru_cache(maxsize=None)
def addition_automaton(S: NumSystem) -> BuchiAutomaton:
    """Triples of normalized words (u, v, w) with value(u) + value(v) = value(w)."""
    return _on_normalized(S, linear_automaton(S, (1, 1, -1), 0, "eq"), 3)


@lru_cache(maxsize=None)
def equality_automaton(S: NumSystem, digit_bound: int | None = None) -> BuchiAutomaton:
    """Pairs of digit-bounded words with equal values."""
    return linear_automaton(S, (1, -1), 0, "eq", digit_bound=digit_bound)


def normalization_automaton(S: NumSystem, M_in: int | None = None) -> BuchiAutomaton:
    """Pairs (w, rho(value(w))) for words w with digits at most M_in."""
    M_in = S.M if M_in is None else M_in
    if M_in < S.M:
        raise ValueError("input digit bound must be at least S.M")
    if M_in > 4 * max(S.M, 1):
        raise ValueError("input digit bound exceeds 4*M")
    eq = linear_automaton(S, (1, -1), 0, "eq", digit_bound=M_in)
    return simplify(intersection(eq, map_valid(S, M_in)))


def map_valid(S: NumSystem, M_in: int) -> BuchiAutomaton:
    """valid_language on track 1 of a two-track alphabet with digits up to M_in."""
    from .omega import map_symbols
    V = valid_language(S)
    sigma = set(V.alphabet)

    def image(sym):
        b = (sym[1],)
        return b if b in sigma else None

    return map_symbols(V, seq_alphabet(2, M_in), image)


@lru_cache(maxsize=None)
def unit_word_automaton(S: NumSystem) -> BuchiAutomaton:
    """Words with exactly one nonzero digit, equal to 1 (the words e_j of value U_j)."""
    alphabet = seq_alphabet(1, S.M)
    star = star_symbol(1)
    trans = [(0, (0,), 0), (0, (1,), 1), (1, (0,), 1), (0, star, 2), (1, star, 3),
             (2, (0,), 2), (2, (1,), 3), (3, (0,), 3)]
    return simplify(BuchiAutomaton(4, alphabet, trans, [0], [3]))


@lru_cache(maxsize=None)
def u_automaton(S: NumSystem) -> BuchiAutomaton:
    """Normalized words with a single nonzero digit, equal to 1."""
    return simplify(intersection(unit_word_automaton(S), valid_language(S)))


@lru_cache(maxsize=None)
def zero_fraction_automaton(S: NumSystem) -> BuchiAutomaton:
    alphabet = seq_alphabet(1, S.M)
    trans = [(0, a, 0) for a in alphabet[:-1]] + [(0, star_symbol(1), 1), (1, (0,), 1)]
    return BuchiAutomaton(2, alphabet, trans, [0], [1])


@lru_cache(maxsize=None)
def nat_automaton(S: NumSystem) -> BuchiAutomaton:
    """Normalized words with zero fractional part (the set N_S)."""
    return simplify(intersection(zero_fraction_automaton(S), valid_language(S)))


def marker_automaton(S: NumSystem, i: int) -> BuchiAutomaton:
    """Pairs (x, e) where e has a single 1 and x carries digit i at that index."""
    alphabet = seq_alphabet(2, S.M)
    star = star_symbol(2)
    trans = []
    for a in alphabet[:-1]:
        x, e = a
        if e == 0:
            trans += [(0, a, 0), (1, a, 1), (2, a, 2), (3, a, 3)]
        elif e == 1 and x == i:
            trans += [(0, a, 1), (2, a, 3)]
    trans += [(0, star, 2), (1, star, 3)]
    return simplify(BuchiAutomaton(4, alphabet, trans, [0], [3]))


@lru_cache(maxsize=None)
def v_automaton(S: NumSystem, i: int) -> BuchiAutomaton:
    """Pairs (x, y) of normalized words with y = rho(U_j) a single-1 word and x_j = i."""
    if not 0 <= i <= S.M:
        raise ValueError(f"digit {i} outside 0..{S.M}")
    base = intersection(marker_automaton(S, i), tracks_in(valid_language(S), S, 2, [0]))
    return simplify(intersection(base, tracks_in(u_automaton(S), S, 2, [1])))


def tau_marker_automaton(S: NumSystem) -> BuchiAutomaton:
    """Parallel pairs (e_j, e_-j) of single-1 words."""
    M = S.M
    from .omega import parallel_alphabet
    alphabet = parallel_alphabet(2, M)
    zero = ((0, 0), (0, 0))
    # state 4 is the first position, the only place where U_0 maps to itself
    trans = [(4, zero, 0), (0, zero, 0), (3, zero, 3), (4, ((1, 0), (1, 0)), 3)]
    for s in (0, 4):
        # v carries its 1 at depth j (position j-1); u carries its 1 at index j (position j)
        trans.append((s, ((0, 0), (0, 1)), 1))
        # the mirror: u at depth j, v at index j
        trans.append((s, ((0, 1), (0, 0)), 2))
    trans.append((1, ((1, 0), (0, 0)), 3))
    trans.append((2, ((0, 0), (1, 0)), 3))
    return BuchiAutomaton(5, alphabet, trans, [4], [3])


@lru_cache(maxsize=None)
def tau_automaton(S: NumSystem) -> BuchiAutomaton:
    """Parallel pairs (rho(U_j), rho(U_-j)) of normalized single-1 words."""
    u_par = seq_to_parallel(u_automaton(S), 1, S.M)
    from .omega import parallel_alphabet
    alphabet = parallel_alphabet(2, S.M)
    A = tau_marker_automaton(S)
    for j in range(2):
        A = intersection(A, cylinder(u_par, alphabet, [j]))
    # tau fixes U_0 = 1 even when rho(1) carries its 1 at index 1 (Ostrowski with a_1 = 1)
    one = represent(QuadExt(1), S)
    A = union(A, from_upword(par_encode([one, one]), alphabet))
    return simplify(A)


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------


@dataclass
class FeasibilityReport:
    system: str
    criterion_k: int | None
    least_verified_k: int | None
    checked_up_to: int
    details: dict = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"system: {self.system}"]
        if self.criterion_k is not None:
            lines.append(f"least k with base^-k < 1/2: {self.criterion_k}")
        if self.least_verified_k is None:
            lines.append(f"spaced words: not verified up to k = {self.checked_up_to}")
        else:
            lines.append(f"spaced words normalized from k = {self.least_verified_k}")
        for k, ok in sorted(self.details.items()):
            lines.append(f"  k={k}: {'ok' if ok else 'fails'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"system": self.system, "criterion_k": self.criterion_k, "least_verified_k": self.least_verified_k,
                "checked_up_to": self.checked_up_to, "details": {str(k): v for k, v in self.details.items()}}


def spaced_words(k: int, n_int: int = 3, n_pre: int = 2, n_per: int = 2):
    """Words a_n 0^k ... a_0 0^k . a_-1 0^k ... with a_i in {0, 1}, eventually periodic."""
    gap = (0,) * k
    for ints in itertools.product((0, 1), repeat=n_int):
        int_digits = tuple(x for a in ints for x in (a,) + gap)
        for pre in itertools.product((0, 1), repeat=n_pre):
            for per_len in range(1, n_per + 1):
                for per in itertools.product((0, 1), repeat=per_len):
                    yield EpWord(int_digits, tuple(x for a in pre for x in (a,) + gap),
                                 tuple(x for a in per for x in (a,) + gap))


def ostrowski_spaced_words(k: int, n_int: int = 3, n_frac: int = 3):
    """All-ones words (1 0^k)^n . (0^k 1)^m, finite or periodic in the fraction.

    With U_0 = q_0 the index-0 digit and the depth-1 digit are both forced below
    a_1, so the witness shape 1010...*10... appears mirrored around the radix point.
    """
    gap = (0,) * k
    unit = gap + (1,)
    for n in range(1, n_int + 1):
        ints = ((1,) + gap) * n
        for m in range(n_frac + 1):
            yield EpWord(ints, unit * m)
            yield EpWord(ints, unit * m, unit)


def feasibility_check(S: NumSystem, K: int = 8) -> FeasibilityReport:
    criterion = None
    if S.is_power:
        g = S.base
        criterion = next((k for k in range(0, 64) if g ** k > 2), None)
    family = spaced_words if S.is_power else ostrowski_spaced_words
    details = {}
    least = None
    for k in range(K + 1):
        ok = all(is_normalized(w, S) for w in family(k))
        details[k] = ok
        if ok and least is None:
            least = k
    return FeasibilityReport(str(S), criterion, least, K, details)
