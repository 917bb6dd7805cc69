"""Extended omega-words with eventually periodic fractional part, and numeration systems.

A word ``x_N ... x_0 . x_-1 x_-2 ...`` is stored as its integer digits (most
significant first), a fractional preperiod and a fractional period.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .quadfield import (CFExpansion, OrbitCapError, ParseError, QuadExt, cf_expand, complete_quotient, gamma_data,
                        is_algebraic_integer,
                        convergents, difference, is_pisot, _primitive)

DEFAULT_ORBIT_CAP = 10**6


@dataclass(frozen=True)
class EpWord:
    int_digits: tuple[int, ...]
    frac_pre: tuple[int, ...] = ()
    frac_period: tuple[int, ...] = ()

    def __post_init__(self):
        ints = tuple(int(x) for x in self.int_digits)
        pre = tuple(int(x) for x in self.frac_pre)
        per = tuple(int(x) for x in self.frac_period)
        if any(x < 0 for x in ints + pre + per):
            raise ValueError("digits must be nonnegative")
        while len(ints) > 1 and ints[0] == 0:
            ints = ints[1:]
        if not ints:
            ints = (0,)
        per = _primitive(per) if per else ()
        if per and not any(per):
            per = ()
        if per:
            while pre and pre[-1] == per[-1]:
                pre = pre[:-1]
                per = (per[-1],) + per[:-1]
        else:
            while pre and pre[-1] == 0:
                pre = pre[:-1]
        object.__setattr__(self, "int_digits", ints)
        object.__setattr__(self, "frac_pre", pre)
        object.__setattr__(self, "frac_period", per)

    @property
    def max_digit(self) -> int:
        return max(self.int_digits + self.frac_pre + self.frac_period)

    def digit(self, i: int) -> int:
        """Digit at index i (i >= 0 integer part, i < 0 fractional)."""
        if i >= 0:
            return self.int_digits[-1 - i] if i < len(self.int_digits) else 0
        return self.frac_digit(-i)

    def frac_digit(self, k: int) -> int:
        """Fractional digit at depth k >= 1."""
        if k <= len(self.frac_pre):
            return self.frac_pre[k - 1]
        if not self.frac_period:
            return 0
        return self.frac_period[(k - 1 - len(self.frac_pre)) % len(self.frac_period)]

    @property
    def frac_is_zero(self) -> bool:
        return not self.frac_pre and not self.frac_period

    def __str__(self) -> str:
        return format_word(self)

    @classmethod
    def parse(cls, text: str) -> "EpWord":
        return parse_word(text)


def format_word(w: EpWord, commas: bool | None = None) -> str:
    if commas is None:
        commas = w.max_digit > 9
    sep = "," if commas else ""
    out = sep.join(map(str, w.int_digits)) + "."
    if w.frac_pre:
        out += sep.join(map(str, w.frac_pre))
    if w.frac_period:
        if commas and w.frac_pre:
            out += ","
        out += "(" + sep.join(map(str, w.frac_period)) + ")"
    if w.frac_is_zero:
        out += "0"
    return out


_WORD = re.compile(r"^\s*([\d,]+)\.([\d,]*)(?:\(([\d,]+)\))?\s*$")


def parse_word(text: str) -> EpWord:
    m = _WORD.match(text)
    if not m:
        raise ParseError("malformed word literal", text, 0)
    commas = "," in text

    def split(part: str | None) -> tuple[int, ...]:
        if not part:
            return ()
        if commas:
            return tuple(int(t) for t in part.split(",") if t)
        return tuple(int(c) for c in part)

    return EpWord(split(m.group(1)), split(m.group(2)), split(m.group(3)))


# ---------------------------------------------------------------------------
# Numeration systems
# ---------------------------------------------------------------------------


class NumSystem:
    """A power system S_gamma or an Ostrowski system O_alpha.

    Weights: power U_i = gamma^i; Ostrowski U_i = q_i (i >= 0), U_-k = beta_{k-1}.
    """

    kind: str

    def __init__(self, kind: str, base: QuadExt | None = None, cf: CFExpansion | None = None):
        self.kind = kind
        self.base = base
        self.cf = cf
        if kind == "power":
            if base is None or base <= 1:
                raise ValueError("power base must exceed 1")
            self.M = base.ceil() - 1
        elif kind == "ostrowski":
            self.M = cf.M
        else:
            raise ValueError(f"unknown numeration kind {kind!r}")

    @classmethod
    def power(cls, gamma: QuadExt | str) -> "NumSystem":
        if isinstance(gamma, str):
            gamma = QuadExt.parse(gamma)
        return cls("power", base=gamma)

    @classmethod
    def ostrowski(cls, alpha: QuadExt | CFExpansion | str) -> "NumSystem":
        if isinstance(alpha, str):
            alpha = QuadExt.parse(alpha)
        cf = alpha if isinstance(alpha, CFExpansion) else cf_expand(alpha)
        return cls("ostrowski", cf=cf)

    @classmethod
    def parse(cls, text: str) -> "NumSystem":
        kind, _, lit = text.partition(":")
        kind = kind.strip().lower()
        if kind == "power":
            return cls.power(lit)
        if kind == "ostrowski":
            return cls.ostrowski(lit)
        raise ParseError("expected 'power:' or 'ostrowski:'", text, 0)

    @property
    def is_power(self) -> bool:
        return self.kind == "power"

    @property
    def alpha(self) -> QuadExt:
        return self.cf.value()

    @property
    def d(self) -> int:
        return self.base.d if self.is_power else self.alpha.d

    def a(self, k: int) -> int:
        return self.cf[k]

    def weight(self, i: int) -> QuadExt:
        if self.is_power:
            return self.base ** i
        if i >= 0:
            return QuadExt(convergents(self.cf, i)[1])
        return difference(self.cf, -i - 1)

    def __eq__(self, other):
        return isinstance(other, NumSystem) and (self.kind, self.base, self.cf) == (other.kind, other.base, other.cf)

    def __hash__(self):
        return hash((self.kind, self.base, self.cf))

    def __str__(self) -> str:
        return f"power:{self.base}" if self.is_power else f"ostrowski:{self.alpha}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _ostrowski_tail_ratio(cf: CFExpansion) -> tuple[int, QuadExt]:
    """(s, rho) such that beta_{j+P} = rho * beta_j for all j >= s."""
    s = len(cf.preperiod) + 1
    return s, difference(cf, s + cf.P) / difference(cf, s)


def eval_word(w: EpWord, S: NumSystem) -> QuadExt:
    """Exact value sum_i w_i U_i."""
    n = len(w.int_digits)
    total = QuadExt(0)
    for i, d in enumerate(w.int_digits):
        if d:
            total += d * S.weight(n - 1 - i)
    pre, per = w.frac_pre, w.frac_period
    if S.is_power:
        g = S.base
        for k, d in enumerate(pre, start=1):
            if d:
                total += d * g ** (-k)
        if per:
            L = len(per)
            block = sum((d * g ** (-(len(pre) + t + 1)) for t, d in enumerate(per) if d), QuadExt(0))
            total += block / (1 - g ** (-L))
        return total
    cf = S.cf
    if not per:
        for k, d in enumerate(pre, start=1):
            if d:
                total += d * difference(cf, k - 1)
        return total
    s, rho = _ostrowski_tail_ratio(cf)
    L = math.lcm(len(per), cf.P)
    t0 = max(len(pre), s)
    for k in range(1, t0 + 1):
        d = w.frac_digit(k)
        if d:
            total += d * difference(cf, k - 1)
    block = QuadExt(0)
    for k in range(t0 + 1, t0 + L + 1):
        d = w.frac_digit(k)
        if d:
            block += d * difference(cf, k - 1)
    return total + block / (1 - rho ** (L // cf.P))


# ---------------------------------------------------------------------------
# Greedy representations
# ---------------------------------------------------------------------------


def _fractional_orbit(step, state, cap: int) -> tuple[list[int], list[int]]:
    """Iterate ``step(state) -> (digit, next_state)`` until a state repeats."""
    seen: dict = {}
    digits: list[int] = []
    while state not in seen:
        if len(seen) >= cap:
            raise OrbitCapError(f"remainder orbit exceeded {cap} states")
        seen[state] = len(digits)
        d, state = step(state)
        digits.append(d)
    start = seen[state]
    return digits[:start], digits[start:]


def greedy_power_rep(x: QuadExt, gamma: QuadExt, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    """Lexicographically greatest gamma-representation of x >= 0 (the beta-expansion)."""
    x = QuadExt._coerce(x)
    if x < 0:
        raise ValueError("negative input")
    n = 0
    p = QuadExt(1)
    while p * gamma <= x:
        p = p * gamma
        n += 1
    r = x
    ints = []
    for i in range(n, -1, -1):
        d = (r / p).floor() if r >= p else 0
        ints.append(d)
        r -= d * p
        p = p / gamma
    if not r:
        return EpWord(tuple(ints))

    def step(rem):
        y = rem * gamma
        d = y.floor()
        return d, y - d

    pre, per = _fractional_orbit(step, r, cap)
    return EpWord(tuple(ints), tuple(pre), tuple(per))


def _beta(cf: CFExpansion, k: int) -> QuadExt:
    return QuadExt(-1) if k == -1 else difference(cf, k)


def _tail_bounds(cf: CFExpansion, s: int, first_max_allowed: bool) -> tuple[QuadExt, QuadExt]:
    """[inf, sup) of sum_{t >= s} b_t beta_{t-1} over admissible tails."""

    def pattern(t0: int) -> QuadExt:
        v = -_beta(cf, t0 - 2)
        if t0 == s and not first_max_allowed:
            v -= _beta(cf, t0 - 1)
        return v

    odd = s if s % 2 == 1 else s + 1
    even = s if s % 2 == 0 else s + 1
    return pattern(even), pattern(odd)


def _ostrowski_integer(N: int, cf: CFExpansion) -> tuple[int, ...]:
    if N == 0:
        return (0,)
    n = 0
    while convergents(cf, n + 1)[1] <= N:
        n += 1
    digits = []
    for i in range(n, -1, -1):
        q = convergents(cf, i)[1]
        digits.append(N // q)
        N %= q
    return tuple(digits)


def _depth_class(cf: CFExpansion, j: int):
    L = len(cf.preperiod)
    return j if j <= L else ("p", (j - L - 1) % cf.P)


def ostrowski_fraction(c: QuadExt, cf: CFExpansion, cap: int = DEFAULT_ORBIT_CAP) -> tuple[list[int], list[int]]:
    """Normalized fractional digits of c in [-1/zeta_1, 1 - 1/zeta_1)."""
    lo, hi = _tail_bounds(cf, 1, False)
    if not (lo <= c < hi):
        raise ValueError(f"{c} outside the fractional window")

    def step(state):
        j, r, prev_nonzero = state
        beta = difference(cf, j - 1)
        a = cf[j]
        top = a - 1 if j == 1 or prev_nonzero else a
        chosen = None
        for d in range(top + 1):
            lo, hi = _tail_bounds(cf, j + 1, d == 0)
            rest = r - d * beta
            if lo <= rest < hi:
                if chosen is not None:
                    raise ArithmeticError("ambiguous Ostrowski digit")  # pragma: no cover
                chosen = d
        if chosen is None:
            raise ArithmeticError(f"no admissible Ostrowski digit at depth {j}")  # pragma: no cover
        return chosen, (j + 1, r - chosen * beta, chosen != 0)

    # the orbit key normalizes the remainder by the current weight
    seen: dict = {}
    digits: list[int] = []
    state = (1, c, False)
    while True:
        j, r, pn = state
        key = (_depth_class(cf, j), r / difference(cf, j - 1), pn)
        if key in seen:
            start = seen[key]
            return digits[:start], digits[start:]
        if len(seen) >= cap:
            raise OrbitCapError(f"remainder orbit exceeded {cap} states")
        seen[key] = len(digits)
        d, state = step(state)
        digits.append(d)


def ostrowski_rep(x: QuadExt, cf: CFExpansion, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    x = QuadExt._coerce(x)
    if x < 0:
        raise ValueError("negative input")
    shift = 1 / complete_quotient(cf, 1)
    N = (x + shift).floor()
    c = x - N
    ints = _ostrowski_integer(N, cf)
    if not c:
        return EpWord(ints)
    pre, per = ostrowski_fraction(c, cf, cap)
    return EpWord(ints, tuple(pre), tuple(per))


def represent(x, S: NumSystem, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    """The normalized representation rho(x)."""
    if S.is_power:
        return greedy_power_rep(x, S.base, cap)
    return ostrowski_rep(x, S.cf, cap)


# ---------------------------------------------------------------------------
# Normalized forms
# ---------------------------------------------------------------------------


def _seq_item(pre: Sequence[int], per: Sequence[int], i: int) -> int:
    if i < len(pre):
        return pre[i]
    return per[(i - len(pre)) % len(per)] if per else 0


def lex_compare(a: tuple[Sequence[int], Sequence[int]], b: tuple[Sequence[int], Sequence[int]]) -> int:
    """Lexicographic order of two eventually periodic sequences (prefix, period)."""
    (ap, aq), (bp, bq) = a, b
    n = max(len(ap), len(bp)) + math.lcm(len(aq) or 1, len(bq) or 1)
    for i in range(n):
        x, y = _seq_item(ap, aq, i), _seq_item(bp, bq, i)
        if x != y:
            return -1 if x < y else 1
    return 0


@lru_cache(maxsize=None)
def quasi_greedy_one(gamma: QuadExt) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Quasi-greedy expansion d*(1) of 1 in base gamma, as (prefix, period)."""
    seen: dict[QuadExt, int] = {}
    digits: list[int] = []
    r = QuadExt(1)
    while r and r not in seen:
        if len(seen) > DEFAULT_ORBIT_CAP:
            raise OrbitCapError("expansion of 1 did not become periodic")
        seen[r] = len(digits)
        y = gamma * r
        d = y.floor()
        digits.append(d)
        r = y - d
    if not r:
        digits[-1] -= 1
        return (), tuple(digits)
    i = seen[r]
    return tuple(digits[:i]), tuple(digits[i:])


def _suffixes(w: EpWord) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    stem = w.int_digits + w.frac_pre
    per = w.frac_period
    for s in range(len(stem)):
        yield stem[s:], per
    for t in range(len(per)):
        yield (), per[t:] + per[:t]


def parry_admissible(w: EpWord, gamma: QuadExt, strict: bool = True) -> bool:
    """Every suffix is below (or with strict=False, at most) the quasi-greedy expansion of 1."""
    bound = quasi_greedy_one(gamma)
    limit = 0 if strict else 1
    return all(lex_compare(s, bound) < limit for s in _suffixes(w))


def _frac_horizon(w: EpWord, cf: CFExpansion) -> tuple[int, int]:
    """(t0, L): the pair (digit, partial quotient) at depth k is L-periodic for k > t0."""
    t0 = max(len(w.frac_pre), len(cf.preperiod) + 1)
    return t0, math.lcm(len(w.frac_period) or 1, cf.P, 2)


def ostrowski_digits_ok(w: EpWord, cf: CFExpansion, buchi: bool = True) -> bool:
    """Local digit rules of the Ostrowski system, plus (optionally) the odd-depth condition."""
    ints = w.int_digits[::-1]  # ints[i] is the digit at index i
    for i, b in enumerate(ints):
        a = cf[i + 1]
        if b > a or (i == 0 and b == a):
            return False
        if i > 0 and b == a and ints[i - 1] != 0:
            return False
    t0, L = _frac_horizon(w, cf)
    prev = 0
    for k in range(1, t0 + L + 2):
        b, a = w.frac_digit(k), cf[k]
        if b > a or (k == 1 and b == a) or (k > 1 and b == a and prev != 0):
            return False
        prev = b
    if buchi and w.frac_period:
        if not any(w.frac_digit(k) < cf[k] for k in range(t0 + 1, t0 + L + 1) if k % 2 == 1):
            return False
    return True


def _first_nonzero_depth(w: EpWord) -> int | None:
    for k, d in enumerate(w.frac_pre + w.frac_period, start=1):
        if d:
            return k
    return None


def is_admissible(w: EpWord, S: NumSystem) -> bool:
    """Digit rules of S without the sign requirement (negative Ostrowski fractions pass)."""
    if w.max_digit > S.M:
        return False
    if S.is_power:
        return parry_admissible(w, S.base)
    return ostrowski_digits_ok(w, S.cf)


def is_normalized(w: EpWord, S: NumSystem) -> bool:
    """Whether w lies in the image of the normalization map rho."""
    if not is_admissible(w, S):
        return False
    if S.is_power or any(w.int_digits):
        return True
    k = _first_nonzero_depth(w)
    return k is None or k % 2 == 1


def compare(w1: EpWord, w2: EpWord, S: NumSystem) -> int:
    """Sign of value(w1) - value(w2), read off the digits.

    Words breaking the digit rules of S are compared by exact evaluation instead.
    """
    if not (is_admissible(w1, S) and is_admissible(w2, S)):
        return eval_word(w1, S).compare(eval_word(w2, S))
    n = max(len(w1.int_digits), len(w2.int_digits))
    i1 = (0,) * (n - len(w1.int_digits)) + w1.int_digits
    i2 = (0,) * (n - len(w2.int_digits)) + w2.int_digits
    if i1 != i2:
        return -1 if i1 < i2 else 1
    if S.is_power:
        return lex_compare((w1.frac_pre, w1.frac_period), (w2.frac_pre, w2.frac_period))
    n = max(len(w1.frac_pre), len(w2.frac_pre)) + math.lcm(len(w1.frac_period) or 1, len(w2.frac_period) or 1)
    for k in range(1, n + 1):
        x, y = w1.frac_digit(k), w2.frac_digit(k)
        if x != y:
            smaller_first = (x < y) == (k % 2 == 1)
            return -1 if smaller_first else 1
    return 0


def normalize(w: EpWord, S: NumSystem, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    return represent(eval_word(w, S), S, cap)


def add(w1: EpWord, w2: EpWord, S: NumSystem, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    return represent(eval_word(w1, S) + eval_word(w2, S), S, cap)


# ---------------------------------------------------------------------------
# Changing base: gamma^n <-> gamma, and Ostrowski -> power
# ---------------------------------------------------------------------------


def spread(w: EpWord, n: int) -> EpWord:
    """Place digit w_i at index n*i, zeros elsewhere."""
    pad = (0,) * (n - 1)

    def inner(ds):
        out: list[int] = []
        for d in ds:
            out.append(d)
            out.extend(pad)
        return out

    ints = [d for d in inner(w.int_digits)]
    ints = ints[: len(ints) - (n - 1)]
    pre = [x for d in w.frac_pre for x in (*pad, d)]
    per = [x for d in w.frac_period for x in (*pad, d)]
    return EpWord(tuple(ints), tuple(pre), tuple(per))


def regroup(w: EpWord, gamma: QuadExt, n: int, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    """S_{gamma^n}-word to the S_gamma-normalized word of the same value."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return greedy_power_rep(eval_word(spread(w, n), NumSystem.power(gamma)), gamma, cap)


def ungroup(w: EpWord, gamma: QuadExt, n: int, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    """S_gamma-word to the S_{gamma^n}-normalized word of the same value."""
    if n < 1:
        raise ValueError("n must be >= 1")
    big = gamma ** n
    return greedy_power_rep(eval_word(w, NumSystem.power(gamma)), big, cap)


def _unit_exponents(gamma: QuadExt, lam: QuadExt, bound: int = 64) -> tuple[int, int]:
    """Least (k, l) with gamma^k = lam^l."""
    lg, ll = math.log(float(gamma)), math.log(float(lam))
    for total in range(2, 2 * bound + 1):
        for k in range(1, total):
            l = total - k
            if abs(k * lg - l * ll) < 1e-9 * (k * lg) and gamma ** k == lam ** l:
                return k, l
    raise ValueError(f"{gamma} and {lam} have no multiplicative relation with exponents <= {bound}")


def _track_value(w: EpWord, cf: CFExpansion) -> QuadExt:
    """Value of an Ostrowski word through the closed forms of the period matrix.

    Digits are grouped by index residue modulo the (determinant +1) period; each
    residue class is a word in base norm (integer part) or base conj (fractional
    part) scaled by the fitted constants. Indices below the fit threshold are
    weighed directly.
    """
    data = gamma_data(cf, 1 if gamma_data(cf).det == 1 else 2)
    P, lam, mu = data.period, data.norm, data.conj
    total = QuadExt(0)
    for pos, dgt in enumerate(reversed(w.int_digits)):
        if not dgt:
            continue
        n, r = divmod(pos, P)
        c = data.constants[r]
        if n >= c.m:
            total += dgt * (c.C * lam ** n + c.D * mu ** n)
        else:
            total += dgt * convergents(cf, pos)[1]

    def frac_weight(k: int) -> QuadExt:
        n, r = divmod(k - 1, P)
        c = data.constants[r]
        return c.E * mu ** n if n >= c.m else difference(cf, k - 1)

    pre, per = w.frac_pre, w.frac_period
    if not per:
        return total + sum((d * frac_weight(k) for k, d in enumerate(pre, 1) if d), QuadExt(0))
    L = math.lcm(len(per), P)
    t0 = max(len(pre), max(c.m for c in data.constants) * P + P)
    t0 += (-t0) % P
    for k in range(1, t0 + 1):
        d = w.frac_digit(k)
        if d:
            total += d * frac_weight(k)
    block = sum((w.frac_digit(k) * frac_weight(k) for k in range(t0 + 1, t0 + L + 1) if w.frac_digit(k)), QuadExt(0))
    return total + block / (1 - mu ** (L // P))


def convert_phi(w: EpWord, cf: CFExpansion, gamma: QuadExt, cap: int = DEFAULT_ORBIT_CAP) -> EpWord:
    """Map an Ostrowski-normalized word to the S_gamma-normalized word of the same value."""
    S = NumSystem.ostrowski(cf)
    gamma = QuadExt._coerce(gamma)
    if gamma <= 1 or gamma.is_rational or gamma.d != cf.d or not is_algebraic_integer(gamma) \
            or abs(gamma.norm()) != 1:
        raise ValueError(f"{gamma} is not a unit > 1 of the field of {cf}")
    if not is_normalized(w, S):
        raise ValueError(f"{w} is not {S}-normalized")
    data = gamma_data(cf, 1 if gamma_data(cf).det == 1 else 2)
    _unit_exponents(gamma, data.norm)
    x = _track_value(w, cf)
    out = greedy_power_rep(x, gamma, cap)
    if eval_word(out, NumSystem.power(gamma)) != eval_word(w, S):
        raise ArithmeticError("conversion changed the value")  # pragma: no cover
    return out
