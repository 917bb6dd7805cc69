"""Exact arithmetic in real quadratic fields and continued fractions of quadratic irrationals."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

Rational = Union[int, Fraction]


class FieldMismatchError(ValueError):
    pass


def squarefree_part(n: int) -> tuple[int, int]:
    """Return (s, f) with n == f*f*s and s squarefree."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    f = 1
    s = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1 if p == 2 else 2
    return s * n, f


def _is_squarefree(d: int) -> bool:
    return d >= 2 and squarefree_part(d)[0] == d


class QuadExt:
    """An element a + b*sqrt(d) of the real quadratic field Q(sqrt d).

    Elements with b == 0 are plain rationals and combine with any field.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        if b != 0:
            if d < 2:
                raise ValueError(f"radicand must be >= 2, got {d}")
            s, f = squarefree_part(d)
            b *= f
            d = s
            if d == 1:
                a, b, d = a + b, Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d if b != 0 else d if _is_squarefree(d) else 0)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, n: int) -> "QuadExt":
        return cls(0, 1, n)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- coercion ---------------------------------------------------------
    def _field(self, other: "QuadExt") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or other.d == self.d:
            return self.d
        raise FieldMismatchError(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")

    @staticmethod
    def _coerce(x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadExt(x)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadExt(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadExt(self.a * other.a + self.b * other.b * d,
                       self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def compare(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __floor__(self) -> int:
        return self.floor()

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        q = math.lcm(self.a.denominator, self.b.denominator)
        p = int(self.a * q)
        m = int(self.b * q)
        root = math.isqrt(m * m * self.d)
        # m*sqrt(d) is irrational, so its floor is isqrt or -isqrt-1
        fl = root if m > 0 else -root - 1
        return (p + fl) // q

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        if not self:
            return 0.0
        k = 64
        while True:
            v = (self * (1 << k)).floor()
            if abs(v) >= 1 << 60 or k > 1 << 16:
                return float(Fraction(v, 1 << k))
            k += max(64, 60 - abs(v).bit_length())

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        if self.b == 0:
            return _fmt_rational(self.a)
        coef = abs(self.b)
        body = ("" if coef == 1 else _fmt_rational(coef)) + f"√{self.d}"
        if self.a == 0:
            return ("-" if self.b < 0 else "") + body
        return _fmt_rational(self.a) + ("-" if self.b < 0 else "+") + body

    def __repr__(self) -> str:
        return f"QuadExt({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "QuadExt":
        return parse_quadext(text)


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_TERM = re.compile(
    r"(?P<sign>[+-]?)\s*"
    r"(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*"
    r"(?:(?:√|sqrt)\s*(?:\(\s*(?P<prad>\d+)\s*\)|(?P<rad>\d+)))?"
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def parse_quadext(text: str) -> QuadExt:
    """Parse "a+b√d" literals such as "1/2+1/2√5", "1+sqrt2" or "(1+√5)/2"."""
    return _parse_sum(text, 0, len(text), text)


def _parse_sum(src: str, start: int, end: int, text: str) -> QuadExt:
    """Parse src[start:end]; error positions refer to the full text."""
    while start < end and src[start].isspace():
        start += 1
    while end > start and src[end - 1].isspace():
        end -= 1
    m = re.compile(r"\((.*)\)\s*/\s*(\d+)").fullmatch(src, start, end)
    if m:
        return _parse_sum(src, m.start(1), m.end(1), text) / int(m.group(2))
    pos = start
    total = QuadExt(0)
    seen = False
    while pos < end:
        while pos < end and src[pos].isspace():
            pos += 1
        if pos >= end:
            break
        m = _TERM.match(src, pos, end)
        if not m or m.end() == pos or (not m.group("coef") and not (m.group("rad") or m.group("prad"))):
            lead = re.compile(r"[+-]?\s*").match(src, pos, end)
            raise ParseError("expected a term", text, lead.end())
        if seen and not m.group("sign"):
            raise ParseError("expected '+' or '-'", text, pos)
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        rad = m.group("rad") or m.group("prad")
        total = total + (QuadExt(0, coef, int(rad)) if rad else QuadExt(coef))
        seen = True
        pos = m.end()
    if not seen:
        raise ParseError("empty literal", text, start)
    return total


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------


def _primitive(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def _matrix_product(digits) -> tuple[int, int, int, int]:
    """Product of [[a, 1], [1, 0]] over digits, as (p, p', q, q')."""
    p, pp, q, qq = 1, 0, 0, 1
    for a in digits:
        p, pp, q, qq = p * a + pp, p, q * a + qq, q
    return p, pp, q, qq


@dataclass(frozen=True)
class CFExpansion:
    """Ultimately periodic continued fraction [a0; preperiod, (period)]."""

    a0: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(a) for a in self.preperiod)
        per = _primitive(tuple(int(a) for a in self.period))
        if not per:
            raise ValueError("period must be nonempty")
        if any(a < 1 for a in pre + per):
            raise ValueError("partial quotients after a0 must be positive")
        # fold the preperiod tail into the period while it matches
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(k)
        if k == 0:
            return self.a0
        if k <= len(self.preperiod):
            return self.preperiod[k - 1]
        return self.period[(k - 1 - len(self.preperiod)) % len(self.period)]

    @property
    def P(self) -> int:
        return len(self.period)

    @property
    def N(self) -> int:
        """Least n with a_k = a_{k+P} for all k >= n (a0 included)."""
        n = len(self.preperiod) + 1
        while n > 0 and self[n - 1] == self[n - 1 + self.P]:
            n -= 1
        return n

    @property
    def M(self) -> int:
        return max(self.preperiod + self.period)

    @property
    def d(self) -> int:
        return self.value().d

    def value(self) -> QuadExt:
        return _cf_value(self)

    def shift(self, k: int) -> "CFExpansion":
        """The expansion of the complete quotient zeta_k."""
        if k == 0:
            return self
        pre = self.preperiod
        if k <= len(pre):
            return CFExpansion(pre[k - 1], pre[k:], self.period)
        r = (k - 1 - len(pre)) % self.P
        rot = self.period[r:] + self.period[:r]
        return CFExpansion(rot[0], (), rot[1:] + rot[:1])

    def __str__(self) -> str:
        parts = [str(a) for a in self.preperiod]
        parts.append("(" + " ".join(str(a) for a in self.period) + ")")
        return f"[{self.a0}; " + " ".join(parts) + "]"

    @classmethod
    def parse(cls, text: str) -> "CFExpansion":
        m = re.fullmatch(r"\s*\[\s*(-?\d+)\s*;\s*([\d\s]*)\(\s*([\d\s]+)\)\s*\]\s*", text)
        if not m:
            raise ParseError("malformed continued fraction", text, 0)
        return cls(int(m.group(1)), tuple(int(t) for t in m.group(2).split()),
                   tuple(int(t) for t in m.group(3).split()))


def _sqrt_in_field(disc: int) -> QuadExt:
    if disc <= 0:
        raise ValueError("non-positive discriminant")
    s, f = squarefree_part(disc)
    return QuadExt(f) if s == 1 else QuadExt(0, f, s)


@lru_cache(maxsize=None)
def _cf_value(cf: CFExpansion) -> QuadExt:
    p, pp, q, qq = _matrix_product(cf.period)
    # purely periodic tail y solves q*y^2 + (qq - p)*y - pp = 0, y > 1
    y = (QuadExt(p - qq) + _sqrt_in_field((p - qq) ** 2 + 4 * q * pp)) / (2 * q)
    A, B, C, D = _matrix_product((cf.a0,) + cf.preperiod)
    return (A * y + B) / (C * y + D)


class OrbitCapError(RuntimeError):
    pass


def _surd_form(x: QuadExt) -> tuple[int, int, int]:
    """Integers (P, Q, D) with x = (P + sqrt(D)) / Q and Q dividing D - P^2."""
    den = math.lcm(x.a.denominator, x.b.denominator)
    A, B = int(x.a * den), int(x.b * den)
    P0, Q0 = (A, den) if B > 0 else (-A, -den)
    D0 = B * B * x.d
    return P0 * abs(Q0), Q0 * abs(Q0), D0 * Q0 * Q0


def cf_expand(x: QuadExt, cap: int = 10**6) -> CFExpansion:
    """Continued fraction of an irrational quadratic x by the reduced-surd iteration.

    The state (P, Q) of a complete quotient (P + sqrt D)/Q is integral, so cycle
    detection is exact and cheap.
    """
    if x.is_rational:
        raise ValueError(f"{x} is rational; its expansion is finite, not periodic")
    P, Q, D = _surd_form(x)
    s = math.isqrt(D)

    def floor_of(P, Q):
        return (P + s) // Q if Q > 0 else -((P + s) // -Q) - 1

    def step(P, Q, a):
        P2 = a * Q - P
        return P2, (D - P2 * P2) // Q

    a0 = floor_of(P, Q)
    P, Q = step(P, Q, a0)
    seen: dict[tuple[int, int], int] = {}
    digits: list[int] = []
    while (P, Q) not in seen:
        if len(seen) >= cap:
            raise OrbitCapError(f"no period found within {cap} complete quotients")
        seen[(P, Q)] = len(digits)
        a = floor_of(P, Q)
        digits.append(a)
        P, Q = step(P, Q, a)
    start = seen[(P, Q)]
    return CFExpansion(a0, tuple(digits[:start]), tuple(digits[start:]))


_PQ: dict[CFExpansion, list[tuple[int, int]]] = {}


def _pq_table(cf: CFExpansion, k: int) -> list[tuple[int, int]]:
    # index i holds (p_{i-1}, q_{i-1}); entry 0 is the seed (1, 0)
    table = _PQ.setdefault(cf, [(1, 0), (cf.a0, 1)])
    while len(table) <= k + 1:
        i = len(table) - 1
        a = cf[i]
        (p1, q1), (p0, q0) = table[-1], table[-2]
        table.append((a * p1 + p0, a * q1 + q0))
    return table


def convergents(cf: CFExpansion, k: int) -> tuple[int, int]:
    """(p_k, q_k); k = -1 gives the seed (1, 0)."""
    if k < -1:
        raise ValueError("k must be >= -1")
    return _pq_table(cf, k)[k + 1]


def difference(cf: CFExpansion, k: int) -> QuadExt:
    p, q = convergents(cf, k)
    return q * cf.value() - p


def complete_quotient(cf: CFExpansion, k: int) -> QuadExt:
    return cf.shift(k).value()


# ---------------------------------------------------------------------------
# Period matrix and shifting constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidueConstants:
    m: int
    C: QuadExt
    D: QuadExt
    E: QuadExt


@dataclass(frozen=True)
class GammaData:
    """Period matrix of a continued fraction and its closed-form constants.

    For each residue k < period and n >= m:
        q_{n*period+k}    = C * norm**n + D * conj**n
        beta_{n*period+k} = E * conj**n
    where conj = det / norm is the second eigenvalue.
    """

    gamma_alpha: tuple[tuple[int, int], tuple[int, int]]
    det: int
    norm: QuadExt
    period: int
    constants: tuple[ResidueConstants, ...] = field(repr=False)

    @property
    def conj(self) -> QuadExt:
        return self.det / self.norm


def _fit_residue(cf: CFExpansion, period: int, k: int, lam1: QuadExt, lam2: QuadExt,
                 window: int = 11) -> ResidueConstants:
    alpha = cf.value()
    for m in range(0, 64):
        q0 = convergents(cf, m * period + k)[1]
        q1 = convergents(cf, (m + 1) * period + k)[1]
        l1m, l2m = lam1 ** m, lam2 ** m
        # C*l1m + D*l2m = q0 ; C*l1m*lam1 + D*l2m*lam2 = q1
        det = l1m * l2m * (lam2 - lam1)
        C = (q0 * l2m * lam2 - q1 * l2m) / det
        D = (q1 * l1m - q0 * l1m * lam1) / det
        E = difference(cf, m * period + k) / l2m
        ok = True
        for n in range(m, m + window + 1):
            idx = n * period + k
            q = convergents(cf, idx)[1]
            if C * lam1 ** n + D * lam2 ** n != q or E * lam2 ** n != difference(cf, idx):
                ok = False
                break
        if ok:
            return ResidueConstants(m, C, D, E)
    raise ArithmeticError(f"closed form for residue {k} not found")  # pragma: no cover


@lru_cache(maxsize=None)
def gamma_data(cf: CFExpansion, period_multiple: int = 1) -> GammaData:
    """Period matrix product, its dominant eigenvalue and per-residue constants.

    ``period_multiple`` > 1 treats a repeated period as the period (e.g. 2 to
    force determinant +1).
    """
    P = cf.P * period_multiple
    start = cf.N
    p, pp, q, qq = _matrix_product(cf[i] for i in range(start, start + P))
    det = p * qq - pp * q
    tr = p + qq
    lam1 = (tr + _sqrt_in_field(tr * tr - 4 * det)) / 2
    lam2 = det / lam1
    consts = tuple(_fit_residue(cf, P, k, lam1, lam2) for k in range(P))
    return GammaData(((p, pp), (q, qq)), det, lam1, P, consts)


# ---------------------------------------------------------------------------
# Pisot test, multiplicative independence
# ---------------------------------------------------------------------------


def is_algebraic_integer(x: QuadExt) -> bool:
    return x.trace().denominator == 1 and x.norm().denominator == 1


def is_pisot(x: QuadExt) -> bool:
    if x <= 1 or not is_algebraic_integer(x):
        return False
    if x.is_rational:
        return True
    return abs(x.conjugate()) < 1


def same_field(x: QuadExt, y: QuadExt) -> bool:
    if x.is_rational or y.is_rational:
        raise ValueError("same_field expects irrational quadratics")
    return x.d == y.d


class Independence(enum.Enum):
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"
    UNKNOWN = "unknown"


def mult_independent(x: QuadExt, y: QuadExt, bound: int = 64) -> Independence:
    """Whether x^m = y^n has no solution in positive integers m, n.

    Distinct fields are always independent. Inside one field the search is
    exhaustive up to ``bound``; nothing found yields UNKNOWN.
    """
    if x.is_rational or y.is_rational or x <= 0 or y <= 0:
        raise ValueError("expected positive irrational quadratics")
    if not same_field(x, y):
        return Independence.INDEPENDENT
    lx, ly = math.log(float(x)), math.log(float(y))
    if lx == 0 or ly == 0 or (lx > 0) != (ly > 0):
        return Independence.UNKNOWN
    powers_x = {}
    for m in range(1, bound + 1):
        for n in range(1, bound + 1):
            if math.gcd(m, n) != 1 or abs(m * lx - n * ly) > 1e-6 * max(1.0, abs(m * lx)):
                continue
            xm = powers_x.get(m) or powers_x.setdefault(m, x ** m)
            if xm == y ** n:
                return Independence.DEPENDENT
    return Independence.UNKNOWN


# ---------------------------------------------------------------------------
# Growth constants of pumped digit words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PumpingResult:
    constant: QuadExt
    ratios: tuple[tuple[int, float], ...]


def _digits(word: str) -> list[int]:
    if "," in word:
        return [int(t) for t in word.split(",") if t]
    return [int(c) for c in word]


def integer_word_value(word, cf: CFExpansion) -> int:
    """Value of a most-significant-first digit word against the weights q_0, q_1, ..."""
    ds = _digits(word) if isinstance(word, str) else list(word)
    n = len(ds)
    if n == 0:
        return 0
    _pq_table(cf, n)
    return sum(d * convergents(cf, n - 1 - i)[1] for i, d in enumerate(ds))


def pumping_constant(u, v, w, cf: CFExpansion, n_max: int = 40) -> PumpingResult:
    """Limit of [u v^(P n) w] / norm^(|v| n) as n grows.

    Returns the exact limit and the exactly evaluated ratios for n = 1..n_max.
    """
    du = _digits(u) if isinstance(u, str) else list(u)
    dv = _digits(v) if isinstance(v, str) else list(v)
    dw = _digits(w) if isinstance(w, str) else list(w)
    if not dv:
        raise ValueError("v must be nonempty")
    if not any(du) and not any(dv):
        raise ValueError("[u] and [v] are both zero")
    g = gamma_data(cf)
    P, lam = g.period, g.norm

    def weight(e: int) -> QuadExt:
        k = e % P
        return g.constants[k].C * lam ** (e // P)

    total = QuadExt(0)
    for j, d in enumerate(reversed(du)):
        if d:
            total += d * weight(len(dw) + j)
    block = QuadExt(0)
    for T in range(P):
        for j, d in enumerate(reversed(dv)):
            if d:
                block += d * weight(len(dw) + j - (T + 1) * len(dv))
    total += block / (1 - lam ** (-len(dv)))
    ratios = []
    for n in range(1, n_max + 1):
        word = du + dv * (P * n) + dw
        ratios.append((n, float(integer_word_value(word, cf) / lam ** (len(dv) * n))))
    return PumpingResult(total, tuple(ratios))
