"""First-order formulas over (R>=0, <, +, U0, V_i, tau), compiled to Buchi automata.

Variables range over nonnegative reals. Every compiled automaton accepts, on
each track, words of the closure domain (see ``recognizers.domain_automaton``);
relations are value-determined on that domain, so negation is complement
intersected with the domain and existential quantification is projection.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable, Union

from .epwords import EpWord, NumSystem, eval_word, represent
from .omega import (BuchiAutomaton, UpWord, complement, cylinder, emptiness, intersection, pad_closure,
                    parallel_alphabet, project, seq_to_parallel, simplify, union)
from .quadfield import ParseError, QuadExt
from .recognizers import (check_eligible, domain_automaton, linear_automaton, marker_automaton, par_decode,
                          product_domain, seq_alphabet, seq_decode, tau_marker_automaton, unit_word_automaton,
                          valid_language, zero_fraction_automaton)

# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Linear:
    """sum coefs[v] * v + const  (==|>)  0, with coefs as sorted (var, int) pairs."""

    coefs: tuple[tuple[str, int], ...]
    const: int
    relation: str  # "eq" or "gt"

    def variables(self) -> list[str]:
        return [v for v, _ in self.coefs]


@dataclass(frozen=True)
class Digit:
    """V_i(x, u): u = U_j for some j and the j-th digit of rho(x) is i."""

    digit: int
    x: str
    u: str


@dataclass(frozen=True)
class Tau:
    """tau(u) = v: u = U_j and v = U_-j."""

    u: str
    v: str


@dataclass(frozen=True)
class Nat:
    x: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"
    nat: bool = False


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"
    nat: bool = False


Formula = Union[Linear, Digit, Tau, Nat, Const, Not, And, Or, Exists, Forall]


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Linear):
        return set(f.variables())
    if isinstance(f, Digit):
        return {f.x, f.u}
    if isinstance(f, Tau):
        return {f.u, f.v}
    if isinstance(f, Nat):
        return {f.x}
    if isinstance(f, Const):
        return set()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def uses_tau(f: Formula) -> bool:
    if isinstance(f, Tau):
        return True
    if isinstance(f, Not):
        return uses_tau(f.body)
    if isinstance(f, (And, Or)):
        return uses_tau(f.left) or uses_tau(f.right)
    if isinstance(f, (Exists, Forall)):
        return uses_tau(f.body)
    return False


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


_TOKEN = re.compile(r"\s*(?:(->)|(tau)\b|(nat)\b|(true|false)\b|V(\d+)|(U0)\b|([A-Za-z_][A-Za-z_0-9']*)|(\d+)"
                    r"|([().,&|!=<+]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        arrow, tau, nat, const, vdig, u0, name, num, punct = m.groups()
        if arrow:
            out.append(("op", "->", start))
        elif tau:
            out.append(("tau", tau, start))
        elif nat:
            out.append(("nat", nat, start))
        elif const:
            out.append(("const", const, start))
        elif vdig is not None:
            out.append(("V", vdig, start))
        elif u0:
            out.append(("U0", u0, start))
        elif name:
            kind = "quant" if name in ("E", "A") else "name"
            out.append((kind, name, start))
        elif num:
            out.append(("num", num, start))
        else:
            out.append(("op", punct, start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.formula()
        self.take("eof")
        return f

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[:2] == ("op", "->"):
            self.take()
            right = self.formula()
            return Or(Not(left), right)
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[:2] == ("op", "|"):
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[:2] == ("op", "&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok[:2] == ("op", "!"):
            self.take()
            return Not(self.unary())
        if tok[0] == "quant":
            self.take()
            nat = False
            if self.peek()[0] == "nat":
                self.take()
                nat = True
            var = self.take("name")[1]
            self.take("op", ".")
            body = self.formula()
            return (Exists if tok[1] == "E" else Forall)(var, body, nat)
        if tok[:2] == ("op", "("):
            # a parenthesized formula, unless it is the start of a term like (x+y)=z
            save = self.i
            self.take()
            try:
                f = self.formula()
                self.take("op", ")")
                if self.peek()[:2] not in (("op", "="), ("op", "<"), ("op", "+")):
                    return f
            except ParseError:
                pass
            self.i = save
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok[0] == "const":
            self.take()
            return Const(tok[1] == "true")
        if tok[0] == "V":
            self.take()
            self.take("op", "(")
            x = self.take("name")[1]
            self.take("op", ",")
            u = self.take("name")[1]
            self.take("op", ")")
            return Digit(int(tok[1]), x, u)
        if tok[0] == "tau":
            self.take()
            self.take("op", "(")
            u = self.take("name")[1]
            self.take("op", ")")
            self.take("op", "=")
            v = self.take("name")[1]
            return Tau(u, v)
        if tok[0] == "nat" and self.toks[self.i + 1][:2] == ("op", "("):
            self.take()
            self.take("op", "(")
            x = self.take("name")[1]
            self.take("op", ")")
            return Nat(x)
        left = self.term()
        op = self.peek()
        if op[:2] not in (("op", "="), ("op", "<")):
            raise ParseError("expected '=' or '<'", self.text, op[2])
        self.take()
        right = self.term()
        coefs: dict[str, int] = {}
        const = 0
        # right - left (== 0 or > 0)
        for sign, (cs, k) in ((1, right), (-1, left)):
            for v, c in cs.items():
                coefs[v] = coefs.get(v, 0) + sign * c
            const += sign * k
        items = tuple(sorted((v, c) for v, c in coefs.items() if c))
        return Linear(items, const, "eq" if op[1] == "=" else "gt")

    def term(self) -> tuple[dict[str, int], int]:
        coefs: dict[str, int] = {}
        const = 0
        while True:
            tok = self.peek()
            if tok[:2] == ("op", "("):
                self.take()
                cs, k = self.term()
                self.take("op", ")")
                for v, c in cs.items():
                    coefs[v] = coefs.get(v, 0) + c
                const += k
            elif tok[0] == "name":
                self.take()
                coefs[tok[1]] = coefs.get(tok[1], 0) + 1
            elif tok[0] == "U0":
                self.take()
                const += 1
            elif tok[0] == "num":
                self.take()
                n = int(tok[1])
                if self.peek()[0] == "name":
                    v = self.take()[1]
                    coefs[v] = coefs.get(v, 0) + n
                elif self.peek()[0] == "U0":
                    self.take()
                    const += n
                else:
                    const += n  # a numeral n stands for n * U0
            else:
                raise ParseError("expected a term", self.text, tok[2])
            if self.peek()[:2] == ("op", "+"):
                self.take()
                continue
            return coefs, const


def parse_formula(text: str) -> Formula:
    """Parse the formula grammar: E x. / A x. / E nat x., & | ! ->, x+y=z, x<y, V2(x,u), tau(u)=v, nat(x)."""
    return _Parser(text).parse()


def format_formula(f: Formula) -> str:
    if isinstance(f, Linear):
        pos = [(v, c) for v, c in f.coefs if c > 0]
        neg = [(v, -c) for v, c in f.coefs if c < 0]

        def side(items, k):
            parts = [(f"{c}{v}" if c != 1 else v) for v, c in items]
            if k:
                parts.append("U0" if k == 1 else f"{k}U0")
            return "+".join(parts) or "0"

        kp, kn = (f.const, 0) if f.const > 0 else (0, -f.const)
        op = "=" if f.relation == "eq" else "<"
        return f"{side(neg, kn)}{op}{side(pos, kp)}"
    if isinstance(f, Digit):
        return f"V{f.digit}({f.x},{f.u})"
    if isinstance(f, Tau):
        return f"tau({f.u})={f.v}"
    if isinstance(f, Nat):
        return f"nat({f.x})"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return f"!({format_formula(f.body)})"
    if isinstance(f, And):
        return f"({format_formula(f.left)} & {format_formula(f.right)})"
    if isinstance(f, Or):
        return f"({format_formula(f.left)} | {format_formula(f.right)})"
    q = "E" if isinstance(f, Exists) else "A"
    sort = "nat " if f.nat else ""
    return f"{q} {sort}{f.var}. {format_formula(f.body)}"


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------


class CompileError(ValueError):
    pass


class Compiler:
    """Compiles formulas for one numeration system and encoding mode, caching atoms."""

    def __init__(self, S: NumSystem, mode: str = "sequential"):
        if mode not in ("sequential", "parallel"):
            raise ValueError("mode must be 'sequential' or 'parallel'")
        check_eligible(S)
        self.S = S
        self.mode = mode
        self._lock = threading.Lock()
        self._cache: dict = {}

    # -- helpers ---------------------------------------------------------------

    def alphabet(self, k: int) -> list:
        if self.mode == "sequential":
            return seq_alphabet(k, self.S.M)
        return parallel_alphabet(k, self.S.M)

    def _memo(self, key, build):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = build()
        with self._lock:
            self._cache.setdefault(key, value)
        return value

    def _pad(self, A: BuchiAutomaton, k: int) -> BuchiAutomaton:
        # sequential encodings of the remaining tracks may now carry superfluous leading zeros
        if self.mode == "sequential" and k:
            return pad_closure(A, tuple(0 for _ in range(k)))
        return A

    def domain(self, k: int) -> BuchiAutomaton:
        def build():
            if self.mode == "sequential" or k == 0:
                A = product_domain(self.S, k)
                if k == 0:
                    return A
                return A
            one = seq_to_parallel(domain_automaton(self.S), 1, self.S.M)
            out = None
            for j in range(k):
                C = cylinder(one, self.alphabet(k), [j])
                out = C if out is None else intersection(out, C)
            return simplify(out)

        return self._memo(("domain", k), build)

    def _lift(self, A: BuchiAutomaton, k: int) -> BuchiAutomaton:
        """Sequential k-track relation (already inside the domain) to the current mode."""
        if self.mode == "sequential":
            return A
        return seq_to_parallel(A, k, self.S.M)

    def _seq_exists(self, parts: list[tuple[BuchiAutomaton, list[int]]], k: int, keep: int) -> BuchiAutomaton:
        """Intersect sequential automata placed on tracks of a k-track alphabet, then drop tracks >= keep."""
        alphabet = seq_alphabet(k, self.S.M)
        out = None
        for A, positions in parts:
            C = cylinder(A, alphabet, positions)
            out = C if out is None else simplify(intersection(out, C))
        for j in range(k - 1, keep - 1, -1):
            out = simplify(project(out, j))
        return simplify(pad_closure(out, tuple(0 for _ in range(keep))))

    def atom(self, f: Formula) -> tuple[BuchiAutomaton, list[str]]:
        """Automaton over the atom's own variables (sorted), inside the domain."""
        S = self.S
        if isinstance(f, Linear):
            names = f.variables()
            coefs = tuple(c for _, c in f.coefs)

            def build():
                A = linear_automaton(S, coefs, f.const, f.relation)
                A = simplify(intersection(A, product_domain(S, len(coefs))))
                return self._lift(A, len(coefs))

            return self._memo(("lin", coefs, f.const, f.relation), build), names
        if isinstance(f, Nat):
            def build():
                eq = linear_automaton(S, (1, -1))
                zero = zero_fraction_automaton(S)
                A = self._seq_exists([(eq, [0, 1]), (domain_automaton(S), [1]), (zero, [1]),
                                      (domain_automaton(S), [0])], 2, 1)
                return self._lift(A, 1)

            return self._memo(("nat",), build), [f.x]
        if isinstance(f, Digit):
            if not 0 <= f.digit <= S.M:
                raise CompileError(f"digit {f.digit} outside 0..{S.M}")
            if f.x == f.u:
                raise CompileError("V_i needs two distinct variables")
            names = sorted([f.x, f.u])

            def build():
                eq = linear_automaton(S, (1, -1))
                # tracks: x, u, x' (normalized copy of x), u' (single-1 word of value u)
                parts = [(eq, [0, 2]), (eq, [1, 3]), (valid_language(S), [2]), (unit_word_automaton(S), [3]),
                         (marker_automaton(S, f.digit), [2, 3]), (domain_automaton(S), [0]),
                         (domain_automaton(S), [1])]
                A = self._seq_exists(parts, 4, 2)
                return self._lift(A, 2)

            A = self._memo(("digit", f.digit), build)
            if names != [f.x, f.u]:
                A = cylinder(A, self.alphabet(2), [1, 0])
            return A, names
        if isinstance(f, Tau):
            if self.mode != "parallel":
                raise CompileError("tau is only recognizable in the parallel encoding")
            if f.u == f.v:
                raise CompileError("tau(u)=v needs two distinct variables")
            names = sorted([f.u, f.v])

            def build():
                M = S.M
                eq = seq_to_parallel(simplify(intersection(linear_automaton(S, (1, -1)),
                                                           cylinder(domain_automaton(S), seq_alphabet(2, M), [0]))),
                                     2, M)
                # tracks (v, u', v'): v' = v and tau(u') = v', then forget v'
                A3 = parallel_alphabet(3, M)
                step = simplify(intersection(cylinder(eq, A3, [0, 2]), cylinder(tau_marker_automaton(S), A3, [1, 2])))
                step = simplify(project(step, 2))
                # tracks (u, v, u'): u' = u, then forget u'
                step = simplify(intersection(cylinder(eq, A3, [0, 2]), cylinder(step, A3, [1, 2])))
                step = simplify(project(step, 2))
                return simplify(intersection(step, self.domain(2)))

            A = self._memo(("tau",), build)
            if names != [f.u, f.v]:
                A = cylinder(A, self.alphabet(2), [1, 0])
            return A, names
        raise TypeError(f"not an atom: {f!r}")  # pragma: no cover

    # -- main recursion ------------------------------------------------------

    def compile(self, f: Formula, tracks: list[str] | None = None) -> tuple[BuchiAutomaton, list[str]]:
        if self.mode == "sequential" and uses_tau(f):
            raise CompileError("tau is only recognizable in the parallel encoding")
        if tracks is None:
            tracks = sorted(free_vars(f))
        missing = free_vars(f) - set(tracks)
        if missing:
            raise CompileError(f"variables {sorted(missing)} have no track")
        return self._compile(f, list(tracks)), list(tracks)

    def _compile(self, f: Formula, tracks: list[str]) -> BuchiAutomaton:
        return self._build(push_negations(f), tracks)

    def _build(self, f: Formula, tracks: list[str]) -> BuchiAutomaton:
        k = len(tracks)
        if isinstance(f, Const):
            if f.value:
                return self.domain(k)
            return BuchiAutomaton(0, self.alphabet(k), (), (), ())
        if isinstance(f, Linear) and not f.coefs:
            holds = f.const == 0 if f.relation == "eq" else f.const > 0
            return self._build(Const(holds), tracks)
        if isinstance(f, (Linear, Nat, Digit, Tau)):
            A, names = self.atom(f)
            A = cylinder(A, self.alphabet(k), [tracks.index(v) for v in names])
            return simplify(intersection(A, self.domain(k)))
        if isinstance(f, Not):
            inner = self._build(f.body, tracks)
            return simplify(intersection(complement(inner), self.domain(k)))
        if isinstance(f, And):
            return simplify(intersection(self._build(f.left, tracks), self._build(f.right, tracks)))
        if isinstance(f, Or):
            return simplify(union(self._build(f.left, tracks), self._build(f.right, tracks)))
        if isinstance(f, Exists):
            var, body = f.var, f.body
            if var in tracks:
                # shadowing: rename the bound variable
                fresh = _fresh(var, set(tracks) | free_vars(body))
                body, var = _rename(body, var, fresh), fresh
            if f.nat:
                body = And(Nat(var), body)
            A = project(self._build(body, tracks + [var]), k, self.alphabet(k))
            return simplify(self._pad(A, k))
        raise TypeError(f"unexpected formula {f!r}")  # pragma: no cover


def push_negations(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form, keeping Not only above existentials and non-linear atoms.

    Universal quantifiers become negated existentials; negated linear atoms are
    rewritten as positive disjunctions (a != b iff a < b or b < a).
    """
    if isinstance(f, Linear):
        if not negate:
            return f
        flipped = tuple((v, -c) for v, c in f.coefs)
        if f.relation == "eq":
            return Or(Linear(f.coefs, f.const, "gt"), Linear(flipped, -f.const, "gt"))
        return Or(Linear(flipped, -f.const, "gt"), Linear(f.coefs, f.const, "eq"))
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, (Nat, Digit, Tau)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return push_negations(f.body, not negate)
    if isinstance(f, And):
        l, r = push_negations(f.left, negate), push_negations(f.right, negate)
        return Or(l, r) if negate else And(l, r)
    if isinstance(f, Or):
        l, r = push_negations(f.left, negate), push_negations(f.right, negate)
        return And(l, r) if negate else Or(l, r)
    if isinstance(f, Exists):
        e = Exists(f.var, push_negations(f.body), f.nat)
        return Not(e) if negate else e
    if isinstance(f, Forall):
        body = Not(f.body)
        if f.nat:
            # A nat x. p  ==  not E x. (nat(x) and not p)
            e = Exists(f.var, push_negations(body), True)
        else:
            e = Exists(f.var, push_negations(body))
        return e if negate else Not(e)
    raise TypeError(f"unknown formula {f!r}")  # pragma: no cover


def _fresh(var: str, taken: set[str]) -> str:
    n = 1
    while f"{var}_{n}" in taken:
        n += 1
    return f"{var}_{n}"


def _rename(f: Formula, old: str, new: str) -> Formula:
    r = lambda v: new if v == old else v
    if isinstance(f, Linear):
        return Linear(tuple(sorted((r(v), c) for v, c in f.coefs)), f.const, f.relation)
    if isinstance(f, Digit):
        return Digit(f.digit, r(f.x), r(f.u))
    if isinstance(f, Tau):
        return Tau(r(f.u), r(f.v))
    if isinstance(f, Nat):
        return Nat(r(f.x))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(_rename(f.body, old, new))
    if isinstance(f, And):
        return And(_rename(f.left, old, new), _rename(f.right, old, new))
    if isinstance(f, Or):
        return Or(_rename(f.left, old, new), _rename(f.right, old, new))
    if f.var == old:
        return f
    return type(f)(f.var, _rename(f.body, old, new), f.nat)


_COMPILERS: dict[tuple[NumSystem, str], Compiler] = {}
_COMPILERS_LOCK = threading.Lock()


def compiler_for(S: NumSystem, mode: str) -> Compiler:
    with _COMPILERS_LOCK:
        c = _COMPILERS.get((S, mode))
        if c is None:
            c = _COMPILERS[(S, mode)] = Compiler(S, mode)
        return c


def _as_formula(f: Formula | str) -> Formula:
    return parse_formula(f) if isinstance(f, str) else f


def compile_formula(f: Formula | str, S: NumSystem, mode: str = "sequential") -> tuple[BuchiAutomaton, list[str]]:
    """Automaton over the free variables (sorted by name) accepting exactly the satisfying encodings."""
    return compiler_for(S, mode).compile(_as_formula(f))


def decide(sentence: Formula | str, S: NumSystem, mode: str = "sequential") -> bool:
    f = _as_formula(sentence)
    if free_vars(f):
        raise CompileError(f"not a sentence: free variables {sorted(free_vars(f))}")
    A, _ = compile_formula(f, S, mode)
    return emptiness(A) is not None


# ---------------------------------------------------------------------------
# Witnesses and exact evaluation of quantifier-free formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    variables: tuple[str, ...]
    encoding: UpWord
    words: tuple[EpWord, ...]
    values: tuple[QuadExt, ...]
    normalized: tuple[EpWord, ...]

    def as_dict(self) -> dict[str, QuadExt]:
        return dict(zip(self.variables, self.values))


def decode(w: UpWord, k: int, mode: str) -> list[EpWord]:
    return seq_decode(w, k) if mode == "sequential" else par_decode(w, k)


def witness(f: Formula | str, S: NumSystem, mode: str = "sequential") -> Witness | None:
    """An ultimately periodic satisfying assignment with exact values, or None."""
    f = _as_formula(f)
    A, names = compile_formula(f, S, mode)
    w = emptiness(A)
    if w is None:
        return None
    if not names:
        return Witness((), w, (), (), ())
    words = decode(w, len(names), mode)
    values = tuple(eval_word(x, S) for x in words)
    wit = Witness(tuple(names), w, tuple(words), values, tuple(represent(v, S) for v in values))
    if is_quantifier_free(f) and not holds(f, wit.as_dict(), S):
        raise AssertionError("witness does not satisfy the formula")  # pragma: no cover
    return wit


def _unit_index(x: QuadExt, S: NumSystem) -> int | None:
    """The index j with rho(x) the single-1 word e_j, or None when x is not in U."""
    if x < 0:
        return None
    w = represent(x, S)
    if w.frac_period or sorted(w.int_digits + w.frac_pre)[-1:] != [1] \
            or sum(w.int_digits) + sum(w.frac_pre) != 1:
        return None
    if 1 in w.int_digits:
        return len(w.int_digits) - 1 - w.int_digits.index(1)
    return -1 - w.frac_pre.index(1)


def holds(f: Formula, env: dict[str, QuadExt], S: NumSystem) -> bool:
    """Truth of a quantifier-free formula under an assignment of nonnegative field elements."""
    if isinstance(f, Linear):
        total = sum((c * QuadExt._coerce(env[v]) for v, c in f.coefs), QuadExt(f.const))
        return total == 0 if f.relation == "eq" else total > 0
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not holds(f.body, env, S)
    if isinstance(f, And):
        return holds(f.left, env, S) and holds(f.right, env, S)
    if isinstance(f, Or):
        return holds(f.left, env, S) or holds(f.right, env, S)
    if isinstance(f, Nat):
        return represent(env[f.x], S).frac_is_zero
    if isinstance(f, Digit):
        j = _unit_index(QuadExt._coerce(env[f.u]), S)
        return j is not None and represent(env[f.x], S).digit(j) == f.digit
    if isinstance(f, Tau):
        u, v = QuadExt._coerce(env[f.u]), QuadExt._coerce(env[f.v])
        i, j = _unit_index(u, S), _unit_index(v, S)
        if i is None or j is None:
            return False
        # values, not indices: for O_phi U_0 = U_1 = 1 and tau(1) = 1
        return u == 1 and v == 1 or S.weight(-i) == v
    raise ValueError("formula has quantifiers")
