"""Buchi and Muller automata over finite alphabets of hashable symbols.

Multi-track alphabets use tuples. In the sequential encoding the radix mark is
the tuple of STAR entries; in the parallel encoding each track entry is a pair
(integer digit, fractional digit).
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
import json
import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

STAR = "*"
DEFAULT_STATE_CAP = 200_000


_STATE_LIMIT: contextvars.ContextVar[int | None] = contextvars.ContextVar("state_limit", default=None)
_RANK_LIMIT: contextvars.ContextVar[int | None] = contextvars.ContextVar("rank_limit", default=None)
_CANCEL: contextvars.ContextVar = contextvars.ContextVar("cancel", default=None)


class ResourceLimitError(RuntimeError):
    pass


class Cancelled(ResourceLimitError):
    """Raised inside a construction once its cancellation token is set."""


@contextlib.contextmanager
def resource_limits(states: int | None = None, ranks: int | None = None, cancel=None):
    """Tighten the state cap of every construction and the rank bound of complementation.

    ``cancel`` is any object with an ``is_set()`` method (e.g. ``threading.Event``);
    constructions poll it and raise Cancelled once it is set.
    """
    for v in (states, ranks):
        if v is not None and v <= 0:
            raise ValueError("resource caps must be positive")
    tokens = (_STATE_LIMIT.set(states), _RANK_LIMIT.set(ranks), _CANCEL.set(cancel))
    try:
        yield
    finally:
        for var, t in zip((_STATE_LIMIT, _RANK_LIMIT, _CANCEL), tokens):
            var.reset(t)


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class UpWord:
    """The ultimately periodic word stem . loop^omega."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("loop must be nonempty")

    def __getitem__(self, i: int):
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def normalized(self) -> "UpWord":
        """Shortest stem and primitive loop describing the same word."""
        loop = self.loop
        n = len(loop)
        for k in range(1, n + 1):
            if n % k == 0 and loop[:k] * (n // k) == loop:
                loop = loop[:k]
                break
        stem = self.stem
        while stem and stem[-1] == loop[-1]:
            stem = stem[:-1]
            loop = (loop[-1],) + loop[:-1]
        return UpWord(stem, loop)

    def __str__(self):
        return f"{list(self.stem)}({list(self.loop)})^w"


# ---------------------------------------------------------------------------
# Graph helpers
# ---------------------------------------------------------------------------


def _sccs(n: int, succ: Callable[[int], Iterable[int]], roots: Iterable[int] | None = None) -> list[list[int]]:
    """Tarjan's algorithm, iterative. Returns SCCs in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in (range(n) if roots is None else roots):
        if index[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


# ---------------------------------------------------------------------------
# Automata
# ---------------------------------------------------------------------------


class BuchiAutomaton:
    """Nondeterministic Buchi automaton with states 0..n-1."""

    __slots__ = ("n", "alphabet", "delta", "initial", "accepting", "_cache")

    def __init__(self, n: int, alphabet: Iterable[Hashable], transitions: Iterable[tuple[int, Hashable, int]],
                 initial: Iterable[int], accepting: Iterable[int]):
        self.n = n
        self.alphabet = tuple(dict.fromkeys(alphabet))
        sigma = set(self.alphabet)
        delta: list[dict] = [dict() for _ in range(n)]
        for p, a, q in transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise ValueError(f"transition ({p}, {a!r}, {q}) uses an undeclared state")
            if a not in sigma:
                raise AlphabetError(f"symbol {a!r} not in the alphabet")
            delta[p].setdefault(a, set()).add(q)
        self.delta = tuple({a: tuple(sorted(qs)) for a, qs in d.items()} for d in delta)
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        for q in self.initial | self.accepting:
            if not 0 <= q < n:
                raise ValueError(f"state {q} is undeclared")
        self._cache: dict = {}

    # -- inspection ---------------------------------------------------------

    def successors(self, q: int, a) -> tuple[int, ...]:
        return self.delta[q].get(a, ())

    def post(self, q: int) -> set[int]:
        return {r for qs in self.delta[q].values() for r in qs}

    @property
    def transitions(self) -> list[tuple[int, Hashable, int]]:
        return [(p, a, q) for p in range(self.n) for a, qs in self.delta[p].items() for q in qs]

    @property
    def num_transitions(self) -> int:
        return sum(len(qs) for d in self.delta for qs in d.values())

    def __repr__(self) -> str:
        return (f"BuchiAutomaton(states={self.n}, symbols={len(self.alphabet)}, "
                f"transitions={self.num_transitions}, initial={len(self.initial)}, accepting={len(self.accepting)})")

    @property
    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(len(qs) <= 1 for d in self.delta for qs in d.values())

    def sccs(self) -> list[list[int]]:
        if "sccs" not in self._cache:
            self._cache["sccs"] = _sccs(self.n, lambda q: self.post(q))
        return self._cache["sccs"]

    def _nontrivial(self, comp: list[int]) -> bool:
        if len(comp) > 1:
            return True
        q = comp[0]
        return q in self.post(q)

    @property
    def is_weak(self) -> bool:
        """Every cycle-carrying SCC is entirely accepting or entirely rejecting."""
        if "weak" not in self._cache:
            ok = True
            for comp in self.sccs():
                if self._nontrivial(comp):
                    flags = {q in self.accepting for q in comp}
                    if len(flags) > 1:
                        ok = False
                        break
            self._cache["weak"] = ok
        return self._cache["weak"]

    @property
    def is_safety(self) -> bool:
        return self.accepting == frozenset(range(self.n))

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "states": self.n,
            "alphabet": [_jsonable(a) for a in self.alphabet],
            "transitions": [[p, _jsonable(a), q] for p, a, q in self.transitions],
            "initial": sorted(self.initial),
            "accepting": sorted(self.accepting),
        }, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "BuchiAutomaton":
        data = json.loads(text)
        if "muller_sets" in data:
            raise ValueError("this is a Muller automaton; use MullerAutomaton.from_json")
        return cls(data["states"], [_unjson(a) for a in data["alphabet"]],
                   [(p, _unjson(a), q) for p, a, q in data["transitions"]], data["initial"], data["accepting"])

    def to_dot(self, name: str = "A") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];']
        for q in range(self.n):
            shape = "doublecircle" if q in self.accepting else "circle"
            lines.append(f'  q{q} [shape={shape}, label="{q}"];')
        for i, q in enumerate(sorted(self.initial)):
            lines.append(f'  init{i} [shape=point];')
            lines.append(f"  init{i} -> q{q};")
        edges: dict[tuple[int, int], list[str]] = {}
        for p, a, q in self.transitions:
            edges.setdefault((p, q), []).append(_symbol_label(a))
        for (p, q), labels in edges.items():
            lab = ", ".join(labels).replace('"', '\\"')
            lines.append(f'  q{p} -> q{q} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return (isinstance(other, BuchiAutomaton) and self.n == other.n and self.alphabet == other.alphabet
                and self.delta == other.delta and self.initial == other.initial and self.accepting == other.accepting)

    def __hash__(self):
        return hash((self.n, self.alphabet, self.initial, self.accepting))


def _jsonable(a):
    if isinstance(a, tuple):
        return [_jsonable(x) for x in a]
    return a


def _unjson(a):
    if isinstance(a, list):
        return tuple(_unjson(x) for x in a)
    return a


def _symbol_label(a) -> str:
    if isinstance(a, tuple):
        return "(" + ",".join(_symbol_label(x) for x in a) + ")"
    return str(a)


class MullerAutomaton:
    """Muller automaton: a run is accepting iff its infinity set is one of ``table``."""

    def __init__(self, n: int, alphabet, transitions, initial, table: Iterable[Iterable[int]]):
        self.base = BuchiAutomaton(n, alphabet, transitions, initial, ())
        self.table = tuple(frozenset(s) for s in table)
        for s in self.table:
            if not s <= set(range(n)):
                raise ValueError("acceptance set mentions undeclared states")

    @property
    def n(self):
        return self.base.n

    @property
    def alphabet(self):
        return self.base.alphabet

    def to_json(self) -> str:
        data = json.loads(self.base.to_json())
        del data["accepting"]
        data["muller_sets"] = [sorted(s) for s in self.table]
        return json.dumps(data, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "MullerAutomaton":
        data = json.loads(text)
        return cls(data["states"], [_unjson(a) for a in data["alphabet"]],
                   [(p, _unjson(a), q) for p, a, q in data["transitions"]], data["initial"], data["muller_sets"])


# ---------------------------------------------------------------------------
# On-the-fly construction
# ---------------------------------------------------------------------------


def explore(alphabet, initial_keys: Iterable[Hashable], moves: Callable[[Hashable], Iterable[tuple[Hashable, Hashable]]],
            accepting: Callable[[Hashable], bool], cap: int = DEFAULT_STATE_CAP) -> tuple[BuchiAutomaton, list]:
    """Build the automaton reachable from ``initial_keys`` under ``moves(key) -> (symbol, key')``.

    States are numbered in discovery order, so output is reproducible.
    """
    limit = _STATE_LIMIT.get()
    if limit is not None:
        cap = min(cap, limit)
    ids: dict[Hashable, int] = {}
    keys: list = []
    queue: deque = deque()

    def intern(k):
        i = ids.get(k)
        if i is None:
            if len(keys) >= cap:
                raise ResourceLimitError(f"state exploration exceeded cap {cap}")
            i = ids[k] = len(keys)
            keys.append(k)
            queue.append(k)
        return i

    cancel = _CANCEL.get()
    init = [intern(k) for k in initial_keys]
    trans = []
    steps = 0
    while queue:
        steps += 1
        if cancel is not None and steps % 256 == 0 and cancel.is_set():
            raise Cancelled("construction cancelled")
        k = queue.popleft()
        p = ids[k]
        for a, k2 in moves(k):
            trans.append((p, a, intern(k2)))
    acc = [i for i, k in enumerate(keys) if accepting(k)]
    return BuchiAutomaton(len(keys), alphabet, trans, init, acc), keys


def empty_automaton(alphabet) -> BuchiAutomaton:
    return BuchiAutomaton(0, alphabet, (), (), ())


def universal_automaton(alphabet) -> BuchiAutomaton:
    return BuchiAutomaton(1, alphabet, [(0, a, 0) for a in alphabet], [0], [0])


def from_upword(w: UpWord, alphabet) -> BuchiAutomaton:
    """Deterministic automaton accepting exactly w."""
    n = len(w.stem) + len(w.loop)
    trans = [(i, w[i], i + 1) for i in range(n - 1)] + [(n - 1, w[n - 1], len(w.stem))]
    return BuchiAutomaton(n, alphabet, trans, [0], [len(w.stem)])


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------


def _restrict(A: BuchiAutomaton, keep: Sequence[int]) -> BuchiAutomaton:
    ren = {q: i for i, q in enumerate(keep)}
    trans = [(ren[p], a, ren[q]) for p, a, q in A.transitions if p in ren and q in ren]
    return BuchiAutomaton(len(keep), A.alphabet, trans, [ren[q] for q in A.initial if q in ren],
                          [ren[q] for q in A.accepting if q in ren])


def trim(A: BuchiAutomaton) -> BuchiAutomaton:
    """Drop states that are unreachable or cannot reach an accepting cycle."""
    reach = set(A.initial)
    stack = list(A.initial)
    while stack:
        q = stack.pop()
        for r in A.post(q):
            if r not in reach:
                reach.add(r)
                stack.append(r)
    good = set()
    for comp in A.sccs():
        if A._nontrivial(comp) and any(q in A.accepting for q in comp):
            good.update(comp)
    pred: dict[int, set[int]] = {}
    for p, _, q in A.transitions:
        pred.setdefault(q, set()).add(p)
    live = set(good)
    stack = list(good)
    while stack:
        q = stack.pop()
        for p in pred.get(q, ()):
            if p not in live:
                live.add(p)
                stack.append(p)
    keep = sorted(reach & live)
    if len(keep) == A.n:
        return A
    return _restrict(A, keep)


def quotient(A: BuchiAutomaton) -> BuchiAutomaton:
    """Merge bisimilar states (same acceptance flag, same successor classes per symbol)."""
    if A.n == 0:
        return A
    block = [1 if q in A.accepting else 0 for q in range(A.n)]
    count = len(set(block))
    while True:
        sigs: dict = {}
        new = []
        for q in range(A.n):
            sig = (block[q], frozenset((a, frozenset(block[r] for r in qs)) for a, qs in A.delta[q].items()))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    # renumber blocks by first occurrence for reproducibility
    order: dict[int, int] = {}
    for q in range(A.n):
        order.setdefault(block[q], len(order))
    trans = {(order[block[p]], a, order[block[q]]) for p, a, q in A.transitions}
    return BuchiAutomaton(len(order), A.alphabet, sorted(trans, key=lambda t: (t[0], A.alphabet.index(t[1]), t[2])),
                          {order[block[q]] for q in A.initial}, {order[block[q]] for q in A.accepting})


def simplify(A: BuchiAutomaton) -> BuchiAutomaton:
    return quotient(trim(A))


# ---------------------------------------------------------------------------
# Boolean operations
# ---------------------------------------------------------------------------


def _check_same_alphabet(A: BuchiAutomaton, B: BuchiAutomaton) -> None:
    if set(A.alphabet) != set(B.alphabet):
        raise AlphabetError("automata have different alphabets")


def union(A: BuchiAutomaton, B: BuchiAutomaton) -> BuchiAutomaton:
    _check_same_alphabet(A, B)
    k = A.n
    trans = A.transitions + [(p + k, a, q + k) for p, a, q in B.transitions]
    return BuchiAutomaton(A.n + B.n, A.alphabet, trans, set(A.initial) | {q + k for q in B.initial},
                          set(A.accepting) | {q + k for q in B.accepting})


def intersection(A: BuchiAutomaton, B: BuchiAutomaton, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Product automaton; plain for weak operands, two-phase otherwise."""
    _check_same_alphabet(A, B)
    plain = A.is_weak and B.is_weak

    def moves(key):
        p, q, phase = key
        da, db = A.delta[p], B.delta[q]
        if len(db) < len(da):
            common = [a for a in db if a in da]
        else:
            common = [a for a in da if a in db]
        for a in common:
            for p2 in da[a]:
                for q2 in db[a]:
                    if plain:
                        yield a, (p2, q2, 0)
                    else:
                        # phase 0 waits for A-acceptance, phase 1 for B-acceptance
                        if phase == 0:
                            nxt = 1 if p in A.accepting else 0
                        else:
                            nxt = 0 if q in B.accepting else 1
                        yield a, (p2, q2, nxt)

    if plain:
        acc = lambda k: k[0] in A.accepting and k[1] in B.accepting
    else:
        acc = lambda k: k[2] == 0 and k[0] in A.accepting
    init = [(p, q, 0) for p in sorted(A.initial) for q in sorted(B.initial)]
    C, _ = explore(A.alphabet, init, moves, acc, cap)
    return trim(C)


def complement(A: BuchiAutomaton, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Automaton for the complement language over A's alphabet.

    Deterministic automata use the two-copy construction, weak automata the
    breakpoint subset construction, anything else rank-based complementation.
    """
    B = simplify(A) if A.n else A
    if B.n == 0:
        return universal_automaton(A.alphabet)
    if len(A.alphabet) == 1:
        # a single omega-word exists and B accepts it
        return empty_automaton(A.alphabet)
    if B.is_deterministic:
        C = _complement_deterministic(B, cap)
    elif B.is_weak:
        C = _complement_weak(B, cap)
    else:
        C = _complement_ranks(B, cap)
    return simplify(weaken(C))


def _complement_deterministic(A: BuchiAutomaton, cap: int) -> BuchiAutomaton:
    # rejecting runs visit accepting states finitely often (a sink absorbs missing moves)
    SINK = -1
    alphabet = A.alphabet

    def step(q, a):
        if q == SINK:
            return SINK
        qs = A.delta[q].get(a, ())
        return qs[0] if qs else SINK

    def moves(key):
        q, safe = key
        for a in alphabet:
            r = step(q, a)
            if not safe:
                yield a, (r, False)
            if r == SINK or r not in A.accepting:
                yield a, (r, True)

    init = [(q, False) for q in A.initial] or [(SINK, False)]
    init += [(q, True) for q in A.initial if q not in A.accepting]
    if not A.initial:
        init.append((SINK, True))
    C, _ = explore(alphabet, init, moves, lambda k: k[1], cap)
    return C


def _complement_weak(A: BuchiAutomaton, cap: int) -> BuchiAutomaton:
    # Accepting runs of a weak automaton are those eventually confined to accepting states;
    # the breakpoint construction tracks such runs and accepts when they all die infinitely often.
    F = A.accepting
    alphabet = A.alphabet

    def post(states, a):
        out = set()
        for q in states:
            out.update(A.delta[q].get(a, ()))
        return frozenset(out)

    def moves(key):
        S, O = key
        for a in alphabet:
            S2 = post(S, a)
            O2 = (post(O, a) if O else S2) & F
            yield a, (S2, O2)

    init = frozenset(A.initial)
    C, _ = explore(alphabet, [(init, init & F)], moves, lambda k: not k[1], cap)
    return C


def _complement_ranks(A: BuchiAutomaton, cap: int) -> BuchiAutomaton:
    """Kupferman-Vardi level rankings with a breakpoint set."""
    n = A.n
    F = A.accepting
    max_rank = 2 * (n - len(F)) if len(F) < n else 0
    rank_limit = _RANK_LIMIT.get()
    if rank_limit is not None and max_rank > rank_limit:
        raise ResourceLimitError(f"rank-based complement needs ranks up to {max_rank}, cap is {rank_limit}")
    alphabet = A.alphabet

    def rankings(states, bounds):
        choices = []
        for q in states:
            top = bounds[q]
            opts = [r for r in range(top + 1) if not (q in F and r % 2)]
            if not opts:
                return
            choices.append(opts)
        for combo in itertools.product(*choices):
            yield tuple(zip(states, combo))

    def moves(key):
        f, O = key
        fd = dict(f)
        for a in alphabet:
            bounds: dict[int, int] = {}
            for q, r in f:
                for q2 in A.delta[q].get(a, ()):
                    bounds[q2] = min(bounds.get(q2, r), r)
            states = sorted(bounds)
            for g in rankings(states, bounds):
                gd = dict(g)
                even = {q for q in states if gd[q] % 2 == 0}
                if O:
                    src = {q2 for q in O for q2 in A.delta[q].get(a, ())}
                    O2 = frozenset(src & even)
                else:
                    O2 = frozenset(even)
                yield a, (g, O2)

    init_states = sorted(A.initial)
    init = [(g, frozenset()) for g in rankings(init_states, {q: max_rank for q in init_states})]
    C, _ = explore(alphabet, init, moves, lambda k: not k[1], cap)
    return C


def weaken(A: BuchiAutomaton) -> BuchiAutomaton:
    """Make A weak when that is language-preserving.

    An SCC in which every cycle meets an accepting state may be marked fully
    accepting.
    """
    if A.is_weak:
        return A
    acc = set(A.accepting)
    for comp in A.sccs():
        if not A._nontrivial(comp):
            continue
        inside = set(comp)
        if not inside & acc:
            continue
        rest = inside - acc
        if not _has_cycle(A, rest):
            acc |= inside
    if acc == set(A.accepting):
        return A
    return BuchiAutomaton(A.n, A.alphabet, A.transitions, A.initial, acc)


def _has_cycle(A: BuchiAutomaton, nodes: set[int]) -> bool:
    if not nodes:
        return False
    order = sorted(nodes)
    idx = {q: i for i, q in enumerate(order)}
    comps = _sccs(len(order), lambda i: [idx[r] for r in A.post(order[i]) if r in idx])
    for comp in comps:
        if len(comp) > 1 or order[comp[0]] in A.post(order[comp[0]]):
            return True
    return False


# ---------------------------------------------------------------------------
# Emptiness, membership, equivalence
# ---------------------------------------------------------------------------


def _bfs_path(A: BuchiAutomaton, sources: Iterable[int], target: int) -> list:
    """Shortest symbol path from a source state to ``target``."""
    parent: dict[int, tuple[int, object] | None] = {s: None for s in sources}
    queue: deque = deque(parent)
    while queue:
        q = queue.popleft()
        if q == target:
            path = []
            while parent[q] is not None:
                q, sym = parent[q]
                path.append(sym)
            return path[::-1]
        for a, qs in A.delta[q].items():
            for r in qs:
                if r not in parent:
                    parent[r] = (q, a)
                    queue.append(r)
    raise AssertionError("target unreachable")  # pragma: no cover


def find_lasso(A: BuchiAutomaton) -> UpWord | None:
    """An accepted ultimately periodic word, or None when L(A) is empty."""
    B = trim(A)
    if B.n == 0:
        return None
    for comp in B.sccs():
        acc = [q for q in comp if q in B.accepting]
        if not acc or not B._nontrivial(comp):
            continue
        s = min(acc)
        stem = _bfs_path(B, sorted(B.initial), s)
        return UpWord(stem, _cycle_through(B, s, set(comp)))
    return None  # pragma: no cover


def _cycle_through(A: BuchiAutomaton, s: int, inside: set[int]) -> list:
    parent: dict[int, tuple[int, object]] = {}
    queue = deque([s])
    seen = {s}
    while queue:
        q = queue.popleft()
        for a, qs in A.delta[q].items():
            for r in qs:
                if r not in inside:
                    continue
                if r == s:
                    path = [a]
                    cur = q
                    while cur != s:
                        prev, sym = parent[cur]
                        path.append(sym)
                        cur = prev
                    return path[::-1]
                if r not in seen:
                    seen.add(r)
                    parent[r] = (q, a)
                    queue.append(r)
    raise AssertionError("state is not on a cycle")  # pragma: no cover


def emptiness(A: BuchiAutomaton) -> UpWord | None:
    """None if L(A) is empty, else a verified lasso witness."""
    w = find_lasso(A)
    if w is not None and not accepts(A, w):
        raise AssertionError("lasso witness failed verification")  # pragma: no cover
    return w


def is_empty(A: BuchiAutomaton) -> bool:
    return find_lasso(A) is None


def accepts(A: BuchiAutomaton, w: UpWord) -> bool:
    """Membership of stem . loop^omega, via the product with the word's lasso."""
    s, l = len(w.stem), len(w.loop)
    total = s + l

    def nxt(i):
        return i + 1 if i + 1 < total else s

    # reachable (state, position) pairs
    start = [(q, 0) for q in A.initial]
    seen = set(start)
    stack = list(start)
    while stack:
        q, i = stack.pop()
        for r in A.delta[q].get(w[i], ()):
            node = (r, nxt(i))
            if node not in seen:
                seen.add(node)
                stack.append(node)
    loop_nodes = sorted(node for node in seen if node[1] >= s)
    if not loop_nodes:
        return False
    idx = {node: k for k, node in enumerate(loop_nodes)}

    def succ(k):
        q, i = loop_nodes[k]
        return [idx[(r, nxt(i))] for r in A.delta[q].get(w[i], ()) if (r, nxt(i)) in idx]

    for comp in _sccs(len(loop_nodes), succ):
        if len(comp) == 1 and comp[0] not in succ(comp[0]):
            continue
        if any(loop_nodes[k][0] in A.accepting for k in comp):
            return True
    return False


def random_upword(alphabet: Sequence, rng: random.Random, max_stem: int = 4, max_loop: int = 4) -> UpWord:
    stem = [rng.choice(alphabet) for _ in range(rng.randint(0, max_stem))]
    loop = [rng.choice(alphabet) for _ in range(rng.randint(1, max_loop))]
    return UpWord(stem, loop)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    decided_by: str  # "sample" or "complement"
    counterexample: UpWord | None = None

    def __bool__(self):
        return self.equivalent


def equivalence(A: BuchiAutomaton, B: BuchiAutomaton, samples: int = 200, seed: int = 0,
                cap: int = DEFAULT_STATE_CAP) -> EquivalenceResult:
    """Language equality: random ultimately periodic words first, then exact symmetric difference."""
    _check_same_alphabet(A, B)
    rng = random.Random(seed)
    alphabet = list(A.alphabet)
    if alphabet:
        for _ in range(samples):
            w = random_upword(alphabet, rng)
            if accepts(A, w) != accepts(B, w):
                return EquivalenceResult(False, "sample", w)
    for X, Y in ((A, B), (B, A)):
        w = find_lasso(intersection(X, complement(Y, cap), cap))
        if w is not None:
            return EquivalenceResult(False, "complement", w)
    return EquivalenceResult(True, "complement")


def equivalent(A: BuchiAutomaton, B: BuchiAutomaton, **kw) -> bool:
    return equivalence(A, B, **kw).equivalent


# ---------------------------------------------------------------------------
# Tracks: cylinder, projection, relabeling
# ---------------------------------------------------------------------------


def map_symbols(A: BuchiAutomaton, alphabet, image: Callable[[Hashable], Hashable | None]) -> BuchiAutomaton:
    """Automaton over ``alphabet`` reading b as A reads image(b) (None blocks b)."""
    back: dict = {}
    for b in alphabet:
        a = image(b)
        if a is not None:
            back.setdefault(a, []).append(b)
    trans = [(p, b, q) for p, a, q in A.transitions for b in back.get(a, ())]
    return BuchiAutomaton(A.n, alphabet, trans, A.initial, A.accepting)


def relabel(A: BuchiAutomaton, alphabet, f: Callable[[Hashable], Hashable]) -> BuchiAutomaton:
    """Image automaton: every transition on a becomes one on f(a)."""
    return BuchiAutomaton(A.n, alphabet, [(p, f(a), q) for p, a, q in A.transitions], A.initial, A.accepting)


def _drop(sym, i):
    if sym == STAR or (isinstance(sym, tuple) and sym and all(x == STAR for x in sym)):
        return tuple(STAR for _ in range(len(sym) - 1)) if isinstance(sym, tuple) else STAR
    return sym[:i] + sym[i + 1:]


def project(A: BuchiAutomaton, i: int, alphabet=None) -> BuchiAutomaton:
    """Existential projection erasing track i of a tuple alphabet."""
    arity = {len(a) for a in A.alphabet if isinstance(a, tuple)}
    if not arity or any(not isinstance(a, tuple) for a in A.alphabet) or not 0 <= i < min(arity):
        raise AlphabetError(f"cannot project track {i}")
    if alphabet is None:
        alphabet = list(dict.fromkeys(_drop(a, i) for a in A.alphabet))
    return relabel(A, alphabet, lambda a: _drop(a, i))


def pad_closure(A: BuchiAutomaton, zero) -> BuchiAutomaton:
    """Accept w whenever A accepts zero^n w for some n (new initial states)."""
    init = set(A.initial)
    stack = list(init)
    while stack:
        q = stack.pop()
        for r in A.delta[q].get(zero, ()):
            if r not in init:
                init.add(r)
                stack.append(r)
    if init == A.initial:
        return A
    return BuchiAutomaton(A.n, A.alphabet, A.transitions, init, A.accepting)


def cylinder(A: BuchiAutomaton, alphabet, positions: Sequence[int]) -> BuchiAutomaton:
    """Lift A to a wider tuple alphabet: a symbol b is read as (b[p] for p in positions)."""
    sigma = set(A.alphabet)

    def image(b):
        a = tuple(b[p] for p in positions)
        return a if a in sigma else None

    return map_symbols(A, alphabet, image)


# ---------------------------------------------------------------------------
# Muller to Buchi
# ---------------------------------------------------------------------------


def muller_to_buchi(M: MullerAutomaton, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Guess the acceptance set G and a point after which the run stays inside G,
    then cycle through G, accepting each time every state of G has been seen."""
    A = M.base
    table = M.table

    def moves(key):
        q = key[0]
        for a, qs in A.delta[q].items():
            for r in qs:
                if len(key) == 1:
                    yield a, (r,)
                    for g, G in enumerate(table):
                        if r in G:
                            yield a, (r, g, frozenset({r}))
                else:
                    _, g, seen = key
                    G = table[g]
                    if r in G:
                        yield a, (r, g, (frozenset() if seen == G else seen) | {r})

    def acc(key):
        return len(key) == 3 and key[2] == table[key[1]]

    init = [(q,) for q in sorted(A.initial)]
    init += [(q, g, frozenset({q})) for q in sorted(A.initial) for g, G in enumerate(table) if q in G]
    B, _ = explore(A.alphabet, init, moves, acc, cap)
    return B


# ---------------------------------------------------------------------------
# Sequential to parallel encodings
# ---------------------------------------------------------------------------


def is_star(sym) -> bool:
    return sym == STAR or (isinstance(sym, tuple) and len(sym) > 0 and all(x == STAR for x in sym)) \
        or sym == ()


def parallel_alphabet(k: int, M: int) -> list:
    pairs = [(i, f) for i in range(M + 1) for f in range(M + 1)]
    return list(itertools.product(pairs, repeat=k))


def seq_to_parallel(A: BuchiAutomaton, k: int, M: int, cap: int = DEFAULT_STATE_CAP,
                    check: bool = False) -> BuchiAutomaton:
    """From sequential encodings over k tracks to parallel ones.

    Parallel position p carries, per track, the pair (digit at index p, digit at
    index -p-1). For each radix transition p1 -> p2 the integer digits are run
    backwards from p1 and the fractional digits forwards from p2; once the
    backward run reaches an initial state the remaining integer digits must be 0.
    With ``check`` the input must accept only words with exactly one radix mark.
    """
    if check and has_bad_star_words(A):
        raise ValueError("input accepts words without exactly one radix mark")
    stars = [(p, q) for p, a, q in A.transitions if is_star(a)]
    alphabet = parallel_alphabet(k, M)
    zero = tuple(0 for _ in range(k))
    pred: list[dict] = [dict() for _ in range(A.n)]
    for p, a, q in A.transitions:
        if not is_star(a):
            pred[q].setdefault(a, []).append(p)

    def moves(key):
        q1, q2, done = key
        for sym in alphabet:
            ints = tuple(x[0] for x in sym)
            fracs = tuple(x[1] for x in sym)
            nxt2 = A.delta[q2].get(fracs, ())
            if not nxt2:
                continue
            if done:
                if ints == zero:
                    for r in nxt2:
                        yield sym, (-1, r, True)
                continue
            for p in pred[q1].get(ints, ()):
                for r in nxt2:
                    yield sym, (p, r, False)
                    if p in A.initial:
                        yield sym, (-1, r, True)

    init = []
    for p1, p2 in stars:
        init.append((p1, p2, False))
        if p1 in A.initial:
            init.append((-1, p2, True))
    init = list(dict.fromkeys(init))
    B, _ = explore(alphabet, init, moves, lambda key: key[2] and key[1] in A.accepting, cap)
    return simplify(B)


def count_stars(A: BuchiAutomaton, cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Restrict A to words with exactly one radix mark."""

    def moves(key):
        q, c = key
        for a, qs in A.delta[q].items():
            c2 = c + (1 if is_star(a) else 0)
            if c2 > 1:
                continue
            for r in qs:
                yield a, (r, c2)

    B, _ = explore(A.alphabet, [(q, 0) for q in sorted(A.initial)], moves,
                   lambda key: key[1] == 1 and key[0] in A.accepting, cap)
    return B


def has_bad_star_words(A: BuchiAutomaton) -> bool:
    """Whether A accepts some word with zero or at least two radix marks."""
    # states: 0 no mark yet, 1 one mark, 2 two or more; 0 and 2 accept
    trans = []
    for a in A.alphabet:
        star = is_star(a)
        trans += [(0, a, 1 if star else 0), (1, a, 2 if star else 1), (2, a, 2)]
    bad = BuchiAutomaton(3, A.alphabet, trans, [0], [0, 2])
    return not is_empty(intersection(A, bad))
