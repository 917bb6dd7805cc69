"""Command-line front end: ``numauto <command> ...``.

Exit codes: 0 success (or a true sentence), 1 a false sentence, 2 bad input,
3 a resource cap was exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import epwords, fologic, omega, recognizers
from .epwords import NumSystem, format_word, parse_word
from .quadfield import OrbitCapError, ParseError, QuadExt, cf_expand

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class CliConfig:
    command: str
    system: str | None = None
    inputs: list[str] = field(default_factory=list)
    fmt: str = "text"
    cap_orbit: int = epwords.DEFAULT_ORBIT_CAP
    cap_states: int = omega.DEFAULT_STATE_CAP
    cap_ranks: int | None = None
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("cap_orbit", "cap_states", "cap_ranks"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise UsageError(f"{name.replace('_', '-')} must be positive")

    def numsys(self) -> NumSystem:
        if not self.system:
            raise UsageError("this command needs --system")
        return NumSystem.parse(self.system)


# ---------------------------------------------------------------------------
# Commands. Each returns (text, json-able payload, exit code).
# ---------------------------------------------------------------------------

Result = tuple[str, object, int]


def cmd_cf(cfg: CliConfig) -> Result:
    x = QuadExt.parse(cfg.inputs[0])
    cf = cf_expand(x, cfg.cap_orbit)
    return str(cf), {"value": str(x), "a0": cf.a0, "preperiod": list(cf.preperiod),
                     "period": list(cf.period), "text": str(cf)}, EXIT_TRUE


def cmd_repr(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    x = QuadExt.parse(cfg.inputs[0])
    w = epwords.represent(x, S, cfg.cap_orbit)
    return format_word(w), {"system": str(S), "value": str(x), "word": format_word(w)}, EXIT_TRUE


def cmd_eval(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    w = parse_word(cfg.inputs[0])
    v = epwords.eval_word(w, S)
    return str(v), {"system": str(S), "word": format_word(w), "value": str(v)}, EXIT_TRUE


def cmd_normalize(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    w = parse_word(cfg.inputs[0])
    out = epwords.normalize(w, S, cfg.cap_orbit)
    return format_word(out), {"system": str(S), "word": format_word(w), "normalized": format_word(out)}, EXIT_TRUE


def cmd_compare(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    w1, w2 = (parse_word(t) for t in cfg.inputs[:2])
    c = epwords.compare(w1, w2, S)
    sym = "<=>"[c + 1]
    return sym, {"system": str(S), "left": format_word(w1), "right": format_word(w2), "sign": c}, EXIT_TRUE


def cmd_add(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    w1, w2 = (parse_word(t) for t in cfg.inputs[:2])
    out = epwords.add(w1, w2, S, cfg.cap_orbit)
    return format_word(out), {"system": str(S), "left": format_word(w1), "right": format_word(w2),
                              "sum": format_word(out)}, EXIT_TRUE


def cmd_convert(cfg: CliConfig) -> Result:
    alpha = cfg.options["alpha"]
    gamma = QuadExt.parse(cfg.options["gamma"])
    cf = cf_expand(QuadExt.parse(alpha), cfg.cap_orbit)
    w = parse_word(cfg.inputs[0])
    out = epwords.convert_phi(w, cf, gamma, cfg.cap_orbit)
    return format_word(out), {"alpha": str(cf.value()), "gamma": str(gamma), "word": format_word(w),
                              "converted": format_word(out)}, EXIT_TRUE


AUTOMATA: dict[str, Callable[[NumSystem], omega.BuchiAutomaton]] = {
    "valid": recognizers.valid_language,
    "domain": recognizers.domain_automaton,
    "order": recognizers.order_automaton,
    "addition": recognizers.addition_automaton,
    "equality": recognizers.equality_automaton,
    "normalization": recognizers.normalization_automaton,
    "u": recognizers.u_automaton,
    "nat": recognizers.nat_automaton,
    "tau": recognizers.tau_automaton,
}


def build_automaton(kind: str, S: NumSystem) -> omega.BuchiAutomaton:
    if kind.startswith("v") and kind[1:].isdigit():
        return recognizers.v_automaton(S, int(kind[1:]))
    if kind not in AUTOMATA:
        raise UsageError(f"unknown automaton kind {kind!r}; choose from {', '.join(sorted(AUTOMATA))} or v<i>")
    recognizers.check_eligible(S)
    return AUTOMATA[kind](S)


def cmd_automaton(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    A = build_automaton(cfg.inputs[0], S)
    payload = json.loads(A.to_json())
    return A.to_dot(), payload, EXIT_TRUE


def cmd_decide(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    mode = cfg.options.get("mode", "sequential")
    f = fologic.parse_formula(cfg.inputs[0])
    truth = fologic.decide(f, S, mode)
    return ("true" if truth else "false"), {"system": str(S), "mode": mode, "sentence": fologic.format_formula(f),
                                            "value": truth}, (EXIT_TRUE if truth else EXIT_FALSE)


def cmd_witness(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    mode = cfg.options.get("mode", "sequential")
    w = fologic.witness(cfg.inputs[0], S, mode)
    if w is None:
        return "none", {"system": str(S), "mode": mode, "assignment": None}, EXIT_FALSE
    rows = [{"variable": n, "value": str(v), "word": format_word(x)}
            for n, v, x in zip(w.variables, w.values, w.normalized)]
    text = "\n".join(f"{r['variable']} = {r['value']}  [{r['word']}]" for r in rows) or "satisfiable"
    return text, {"system": str(S), "mode": mode, "assignment": rows}, EXIT_TRUE


def cmd_feasible(cfg: CliConfig) -> Result:
    S = cfg.numsys()
    report = recognizers.feasibility_check(S)
    return report.to_text(), report.to_json(), EXIT_TRUE


def cmd_selftest(cfg: CliConfig) -> Result:
    """Seeded round trip: represent random field elements and evaluate them back."""
    S = cfg.numsys()
    rng = random.Random(cfg.seed)
    n = cfg.options.get("samples", 50)
    failures = []
    for _ in range(n):
        a, b, c = rng.randint(0, 30), rng.randint(-20, 20), rng.randint(1, 9)
        x = (QuadExt(a) + QuadExt.sqrt(S.d) * b) / c
        if x < 0:
            x = -x
        w = epwords.represent(x, S, cfg.cap_orbit)
        if epwords.eval_word(w, S) != x:
            failures.append(str(x))
    text = f"{n - len(failures)}/{n} round trips exact (seed {cfg.seed})"
    return text, {"system": str(S), "seed": cfg.seed, "samples": n, "failures": failures}, \
        (EXIT_TRUE if not failures else EXIT_FALSE)


COMMANDS: dict[str, Callable[[CliConfig], Result]] = {
    "cf": cmd_cf, "repr": cmd_repr, "eval": cmd_eval, "normalize": cmd_normalize,
    "compare": cmd_compare, "add": cmd_add, "convert": cmd_convert, "automaton": cmd_automaton,
    "decide": cmd_decide, "witness": cmd_witness, "feasible": cmd_feasible, "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 like any other input error
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help='numeration system, e.g. "power:1+sqrt2" or "ostrowski:sqrt2"')
    common.add_argument("--format", dest="fmt", choices=["text", "json", "dot"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-orbit", type=_positive, default=epwords.DEFAULT_ORBIT_CAP,
                        help="maximum remainder-orbit length for representations")
    common.add_argument("--cap-states", type=_positive, default=omega.DEFAULT_STATE_CAP,
                        help="maximum number of states of any constructed automaton")
    common.add_argument("--cap-ranks", type=_positive, default=None,
                        help="maximum rank in rank-based complementation")

    p = _Parser(prog="numauto", description="Exact numeration systems over real quadratic fields and their automata.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("cf", parents=[common], help="continued fraction of a quadratic irrational").add_argument("x")
    sub.add_parser("repr", parents=[common], help="normalized word of a field element").add_argument("x")
    sub.add_parser("eval", parents=[common], help="exact value of a word").add_argument("word")
    sub.add_parser("normalize", parents=[common], help="normalized word with the same value").add_argument("word")
    for name, text in (("compare", "compare two words by value"), ("add", "normalized word of the sum")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("left")
        sp.add_argument("right")
    sp = sub.add_parser("convert", parents=[common], help="Ostrowski-normalized word to a power-system word")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--gamma", required=True)
    sp.add_argument("word")
    sp = sub.add_parser("automaton", parents=[common], help="export an atomic automaton as DOT or JSON")
    sp.add_argument("kind", help=f"{', '.join(sorted(AUTOMATA))} or v<i>")
    for name, text in (("decide", "truth value of a sentence (exit 0 true, 1 false)"),
                       ("witness", "satisfying assignment of a formula")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--mode", choices=["sequential", "parallel"], default="sequential")
        sp.add_argument("formula")
    sub.add_parser("feasible", parents=[common], help="feasibility report of a numeration system")
    sp = sub.add_parser("selftest", parents=[common], help="seeded representation round trips")
    sp.add_argument("--samples", type=_positive, default=50)
    return p


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    inputs = [getattr(ns, k) for k in ("x", "word", "left", "right", "kind", "formula") if getattr(ns, k, None) is not None]
    options = {k: getattr(ns, k) for k in ("alpha", "gamma", "mode", "samples") if getattr(ns, k, None) is not None}
    return CliConfig(ns.command, ns.system, inputs, ns.fmt, ns.cap_orbit, ns.cap_states, ns.cap_ranks, ns.seed, options)


def run(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with omega.resource_limits(states=cfg.cap_states, ranks=cfg.cap_ranks):
            text, payload, code = COMMANDS[cfg.command](cfg)
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        return EXIT_ERROR
    except (omega.ResourceLimitError, OrbitCapError, RecursionError, MemoryError) as e:
        print(f"resource cap exhausted: {e}", file=err)
        return EXIT_CAP
    except (UsageError, ValueError, TypeError, ArithmeticError, KeyError, IndexError) as e:
        print(f"error: {e}", file=err)
        return EXIT_ERROR
    if cfg.fmt == "json":
        print(json.dumps({"command": cfg.command, "result": payload}, sort_keys=True), file=out)
    elif cfg.fmt == "dot" and cfg.command != "automaton":
        print("error: --format dot only applies to the automaton command", file=err)
        return EXIT_ERROR
    else:
        print(text, file=out)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
