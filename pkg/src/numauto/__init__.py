"""Exact numeration systems over real quadratic fields, their automata, and a small first-order decider."""

from .quadfield import CFExpansion, QuadExt, cf_expand
from .epwords import EpWord, NumSystem, eval_word, format_word, normalize, parse_word, represent
from .omega import BuchiAutomaton, UpWord
from .fologic import compile_formula, decide, parse_formula, witness

__all__ = [
    "BuchiAutomaton", "CFExpansion", "EpWord", "NumSystem", "QuadExt", "UpWord",
    "cf_expand", "compile_formula", "decide", "eval_word", "format_word", "normalize",
    "parse_formula", "parse_word", "represent", "witness",
]
