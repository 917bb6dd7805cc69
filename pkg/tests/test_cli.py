import json
import subprocess
import sys
from importlib import resources

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from numauto.cli import CliConfig, main
from numauto.epwords import NumSystem, eval_word, parse_word
from numauto.omega import BuchiAutomaton
from numauto.quadfield import QuadExt

G = "power:1+sqrt2"
O = "ostrowski:sqrt2"


def _schemas():
    base = resources.files("numauto") / "schemas"
    docs = {name: json.loads((base / name).read_text()) for name in ("result.json", "automaton.json",
                                                                     "feasibility.json")}
    registry = Registry().with_resources((name, Resource.from_contents(doc)) for name, doc in docs.items())
    return Draft202012Validator(docs["result.json"], registry=registry)


VALIDATOR = _schemas()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    VALIDATOR.validate(doc)
    return code, doc["result"]


# --- text output -------------------------------------------------------------------------------

def test_cf(capsys):
    assert run(capsys, "cf", "1/2+1/2√5")[:2] == (0, "[1; (1)]")
    assert run(capsys, "cf", "sqrt2")[:2] == (0, "[1; (2)]")


def test_repr_eval_round_trip(capsys):
    code, word, _ = run(capsys, "repr", "1/2", "--system", G)
    assert (code, word) == (0, "0.(10)")
    code, value, _ = run(capsys, "eval", word, "--system", G)
    assert QuadExt.parse(value) == QuadExt(1, 0) / 2
    assert run(capsys, "repr", "10", "--system", O)[1] == "200.0"


def test_normalize_and_add(capsys):
    S = NumSystem.parse("power:(1+sqrt5)/2")
    code, out, _ = run(capsys, "normalize", "0.11", "--system", "power:(1+sqrt5)/2")
    assert code == 0 and out == "1.0"
    code, out, _ = run(capsys, "add", "1.0", "1.0", "--system", "power:(1+sqrt5)/2")
    assert eval_word(parse_word(out), S) == 2


@pytest.mark.parametrize("left,right,sign", [("1.0", "2.0", "<"), ("2.0", "2.0", "="), ("10.0", "2.0", ">")])
def test_compare(capsys, left, right, sign):
    assert run(capsys, "compare", left, right, "--system", G)[1] == sign


def test_convert(capsys):
    code, out, _ = run(capsys, "convert", "0.1", "--alpha", "sqrt2", "--gamma", "3+2sqrt2")
    assert (code, out) == (0, "0.(2)")


def test_automaton_dot(capsys):
    code, out, _ = run(capsys, "automaton", "order", "--system", "power:(1+sqrt5)/2", "--format", "dot")
    assert code == 0 and out.startswith("digraph")


def test_feasible_text(capsys):
    code, out, _ = run(capsys, "feasible", "--system", G)
    assert code == 0 and "least k with base^-k < 1/2: 1" in out


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--system", O, "--samples", "10", "--seed", "3")
    assert code == 0 and out.startswith("10/10")


# --- exit codes ---------------------------------------------------------------------------------

def test_decide_exit_codes(capsys):
    assert run(capsys, "decide", "A x. E y. (x<y)", "--system", G)[:2] == (0, "true")
    assert run(capsys, "decide", "E x. (x<x)", "--system", G)[:2] == (1, "false")
    code, _, err = run(capsys, "decide", "E x. (x<", "--system", G)
    assert code == 2 and "position" in err
    # a system no other test compiles, so no memoized automaton sidesteps the cap
    code, _, err = run(capsys, "decide", "A x. A y. (x+y=y+x)", "--system", "power:2+sqrt3", "--cap-states", "3")
    assert code == 3 and "cap" in err


def test_input_errors(capsys):
    assert run(capsys, "repr", "1+*2", "--system", G)[0] == 2
    assert run(capsys, "automaton", "bogus", "--system", G)[0] == 2
    assert run(capsys, "automaton", "v7", "--system", G)[0] == 2
    assert run(capsys, "eval", "1.0", "--system", "binary:2")[0] == 2
    assert run(capsys, "repr", "1", "--system", G, "--format", "dot")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["repr", "1", "--cap-states", "0"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_orbit_cap(capsys):
    assert run(capsys, "repr", "1/97", "--system", "power:3+2sqrt2", "--cap-orbit", "2")[0] == 3


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig("repr", G, ["1"], "text", 0, 10, None, 0, {})


# --- JSON ------------------------------------------------------------------------------------------

def test_json_cf(capsys):
    code, res = run_json(capsys, "cf", "(3+sqrt2)/7")
    assert res["text"] == "[0; 1 1 1 (2)]"
    assert res["period"] == [2]


def test_json_decide(capsys):
    code, res = run_json(capsys, "decide", "E x. (x+x=U0)", "--system", O, "--mode", "parallel")
    assert code == 0 and res["value"] is True and res["mode"] == "parallel"


def test_json_witness(capsys):
    code, res = run_json(capsys, "witness", "x+x=U0", "--system", G)
    assert res["assignment"] == [{"variable": "x", "value": "1/2", "word": "0.(10)"}]
    code, res = run_json(capsys, "witness", "x<x", "--system", G)
    assert code == 1 and res["assignment"] is None


@pytest.mark.parametrize("kind", ["valid", "order", "nat", "u", "v1", "tau"])
def test_json_automaton_round_trip(capsys, kind):
    code, res = run_json(capsys, "automaton", kind, "--system", O)
    A = BuchiAutomaton.from_json(json.dumps(res))
    assert A.n == res["states"]
    assert json.loads(A.to_json()) == res


def test_json_feasible(capsys):
    code, res = run_json(capsys, "feasible", "--system", "ostrowski:(1+sqrt5)/2")
    assert res["least_verified_k"] == 1


@pytest.mark.parametrize("argv", [
    ("repr", "2", "--system", G), ("eval", "0.(10)", "--system", G), ("normalize", "0.11", "--system", G),
    ("compare", "1.0", "0.1", "--system", O), ("add", "1.0", "0.1", "--system", O),
    ("convert", "0.1", "--alpha", "sqrt2", "--gamma", "3+2sqrt2"), ("selftest", "--system", G, "--samples", "3"),
])
def test_json_envelopes_validate(capsys, argv):
    code, res = run_json(capsys, *argv)
    assert code == 0 and isinstance(res, dict)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "numauto.cli", "cf", "sqrt2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "[1; (2)]"
