import textwrap
from pathlib import Path

import pytest

from qddc_shield_synth.automata import (
    Dfa,
    complement,
    compile,
    counterexample,
    equivalent,
    intersect,
    is_empty,
    is_subset,
    lift,
    minimize,
    project_determinize,
    union,
)
from qddc_shield_synth.automata.dfa import explore, from_table, run
from qddc_shield_synth.automata.io import from_text, letter_cubes, read_dfa, to_dot, to_text, write_dfa
from qddc_shield_synth.errors import AlphabetMismatchError, CapacityError, SpecFileError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.qddc import parse

SPECS = Path(__file__).resolve().parent.parent / "specs"

AB = VarSet(["a", "b"])


def dfa_of(text: str, vars: VarSet = AB) -> Dfa:
    return compile(parse(text, vars), vars)


def test_boolean_operations_agree_with_formulas():
    x, y = dfa_of("[[a]]"), dfa_of("scount b <= 1")
    assert equivalent(intersect(x, y), dfa_of("[[a]] && scount b <= 1"))
    assert equivalent(union(x, y), dfa_of("[[a]] || scount b <= 1"))
    assert equivalent(minimize(complement(x)), dfa_of("![[a]]"))


def test_complement_never_accepts_the_empty_word():
    c = complement(dfa_of("true"))
    assert not c.accepting[c.init]
    assert is_empty(c)


def test_contradiction_is_empty():
    x = dfa_of("<> <a>")
    assert is_empty(intersect(x, complement(x)))
    assert not is_empty(x)


def test_counterexample_is_shortest():
    longer, shorter = dfa_of("slen >= 2"), dfa_of("slen >= 3")
    word = counterexample(longer, shorter)
    assert word is not None and len(word) == 3
    assert counterexample(shorter, longer) is None
    assert is_subset(shorter, longer)


def test_from_table_drops_unreachable_states_and_splits_accepting_init():
    # state 2 is unreachable; state 0 accepts, so the empty word gets its own state
    dfa = from_table(VarSet(["a"]), [[1, 0], [1, 1], [2, 2]], [True, False, False])
    assert dfa.num_states == 3
    assert not dfa.accepting[0]
    assert run(dfa, [1, 1]) == [0, 2, 2]
    assert dfa.accepting[2]


def test_dfa_must_be_total():
    with pytest.raises(ValueError, match="has 1 transitions, expected 2"):
        Dfa(VarSet(["a"]), ((0,),), (False,))


def test_explore_respects_state_cap():
    with pytest.raises(CapacityError):
        explore(VarSet(["a"]), 0, lambda n, x: n + 1, lambda n: True, max_states=5)


def test_lift_ignores_extra_variables():
    small = VarSet(["a"])
    assert equivalent(lift(dfa_of("[[a]]", small), AB), dfa_of("[[a]]"))
    with pytest.raises(AlphabetMismatchError, match="missing"):
        lift(dfa_of("[[a]]"), small)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatchError, match="different alphabets"):
        intersect(dfa_of("[[a]]"), dfa_of("[[a]]", VarSet(["a"])))


def test_letter_cubes_merge_dont_cares():
    assert letter_cubes([0, 1, 2, 3], AB) == ["--"]
    assert letter_cubes([2, 3], AB) == ["1-"]
    assert letter_cubes([0, 3], AB) == ["00", "11"]


def test_imports_a_hand_written_automaton():
    imported = read_dfa(SPECS / "ends_with_a.dfa")
    a = VarSet(["a"])
    assert imported.vars == a
    assert imported.num_states == 4
    assert minimize(imported).num_states == 2
    assert equivalent(imported, dfa_of("true^<a>", a))


def test_text_format_header(tmp_path):
    dfa = dfa_of("phi_until(2)", VarSet(["r", "p", "q"]))
    assert to_text(dfa).startswith(f"vars: r p q\nstates: {dfa.num_states}\ninit: 0\n")
    assert read_dfa(write_dfa(dfa, tmp_path / "until.dfa")) == dfa


def test_dot_export(tmp_path):
    dfa = dfa_of("[[a]] ^ <b>")
    dot = to_dot(dfa, "chop")
    assert dot.startswith('digraph "chop" {')
    assert "doublecircle" in dot
    assert write_dfa(dfa, tmp_path / "chop.dot").read_text() == dot


def test_from_text_rejects_gaps():
    text = textwrap.dedent("""\
        // one variable, one missing transition
        vars: a
        states: 2
        init: 0
        accepting: 1
        0 0 1
        0 1 1
        1 0 1
    """)
    with pytest.raises(SpecFileError, match="not total"):
        from_text(text)


def test_from_text_rejects_malformed_lines():
    with pytest.raises(SpecFileError, match="expected 'from letter to'"):
        from_text("vars: a\nstates: 1\ninit: 0\n0 -> 0\n")


def test_projection_hides_a_variable():
    hidden = project_determinize(dfa_of("[[a]] && (<> <b>)"), "b")
    assert hidden.vars == VarSet(["a"])
    assert equivalent(hidden, dfa_of("[[a]]", VarSet(["a"])))
