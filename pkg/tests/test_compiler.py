import itertools

import pytest

from formula_gen import FormulaGenerator, all_traces, random_traces
from qddc_shield_synth.automata import accepting_row, accepts, compile, equivalent, is_prefix_closed, minimize
from qddc_shield_synth.errors import CapacityError, DeclarationError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.qddc import Trace, parse, prefix_row, satisfies

AB = VarSet(["a", "b"])
RPQ = VarSet(["r", "p", "q"])

UNTIL3_ROW = [1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0]


def _agrees_with_evaluator(d, vars, traces):
    dfa = compile(d, vars)
    for t in traces:
        assert accepts(dfa, t) == satisfies(d, t), f"disagreement on {t.letters}"
    return dfa


def _agrees_on_every_prefix(d, vars, traces):
    dfa = compile(d, vars)
    for t in traces:
        assert accepting_row(dfa, t) == prefix_row(d, t), f"disagreement on a prefix of {t.letters}"


# 40 seeds x 5 formulas = 200 random formulas over three variables
@pytest.mark.parametrize("seed", range(40))
def test_compiled_automaton_matches_direct_semantics(seed):
    gen = FormulaGenerator(RPQ, seed=seed)
    short = list(all_traces(RPQ, 2))
    # the row of a length-5 trace checks each of its prefixes too
    sampled = [t for t in random_traces(RPQ, count=60, max_length=5, seed=seed) if len(t) == 5]
    for _ in range(5):
        _agrees_on_every_prefix(gen.formula(depth=3), RPQ, short + sampled)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(40))
def test_compiled_automaton_matches_direct_semantics_on_all_short_traces(seed):
    gen = FormulaGenerator(RPQ, seed=seed)
    # rows over all length-5 traces cover every trace of length <= 5
    traces = [Trace(RPQ, letters) for letters in itertools.product(range(RPQ.num_letters), repeat=5)]
    for _ in range(5):
        _agrees_on_every_prefix(gen.formula(depth=3), RPQ, traces)


@pytest.mark.parametrize("seed", range(4))
def test_quantifier_free_formulas_on_longer_traces(seed):
    gen = FormulaGenerator(AB, seed=100 + seed, max_bound=4, quantifiers=False)
    traces = list(random_traces(AB, count=60, max_length=9, seed=seed))
    for _ in range(5):
        _agrees_with_evaluator(gen.formula(depth=4), AB, traces)


def test_compiled_automata_are_minimal_and_start_on_the_empty_word():
    gen = FormulaGenerator(AB, seed=42)
    for _ in range(20):
        dfa = compile(gen.formula(depth=3), AB)
        assert dfa.init == 0
        assert not dfa.accepting[0]
        assert minimize(dfa).num_states == dfa.num_states


def test_point_interval_automaton_is_small():
    # empty word, the accepting single letter, and a sink
    assert compile(parse("pt", AB), AB).num_states == 3
    assert compile(parse("true", AB), AB).num_states == 2


def test_until_row_over_request_trace():
    r = [0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]
    p = [0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]
    q = [1 if i == 8 else 0 for i in range(21)]
    dfa = compile(parse("phi_until(3)", RPQ), RPQ)
    trace = Trace.from_columns(RPQ, {"r": r, "p": p, "q": q})

    assert accepting_row(dfa, trace) == [bool(v) for v in UNTIL3_ROW]


def test_prefix_closure():
    assert is_prefix_closed(compile(parse("pref(phi_until(5))", RPQ), RPQ))
    assert is_prefix_closed(compile(parse("[[p]]", RPQ), RPQ))
    # a new request restarts the window, so a failed prefix can be followed by success
    assert not is_prefix_closed(compile(parse("phi_until(3)", RPQ), RPQ))
    assert not is_prefix_closed(compile(parse("EP(p)", RPQ), RPQ))


def test_shadowing_quantifier_frees_the_variable():
    shadowed = compile(parse("ex a. [[a && b]]", AB), AB)
    assert equivalent(shadowed, compile(parse("[[b]]", AB), AB))


def test_fresh_quantified_variable():
    d = parse("ex w. (<w> ^ [[true]]) && [[!w]] ^ true", AB)
    _agrees_with_evaluator(d, AB, list(all_traces(AB, 3)))


def test_counter_saturation_keeps_automata_small():
    dfa = compile(parse("scount a <= 4", AB), AB)
    # empty word, counts 0..4, saturated
    assert dfa.num_states == 7


def test_undeclared_variable():
    with pytest.raises(DeclarationError, match="undeclared variable"):
        compile(parse("[[c]]", ["a", "b", "c"]), AB)


def test_state_cap():
    with pytest.raises(CapacityError, match="state cap of 10"):
        compile(parse("slen = 30", AB), AB, max_states=10)
