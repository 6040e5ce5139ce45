import pytest

from formula_gen import FormulaGenerator
from qddc_shield_synth.errors import DeclarationError, MacroError, QddcSyntaxError
from qddc_shield_synth.prop_logic import TRUE, PNot, PVar
from qddc_shield_synth.qddc import MacroDef, builtin_macros, desugar, free_vars, merge_macros, parse, rename, to_text
from qddc_shield_synth.qddc.ast import (
    All,
    AllButLast,
    And,
    Chop,
    Exists,
    Implies,
    Not,
    Point,
    ScountCmp,
    SlenCmp,
    is_core,
)

VARS = ["r", "p", "q"]


def test_atoms_and_chop():
    d = parse("[[p]] ^ <q> ^ [!r]", VARS)
    assert d == Chop(Chop(All(PVar("p")), Point(PVar("q"))), AllButLast(PNot(PVar("r"))))


def test_chop_binds_tighter_than_and():
    d = parse("[[p]]^<q> && slen<=3", VARS)
    assert d == And(Chop(All(PVar("p")), Point(PVar("q"))), SlenCmp("<=", 3))


def test_point_followed_by_implication():
    assert parse("<p>=><q>", VARS) == Implies(Point(PVar("p")), Point(PVar("q")))


def test_true_and_false_are_interval_atoms():
    assert parse("true", VARS) == All(TRUE)
    assert parse("!false", VARS) == Not(parse("false", VARS))


def test_counters_take_a_proposition_and_a_bound():
    assert parse("scount p && q >= 2", VARS) == ScountCmp(parse("[[p && q]]", VARS).phi, ">=", 2)


def test_quantifier_binds_its_variable():
    d = parse("ex w. EP(w) && [[p]]", VARS)
    assert isinstance(d, Exists)
    assert free_vars(d) == {"p"}


def test_undeclared_variable_is_rejected_with_position():
    with pytest.raises(DeclarationError, match="line 2, column 3: undeclared variable 'x'"):
        parse("[[p]] ^\n<(x)>", VARS)


def test_bare_variable_is_not_a_formula():
    with pytest.raises(QddcSyntaxError, match="'p' is not a formula"):
        parse("p ^ <q>", VARS)


def test_unbalanced_brackets():
    with pytest.raises(QddcSyntaxError, match="expected '\\]\\]'"):
        parse("[[p] ^ <q>", VARS)


def test_until_macro_expands_to_its_body():
    expanded = parse("Until(p, q, 3)", VARS)
    written = parse("((slen<(3)) && [[(p)]]) || (((([(p)]||pt)^<(q)>) && slen<=(3))^true)", VARS)
    assert expanded == written


def test_macro_arguments_may_contain_commas_in_parentheses():
    d = parse("SinceLast(r, Until(p, q, 2))", VARS)
    assert free_vars(d) == {"r", "p", "q"}


def test_zero_argument_macro_without_parentheses():
    d = parse("NoSpuriousDeviation", ["SSEOK", "Deviation"])
    assert free_vars(d) == {"SSEOK", "Deviation"}


def test_macro_arity_error():
    with pytest.raises(MacroError, match="expects 3 argument"):
        parse("Until(p, q)", VARS)


def test_recursive_macro_hits_expansion_limit():
    macros = merge_macros(builtin_macros(), {"Loop": MacroDef(name="Loop", params=[], body="<p> && Loop")})
    with pytest.raises(MacroError, match="recursive macro"):
        parse("Loop", VARS, macros)


def test_macro_parameters_must_be_distinct():
    with pytest.raises(ValueError, match="distinct"):
        MacroDef(name="Bad", params=["a", "a"], body="[[a]]")


def test_rename_skips_bound_variables():
    d = parse("ex p. EP(p) && [[q]]", VARS)
    renamed = rename(d, {"p": "p'", "q": "q'"})
    assert renamed == Exists("p", And(parse("EP(p)", VARS), All(PVar("q'"))))


def test_rename_refuses_capture():
    d = parse("ex w. EP(w) && [[q]]", VARS)
    with pytest.raises(ValueError, match="capture"):
        rename(d, {"q": "w"})


def test_desugar_leaves_only_core_nodes():
    gen = FormulaGenerator(VARS, seed=11)
    for _ in range(50):
        assert is_core(desugar(gen.formula(depth=4)))


def test_to_text_is_reparseable():
    gen = FormulaGenerator(VARS, seed=5)
    for _ in range(30):
        d = gen.formula(depth=3)
        assert parse(to_text(d), VARS) == d
