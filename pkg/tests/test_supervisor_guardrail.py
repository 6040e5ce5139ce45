import pytest

from qddc_shield_synth.automata import compile
from qddc_shield_synth.guardrails.supervisor_guardrail import ValidateSupervisorGuardrail
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.qddc import parse
from qddc_shield_synth.synthesis import IoPartition, Supervisor, mps

IO = IoPartition(VarSet(["i"]), VarSet(["o"]))


def hard(text: str):
    return compile(parse(text, IO.vars), IO.vars)


def test_accepts_the_maximally_permissive_supervisor():
    spec = hard("[[i => o]]")
    sup = mps(spec, IO)
    ok, result = ValidateSupervisorGuardrail(spec).get_guardrail_function()(sup)
    assert ok
    assert result is sup


def test_rejects_unexpected_type():
    ok, message = ValidateSupervisorGuardrail(hard("true")).get_guardrail_function()("not a supervisor")
    assert not ok
    assert "Unexpected output type" in message


def test_rejects_words_outside_the_specification():
    loose = mps(hard("true"), IO)
    ok, message = ValidateSupervisorGuardrail(hard("[[i => o]]")).get_guardrail_function()(loose)
    assert not ok
    assert "outside the specification: 10" in message


def test_rejects_blocking_supervisor():
    strict = hard("[[i && o]]")
    blocking = Supervisor.from_dfa(strict, IO)
    guardrail = ValidateSupervisorGuardrail(strict)
    ok, message = guardrail.get_guardrail_function()(blocking)
    assert not ok
    assert "blocks" in message
    with pytest.raises(RuntimeError, match="MPS failed validation"):
        guardrail.check(blocking, "MPS")


def test_rejects_other_alphabet():
    other = IoPartition(VarSet(["a"]), VarSet(["b"]))
    sup = mps(compile(parse("true", other.vars), other.vars), other)
    ok, message = ValidateSupervisorGuardrail(hard("true")).get_guardrail_function()(sup)
    assert not ok
    assert "specification over" in message
