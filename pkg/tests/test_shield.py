import functools
import logging
import textwrap

import pytest

from game_tree import RewardTree
from qddc_shield_synth.analysis import analyze
from qddc_shield_synth.automata import compile, equivalent, run
from qddc_shield_synth.errors import ReferenceCountError
from qddc_shield_synth.qddc import parse
from qddc_shield_synth.shield.hshield import build_hshield, cascade_formula, hamming_soft, hdc_text
from qddc_shield_synth.shield.pipeline import (
    KNOWN_SIZE_DIFFERENCES,
    REFERENCE_STATE_COUNTS,
    REFERENCE_TOLERANCE,
    ShieldResult,
    check_reference_count,
    reference_state_count,
    shield_label,
    synthesize,
)
from qddc_shield_synth.shield.spec import ShieldSpec, parse_spec_text
from qddc_shield_synth.synthesis import Unrealizable, is_deterministic, is_non_blocking, leq_det

# shield type, dm, horizon, expected value, latency
UNTIL5_RESULTS = [
    ("V0", False, 10, 0.25, "∞"),
    ("V2 k=1", False, 10, 0.7142793, "1"),
    ("V2 k=3", False, 10, 0.5982051, "3"),
    ("V3 e=1 d=1", False, 10, 0.7499943, "0"),
    ("V3 e=1 d=2", False, 10, 0.7182475, "1"),
    ("V3 e=1 d=3", False, 10, 0.6614611, "2"),
    ("V0", True, 0, 0.833252, "0"),
    ("V0", True, 10, 0.8571396, "0"),
]
UNTIL5_INSTANCES = [row[:3] for row in UNTIL5_RESULTS]
REALIZABLE_TYPES = ["V0", "V2 k=1", "V2 k=3", "V3 e=1 d=1", "V3 e=1 d=2", "V3 e=1 d=3"]


def shield_spec(shield_type: str, dm: bool = False, horizon: int = 10, bound: int = 5) -> ShieldSpec:
    text = textwrap.dedent(f"""\
        inputs: r
        sse_outputs: p q
        shield_outputs: p' q'
        req: phi_until({bound})
        shield_type: {shield_type}
        dm: {"on" if dm else "off"}
        horizon: {horizon}
        order: !q' !p'
    """)
    return parse_spec_text(text).to_spec()


@functools.cache
def until5_shield(shield_type: str, dm: bool, horizon: int) -> ShieldResult:
    result = synthesize(shield_spec(shield_type, dm=dm, horizon=horizon))
    assert isinstance(result, ShieldResult)
    return result


@pytest.mark.parametrize("shield_type", ["V0", "V1 k=2", "V2 k=1", "V3 e=1 d=2"])
def test_hard_shield_matches_indicator_cascade(shield_type):
    spec = shield_spec(shield_type, bound=2)
    declarative = compile(cascade_formula(spec), spec.interface.game_vars)
    assert equivalent(build_hshield(spec), declarative)


def test_hdc_templates():
    assert hdc_text(shield_spec("V1 k=3").shield_type) == "[]([[Deviation]] => slen<3)"
    assert hdc_text(shield_spec("V0").shield_type) == "true"


def test_labels_and_reference_counts():
    assert shield_label(shield_spec("V2 k=3")) == "V2(3)_NoDM"
    assert shield_label(shield_spec("V0", dm=True, horizon=0)) == "DM_H0"
    assert reference_state_count(shield_spec("V3 e=1 d=2")) == REFERENCE_STATE_COUNTS["V3(1,2)_NoDM"]
    assert reference_state_count(shield_spec("V0", bound=3)) is None


def test_small_reference_count_mismatch_is_a_warning(caplog):
    spec = shield_spec("V2 k=1")
    with caplog.at_level(logging.WARNING, logger="qddc_shield_synth.shield.pipeline"):
        assert check_reference_count(spec, 14)
        assert not caplog.records
        assert check_reference_count(spec, 16, strict=True)
    assert caplog.records[0].levelno == logging.WARNING
    assert "reference count is 14" in caplog.text


def test_large_reference_count_mismatch_is_an_error(caplog):
    spec = shield_spec("V2 k=1")
    with pytest.raises(ReferenceCountError, match="40 states, the reference count is 14"):
        check_reference_count(spec, 40, strict=True)
    with caplog.at_level(logging.ERROR, logger="qddc_shield_synth.shield.pipeline"):
        assert not check_reference_count(spec, 17)
    assert caplog.records[0].levelno == logging.ERROR


def test_known_size_difference_is_accepted_only_at_its_recorded_size():
    spec = shield_spec("V0")
    assert check_reference_count(spec, KNOWN_SIZE_DIFFERENCES["V0_NoDM"], strict=True)
    with pytest.raises(ReferenceCountError):
        check_reference_count(spec, 9, strict=True)


@pytest.mark.parametrize("shield_type, dm, horizon", UNTIL5_INSTANCES)
def test_controller_sizes_against_reference_counts(shield_type, dm, horizon):
    result = until5_shield(shield_type, dm, horizon)
    label = shield_label(result.spec)
    states = result.controller.num_states
    reference = REFERENCE_STATE_COUNTS[label]
    print(f"{label}: {states} states (reference {reference})")

    assert check_reference_count(result.spec, states, strict=True)
    if label in KNOWN_SIZE_DIFFERENCES:
        assert states == KNOWN_SIZE_DIFFERENCES[label]
    else:
        assert abs(states - reference) <= REFERENCE_TOLERANCE


@pytest.mark.parametrize("shield_type", ["V1 k=1", "V1 k=3"])
def test_burst_bounded_deviation_is_unrealizable(shield_type):
    result = synthesize(shield_spec(shield_type))
    assert isinstance(result, Unrealizable)
    assert result.losing_inputs


@pytest.mark.parametrize("shield_type, dm, horizon, expected, latency", UNTIL5_RESULTS)
def test_shield_quality_on_until_protocol(shield_type, dm, horizon, expected, latency):
    result = until5_shield(shield_type, dm, horizon)
    report = analyze(result.model(), shield_label(result.spec), result.controller.num_states)
    assert report.expected_value == pytest.approx(expected, abs=1e-6)
    assert report.latency == latency


@pytest.mark.parametrize("shield_type, dm, horizon", UNTIL5_INSTANCES)
def test_each_stage_is_at_least_as_deterministic_as_the_last(shield_type, dm, horizon):
    result = until5_shield(shield_type, dm, horizon)
    assert is_non_blocking(result.mps)
    assert is_deterministic(result.controller)
    if dm:
        assert leq_det(result.mps, result.mphos)
        assert leq_det(result.mphos, result.controller)
        assert result.stats.mphos_states == result.mphos.num_states
    else:
        assert result.mphos is None
    assert leq_det(result.mps, result.controller)
    assert result.stats.controller_states == result.controller.num_states


def test_synthesis_is_deterministic():
    first = synthesize(shield_spec("V3 e=1 d=2"))
    second = synthesize(shield_spec("V3 e=1 d=2"))
    assert first.controller.dfa == second.controller.dfa


def test_exact_and_float_value_iteration_agree():
    exact = synthesize(shield_spec("V0", dm=True, horizon=3), exact=True)
    approx = synthesize(shield_spec("V0", dm=True, horizon=3), exact=False)
    assert exact.controller.dfa == approx.controller.dfa


@pytest.mark.parametrize("horizon", [0, 10])
@pytest.mark.parametrize("shield_type", REALIZABLE_TYPES)
def test_deviation_minimized_shield_does_not_depend_on_hdc(shield_type, horizon):
    baseline = until5_shield("V0", True, horizon)
    other = until5_shield(shield_type, True, horizon)
    assert equivalent(other.controller.dfa, baseline.controller.dfa)


def test_two_step_lookahead_on_until_protocol_matches_the_game_tree():
    result = until5_shield("V0", True, 2)
    sup, pruned = result.mps, result.mphos
    io = sup.io
    tree = RewardTree(sup, hamming_soft(result.spec.interface))

    request = io.inputs.letter_index({"r": True, "p": False, "q": False})
    first = io.letter(request, pruned.allowed_outputs(pruned.dfa.init, request)[0])
    for word in [(), (first,)]:
        q = run(pruned.dfa, word)[-1]
        for i in range(io.num_inputs):
            assert pruned.allowed_outputs(q, i) == tree.best_outputs(word, i, lookahead=2), f"after {word}"


def test_hamming_soft_rewards_each_matching_output():
    interface = shield_spec("V0").interface
    soft = hamming_soft(interface)
    assert [r.weight for r in soft.requirements] == [1, 1]
    assert soft.requirements[0].formula == parse("true^<p <=> p'>", interface.game_vars)
