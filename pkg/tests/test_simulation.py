import textwrap
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from qddc_shield_synth.analysis import analyze, simulate
from qddc_shield_synth.shield.pipeline import shield_label, synthesize
from qddc_shield_synth.shield.spec import load_spec_file, parse_spec_text

SPECS = Path(__file__).resolve().parent.parent / "specs"

ECHO_SPEC = textwrap.dedent("""\
    inputs: r
    sse_outputs: p
    shield_outputs: p'
    req: [[r => p]]
    shield_type: V0
    dm: off
    order: !p'
""")


@pytest.fixture(scope="module")
def echo_model():
    return synthesize(parse_spec_text(ECHO_SPEC).to_spec()).model()


def test_same_seed_same_run(echo_model):
    first = simulate(echo_model, 500, seed=11)
    second = simulate(echo_model, 500, seed=11)
    assert np.array_equal(first.letters, second.letters)
    assert first.deviation_frequency == second.deviation_frequency
    assert not np.array_equal(first.letters, simulate(echo_model, 500, seed=12).letters)


def test_single_step(echo_model):
    result = simulate(echo_model, 1, seed=3)
    assert result.steps == 1
    assert result.deviation_frequency in (0.0, 1.0)
    assert result.deviation_frequency + result.non_deviation_frequency == 1.0
    with pytest.raises(ValueError, match="steps must be >= 1"):
        simulate(echo_model, 0)


def test_trace_columns_follow_the_extended_alphabet(echo_model):
    result = simulate(echo_model, 50, seed=5)
    trace = result.trace(echo_model)
    assert list(trace.columns) == ["r", "p", "p'", "SSEOK", "Deviation"]
    assert len(trace) == 50
    assert trace["Deviation"].mean() == pytest.approx(result.deviation_frequency)
    assert (trace["p'"] == trace["r"]).all()


def test_echo_frequency_matches_chain(echo_model):
    result = simulate(echo_model, 20_000, seed=2019)
    assert result.non_deviation_frequency == pytest.approx(0.5, abs=0.02)
    assert result.standard_error == pytest.approx(np.sqrt(0.25 / 20_000), rel=0.1)


@pytest.mark.slow
@pytest.mark.parametrize(
    "spec_name, horizon",
    [
        ("until5_v0.qs", None),
        ("until5_v2_1.qs", None),
        ("until5_v2_3.qs", None),
        ("until5_v3_1_1.qs", None),
        ("until5_v3_1_2.qs", None),
        ("until5_v3_1_3.qs", None),
        ("until5_dm.qs", 0),
        ("until5_dm.qs", 10),
    ],
)
def test_simulation_agrees_with_analysis(spec_name, horizon):
    spec = load_spec_file(SPECS / spec_name).to_spec(horizon=horizon)
    result = synthesize(spec)
    model = result.model()
    report = analyze(model, shield_label(spec), result.controller.num_states)
    exact = Fraction(report.expected_value_exact)

    simulated = simulate(model, 1_000_000, seed=2019)
    assert simulated.standard_error > 0
    z = (simulated.non_deviation_frequency - float(exact)) / simulated.standard_error
    assert abs(z) <= 3, f"{shield_label(spec)}: z = {z:.2f}"
