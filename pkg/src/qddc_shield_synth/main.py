#!/usr/bin/env python
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from qddc_shield_synth.analysis.dtmc import build_dtmc
from qddc_shield_synth.analysis.mrmc import validate_tra, write_mrmc
from qddc_shield_synth.analysis.report import NON_DEVIATION, analyze, update_report_table
from qddc_shield_synth.analysis.simulate import simulate
from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.automata.dfa import Dfa, accepting_row, equivalent, minimize
from qddc_shield_synth.automata.io import read_dfa, write_dfa
from qddc_shield_synth.constants import (
    DEFAULT_MAX_STATES,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_REPORT_TABLE,
    DEFAULT_SEED,
    DEFAULT_SIMULATION_STEPS,
    EXIT_CAPACITY,
    EXIT_OK,
    EXIT_SPEC_ERROR,
    EXIT_UNREALIZABLE,
)
from qddc_shield_synth.errors import CapacityError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.qddc.evaluator import Trace
from qddc_shield_synth.runtime.instance import ShieldInstance
from qddc_shield_synth.runtime.protocol import serve_lines
from qddc_shield_synth.runtime.replay import replay
from qddc_shield_synth.shield.hshield import build_hshield, hdc_formula
from qddc_shield_synth.shield.model import ShieldModel
from qddc_shield_synth.shield.pipeline import shield_label, synthesize
from qddc_shield_synth.shield.spec import HDC_VARS, ShieldSpec, load_spec_file
from qddc_shield_synth.synthesis.export import controller_table, read_controller, write_controller
from qddc_shield_synth.synthesis.supervisor import Unrealizable
from qddc_shield_synth.types import RunConfig
from utils.json_utils import dump_object
from utils.trace_file_helper import TraceFileHelper

logger = logging.getLogger(__name__)


class UnrealizableShield(Exception):
    """Carries an unrealizability certificate up to the exit-code mapping."""

    def __init__(self, result: Unrealizable):
        super().__init__(result.reason)
        self.result = result


class ShieldWorkflow:
    def __init__(self, config: RunConfig):
        self.config = config
        self.spec_file = load_spec_file(config.spec_path)
        self.out_dir = Path(config.out_dir)
        self._spec: Optional[ShieldSpec] = None

    @property
    def spec(self) -> ShieldSpec:
        if self._spec is None:
            self._spec = self.spec_file.to_spec(self.config.horizon, self.config.dm, self.config.order)
        return self._spec

    def formula_automaton(self, name: str) -> Dfa:
        cfg = self.config
        if name == "hshield":
            return build_hshield(self.spec, cfg.max_states)
        if name == "hdc":
            return compile(hdc_formula(self.spec.shield_type, self.spec.macros), HDC_VARS, cfg.max_states)
        if name == "req" and self.spec_file.has_shield:
            return compile(self.spec.req, self.spec.interface.io_vars, cfg.max_states)
        d = self.spec_file.parse_formula(self.spec_file.formula_text(name))
        return compile(d, self.spec_file.declared_vars(), cfg.max_states)

    def shield_model(self) -> tuple[ShieldModel, str, int, Optional[float]]:
        """Controller from --controller, or a fresh synthesis; with its label, size and synthesis time."""
        cfg = self.config
        label = shield_label(self.spec)
        if cfg.controller is not None:
            table = read_controller(cfg.controller)
            table.check_total()
            model = ShieldModel.from_table(self.spec, table, cfg.max_states)
            return model, label, table.num_states, None

        result = synthesize(self.spec, cfg.exact, cfg.max_states)
        if isinstance(result, Unrealizable):
            raise UnrealizableShield(result)
        model = result.model(cfg.max_states)
        return model, label, result.controller.num_states, result.stats.seconds

    def cmd_compile(self) -> int:
        if self.config.dfa_import is not None:
            return self._import_dfa(Path(self.config.dfa_import))
        name = self.config.formula or "req"
        print(f"\n\n=== COMPILING {name} ===\n\n")
        dfa = self.formula_automaton(name)
        dfa_path = write_dfa(dfa, self.out_dir / f"{name}.dfa")
        dot_path = write_dfa(dfa, self.out_dir / f"{name}.dot")
        print(f"Variables: {' '.join(dfa.vars)}")
        print(f"States: {dfa.num_states} ({len(dfa.accepting_states())} accepting)")
        print(f"Wrote {dfa_path} and {dot_path}")
        return EXIT_OK

    def _import_dfa(self, path: Path) -> int:
        print(f"\n\n=== IMPORTING {path} ===\n\n")
        dfa = read_dfa(path)
        minimal = minimize(dfa)
        print(f"Variables: {' '.join(dfa.vars)}")
        print(f"States: {dfa.num_states} ({minimal.num_states} after minimization)")
        if self.config.formula is not None:
            same = equivalent(dfa, self.formula_automaton(self.config.formula))
            print(f"Equivalent to {self.config.formula}: {'yes' if same else 'no'}")
        dfa_path = write_dfa(minimal, self.out_dir / f"{path.stem}.dfa")
        dot_path = write_dfa(minimal, self.out_dir / f"{path.stem}.dot")
        print(f"Wrote {dfa_path} and {dot_path}")
        return EXIT_OK

    def cmd_synth(self) -> int:
        label = shield_label(self.spec)
        print(f"\n\n=== SYNTHESIZING {label} ===\n\n")
        result = synthesize(self.spec, self.config.exact, self.config.max_states)
        if isinstance(result, Unrealizable):
            raise UnrealizableShield(result)

        ctrl_path = write_controller(controller_table(result.controller), self.out_dir / f"{label}.ctrl")
        dot_path = write_dfa(result.controller.dfa, self.out_dir / f"{label}.dot")
        stats_path = self.out_dir / f"{label}.stats.json"
        stats_path.write_text(dump_object(result.stats))

        print("\n\n=== SYNTHESIS STATS ===\n\n")
        print(dump_object(result.stats))
        print(f"\nWrote {ctrl_path}, {dot_path} and {stats_path}")
        return EXIT_OK

    def cmd_analyze(self) -> int:
        cfg = self.config
        model, label, states, seconds = self.shield_model()
        print(f"\n\n=== ANALYZING {label} ===\n\n")
        report = analyze(model, label, states, seconds, cfg.exact, cfg.max_states)
        print(report.to_text())
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / f"{label}.report.json").write_text(dump_object(report))
        table = update_report_table(self.out_dir / DEFAULT_REPORT_TABLE, report)
        print("\n\n=== REPORT TABLE ===\n\n")
        print(table.to_string())
        if cfg.mrmc:
            self._export_mrmc(model, label)
        return EXIT_OK

    def _export_mrmc(self, model: ShieldModel, label: str) -> list[int]:
        chain = build_dtmc(model, self.spec_file.parse_formula(NON_DEVIATION, model.vars), self.config.max_states)
        tra, lab = write_mrmc(chain, self.out_dir / label, label="nodev")
        bad = validate_tra(tra)
        print("\n\n=== MRMC EXPORT ===\n\n")
        print(f"Wrote {tra} and {lab}: {chain.num_states} states, {chain.num_transitions} transitions")
        if bad:
            print(f"Rows not summing to 1: {bad}")
        return bad

    def cmd_export_mrmc(self) -> int:
        model, label, _, _ = self.shield_model()
        bad = self._export_mrmc(model, label)
        return EXIT_OK if not bad else EXIT_SPEC_ERROR

    def cmd_simulate(self) -> int:
        cfg = self.config
        model, label, _, _ = self.shield_model()
        print(f"\n\n=== SIMULATING {label} ({cfg.steps} steps, seed {cfg.seed}) ===\n\n")
        result = simulate(model, cfg.steps, cfg.seed)
        print(dump_object(result))
        return EXIT_OK

    def cmd_run(self) -> int:
        cfg = self.config
        if cfg.formula is not None:
            return self._run_monitor(cfg.formula)

        model, label, _, _ = self.shield_model()
        instance = ShieldInstance(model)
        if cfg.trace is None:
            for line in serve_lines(instance, sys.stdin):
                print(line, flush=True)
            return EXIT_OK

        print(f"\n\n=== REPLAYING {cfg.trace} THROUGH {label} ===\n\n")
        helper = TraceFileHelper(str(cfg.trace), list(model.interface.io_vars))
        result = replay(instance, helper.df)
        if isinstance(result, str):
            raise ValueError(result)
        print(result.to_frame().to_string())
        print(f"\nSteps: {result.steps}, deviations: {result.deviations}, SSEOK steps: {result.sse_ok_steps}")
        return EXIT_OK

    def _run_monitor(self, name: str) -> int:
        if self.config.trace is None:
            raise ValueError("run --formula needs --trace FILE.csv")
        d = self.spec_file.parse_formula(self.spec_file.formula_text(name))
        columns = set(TraceFileHelper.read_columns(str(self.config.trace)))
        vars = VarSet([v for v in self.spec_file.declared_vars() if v in columns])
        dfa = compile(d, vars, self.config.max_states)
        helper = TraceFileHelper(str(self.config.trace), list(vars))
        row = accepting_row(dfa, Trace.from_rows(vars, helper.get_rows()))

        print(f"\n\n=== {name} ON {self.config.trace} ===\n\n")
        print(",".join(str(int(v)) for v in row))
        return EXIT_OK

    def run(self) -> int:
        handlers = {
            "compile": self.cmd_compile,
            "synth": self.cmd_synth,
            "analyze": self.cmd_analyze,
            "simulate": self.cmd_simulate,
            "export-mrmc": self.cmd_export_mrmc,
            "run": self.cmd_run,
        }
        return handlers[self.config.command]()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qddc-shield")
    parser.add_argument("command", help="compile, synth, analyze, simulate, export-mrmc or run")
    parser.add_argument("spec_path", help="Path to a .qs shield specification file.")
    parser.add_argument("--out", default=DEFAULT_OUTPUT_DIR, help="Directory for generated files.")
    parser.add_argument("--formula", help="Formula to compile or monitor: req, hdc, hshield or a `formula` name.")
    parser.add_argument("--controller", help="Controller table to analyze instead of synthesizing one.")
    parser.add_argument("--trace", help="CSV trace with one 0/1 column per variable.")
    parser.add_argument("--horizon", type=int, help="Look-ahead horizon for deviation minimization.")
    parser.add_argument("--no-dm", dest="dm", action="store_const", const=False, default=None,
                        help="Skip deviation minimization.")
    parser.add_argument("--dm", dest="dm", action="store_const", const=True, help="Force deviation minimization.")
    parser.add_argument("--order", help="Output preference order, e.g. \"!q' !p'\".")
    parser.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, help="State cap for every automaton.")
    parser.add_argument("--float", dest="exact", action="store_false", help="Use float arithmetic instead of exact.")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Simulation seed.")
    parser.add_argument("--steps", type=int, default=DEFAULT_SIMULATION_STEPS, help="Simulation length.")
    parser.add_argument("--mrmc", action="store_true", help="Also write MRMC .tra/.lab files when analyzing.")
    parser.add_argument("--import", dest="dfa_import",
                        help="compile: import a .dfa file instead of compiling a formula.")
    parser.add_argument("--verbose", action="store_true", help="Debug logging.")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        command=args.command,
        spec_path=args.spec_path,
        out_dir=args.out,
        formula=args.formula,
        controller=args.controller,
        trace=args.trace,
        horizon=args.horizon,
        dm=args.dm,
        order=args.order,
        max_states=args.max_states,
        exact=args.exact,
        seed=args.seed,
        steps=args.steps,
        mrmc=args.mrmc,
        dfa_import=args.dfa_import,
        verbose=args.verbose,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as e:
        # argparse usage errors exit 2, which is EXIT_UNREALIZABLE here
        return EXIT_OK if e.code in (0, None) else EXIT_SPEC_ERROR
    except ValidationError as e:
        print(f"Invalid arguments: {e}", file=sys.stderr)
        return EXIT_SPEC_ERROR

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return ShieldWorkflow(config).run()
    except UnrealizableShield as e:
        print("\n\n=== UNREALIZABLE ===\n\n")
        print(dump_object(e.result))
        return EXIT_UNREALIZABLE
    except CapacityError as e:
        print(f"Capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as e:
        print(f"Specification error: {e}", file=sys.stderr)
        return EXIT_SPEC_ERROR


if __name__ == "__main__":
    sys.exit(main())
