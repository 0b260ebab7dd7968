"""
One manager per CLI subcommand.

Each manager turns a CommandSpec into a JSON-serializable report and knows
how to render that report as a human-readable table. The attack sweep
also renders CSV. Reports contain only plain dicts, lists, strings and numbers so that
identical invocations serialize to identical bytes.
"""

import csv
import io
import json
import logging
from typing import Any, Dict, List, Tuple

import numpy as np
from python_debug import debug_trace

from qsgps import adversary, bell, code5, config, geoposition, protocol, qsim, resource
from qsgps.constants import DEFAULT_THRESHOLD
from qsgps.errors import ConfigError
from qsgps.managers.base import Manager
from qsgps.models.attack import AttackModel, NoAttack
from qsgps.models.command import CommandSpec
from qsgps.models.geometry import SolverConfig
from qsgps.registry import ManagerRegistry

logger = logging.getLogger('qsgps.commands')

ATTACK_SETS = ("none", "all-single-pauli", "all-double-pauli", "depolarizing", "classical")


def _random_amplitudes(rng: np.random.Generator) -> Tuple[complex, complex]:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v = v / np.linalg.norm(v)
    return complex(v[0]), complex(v[1])


def _format_time(seconds: float) -> str:
    if seconds < 1e-6:
        return f"{seconds * 1e9:.1f} ns"
    if seconds < 1e-3:
        return f"{seconds * 1e6:.2f} us"
    return f"{seconds * 1e3:.3f} ms"


class CommandManager(Manager):
    """Base class for subcommand managers."""

    command = ""
    formats: Tuple[str, ...] = ("json", "table")

    @classmethod
    def can_handle(cls, item: Any) -> bool:
        return isinstance(item, CommandSpec) and item.subcommand == cls.command

    @classmethod
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        raise NotImplementedError

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        raise NotImplementedError

    @classmethod
    def to_csv(cls, report: Dict[str, Any]) -> str:
        raise ConfigError(f"{cls.command} has no CSV output")

    @classmethod
    def exit_code(cls, report: Dict[str, Any]) -> int:
        """0 unless the manager reports a completed-but-unsuccessful run."""
        return 0

    @classmethod
    def render(cls, report: Dict[str, Any], fmt: str) -> str:
        """
        Serialize a report.

        Raises:
            ConfigError: If the subcommand does not offer this format
        """
        if fmt not in cls.formats:
            raise ConfigError(f"{cls.command} supports formats {list(cls.formats)}, got {fmt!r}")
        if fmt == "json":
            return json.dumps(report, indent=2, sort_keys=True)
        if fmt == "csv":
            return cls.to_csv(report)
        return cls.to_table(report)


class VerifyCodeManager(CommandManager):
    """Stabilizer checks on the logical states and the encoder."""

    command = "verify-code"

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        rng = np.random.default_rng(item.resolved_seed)
        basis = code5.logical_basis()
        literal = code5.drawn_circuit()
        enc = code5.encoding_circuit()
        inputs = int(item.option("inputs", 20))
        fidelities = []
        for _ in range(inputs):
            alpha, beta = _random_amplitudes(rng)
            fidelities.append(qsim.fidelity(code5.encode(alpha, beta, enc), code5.logical_state(alpha, beta)))
        drawn_output = qsim.apply_circuit(code5.input_state(literal, 1.0, 0.0), literal)
        syndromes = [
            {"error": err.label(), "syndrome": code5.syndrome_of_error(err).label()}
            for err in code5.single_qubit_errors()
        ]
        distinct = {row["syndrome"] for row in syndromes}
        return {
            "stabilizers": [g.label() for g in code5.stabilizers()],
            "logical_expectations": {
                "zero_L": list(code5.stabilizer_expectations(basis.zero_l)),
                "one_L": list(code5.stabilizer_expectations(basis.one_l)),
            },
            "circuit": {
                "census": enc.census(),
                "pauli_frame": enc.pauli_frame.label() if enc.pauli_frame is not None else None,
                "drawn_output_expectations": list(code5.stabilizer_expectations(drawn_output)),
                "drawn_output_fidelity": qsim.fidelity(drawn_output, basis.zero_l),
            },
            "encoding_fidelity": {"inputs": inputs, "min": min(fidelities), "max": max(fidelities)},
            "syndrome_table": syndromes,
            "syndrome_bijective": len(distinct) == len(syndromes) and "0000" not in distinct,
        }

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        circuit = report["circuit"]
        lines = [
            f"Stabilizers: {' '.join(report['stabilizers'])}",
            "<S_k> on |0_L>: " + " ".join(f"{v:+.6f}" for v in report["logical_expectations"]["zero_L"]),
            "<S_k> on |1_L>: " + " ".join(f"{v:+.6f}" for v in report["logical_expectations"]["one_L"]),
            "Gate census: " + " ".join(f"{k}={v}" for k, v in sorted(circuit["census"].items())),
            f"Output frame: {circuit['pauli_frame']}",
            "<S_k> on drawn output: " + " ".join(f"{v:+.6f}" for v in circuit["drawn_output_expectations"]),
            f"Encoding fidelity over {report['encoding_fidelity']['inputs']} inputs: "
            f"min {report['encoding_fidelity']['min']:.10f}",
            "Syndromes: " + " ".join(f"{r['error']}:{r['syndrome']}" for r in report["syndrome_table"]),
            f"Syndrome map bijective: {report['syndrome_bijective']}",
        ]
        return "\n".join(lines)


class BellManager(CommandManager):
    """Exact and sampled value of a functional on its target state."""

    command = "bell"

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        kind = bell.FunctionalKind.parse(item.option("functional", "i5"))
        shots = int(item.option("shots", 10_000))
        f = bell.builtin_functional(kind)
        strat = bell.optimal_strategy(kind)
        state = bell.target_state(kind)
        estimate = bell.sample_estimate(f, strat, state, shots, np.random.default_rng(item.resolved_seed))
        return {
            "functional": f.name,
            "exact": bell.evaluate(f, strat, state),
            "sampled": {"estimate": estimate.estimate, "stderr": estimate.stderr, "shots_per_term": shots},
            "classical_bound": f.classical_bound,
            "quantum_bound": f.quantum_bound,
            "sos_residual": bell.sos_residual(strat, kind),
        }

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        sampled = report["sampled"]
        return "\n".join([
            f"Functional: {report['functional']}",
            f"Exact value: {report['exact']:.10f}",
            f"Sampled: {sampled['estimate']:.6f} +- {sampled['stderr']:.6f} ({sampled['shots_per_term']} shots/term)",
            f"Classical bound: {report['classical_bound']:g}",
            f"Quantum bound: {report['quantum_bound']:.10f}",
            f"SOS residual: {report['sos_residual']:.3e}",
        ])


class ClassicalBoundManager(CommandManager):
    """Brute-force deterministic bound and the best product-state value."""

    command = "classical-bound"

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        kind = bell.FunctionalKind.parse(item.option("functional", "i5"))
        f = bell.builtin_functional(kind)
        value, assignment = bell.classical_maximum(f)
        product_value, _ = bell.classical_strategy_state(f)
        return {
            "functional": f.name,
            "classical_maximum": value,
            "assignment": [list(pair) for pair in assignment],
            "product_state_value": product_value,
        }

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        assignment = " ".join(f"({a0:+d},{a1:+d})" for a0, a1 in report["assignment"])
        return "\n".join([
            f"Functional: {report['functional']}",
            f"Classical maximum: {report['classical_maximum']:g}",
            f"Maximizing assignment (A0,A1) per party: {assignment}",
            f"Best product state under optimal measurements: {report['product_state_value']:.6f}",
        ])


CSV_COLUMNS = (
    "attack", "i5_value", "threshold", "certified", "syndrome",
    "corrected", "correction", "corrected_i5", "restored",
)


class AttackSweepManager(CommandManager):
    """Exact I5 under a set of attacks."""

    command = "attack-sweep"
    formats = ("json", "table", "csv")

    @classmethod
    def attacks_for(cls, name: str) -> List[AttackModel]:
        """
        Resolve a named attack set, or read a JSON attack file.

        Raises:
            ConfigError: If the file is unreadable or malformed
        """
        if name == "none":
            return [NoAttack()]
        if name == "all-single-pauli":
            return adversary.all_single_pauli_attacks()
        if name == "all-double-pauli":
            return adversary.all_double_pauli_attacks()
        if name == "depolarizing":
            return [adversary.global_depolarizing(k / 10) for k in range(11)]
        if name == "classical":
            return [adversary.classical_replacement_attack()]
        return config.parse_attack_list(config.load_json(name))

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        threshold = float(item.option("threshold", DEFAULT_THRESHOLD))
        name = item.option("attacks", "all-single-pauli")
        attacks = cls.attacks_for(name)
        logger.info(f"Attack set {name!r}: {len(attacks)} attack(s)")
        rows = adversary.attack_sweep(attacks, threshold, correct=bool(item.option("correct", False)))
        return {"threshold": threshold, "rows": [r.to_dict() for r in rows]}

    @classmethod
    def to_csv(cls, report: Dict[str, Any]) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in report["rows"]:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_COLUMNS})
        return buffer.getvalue().rstrip("\n")

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        lines = [
            f"Threshold: {report['threshold']:g}",
            f"{'attack':<28}{'I5':>10}  {'certified':<10}{'syndrome':<10}{'correction':<12}{'I5 after':>10}  {'restored'}",
        ]
        for row in report["rows"]:
            after = "" if row["corrected_i5"] is None else f"{row['corrected_i5']:.6f}"
            restored = "" if row["restored"] is None else str(row["restored"])
            lines.append(
                f"{row['attack']:<28}{row['i5_value']:>10.6f}  {str(row['certified']):<10}"
                f"{row['syndrome'] or '':<10}{row['correction'] or '':<12}{after:>10}  {restored}"
            )
        return "\n".join(lines)


class HardwareManager(CommandManager):
    """Gate costs of the encoder and per-platform time and fidelity."""

    command = "hardware"

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        if item.option("profile_file"):
            profiles = [config.parse_hardware(config.load_json(item.option("profile_file")))]
        elif item.option("profile"):
            profiles = [resource.get_profile(item.option("profile"))]
        else:
            profiles = resource.builtin_profiles()
        enc = code5.encoding_circuit()
        drawn = resource.circuit_cost(enc)
        asap = resource.circuit_cost(enc, respect_moments=False)
        rows = [
            {
                "profile": p.to_dict(),
                "t_total_s": resource.total_time(p, drawn),
                "fidelity_bound": resource.fidelity_bound(p, drawn),
                "infidelity": resource.infidelity(p, drawn),
            }
            for p in profiles
        ]
        return {"circuit": {"census": enc.census(), "drawn": drawn.to_dict(), "asap": asap.to_dict()}, "profiles": rows}

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        drawn = report["circuit"]["drawn"]
        asap = report["circuit"]["asap"]
        lines = [
            f"Gates: n_1q={drawn['n_1q']} n_2q={drawn['n_2q']}  "
            f"depth (drawn): d_1q={drawn['d_1q']} d_2q={drawn['d_2q']}  "
            f"depth (asap): d_1q={asap['d_1q']} d_2q={asap['d_2q']}",
            f"{'Platform':<18}{'t_1q':>12}{'t_2q':>12}{'F_1q':>12}{'F_2q':>10}{'t_total':>14}{'F_circuit':>11}",
        ]
        for row in report["profiles"]:
            p = row["profile"]
            lines.append(
                f"{p['name']:<18}{_format_time(p['t_1q_s']):>12}{_format_time(p['t_2q_s']):>12}"
                f"{p['f_1q'] * 100:>11.5f}%{p['f_2q'] * 100:>9.2f}%"
                f"{_format_time(row['t_total_s']):>14}{row['fidelity_bound'] * 100:>10.1f}%"
            )
        return "\n".join(lines)


class PositionManager(CommandManager):
    """Position fix from a scenario file or a random visible constellation."""

    command = "position"

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        scenario = item.option("scenario")
        count = item.option("random")
        if (scenario is None) == (count is None):
            raise ConfigError("position needs exactly one of --scenario or --random")
        if scenario is not None:
            logger.info(f"Reading scenario from file: {scenario}")
            sats, truth, bias, ranges, solver = config.parse_scenario(config.load_json(scenario))
        else:
            rng = np.random.default_rng(item.resolved_seed)
            truth, bias = geoposition.random_receiver(rng)
            sats = geoposition.satellites_visible_from(truth, int(count), rng)
            ranges, solver = None, SolverConfig()
        if ranges is None:
            ranges = geoposition.forward_pseudoranges(truth, bias, sats)
        fix = geoposition.solve_fix(sats, ranges, solver)
        return {
            "satellites": [s.to_dict() for s in sats],
            "pseudoranges": [r.to_dict() for r in ranges],
            "truth": {"position": truth.to_dict(), "bias_s": bias},
            "fix": fix.to_dict(),
            "position_error_m": fix.position.distance_to(truth),
            "bias_error_s": abs(fix.clock_bias - bias),
            "gdop": geoposition.gdop(sats, fix.position),
        }

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        fix = report["fix"]
        p = fix["position"]
        return "\n".join([
            f"Satellites: {len(report['satellites'])}  GDOP: {report['gdop']:.3f}",
            f"Fix: ({p['x_m']:.4f}, {p['y_m']:.4f}, {p['z_m']:.4f}) m  bias {fix['clock_bias_s']:.6e} s",
            f"Converged: {fix['converged']} in {fix['iterations']} iterations, residual {fix['residual_norm_m']:.3e} m",
            f"Error vs truth: {report['position_error_m']:.3e} m, {report['bias_error_s']:.3e} s",
        ])


class ProtocolRunManager(CommandManager):
    """Full positioning task from a protocol config file."""

    command = "protocol-run"

    @classmethod
    @debug_trace()
    def run(cls, item: CommandSpec, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        path = item.option("config")
        if path is None:
            raise ConfigError("protocol-run needs --config")
        cfg = config.parse_protocol_config(config.load_json(path), seed=item.seed)
        report = protocol.run_task(cfg).to_dict()
        report["seed"] = cfg.seed
        return report

    @classmethod
    def exit_code(cls, report: Dict[str, Any]) -> int:
        return 5 if report["fix"] is None else 0

    @classmethod
    def to_table(cls, report: Dict[str, Any]) -> str:
        lines = [f"{'round':>5}  {'satellite':<10}{'I5':>10}{'stderr':>10}  {'certified':<10}{'syndrome':<10}{'range (m)':>18}"]
        for r in report["rounds"]:
            i5 = "jammed" if r["discarded"] else f"{r['i5_estimate']:.4f}"
            stderr = "" if r["discarded"] else f"{r['i5_stderr']:.4f}"
            rho = "" if r["pseudorange_m"] is None else f"{r['pseudorange_m']:.3f}"
            lines.append(
                f"{r['round_index']:>5}  {r['satellite_id']:<10}{i5:>10}{stderr:>10}  "
                f"{str(r['certified']):<10}{r['syndrome'] or '':<10}{rho:>18}"
            )
        fix = report["fix"]
        if fix is None:
            lines.append("No fix")
        else:
            p = fix["position"]
            lines.append(f"Fix: ({p['x_m']:.4f}, {p['y_m']:.4f}, {p['z_m']:.4f}) m  bias {fix['clock_bias_s']:.6e} s")
        events = ", ".join(f"{e['satellite_id']}:{e['reason']}" for e in report["detection_events"]) or "none"
        lines.append(f"Detection events: {events}")
        lines.append(f"Total generation time: {_format_time(report['total_simulated_time_s'])}")
        return "\n".join(lines)


class CommandRegistry(ManagerRegistry):
    """Managers for every subcommand."""

    def register_default_managers(self) -> None:
        self.register_manager(VerifyCodeManager)
        self.register_manager(BellManager)
        self.register_manager(ClassicalBoundManager)
        self.register_manager(AttackSweepManager)
        self.register_manager(HardwareManager)
        self.register_manager(PositionManager)
        self.register_manager(ProtocolRunManager)
