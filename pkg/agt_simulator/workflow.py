"""
workflow.py — Subcommand handlers behind the CLI and the HTTP service

`dispatch(cfg)` routes one validated `CliConfig` to its handler. Each handler builds the
requested objects, runs them, and writes its artifacts into `cfg.out`:

    • protocol runs (teleport, agt, agp, agt2, isotropic): <name>.report.json + <name>.protocol.json
    • teleport additionally: <name>.frame.json (logical frame check)
    • nogo: <name>.report.json
    • gadget: <name>.alpha.csv | <name>.gap.csv | <name>.bound.json | <name>.report.json
    • gap: <name>.gap.csv + <name>.report.json (GapSummary)
    • sweep: <name>.sweep.csv + <name>.report.json
    • compile: <name>.program.json
    • simulate: <name>.program.json + <name>.report.json

Every JSON report embeds the full config echo under `cli`. Handlers log and re-raise;
the exit code is chosen by the CLI.
"""

import logging
from pathlib import Path

from .compiler import compile_3n, compile_chain, parse_circuit, program_to_file, simulate_program
from .dynamics import StateVector, random_states
from .errors import DomainError, StructuralError
from .gadgets import (
    alpha_rows,
    encoded_operator_check,
    gadget_gap_bound_check,
    gadget_hamiltonians,
    gap_rows as gadget_gap_rows,
    run_gadget,
)
from .hamiltonian import schedule_from_tag
from .models import CliConfig, CouplingConfig, GapSummary, NoGoConfig
from .protocols import (
    adiabatic_sweep,
    build_protocol,
    logical_frame_check,
    no_go_diagonal,
    protocol_to_file,
    run_protocol,
)
from .reports import ALPHA_HEADER, GADGET_GAP_HEADER, write_csv, write_gap_profile, write_json, write_sweep
from .spectral import DEFAULT_DEGENERACY_TOL, gap_profile

log = logging.getLogger(__name__)


def input_state(cfg: CliConfig, n_qubits: int) -> StateVector:
    """
    Input state from the descriptor: basis labels, "random" (seeded) or "amp".

    A single basis character is repeated over all data qubits.

    Raises:
        ParseError: On an invalid basis character.
        StructuralError: If the label length does not match the data register.
    """
    if cfg.state == "random":
        return random_states(n_qubits, 1, cfg.seed)[0]
    if cfg.state == "amp":
        single = StateVector.from_amplitudes(cfg.alpha, cfg.beta)
        return single.tensor(*[single] * (n_qubits - 1)) if n_qubits > 1 else single
    label = cfg.state * n_qubits if len(cfg.state) == 1 else cfg.state
    if len(label) != n_qubits:
        raise StructuralError(f"State '{cfg.state}' has {len(cfg.state)} qubit(s), the run needs {n_qubits}.")
    return StateVector.basis(label)


def _path(cfg: CliConfig, suffix: str) -> Path:
    return Path(cfg.out) / f"{cfg.run_name}.{suffix}"


def _echo(cfg: CliConfig) -> dict:
    return cfg.model_dump(mode="json")


def _protocol(cfg: CliConfig, name: str):
    return build_protocol(name, cfg.gate, cfg.omega, schedule_from_tag(cfg.schedule))


# --- Handlers ---
def handle_protocol_run(cfg: CliConfig) -> list[Path]:
    spec = _protocol(cfg, cfg.command)
    psi_in = input_state(cfg, spec.n_data)
    report = run_protocol(spec, psi_in, cfg.T[0], cfg.steps, cfg.method, name=cfg.run_name)
    report = report.model_copy(update={"config": {**report.config, "cli": _echo(cfg)}})
    written = [write_json(_path(cfg, "report.json"), report),
               write_json(_path(cfg, "protocol.json"), protocol_to_file(spec))]
    if cfg.command == "teleport":
        frame = logical_frame_check(omega=cfg.omega, grid_points=cfg.grid_points)
        written.append(write_json(_path(cfg, "frame.json"), frame))
    return written


def handle_nogo(cfg: CliConfig) -> list[Path]:
    report = no_go_diagonal(NoGoConfig(schedule=cfg.schedule), cfg.T[0], cfg.steps, cfg.grid_points)
    payload = {**report.model_dump(mode="json"), "cli": _echo(cfg)}
    return [write_json(_path(cfg, "report.json"), payload)]


def handle_gadget(cfg: CliConfig) -> list[Path]:
    if cfg.analysis == "alpha":
        return [write_csv(_path(cfg, "alpha.csv"), ALPHA_HEADER, alpha_rows([cfg.r]))]
    if cfg.analysis == "gap":
        return [write_csv(_path(cfg, "gap.csv"), GADGET_GAP_HEADER, gadget_gap_rows(cfg.r, cfg.grid_points))]

    coupling = CouplingConfig.from_ratio(cfg.r, cfg.omega)
    encoded = encoded_operator_check(gadget_hamiltonians(coupling, cfg.encoded_z))
    if cfg.analysis == "bound":
        report = gadget_gap_bound_check(cfg.r)
        payload = {**report.model_dump(mode="json"), "encoded_operators": encoded, "cli": _echo(cfg)}
        return [write_json(_path(cfg, "bound.json"), payload)]

    if cfg.encoded_z != "z4":
        raise DomainError("Only the z4 encoding is decoupled by CZ(4L, 4R); the z3 variant cannot be run.")
    report = run_gadget(input_state(cfg, 2), coupling, cfg.T[0], cfg.steps, cfg.method,
                        schedule_from_tag(cfg.schedule), name=cfg.run_name)
    report = report.model_copy(update={"config": {**report.config, "encoded_operators": encoded,
                                                  "cli": _echo(cfg)}})
    return [write_json(_path(cfg, "report.json"), report)]


def handle_gap(cfg: CliConfig) -> list[Path]:
    spec = _protocol(cfg, cfg.protocol)
    profile = gap_profile(spec.hamiltonian, cfg.grid_points, cfg.refine_tol,
                          DEFAULT_DEGENERACY_TOL * cfg.omega, cfg.workers)
    log.info(f"[Run: {cfg.run_name}] Minimale Lücke {profile.min_gap:.10f} bei s={profile.min_s:.6f}.")
    summary = GapSummary(
        protocol=spec.name,
        min_s=profile.min_s,
        min_gap=profile.min_gap,
        grid_points=cfg.grid_points,
        level_crossings=list(profile.level_crossings),
        config=_echo(cfg),
    )
    return [write_gap_profile(_path(cfg, "gap.csv"), profile), write_json(_path(cfg, "report.json"), summary)]


def handle_sweep(cfg: CliConfig) -> list[Path]:
    spec = _protocol(cfg, cfg.protocol)
    psi_in = input_state(cfg, spec.n_data)
    reports = adiabatic_sweep(spec, cfg.T, psi_in, cfg.steps, cfg.method, cfg.workers)
    payload = {"cli": _echo(cfg), "runs": [r.model_dump(mode="json", exclude={"final_state"}) for r in reports]}
    return [write_sweep(_path(cfg, "sweep.csv"), reports), write_json(_path(cfg, "report.json"), payload)]


def _read_circuit(cfg: CliConfig) -> str:
    """`--circuit` is a file path or inline lines separated by ';'."""
    if not cfg.circuit:
        raise DomainError("--circuit is required for compile and simulate.")
    path = Path(cfg.circuit)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    return cfg.circuit.replace(";", "\n")


def _compile(cfg: CliConfig):
    circuit = parse_circuit(_read_circuit(cfg))
    if cfg.layout == "chain":
        return compile_chain(circuit, cfg.omega)
    coupling = CouplingConfig.from_ratio(cfg.r, cfg.omega) if cfg.gadgetized else None
    return compile_3n(circuit, cfg.omega, cfg.gadgetized, coupling)


def handle_compile(cfg: CliConfig) -> list[Path]:
    program = _compile(cfg)
    return [write_json(_path(cfg, "program.json"), program_to_file(program))]


def handle_simulate(cfg: CliConfig) -> list[Path]:
    program = _compile(cfg)
    psi_in = input_state(cfg, program.n_wires)
    report = simulate_program(program, psi_in, cfg.T[0], cfg.steps, cfg.segment_times, cfg.method,
                              name=cfg.run_name)
    report = report.model_copy(update={"config": {**report.config, "cli": _echo(cfg)}})
    return [write_json(_path(cfg, "program.json"), program_to_file(program)),
            write_json(_path(cfg, "report.json"), report)]


HANDLERS = {
    "teleport": handle_protocol_run,
    "agt": handle_protocol_run,
    "agp": handle_protocol_run,
    "agt2": handle_protocol_run,
    "isotropic": handle_protocol_run,
    "nogo": handle_nogo,
    "gadget": handle_gadget,
    "gap": handle_gap,
    "sweep": handle_sweep,
    "compile": handle_compile,
    "simulate": handle_simulate,
}


def dispatch(cfg: CliConfig) -> list[Path]:
    """
    Runs one subcommand and returns the files it wrote.

    Args:
        cfg (CliConfig): Validated invocation.

    Returns:
        list[Path]: Written artifacts, in emission order.

    Raises:
        AgtError: Any expected failure; logged here and re-raised for the caller.
    """
    log_prefix = f"[Run: {cfg.run_name}]"
    log.info(f"{log_prefix} Starte Befehl '{cfg.command}'.")
    try:
        written = HANDLERS[cfg.command](cfg)
    except Exception as e:
        log.error(f"{log_prefix} Befehl '{cfg.command}' fehlgeschlagen: {e}")
        raise
    log.info(f"{log_prefix} Fertig, {len(written)} Datei(en) geschrieben.")
    return written
