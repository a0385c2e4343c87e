"""
models.py — Configuration, Report and File Models

This module defines every externally visible data structure of the simulator.
It uses Pydantic models so that CLI flags, HTTP payloads and emitted files share
one validated representation.

Numeric pre-condition violations raise `DomainError` from the model validators
(not a pydantic ValidationError), so the CLI and the API report them uniformly.

Models:
    - PropagationConfig: total time, step count and exponential method of a run.
    - CouplingConfig: strong/weak couplings ω, λ of the perturbation gadget.
    - NoGoConfig: diagonal two-qubit interpolation parameters δ, γ.
    - CliConfig: one validated CLI invocation.
    - RunReport, GapSummary, CheckResult, CheckReport, BoundCheckReport, NoGoReport: results.
    - TermEntry, ProtocolFile, SegmentEntry, CompiledProgramFile: JSON file formats.
    - RunRequest: payload of POST /v1/runs.
"""

import math
import os
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError

DEFAULT_OMEGA = 1.0
DEFAULT_TOTAL_TIME = 50.0
DEFAULT_GRID_POINTS = 101
DEFAULT_REFINE_TOL = 1e-6
DEFAULT_SEED = 7
MIN_STEPS = 10
# linear ramps give T-oscillating infidelity; sweeps default to the C¹ ramp
SWEEP_SCHEDULE = "smoothstep"


def default_steps(total_time: float, omega: float = DEFAULT_OMEGA) -> int:
    """max(1000, ceil(100·T·ω)) midpoint steps."""
    return max(1000, math.ceil(100.0 * total_time * omega))


def _positive(name: str, value: float):
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value}.")


class PropagationConfig(BaseModel):
    """
    Parameters of one Schrödinger propagation.

    Attributes:
        total_time (float): T in units of 1/ω.
        steps (int): Number of midpoint steps; defaults to max(1000, ceil(100·T·ω)).
        method (str): "spectral" (eigendecomposition per step) or "expm" (scipy.linalg.expm).
        omega (float): Energy unit used for the default step count.
    """
    model_config = ConfigDict(frozen=True)

    total_time: float = DEFAULT_TOTAL_TIME
    steps: int = 0
    method: Literal["spectral", "expm"] = "spectral"
    omega: float = DEFAULT_OMEGA

    @model_validator(mode="after")
    def _check(self):
        _positive("total_time", self.total_time)
        _positive("omega", self.omega)
        if self.steps < MIN_STEPS:
            raise DomainError(f"steps must be at least {MIN_STEPS}, got {self.steps}.")
        return self

    @model_validator(mode="before")
    @classmethod
    def _fill_steps(cls, data):
        if isinstance(data, dict) and not data.get("steps"):
            try:
                total_time = float(data.get("total_time", DEFAULT_TOTAL_TIME))
                omega = float(data.get("omega", DEFAULT_OMEGA))
            except (TypeError, ValueError):
                return data
            if math.isfinite(total_time) and math.isfinite(omega) and total_time > 0 and omega > 0:
                data = {**data, "steps": default_steps(total_time, omega)}
        return data

    @classmethod
    def for_time(cls, total_time: float, steps: int | None = None, method: str = "spectral",
                 omega: float = DEFAULT_OMEGA) -> "PropagationConfig":
        return cls(total_time=total_time, steps=steps or 0, method=method, omega=omega)

    @property
    def dt(self) -> float:
        return self.total_time / self.steps


class CouplingConfig(BaseModel):
    """
    Gadget couplings: strong ω on the mediator pair, weak λ elsewhere.

    The gadget regime requires 0 < λ and r = λ/ω < 0.5, the range in which the
    ΔE(s) ≥ ω·r² lower bound is valid.
    """
    model_config = ConfigDict(frozen=True)

    omega: float = DEFAULT_OMEGA
    lam: float = 0.1

    @model_validator(mode="after")
    def _check(self):
        _positive("omega", self.omega)
        if not math.isfinite(self.lam) or self.lam <= 0:
            raise DomainError(f"Weak coupling λ must be positive, got {self.lam}; λ = 0 leaves the ground space degenerate.")
        if self.r >= 0.5:
            raise DomainError(f"r = λ/ω = {self.r} outside the gadget regime; the gap bound holds only for r < 0.5.")
        return self

    @classmethod
    def from_ratio(cls, r: float, omega: float = DEFAULT_OMEGA) -> "CouplingConfig":
        return cls(omega=omega, lam=r * omega)

    @property
    def r(self) -> float:
        return self.lam / self.omega


class NoGoConfig(BaseModel):
    """
    Diagonal two-qubit interpolation H(s) = f(s)·diag(δ) + g(s)·diag(γ).

    δ₁ (γ₁) is the energy of the ground level of the initial (final) Hamiltonian,
    so δ₁ < δ₂, δ₃ and γ₁ < γ₂, γ₃.
    """
    model_config = ConfigDict(frozen=True)

    delta: tuple[float, float, float] = (1.0, 2.0, 3.0)
    gamma: tuple[float, float, float] = (1.0, 2.0, 3.0)
    schedule: Literal["linear", "smoothstep"] = "linear"

    @model_validator(mode="after")
    def _check(self):
        for name, values in (("delta", self.delta), ("gamma", self.gamma)):
            for i, value in enumerate(values, start=1):
                _positive(f"{name}{i}", value)
            if not (values[0] < values[1] and values[0] < values[2]):
                raise DomainError(f"{name}1 must lie below {name}2 and {name}3, got {values}.")
        return self


class CliConfig(BaseModel):
    """
    One validated command-line invocation.

    Attributes:
        command (str): Subcommand name.
        T (list[float]): Total time(s); one value for runs, several for sweeps.
        state (str): Input-state descriptor: basis labels over {0,1,+,-}, "random",
            or "amp" to use (alpha, beta).
    """
    command: Literal["teleport", "agt", "agp", "agt2", "isotropic", "nogo", "gadget",
                     "gap", "sweep", "compile", "simulate"]
    omega: float = DEFAULT_OMEGA
    T: list[float] = Field(default_factory=lambda: [DEFAULT_TOTAL_TIME])
    steps: int | None = None
    method: Literal["spectral", "expm"] = "spectral"
    schedule: Literal["linear", "smoothstep"] | None = None
    protocol: str = "teleport"
    gate: str = "A"
    state: str = "0"
    alpha: float | None = None
    beta: float | None = None
    r: float = 0.1
    analysis: Literal["alpha", "gap", "bound", "run"] = "alpha"
    encoded_z: Literal["z4", "z3"] = "z4"
    circuit: str | None = None
    layout: Literal["chain", "3n"] = "chain"
    gadgetized: bool = False
    segment_times: list[float] | None = None
    grid_points: int = DEFAULT_GRID_POINTS
    refine_tol: float = DEFAULT_REFINE_TOL
    out: str = Field(default_factory=lambda: os.environ.get("AGT_OUT_DIR", "out"))
    name: str | None = None
    seed: int = DEFAULT_SEED
    workers: int = 1

    @model_validator(mode="after")
    def _check(self):
        if self.schedule is None:
            self.schedule = SWEEP_SCHEDULE if self.command == "sweep" else "linear"
        _positive("omega", self.omega)
        if not self.T:
            raise DomainError("At least one total time is required.")
        for value in self.T:
            _positive("T", value)
        for value in self.segment_times or ():
            _positive("segment time", value)
        if self.steps is not None and self.steps < MIN_STEPS:
            raise DomainError(f"steps must be at least {MIN_STEPS}, got {self.steps}.")
        if self.grid_points < 11:
            raise DomainError(f"grid_points must be at least 11, got {self.grid_points}.")
        _positive("refine_tol", self.refine_tol)
        if not math.isfinite(self.r) or self.r < 0:
            raise DomainError(f"r must be non-negative, got {self.r}.")
        if self.workers < 1:
            raise DomainError(f"workers must be at least 1, got {self.workers}.")
        if self.state == "amp" and (self.alpha is None or self.beta is None):
            raise DomainError("--state amp needs both --alpha and --beta.")
        return self

    @property
    def run_name(self) -> str:
        return self.name or self.command


# --- Reports ---
class RunReport(BaseModel):
    """
    Result of one adiabatic run.

    `fidelity + residual = 1` up to rounding because both are measured against the
    same normalized target ray.
    """
    name: str
    protocol: str
    n_qubits: int
    fidelity: float
    residual: float
    leakage: float
    min_gap: float | None = None
    min_gap_s: float | None = None
    total_time: float
    steps: int
    method: str
    final_state: list[tuple[float, float]] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity


class GapSummary(BaseModel):
    protocol: str
    min_s: float
    min_gap: float
    grid_points: int
    level_crossings: list[tuple[float, float]] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)


class CheckResult(BaseModel):
    name: str
    residual: float
    passed: bool


class CheckReport(BaseModel):
    """Named matrix-level checks; `passed` is true only if every check passed."""
    name: str
    tolerance: float
    checks: list[CheckResult]
    passed: bool

    @classmethod
    def from_residuals(cls, name: str, residuals: list[tuple[str, float]], tolerance: float) -> "CheckReport":
        checks = [CheckResult(name=label, residual=value, passed=value <= tolerance) for label, value in residuals]
        return cls(name=name, tolerance=tolerance, checks=checks, passed=all(c.passed for c in checks))

    @property
    def failures(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]


class BoundCheckReport(BaseModel):
    """
    Grid verification of ΔE(s) ≥ ω·r² for the gadget, with the bound-chain values.

    Attributes:
        min_gap (float): Minimum of the closed-form gap over the grid (units ω).
        maximizer_s (float): s maximizing the intermediate lower bound.
        lower_bound_at_maximizer (float): The intermediate bound evaluated there.
        slack (float): min_gap − r².
    """
    r: float
    grid_points: int
    min_gap: float
    min_gap_s: float
    bound: float
    slack: float
    maximizer_s: float
    lower_bound_at_maximizer: float
    passed: bool


class NoGoReport(BaseModel):
    config: dict
    max_off_diagonal: float
    swap_fidelity: float
    contrast_off_diagonal: float
    total_time: float
    passed: bool


# --- Files ---
class TermEntry(BaseModel):
    pauli: str
    coefficient: float


class ProtocolFile(BaseModel):
    """
    Protocol JSON: everything needed to re-simulate the sweep elsewhere.

    `bit_index_map` maps qubit k (1-based, as string) to its bit position n−k in
    the basis index.
    """
    name: str
    family: Literal["teleport", "agp", "isotropic"] = "teleport"
    omega: float = DEFAULT_OMEGA
    n_qubits: int
    schedule: str
    h_initial: list[TermEntry]
    h_final: list[TermEntry]
    static_terms: list[TermEntry] = Field(default_factory=list)
    data_qubits: list[int]
    output_qubits: list[int]
    initial_pairs: list[tuple[int, int]] = Field(default_factory=list)
    final_pairs: list[tuple[int, int]] = Field(default_factory=list)
    target_gate: str | None = None
    target_qubits: list[int] = Field(default_factory=list)
    bit_index_map: dict[str, int] = Field(default_factory=dict)


class SegmentEntry(BaseModel):
    index: int
    label: str
    kind: Literal["agt", "agp"]
    gate: str | None = None
    window: list[int]
    h_initial: list[TermEntry]
    h_final: list[TermEntry]
    static_terms: list[TermEntry] = Field(default_factory=list)


class CompiledProgramFile(BaseModel):
    layout: Literal["chain", "3n"]
    n_wires: int
    n_qubits: int
    gadgetized: bool = False
    emission_only: bool = False
    circuit: list[str]
    data_qubits: list[int]
    output_qubits: list[int]
    segments: list[SegmentEntry]


class RunRequest(BaseModel):
    """
    Payload of POST /v1/runs.

    Attributes:
        runName (str | None): Optional caller-side name; used in the run id.
        protocol (str): teleport, agt, agp, agt2 or isotropic.
        gate (str): Gate for agt/agp.
        state (str): Basis-label input state, e.g. "0", "+", "+1" for agt2.
    """
    runName: str | None = None
    protocol: Literal["teleport", "agt", "agp", "agt2", "isotropic"] = "teleport"
    gate: str = "A"
    state: str = "0"
    T: float = DEFAULT_TOTAL_TIME
    steps: int | None = None
    omega: float = DEFAULT_OMEGA

    @model_validator(mode="after")
    def _check(self):
        _positive("T", self.T)
        _positive("omega", self.omega)
        if self.steps is not None and self.steps < MIN_STEPS:
            raise DomainError(f"steps must be at least {MIN_STEPS}, got {self.steps}.")
        return self
