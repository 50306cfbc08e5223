"""Built-in case studies and optimizer comparisons.

Two problem families are packaged as named presets:

* ``qubit-a`` / ``qubit-b``: drive a single qubit to the ground state of
  sigma_x from two different starting points; the ansatz
  [cos(t1), e^{2i*t2} sin(t1)] has singular lines at t1 = 0 and t1 = pi/2
  where t2 stops moving the state.
* ``h2-a`` / ``h2-plateau`` / ``toy``: a two-qubit molecular Hamiltonian
  alpha*(ZI + IZ) + beta*XX under a hardware-efficient Ry/CNOT/Ry ansatz,
  including a plateau start near the first excited state and a weakly
  coupled variant whose ground state sits next to the singular set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .observables import PauliHamiltonian, dense_matrix, pauli_sum
from .optimizers import (
    DEFAULT_POLICY,
    ConstantRate,
    LearningRateSchedule,
    OptimizerKind,
    RegularizationPolicy,
    Trajectory,
    run,
)
from .states import AnsatzCircuit, circuit, cnot, phase, ry

__all__ = [
    "Preset",
    "OptimizerResult",
    "ComparisonReport",
    "PRESET_NAMES",
    "single_qubit_ansatz",
    "hardware_efficient_ansatz",
    "sigma_x_hamiltonian",
    "h2_hamiltonian",
    "load_preset",
    "steps_to_threshold",
    "compare",
]

PRESET_NAMES = ("qubit-a", "qubit-b", "h2-a", "h2-plateau", "toy")

DEFAULT_THRESHOLD = 0.01


def single_qubit_ansatz() -> AnsatzCircuit:
    """Two-gate realization of [cos(t1), e^{2i*t2} sin(t1)]."""
    return circuit(1, [ry(0, 0), phase(0, 1)])


def hardware_efficient_ansatz() -> AnsatzCircuit:
    """Two qubits: an Ry layer, one CNOT, another Ry layer (4 parameters)."""
    return circuit(2, [ry(0, 0), ry(1, 1), cnot(0, 1), ry(0, 2), ry(1, 3)])


def sigma_x_hamiltonian() -> PauliHamiltonian:
    return pauli_sum(1, [(1.0, "X")])


def h2_hamiltonian(alpha: float = 0.4, beta: float = 0.2) -> PauliHamiltonian:
    """Two-qubit molecular model alpha*(ZI + IZ) + beta*XX."""
    return pauli_sum(2, [(alpha, "ZI"), (alpha, "IZ"), (beta, "XX")])


@dataclass(frozen=True, eq=False)
class Preset:
    """A named problem instance with its published run settings."""

    name: str
    hamiltonian: PauliHamiltonian
    circuit: AnsatzCircuit
    theta0: tuple[float, ...]
    eta: float
    max_steps: int
    reference_energy: float

    def __post_init__(self) -> None:
        ground = float(np.linalg.eigvalsh(dense_matrix(self.hamiltonian))[0])
        if abs(ground - self.reference_energy) > 1e-10:
            raise ValueError(
                f"reference energy {self.reference_energy} is not the ground energy {ground}"
            )


def load_preset(name: str) -> Preset:
    """Look up a built-in preset by name."""
    pi = math.pi
    if name == "qubit-a":
        return Preset(name, sigma_x_hamiltonian(), single_qubit_ansatz(),
                      (pi / 12, pi / 12), 0.05, 300, -1.0)
    if name == "qubit-b":
        return Preset(name, sigma_x_hamiltonian(), single_qubit_ansatz(),
                      (5 * pi / 12, pi / 12), 0.05, 300, -1.0)
    if name == "h2-a":
        return Preset(name, h2_hamiltonian(0.4, 0.2), hardware_efficient_ansatz(),
                      (-0.2, -0.2, 0.0, 0.0), 0.05, 1000, -math.sqrt(4 * 0.4 ** 2 + 0.2 ** 2))
    if name == "h2-plateau":
        return Preset(name, h2_hamiltonian(0.4, 0.2), hardware_efficient_ansatz(),
                      (7 * pi / 32, pi / 2, 0.0, 0.0), 0.05, 3000, -math.sqrt(4 * 0.4 ** 2 + 0.2 ** 2))
    if name == "toy":
        return Preset(name, h2_hamiltonian(0.4, 0.02), hardware_efficient_ansatz(),
                      (-0.2, -0.2, 0.0, 0.0), 0.05, 3000, -math.sqrt(4 * 0.4 ** 2 + 0.02 ** 2))
    raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


@dataclass(frozen=True, eq=False)
class OptimizerResult:
    """Outcome of one optimizer on one preset."""

    steps_to_threshold: int | None
    final_energy: float
    final_theta: tuple[float, ...]
    trajectory: Trajectory


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    """Per-optimizer outcomes for one preset under identical run settings."""

    threshold: float
    results: Mapping[OptimizerKind, OptimizerResult]


def steps_to_threshold(trajectory: Trajectory, reference: float, threshold: float) -> int | None:
    """Index of the first record with energy <= reference + threshold, if any."""
    for record in trajectory.steps:
        if record.energy <= reference + threshold:
            return record.k
    return None


def compare(
    preset: Preset,
    kinds: Sequence[OptimizerKind],
    threshold: float = DEFAULT_THRESHOLD,
    *,
    schedule: LearningRateSchedule | None = None,
    policy: RegularizationPolicy = DEFAULT_POLICY,
    max_steps: int | None = None,
) -> ComparisonReport:
    """Run several optimizers on a preset under one shared schedule/policy."""
    schedule = schedule if schedule is not None else ConstantRate(preset.eta)
    limit = max_steps if max_steps is not None else preset.max_steps
    results: dict[OptimizerKind, OptimizerResult] = {}
    for kind in kinds:
        trajectory = run(kind, preset.hamiltonian, preset.circuit, preset.theta0,
                         schedule, policy, max_steps=limit)
        final = trajectory.final
        results[kind] = OptimizerResult(
            steps_to_threshold(trajectory, preset.reference_energy, threshold),
            final.energy,
            final.theta,
            trajectory,
        )
    return ComparisonReport(threshold=threshold, results=results)
