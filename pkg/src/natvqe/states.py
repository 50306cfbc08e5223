"""Dense statevector simulation of small parametrized circuits.

States live in the full 2**n complex amplitude space; qubit 0 is the most
significant bit of the amplitude index, so a two-qubit product state is
``kron(qubit0, qubit1)``.  Parameter derivatives are exact: every
parametrized gate carries its generator, and one forward sweep accumulates
d|phi>/d(theta_i) for all parameters simultaneously via the product rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12

__all__ = [
    "GateKind",
    "Gate",
    "AnsatzCircuit",
    "StateVector",
    "ry",
    "phase",
    "cnot",
    "fixed_unitary",
    "circuit",
    "check_parameters",
    "state_and_tangents",
    "build_state",
    "derivative_states",
]


class GateKind(Enum):
    RY = "ry"            # exp(-i*theta*sigma_y), a y-rotation by angle 2*theta
    PHASE = "phase"      # diag(1, exp(2i*theta))
    CNOT = "cnot"
    UNITARY = "unitary"  # fixed explicit matrix


_CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=complex,
)
# d/dtheta exp(-i*theta*sigma_y) = (-i*sigma_y) @ U
_RY_GENERATOR = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
# d/dtheta diag(1, e^{2i*theta}) = (2i |1><1|) @ U
_PHASE_GENERATOR = np.array([[0.0, 0.0], [0.0, 2.0j]], dtype=complex)

_PARAMETRIZED = (GateKind.RY, GateKind.PHASE)


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Gate:
    """One circuit element acting on ``targets`` (control first for CNOT)."""

    kind: GateKind
    targets: tuple[int, ...]
    param_index: int | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        if len(set(self.targets)) != len(self.targets) or any(t < 0 for t in self.targets):
            raise ValueError(f"gate targets must be distinct and non-negative, got {self.targets}")
        if self.kind in _PARAMETRIZED:
            if len(self.targets) != 1:
                raise ValueError(f"{self.kind.value} acts on exactly one qubit")
            if self.param_index is None or self.param_index < 0:
                raise ValueError(f"{self.kind.value} requires a parameter slot")
            if self.matrix is not None:
                raise ValueError(f"{self.kind.value} does not take an explicit matrix")
            return
        if self.param_index is not None:
            raise ValueError(f"{self.kind.value} takes no parameter")
        if self.kind is GateKind.CNOT:
            if len(self.targets) != 2:
                raise ValueError("cnot acts on (control, target)")
            if self.matrix is not None:
                raise ValueError("cnot does not take an explicit matrix")
            return
        # fixed unitary
        if self.matrix is None:
            raise ValueError("unitary gate requires an explicit matrix")
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** len(self.targets)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not fit {len(self.targets)} qubit(s)")
        if np.max(np.abs(mat @ mat.conj().T - np.eye(dim))) > 1e-12:
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "matrix", _frozen(mat))


def ry(target: int, param_index: int) -> Gate:
    """Rotation exp(-i*theta*sigma_y) on one qubit, driven by parameter slot ``param_index``."""
    return Gate(GateKind.RY, (target,), param_index)


def phase(target: int, param_index: int) -> Gate:
    """Relative phase diag(1, e^{2i*theta}) on one qubit."""
    return Gate(GateKind.PHASE, (target,), param_index)


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def fixed_unitary(matrix: np.ndarray, *targets: int) -> Gate:
    return Gate(GateKind.UNITARY, tuple(targets), matrix=matrix)


@dataclass(frozen=True, eq=False)
class AnsatzCircuit:
    """Ordered gate list defining U(theta) on ``n_qubits`` with ``n_params`` slots."""

    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        used: set[int] = set()
        for gate in self.gates:
            if any(t >= self.n_qubits for t in gate.targets):
                raise ValueError(f"gate targets {gate.targets} exceed {self.n_qubits} qubits")
            if gate.param_index is not None:
                if gate.param_index >= self.n_params:
                    raise ValueError(f"parameter index {gate.param_index} out of range")
                used.add(gate.param_index)
        missing = set(range(self.n_params)) - used
        if missing:
            raise ValueError(f"parameter slots never used by any gate: {sorted(missing)}")


def circuit(n_qubits: int, gates: Iterable[Gate]) -> AnsatzCircuit:
    """Build a circuit, inferring the parameter count from the gate list."""
    gates = tuple(gates)
    indices = {g.param_index for g in gates if g.param_index is not None}
    n_params = max(indices) + 1 if indices else 0
    return AnsatzCircuit(n_qubits, gates, n_params)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure n-qubit state as a dense complex amplitude vector of length 2**n."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n_qubits,):
            raise ValueError(
                f"expected {2 ** self.n_qubits} amplitudes for {self.n_qubits} qubit(s), "
                f"got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def check_parameters(circ: AnsatzCircuit, theta: Sequence[float]) -> np.ndarray:
    """Validate a parameter vector against a circuit and return it as a float array."""
    arr = np.asarray(theta, dtype=float)
    if arr.shape != (circ.n_params,):
        raise ValueError(f"circuit takes {circ.n_params} parameter(s), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("parameters must be finite")
    return arr


def _gate_unitary(gate: Gate, theta: np.ndarray) -> np.ndarray:
    if gate.kind is GateKind.RY:
        t = theta[gate.param_index]
        c, s = np.cos(t), np.sin(t)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.kind is GateKind.PHASE:
        t = theta[gate.param_index]
        return np.array([[1.0, 0.0], [0.0, np.exp(2.0j * t)]], dtype=complex)
    if gate.kind is GateKind.CNOT:
        return _CNOT
    return gate.matrix


def _gate_tangent(gate: Gate, unitary: np.ndarray) -> np.ndarray | None:
    """d/dtheta of the gate unitary, or None for fixed gates."""
    if gate.kind is GateKind.RY:
        return _RY_GENERATOR @ unitary
    if gate.kind is GateKind.PHASE:
        return _PHASE_GENERATOR @ unitary
    return None


def _apply_unitary(mat: np.ndarray, targets: tuple[int, ...], batch: np.ndarray, n: int) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the target qubit axes of a batch of states.

    ``batch`` has shape (B, 2, ..., 2) with n trailing qubit axes.
    """
    k = len(targets)
    axes = [1 + t for t in targets]
    op = mat.reshape((2,) * (2 * k))
    out = np.tensordot(batch, op, axes=(axes, list(range(k, 2 * k))))
    return np.moveaxis(out, range(out.ndim - k, out.ndim), axes)


def state_and_tangents(circ: AnsatzCircuit, theta: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Return the state U(theta)|0..0> and all its parameter derivatives.

    Returns a pair ``(phi, tangents)`` of raw arrays with shapes (2**n,) and
    (m, 2**n).  Row i of ``tangents`` is the exact d|phi>/d(theta_i), obtained
    by inserting the gate generator at every occurrence of parameter i and
    summing (product rule), all in a single sweep over the gate list.
    """
    theta = check_parameters(circ, theta)
    n, m = circ.n_qubits, circ.n_params
    batch = np.zeros((m + 1, 2 ** n), dtype=complex)
    batch[0, 0] = 1.0
    batch = batch.reshape((m + 1,) + (2,) * n)
    for gate in circ.gates:
        unitary = _gate_unitary(gate, theta)
        tangent = _gate_tangent(gate, unitary)
        pushed = None
        if tangent is not None:
            pushed = _apply_unitary(tangent, gate.targets, batch[:1], n)
        batch = _apply_unitary(unitary, gate.targets, batch, n)
        if pushed is not None:
            batch[1 + gate.param_index] += pushed[0]
    flat = batch.reshape(m + 1, -1)
    return flat[0], flat[1:]


def build_state(circ: AnsatzCircuit, theta: Sequence[float]) -> StateVector:
    """Evaluate U(theta)|0..0> as a StateVector (norm 1 within NORM_TOL)."""
    theta = check_parameters(circ, theta)
    n = circ.n_qubits
    psi = np.zeros((1, 2 ** n), dtype=complex)
    psi[0, 0] = 1.0
    psi = psi.reshape((1,) + (2,) * n)
    for gate in circ.gates:
        psi = _apply_unitary(_gate_unitary(gate, theta), gate.targets, psi, n)
    amps = psi.reshape(-1)
    if abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
        raise ArithmeticError("circuit application lost normalization")
    return StateVector(n, amps)


def derivative_states(circ: AnsatzCircuit, theta: Sequence[float]) -> list[StateVector]:
    """Exact derivative states d|phi>/d(theta_i), i = 0..m-1 (not normalized)."""
    _, tangents = state_and_tangents(circ, theta)
    return [StateVector(circ.n_qubits, row) for row in tangents]
