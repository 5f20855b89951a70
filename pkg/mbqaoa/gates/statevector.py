"""
Dense statevector simulation.

Amplitudes are indexed big-endian: qubit 0 is the most significant bit, so the
amplitude tensor reshaped to (2,)*n has qubit q on axis q.
"""

import math
from typing import Iterable, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import ContractViolation, ResourceGuardError
from mbqaoa.gates.ops import GateKind, GateOp
from mbqaoa.problems.mis import MisInstance
from mbqaoa.problems.qubo import BitsLike, QuboProblem, parse_bits

H_MATRIX = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def rx_matrix(theta: float) -> np.ndarray:
    """e^{i theta X}."""
    return math.cos(theta) * np.eye(2, dtype=complex) + 1j * math.sin(theta) * X_MATRIX


def rz_matrix(theta: float) -> np.ndarray:
    """e^{i theta Z}."""
    return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])


def check_width(n: int) -> None:
    guard = get_default_config().guard("statevector_qubits")
    if n > guard:
        raise ResourceGuardError("statevector qubits", guard, n)


class Statevector(BaseModel):
    """Normalized amplitude vector on n qubits."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray
    n: int

    @model_validator(mode="after")
    def _check(self) -> "Statevector":
        if self.amplitudes.shape != (2 ** self.n,):
            raise ValueError(f"amplitude shape {self.amplitudes.shape} does not match n={self.n}")
        norm = float(np.linalg.norm(self.amplitudes))
        tol = get_default_config().tolerance("norm")
        if abs(norm - 1.0) > tol:
            raise ValueError(f"statevector norm {norm:.12f} differs from 1")
        return self

    @classmethod
    def of(cls, amplitudes: Sequence[complex], normalize: bool = False) -> "Statevector":
        vec = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(vec.size).bit_length() - 1
        if 2 ** n != vec.size:
            raise ContractViolation(f"length {vec.size} is not a power of two")
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(amplitudes=vec, n=n)

    @classmethod
    def zeros(cls, n: int) -> "Statevector":
        check_width(n)
        vec = np.zeros(2 ** n, dtype=complex)
        vec[0] = 1.0
        return cls(amplitudes=vec, n=n)

    @classmethod
    def plus(cls, n: int) -> "Statevector":
        check_width(n)
        return cls(amplitudes=np.full(2 ** n, 2.0 ** (-n / 2), dtype=complex), n=n)

    @classmethod
    def basis(cls, bits: BitsLike) -> "Statevector":
        parsed = parse_bits(bits)
        check_width(len(parsed))
        index = int("".join(map(str, parsed)) or "0", 2)
        vec = np.zeros(2 ** len(parsed), dtype=complex)
        vec[index] = 1.0
        return cls(amplitudes=vec, n=len(parsed))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "Statevector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "Statevector") -> float:
        return abs(self.overlap(other)) ** 2

    def equal_up_to_phase(self, other: "Statevector", tol: float = 1e-9) -> bool:
        return phase_distance(self.amplitudes, other.amplitudes) <= tol


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over global phase of max |a - e^{i phi} b| (both assumed normalized)."""
    if a.shape != b.shape:
        raise ContractViolation(f"shape mismatch: {a.shape} vs {b.shape}")
    inner = np.vdot(b, a)
    phase = inner / abs(inner) if abs(inner) > 1e-15 else 1.0
    return float(np.max(np.abs(a - phase * b))) if a.size else 0.0


def apply_matrix(psi: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply a 2^k x 2^k matrix on the given axes of a (2,)*n tensor."""
    k = len(axes)
    op = matrix.reshape((2,) * (2 * k))
    moved = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(moved, list(range(k)), list(axes))


def _apply_controlled_rx(
    psi: np.ndarray, theta: float, target: int, controls: Iterable[int]
) -> np.ndarray:
    """e^{i theta X} on target restricted to the slice where every control is 0."""
    controls = sorted(controls)
    index = tuple(0 if q in controls else slice(None) for q in range(psi.ndim))
    sub = psi[index]
    axis = target - sum(1 for c in controls if c < target)
    out = psi.copy()
    out[index] = apply_matrix(sub, rx_matrix(theta), [axis])
    return out


def _apply_gate(psi: np.ndarray, op: GateOp) -> np.ndarray:
    n = psi.ndim
    if max(op.qubits) >= n:
        raise ContractViolation(f"{op.kind.value} on qubits {op.qubits} exceeds register of {n}")
    kind = op.kind
    if kind is GateKind.H:
        return apply_matrix(psi, H_MATRIX, op.qubits)
    if kind is GateKind.RX:
        return apply_matrix(psi, rx_matrix(op.angle or 0.0), op.qubits)
    if kind is GateKind.RZ:
        return apply_matrix(psi, rz_matrix(op.angle or 0.0), op.qubits)
    if kind is GateKind.ZZ:
        theta = op.angle or 0.0
        diag = np.exp(1j * theta * np.array([1.0, -1.0, -1.0, 1.0]))
        return apply_matrix(psi, np.diag(diag), op.qubits)
    if kind is GateKind.CZ:
        return apply_matrix(psi, np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex), op.qubits)
    if kind is GateKind.CNOT:
        matrix = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
        return apply_matrix(psi, matrix, op.qubits)
    if kind is GateKind.CTRL0_RX:
        return _apply_controlled_rx(psi, op.angle or 0.0, op.target, op.controls)
    raise ContractViolation(f"unsupported gate kind {kind}")


def apply(state: Statevector, op: GateOp) -> Statevector:
    """Return the state after one gate."""
    out = _apply_gate(state.tensor(), op).reshape(-1)
    return Statevector(amplitudes=out, n=state.n)


def run(circuit: Sequence[GateOp], n: int, initial: Optional[Statevector] = None) -> Statevector:
    """
    Simulate a circuit from |0...0> (or `initial`).

    Raises:
        ResourceGuardError: If n exceeds the statevector guard (14 by default)
        ContractViolation: If a gate touches a qubit >= n
    """
    check_width(n)
    state = initial if initial is not None else Statevector.zeros(n)
    if state.n != n:
        raise ContractViolation(f"initial state has {state.n} qubits, expected {n}")
    psi = state.tensor().copy()
    for op in circuit:
        psi = _apply_gate(psi, op)
    logger.debug(f"Simulated {len(circuit)} gates on {n} qubits")
    return Statevector(amplitudes=psi.reshape(-1), n=n)


def distribution(state: Statevector) -> np.ndarray:
    """Computational-basis probabilities (sums to 1)."""
    return state.probabilities()


def expectation_cost(state: Statevector, problem: QuboProblem) -> float:
    """sum_x P(x) cost(x)."""
    if state.n != problem.n:
        raise ContractViolation(f"state has {state.n} qubits, problem has {problem.n}")
    return float(np.dot(distribution(state), problem.hamiltonian_diagonal()))


def apply_partial_mixer(
    state: Statevector, instance: MisInstance, v: int, beta: float
) -> Statevector:
    """
    U_v(beta): e^{i beta X_v} on the subspace where every neighbour of v is 0.

    Applied as a masked 2x2 rotation on a slice of the amplitude tensor.
    """
    if not 0 <= v < instance.n:
        raise ContractViolation(f"vertex {v} out of range for n={instance.n}")
    if state.n != instance.n:
        raise ContractViolation(f"state has {state.n} qubits, graph has {instance.n}")
    psi = _apply_controlled_rx(state.tensor(), beta, v, instance.neighbors(v))
    return Statevector(amplitudes=psi.reshape(-1), n=state.n)
