"""
Gate operations.

Rotations are e^{i theta P}. Qubit tuples by kind:
    RZ, RX, H        (q,)
    CZ, ZZ           (q, r)
    CNOT             (control, target)
    CTRL0_RX         (target, *controls)   e^{i theta X} on target when every control is 0
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator


class GateKind(str, Enum):
    """Supported gate kinds."""
    RZ = "RZ"
    RX = "RX"
    H = "H"
    CZ = "CZ"
    CNOT = "CNOT"
    ZZ = "ZZ"
    CTRL0_RX = "CTRL0_RX"


_ARITY = {
    GateKind.RZ: 1,
    GateKind.RX: 1,
    GateKind.H: 1,
    GateKind.CZ: 2,
    GateKind.CNOT: 2,
    GateKind.ZZ: 2,
}
_ROTATIONS = {GateKind.RZ, GateKind.RX, GateKind.ZZ, GateKind.CTRL0_RX}


class GateOp(BaseModel):
    """One gate on an n-qubit register."""
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[float] = None

    @model_validator(mode="after")
    def _check(self) -> "GateOp":
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value}: qubits {self.qubits} are not distinct")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"{self.kind.value}: negative qubit index in {self.qubits}")
        arity = _ARITY.get(self.kind)
        if arity is not None and len(self.qubits) != arity:
            raise ValueError(f"{self.kind.value} takes {arity} qubit(s), got {len(self.qubits)}")
        if self.kind is GateKind.CTRL0_RX and not self.qubits:
            raise ValueError("CTRL0_RX needs a target")
        if self.kind in _ROTATIONS and self.angle is None:
            raise ValueError(f"{self.kind.value} needs an angle")
        return self

    @property
    def target(self) -> int:
        return self.qubits[-1] if self.kind is GateKind.CNOT else self.qubits[0]

    @property
    def controls(self) -> Tuple[int, ...]:
        if self.kind is GateKind.CTRL0_RX:
            return self.qubits[1:]
        if self.kind is GateKind.CNOT:
            return self.qubits[:1]
        return ()

    @property
    def is_entangling(self) -> bool:
        return len(self.qubits) > 1

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "qubits": list(self.qubits), "angle": self.angle}

    @classmethod
    def from_json(cls, doc: dict) -> "GateOp":
        return cls(kind=GateKind(doc["kind"]), qubits=tuple(doc["qubits"]), angle=doc.get("angle"))


def rz(theta: float, q: int) -> GateOp:
    return GateOp(kind=GateKind.RZ, qubits=(q,), angle=theta)


def rx(theta: float, q: int) -> GateOp:
    return GateOp(kind=GateKind.RX, qubits=(q,), angle=theta)


def h(q: int) -> GateOp:
    return GateOp(kind=GateKind.H, qubits=(q,))


def cz(q: int, r: int) -> GateOp:
    return GateOp(kind=GateKind.CZ, qubits=(q, r))


def cnot(control: int, target: int) -> GateOp:
    return GateOp(kind=GateKind.CNOT, qubits=(control, target))


def zz(theta: float, q: int, r: int) -> GateOp:
    return GateOp(kind=GateKind.ZZ, qubits=(q, r), angle=theta)


def ctrl0_rx(theta: float, target: int, controls: Tuple[int, ...] = ()) -> GateOp:
    return GateOp(kind=GateKind.CTRL0_RX, qubits=(target, *controls), angle=theta)
