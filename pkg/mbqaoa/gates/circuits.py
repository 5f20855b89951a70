"""
QAOA circuit builders.

Cost layer: ZZ(-s gamma J_uv) per coupling then RZ(-s gamma h_v) per linear term,
with s = PHASE_SCALE. Mixer: RX(-beta) on every qubit. Starting state |+>^n
prepared by H on |0...0>.

MIS ansatz: RZ per vertex for the objective sum_v x_v, and the ordered product of
partial mixers U_v(beta) = CTRL0_RX(beta, v, N(v)).
"""

import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from mbqaoa.compiler.conventions import edge_angle, linear_angle, mixer_angle
from mbqaoa.core.errors import InvalidInputError
from mbqaoa.gates.ops import GateOp, ctrl0_rx, h, rx, rz, zz
from mbqaoa.problems.mis import MisInstance
from mbqaoa.problems.qubo import QuboProblem


class QaoaParams(BaseModel):
    """Depth and angle schedules."""
    model_config = ConfigDict(frozen=True)

    p: int
    gammas: Tuple[float, ...]
    betas: Tuple[float, ...]

    @model_validator(mode="after")
    def _check(self) -> "QaoaParams":
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if len(self.gammas) != self.p or len(self.betas) != self.p:
            raise ValueError(
                f"angle schedules must have length p={self.p} "
                f"(got {len(self.gammas)} gammas, {len(self.betas)} betas)"
            )
        return self

    @classmethod
    def of(cls, gammas: Sequence[float], betas: Sequence[float]) -> "QaoaParams":
        return cls(p=len(gammas), gammas=tuple(map(float, gammas)), betas=tuple(map(float, betas)))

    def layers(self) -> List[Tuple[float, float]]:
        return list(zip(self.gammas, self.betas))

    def to_json(self) -> dict:
        return {"p": self.p, "gammas": list(self.gammas), "betas": list(self.betas)}

    @classmethod
    def from_json(cls, doc: dict) -> "QaoaParams":
        try:
            return cls.of(doc["gammas"], doc["betas"])
        except KeyError as exc:
            raise InvalidInputError(f"missing key '{exc.args[0]}' in angle schedule") from exc


class InitKind(str, Enum):
    """MIS starting states."""
    ALL_ZEROS = "all_zeros"
    CLASSICAL_SET = "classical_set"


class MisInit(BaseModel):
    """
    MIS initial state.

    CLASSICAL_SET flips the listed vertices and then applies one pass of partial
    mixers at `pre_mixer_beta` (beta_1 when unset).
    """
    model_config = ConfigDict(frozen=True)

    kind: InitKind = InitKind.ALL_ZEROS
    vertices: Tuple[int, ...] = ()
    pre_mixer_beta: Optional[float] = None

    @classmethod
    def classical(
        cls, vertices: Sequence[int], pre_mixer_beta: Optional[float] = None
    ) -> "MisInit":
        return cls(
            kind=InitKind.CLASSICAL_SET, vertices=tuple(vertices), pre_mixer_beta=pre_mixer_beta
        )


def build_qaoa_circuit(problem: QuboProblem, params: QaoaParams) -> List[GateOp]:
    """Gate list for QAOA_p on a QUBO (see module docstring for angle conventions)."""
    circuit = [h(q) for q in range(problem.n)]
    for gamma, beta in params.layers():
        for (u, v) in problem.edges:
            circuit.append(zz(edge_angle(gamma, problem.quadratic[(u, v)]), u, v))
        for v in problem.linear_vertices:
            circuit.append(rz(linear_angle(gamma, problem.linear[v]), v))
        for v in range(problem.n):
            circuit.append(rx(mixer_angle(beta), v))
    logger.debug(f"QAOA circuit for {problem.name}: p={params.p}, {len(circuit)} gates")
    return circuit


def _mixer_order(instance: MisInstance, order: Optional[Sequence[int]]) -> List[int]:
    if order is None:
        return list(range(instance.n))
    order = [int(v) for v in order]
    if sorted(order) != list(range(instance.n)):
        raise InvalidInputError(f"mixer order {order} is not a permutation of 0..{instance.n - 1}")
    return order


def partial_mixer_layer(instance: MisInstance, beta: float, order: Sequence[int]) -> List[GateOp]:
    return [ctrl0_rx(beta, v, tuple(instance.neighbors(v))) for v in order]


def build_mis_qaoa(
    instance: MisInstance,
    params: QaoaParams,
    order: Optional[Sequence[int]] = None,
    init: Optional[MisInit] = None,
) -> List[GateOp]:
    """
    Constraint-preserving MIS ansatz starting from |0...0>.

    Args:
        instance: Graph
        params: Angle schedules
        order: Vertex permutation for the partial mixers (default ascending)
        init: Starting state (default all zeros)

    Raises:
        InvalidInputError: If the classical starting set is not independent or the
            order is not a permutation
    """
    order = _mixer_order(instance, order)
    init = init or MisInit()
    circuit: List[GateOp] = []

    if init.kind is InitKind.CLASSICAL_SET:
        bits = [1 if v in init.vertices else 0 for v in range(instance.n)]
        if any(not 0 <= v < instance.n for v in init.vertices):
            raise InvalidInputError(f"starting set {init.vertices} out of range")
        if not instance.is_independent(bits):
            raise InvalidInputError(f"starting set {sorted(init.vertices)} is not independent")
        circuit += [rx(math.pi / 2, v) for v in sorted(init.vertices)]  # e^{i pi/2 X} = iX
        pre_beta = init.pre_mixer_beta if init.pre_mixer_beta is not None else params.betas[0]
        circuit += partial_mixer_layer(instance, pre_beta, order)

    qubo = instance.to_qubo()
    for gamma, beta in params.layers():
        for v in range(instance.n):
            circuit.append(rz(linear_angle(gamma, qubo.linear[v]), v))
        circuit += partial_mixer_layer(instance, beta, order)
    return circuit


class GateResources(BaseModel):
    """Gate-model cost of QAOA_p: |V| qubits and two CNOTs per ZZ term."""
    qubits: int
    entangling_gates: int
    single_qubit_gates: int
    depth_layers: int


def gate_model_resources(problem: QuboProblem, p: int) -> GateResources:
    edges = len(problem.edges)
    return GateResources(
        qubits=problem.n,
        entangling_gates=2 * p * edges,
        single_qubit_gates=problem.n + p * (edges + len(problem.linear_vertices) + problem.n),
        depth_layers=p,
    )


def circuit_to_json(circuit: Sequence[GateOp]) -> List[dict]:
    return [op.to_json() for op in circuit]


def circuit_from_json(doc: Sequence[dict]) -> List[GateOp]:
    return [GateOp.from_json(item) for item in doc]
