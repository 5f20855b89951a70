"""
Partial mixers U_v(beta) = Lambda_{N(v)}(e^{i beta X_v}) as dense local unitaries.

The register is (v, sorted N(v)), big-endian, so v is the most significant bit and
the all-zero control block sits at rows 0 and 2^d.
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import ContractViolation, ResourceGuardError
from mbqaoa.gates.statevector import H_MATRIX, rx_matrix
from mbqaoa.problems.mis import MisInstance
from mbqaoa.zx.semantics import LinearMap


class PartialMixerSpec(BaseModel):
    """One partial mixer: rotate `vertex` when every control reads 0."""
    model_config = ConfigDict(frozen=True)

    vertex: int
    controls: Tuple[int, ...]
    angle: float

    @classmethod
    def of(cls, instance: MisInstance, v: int, beta: float) -> "PartialMixerSpec":
        if not 0 <= v < instance.n:
            raise ContractViolation(f"vertex {v} out of range for n={instance.n}")
        return cls(vertex=v, controls=tuple(instance.neighbors(v)), angle=float(beta))

    @property
    def register(self) -> Tuple[int, ...]:
        return (self.vertex,) + self.controls

    @property
    def degree(self) -> int:
        return len(self.controls)


def _check_degree(spec: PartialMixerSpec) -> None:
    limit = get_default_config().guard("mixer_degree")
    if spec.degree > limit:
        raise ResourceGuardError(f"degree of vertex {spec.vertex}", limit, spec.degree)


def partial_mixer_matrix(instance: MisInstance, v: int, beta: float) -> LinearMap:
    """
    Dense U_v(beta) on the (v, sorted N(v)) register.

    Identity everywhere except the all-zero control block, where it acts as
    e^{i beta X} on v.

    Raises:
        ResourceGuardError: If deg(v) exceeds the mixer_degree guard
    """
    spec = PartialMixerSpec.of(instance, v, beta)
    _check_degree(spec)
    size = 2 ** (spec.degree + 1)
    block = [0, size // 2]
    matrix = np.eye(size, dtype=complex)
    matrix[np.ix_(block, block)] = rx_matrix(beta)
    return LinearMap.of(matrix)


def decomposed_partial_mixer(instance: MisInstance, v: int, beta: float) -> LinearMap:
    """
    U_v(beta) rebuilt as H_v D H_v, with D the diagonal phase e^{i beta Z_v} gated
    on all controls reading 0.
    """
    spec = PartialMixerSpec.of(instance, v, beta)
    _check_degree(spec)
    d = spec.degree
    rest = np.eye(2 ** d, dtype=complex)
    hadamard = np.kron(H_MATRIX, rest)
    gate = np.zeros(2 ** d)
    gate[0] = 1.0
    z_sign = np.repeat([1.0, -1.0], 2 ** d)
    diagonal = np.where(np.tile(gate, 2) > 0, np.exp(1j * beta * z_sign), 1.0)
    return LinearMap.of(hadamard @ np.diag(diagonal) @ hadamard)
