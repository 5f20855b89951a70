"""
Tensor-contraction semantics for ZX diagrams.

Each spider becomes a rank-d tensor, each edge a 2x2 identity or Hadamard
tensor, and the network is contracted pairwise with numpy.tensordot (the
label-list style of ncon). The result is the linear map from input ports to
output ports times the diagram's tracked scalar.
"""

from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import ContractViolation, ResourceGuardError
from mbqaoa.zx.diagram import Spider, SpiderColor, ZxDiagram

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
IDENTITY = np.eye(2, dtype=complex)

ContractionOrder = str  # "greedy" or "sequential"


class LinearMap(BaseModel):
    """Matrix of shape 2^outputs x 2^inputs."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    n_inputs: int
    n_outputs: int

    @model_validator(mode="after")
    def _check_shape(self) -> "LinearMap":
        expected = (2 ** self.n_outputs, 2 ** self.n_inputs)
        if self.matrix.shape != expected:
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {expected}")
        return self

    @classmethod
    def of(cls, matrix: np.ndarray) -> "LinearMap":
        """Wrap a square or rectangular power-of-two matrix."""
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim == 1:
            matrix = matrix.reshape(-1, 1)
        rows, cols = matrix.shape
        return cls(matrix=matrix, n_inputs=_log2(cols), n_outputs=_log2(rows))


def _log2(size: int) -> int:
    bits = int(size).bit_length() - 1
    if 2 ** bits != size:
        raise ContractViolation(f"dimension {size} is not a power of two")
    return bits


def spider_tensor(spider: Spider, degree: int) -> np.ndarray:
    """Tensor of a spider with `degree` legs."""
    phase = np.exp(1j * spider.phase.radians)
    if degree == 0:
        return np.array(1.0 + phase, dtype=complex)
    tensor = np.zeros((2,) * degree, dtype=complex)
    tensor[(0,) * degree] = 1.0
    tensor[(1,) * degree] = phase
    if spider.color is SpiderColor.X:
        for axis in range(degree):
            tensor = np.moveaxis(np.tensordot(HADAMARD, tensor, axes=([1], [axis])), 0, axis)
    return tensor


class _Network:
    """Tensors with integer leg labels; every internal label appears twice."""

    def __init__(self) -> None:
        self.tensors: List[np.ndarray] = []
        self.labels: List[List[int]] = []

    def add(self, tensor: np.ndarray, labels: Sequence[int]) -> None:
        self.tensors.append(tensor)
        self.labels.append(list(labels))

    def _merge(self, i: int, j: int) -> None:
        ti, tj = self.tensors[i], self.tensors[j]
        li, lj = self.labels[i], self.labels[j]
        shared = [lab for lab in li if lab in lj]
        axes_i = [li.index(lab) for lab in shared]
        axes_j = [lj.index(lab) for lab in shared]
        merged = np.tensordot(ti, tj, axes=(axes_i, axes_j))
        new_labels = [lab for lab in li if lab not in shared] + [
            lab for lab in lj if lab not in shared
        ]
        for k in sorted((i, j), reverse=True):
            del self.tensors[k]
            del self.labels[k]
        self.tensors.insert(min(i, j), merged)
        self.labels.insert(min(i, j), new_labels)

    def _pick_greedy(self) -> Tuple[int, int]:
        best = None
        for i in range(len(self.tensors)):
            for j in range(i + 1, len(self.tensors)):
                shared = set(self.labels[i]) & set(self.labels[j])
                rank = len(self.labels[i]) + len(self.labels[j]) - 2 * len(shared)
                key = (0 if shared else 1, rank, i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        assert best is not None
        return best[1], best[2]

    def _pick_sequential(self) -> Tuple[int, int]:
        first = set(self.labels[0])
        for j in range(1, len(self.tensors)):
            if first & set(self.labels[j]):
                return 0, j
        return 0, 1

    def contract(self, order: ContractionOrder) -> Tuple[np.ndarray, List[int]]:
        if not self.tensors:
            return np.array(1.0 + 0.0j), []
        while len(self.tensors) > 1:
            if order == "greedy":
                i, j = self._pick_greedy()
            elif order == "sequential":
                i, j = self._pick_sequential()
            else:
                raise ValueError(f"Unknown contraction order: {order}")
            self._merge(i, j)
        return self.tensors[0], self.labels[0]


def to_matrix(diagram: ZxDiagram, order: ContractionOrder = "greedy") -> LinearMap:
    """
    Contract a diagram into its linear map (scalar included).

    Args:
        diagram: Well-formed ZX diagram
        order: Contraction strategy, "greedy" (smallest intermediate first) or
               "sequential" (fold from the first tensor)

    Returns:
        LinearMap of shape 2^|outputs| x 2^|inputs|

    Raises:
        ResourceGuardError: If |inputs| + |outputs| exceeds the contraction guard
        MalformedDiagramError: If the diagram is not well formed
    """
    limit = get_default_config().guard("contraction_ports")
    ports = len(diagram.inputs) + len(diagram.outputs)
    if ports > limit:
        raise ResourceGuardError("boundary ports", limit, ports)
    diagram.check()

    network = _Network()
    next_label = 0
    port_label: Dict[int, int] = {}
    for port in diagram.boundary_ids():
        port_label[port] = next_label
        next_label += 1

    # Leg labels per spider, in incidence order
    spider_legs: Dict[int, List[int]] = {s.id: [] for s in diagram.spiders}
    for edge in diagram.edges:
        ends = []
        for end in (edge.a, edge.b):
            if end in port_label:
                ends.append(port_label[end])
            else:
                ends.append(next_label)
                spider_legs[end].append(next_label)
                next_label += 1
        network.add(HADAMARD if edge.hadamard else IDENTITY, ends)

    for spider in diagram.spiders:
        legs = spider_legs[spider.id]
        network.add(spider_tensor(spider, len(legs)), legs)

    tensor, labels = network.contract(order)

    wanted = [port_label[p] for p in diagram.outputs] + [port_label[p] for p in diagram.inputs]
    if wanted:
        tensor = np.transpose(tensor, [labels.index(lab) for lab in wanted])
    matrix = tensor.reshape(2 ** len(diagram.outputs), 2 ** len(diagram.inputs))
    logger.debug(
        f"Contracted {len(diagram.spiders)} spiders / {len(diagram.edges)} edges "
        f"into {matrix.shape[0]}x{matrix.shape[1]} map"
    )
    return LinearMap(
        matrix=diagram.scalar * matrix,
        n_inputs=len(diagram.inputs),
        n_outputs=len(diagram.outputs),
    )


MatrixLike = Union[LinearMap, np.ndarray]


def _as_array(value: MatrixLike) -> np.ndarray:
    if isinstance(value, LinearMap):
        return value.matrix
    return np.asarray(value, dtype=complex)


def equal_up_to_scalar(a: MatrixLike, b: MatrixLike, tol: float = 1e-10) -> bool:
    """
    True iff max|a - lambda * b| <= tol for a nonzero lambda.

    lambda = a[k] / b[k] at the largest-magnitude entry k of b. The tolerance is
    absolute, in the units of a.

    Raises:
        ContractViolation: If shapes differ
    """
    left, right = _as_array(a), _as_array(b)
    if left.shape != right.shape:
        raise ContractViolation(f"shape mismatch: {left.shape} vs {right.shape}")
    if not left.size:
        return True

    pivot = np.unravel_index(int(np.argmax(np.abs(right))), right.shape)
    if right[pivot] == 0:
        return bool(np.max(np.abs(left)) <= tol)
    lam = left[pivot] / right[pivot]
    if lam == 0:
        return False
    return bool(np.max(np.abs(left - lam * right)) <= tol)
