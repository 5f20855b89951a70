"""
QUBO problems and MaxCut.

Spin convention: z_v = (-1)^{x_v}, so bit 0 is spin +1. The cost of a bitstring is
    constant + sum_v h_v z_v + sum_{u<v} J_uv z_u z_v
which is exactly the diagonal of the cost Hamiltonian in the computational basis
(qubit 0 is the most significant bit of the basis index).
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import ContractViolation, InvalidGraphError, ResourceGuardError

Bits = Tuple[int, ...]
BitsLike = Union[str, Sequence[int], np.ndarray]
EdgeKey = Tuple[int, int]

_CHUNK = 1 << 16


def parse_bits(x: BitsLike, n: Optional[int] = None) -> Bits:
    """Accept "0110", [0, 1, 1, 0] or a 0/1 array; optionally enforce the length."""
    if isinstance(x, str):
        if any(c not in "01" for c in x):
            raise ContractViolation(f"bitstring {x!r} contains characters other than 0/1")
        bits = tuple(int(c) for c in x)
    else:
        bits = tuple(int(b) for b in np.asarray(x).ravel())
        if any(b not in (0, 1) for b in bits):
            raise ContractViolation(f"bit vector {bits} is not binary")
    if n is not None and len(bits) != n:
        raise ContractViolation(f"bitstring length {len(bits)} does not match n={n}")
    return bits


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def basis_bits(n: int) -> np.ndarray:
    """(2^n, n) array of bits for every basis index, qubit 0 most significant."""
    index = np.arange(2 ** n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((index[:, None] >> shifts[None, :]) & 1).astype(np.int8)


def _check_qubo_keys(n: int, quadratic: Dict[EdgeKey, float], linear: Dict[int, float]) -> None:
    for (u, v) in quadratic:
        if u == v:
            raise InvalidGraphError(f"self-loop on vertex {u}")
        if u > v:
            raise InvalidGraphError(f"quadratic key ({u}, {v}) must have u < v")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraphError(f"quadratic key ({u}, {v}) out of range for n={n}")
    for v in linear:
        if not 0 <= v < n:
            raise InvalidGraphError(f"linear key {v} out of range for n={n}")


class CostReport(BaseModel):
    """A bitstring with its classical cost."""
    bitstring: str
    value: float

    @property
    def bits(self) -> Bits:
        return parse_bits(self.bitstring)


class QuboProblem(BaseModel):
    """Quadratic unconstrained binary problem in spin form."""
    model_config = ConfigDict(frozen=True)

    n: int
    quadratic: Dict[EdgeKey, float] = {}
    linear: Dict[int, float] = {}
    constant: float = 0.0
    name: str = "qubo"

    @field_validator("n")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"n must be >= 1, got {v}")
        return v

    @model_validator(mode="after")
    def _check_keys(self) -> "QuboProblem":
        try:
            _check_qubo_keys(self.n, self.quadratic, self.linear)
        except InvalidGraphError as exc:
            raise ValueError(str(exc)) from exc
        return self

    @classmethod
    def build(
        cls,
        n: int,
        quadratic: Optional[Dict[EdgeKey, float]] = None,
        linear: Optional[Dict[int, float]] = None,
        constant: float = 0.0,
        name: str = "qubo",
    ) -> "QuboProblem":
        """Normalize (v, u) keys to (u, v) and merge duplicates before validating."""
        merged: Dict[EdgeKey, float] = {}
        for (u, v), weight in (quadratic or {}).items():
            if u == v:
                raise InvalidGraphError(f"self-loop on vertex {u}")
            key = (min(u, v), max(u, v))
            merged[key] = merged.get(key, 0.0) + float(weight)
        terms = {int(v): float(h) for v, h in (linear or {}).items()}
        _check_qubo_keys(n, merged, terms)
        return cls(
            n=n,
            quadratic=merged,
            linear=terms,
            constant=float(constant),
            name=name,
        )

    # Structure

    @property
    def edges(self) -> List[EdgeKey]:
        """Interaction edges (nonzero couplings), sorted."""
        return sorted(k for k, w in self.quadratic.items() if w != 0.0)

    @property
    def linear_vertices(self) -> List[int]:
        """Vertices with a nonzero linear term, sorted."""
        return sorted(v for v, h in self.linear.items() if h != 0.0)

    def interaction_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for (u, v) in self.edges:
            graph.add_edge(u, v, weight=self.quadratic[(u, v)])
        return graph

    # Cost

    def cost(self, x: BitsLike) -> float:
        """
        Classical cost of a bitstring.

        Raises:
            ContractViolation: If len(x) != n
        """
        bits = parse_bits(x, self.n)
        z = [1 - 2 * b for b in bits]
        value = self.constant
        for v, h in self.linear.items():
            value += h * z[v]
        for (u, v), j in self.quadratic.items():
            value += j * z[u] * z[v]
        return float(value)

    def cost_many(self, bits: np.ndarray) -> np.ndarray:
        """Vectorized cost over an (m, n) array of bits."""
        z = 1.0 - 2.0 * np.asarray(bits, dtype=float)
        values = np.full(z.shape[0], self.constant, dtype=float)
        for v, h in self.linear.items():
            values += h * z[:, v]
        for (u, v), j in self.quadratic.items():
            values += j * z[:, u] * z[:, v]
        return values

    def hamiltonian_diagonal(self) -> np.ndarray:
        """Diagonal of the cost Hamiltonian, indexed by basis state (length 2^n)."""
        guard = get_default_config().guard("statevector_qubits")
        if self.n > guard:
            raise ResourceGuardError("Hamiltonian qubits", guard, self.n)
        return self.cost_many(basis_bits(self.n))

    # Serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "name": self.name,
            "quadratic": [
                {"u": u, "v": v, "weight": w} for (u, v), w in sorted(self.quadratic.items())
            ],
            "linear": [{"v": v, "weight": h} for v, h in sorted(self.linear.items())],
            "constant": self.constant,
        }


def _check_simple(edges: Iterable[Tuple[int, int]], n: int) -> None:
    for u, v in edges:
        if u == v:
            raise InvalidGraphError(f"self-loop on vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraphError(f"edge ({u}, {v}) out of range for n={n}")


def maxcut_to_qubo(
    graph: Union[nx.Graph, Sequence[Tuple[int, int]]], n: Optional[int] = None
) -> QuboProblem:
    """
    MaxCut as a QUBO: C = sum_{uv} w_uv (1 - Z_u Z_v) / 2.

    Edge weights come from the "weight" attribute (default 1). Vertices must be
    0..n-1.

    Args:
        graph: networkx graph or an edge list
        n: Vertex count when passing an edge list (default: max index + 1)

    Raises:
        InvalidGraphError: On self-loops or out-of-range vertices
    """
    if not isinstance(graph, nx.Graph):
        edges = [(int(u), int(v)) for u, v in graph]
        if n is None:
            n = max((max(e) for e in edges), default=0) + 1
        g = nx.Graph()
        g.add_nodes_from(range(n))
        for u, v in edges:
            if u == v:
                raise InvalidGraphError(f"self-loop on vertex {u}")
            g.add_edge(u, v)
        graph = g
    if graph.is_directed() or graph.is_multigraph():
        raise InvalidGraphError("MaxCut needs a simple undirected graph")
    if nx.number_of_selfloops(graph):
        loop = next(iter(nx.selfloop_edges(graph)))
        raise InvalidGraphError(f"self-loop on vertex {loop[0]}")
    if n is None:
        n = max(graph.nodes, default=0) + 1
    _check_simple(graph.edges, n)

    quadratic: Dict[EdgeKey, float] = {}
    total = 0.0
    for u, v, data in graph.edges(data=True):
        weight = float(data.get("weight", 1.0))
        quadratic[(min(u, v), max(u, v))] = -0.5 * weight
        total += weight
    return QuboProblem(n=n, quadratic=quadratic, constant=0.5 * total, name="maxcut")


def brute_force_optimum(problem: QuboProblem) -> CostReport:
    """
    Exhaustive maximization; ties go to the lexicographically smallest bitstring.

    Raises:
        ResourceGuardError: If n exceeds the brute-force guard (24 by default)
    """
    guard = get_default_config().guard("brute_force_vars")
    if problem.n > guard:
        raise ResourceGuardError("brute-force variables", guard, problem.n)

    best_value = -np.inf
    best_index = 0
    total = 2 ** problem.n
    shifts = np.arange(problem.n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        index = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (index[:, None] >> shifts[None, :]) & 1
        values = problem.cost_many(bits)
        local = int(np.argmax(values))  # first maximum = smallest index in chunk
        if values[local] > best_value + 1e-12:
            best_value = float(values[local])
            best_index = int(index[local])

    bits = [(best_index >> s) & 1 for s in shifts]
    report = CostReport(bitstring=bits_to_str(bits), value=best_value)
    logger.debug(
        f"Brute force on {problem.name} (n={problem.n}): {report.bitstring} -> {best_value:g}"
    )
    return report
