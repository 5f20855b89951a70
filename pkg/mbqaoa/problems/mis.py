"""Maximum independent set instances."""

from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import InvalidGraphError, ResourceGuardError
from mbqaoa.problems.qubo import (
    BitsLike,
    CostReport,
    QuboProblem,
    basis_bits,
    bits_to_str,
    parse_bits,
)

_CHUNK = 1 << 16


def _check_edges(n: int, edges: Sequence[Tuple[int, int]]) -> None:
    if n < 1:
        raise InvalidGraphError(f"n must be >= 1, got {n}")
    seen = set()
    for u, v in edges:
        if u == v:
            raise InvalidGraphError(f"self-loop on vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraphError(f"edge ({u}, {v}) out of range for n={n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidGraphError(f"duplicate edge {key}")
        seen.add(key)


class MisInstance(BaseModel):
    """Simple undirected graph on vertices 0..n-1."""
    model_config = ConfigDict(frozen=True)

    n: int
    edges: Tuple[Tuple[int, int], ...] = ()
    name: str = "mis"

    @model_validator(mode="after")
    def _check_graph(self) -> "MisInstance":
        try:
            _check_edges(self.n, self.edges)
        except InvalidGraphError as exc:
            raise ValueError(str(exc)) from exc
        return self

    @classmethod
    def from_edges(
        cls, edges: Sequence[Tuple[int, int]], n: Optional[int] = None, name: str = "mis"
    ) -> "MisInstance":
        """Build from an edge list; duplicates (in either orientation) are merged."""
        pairs = [(int(u), int(v)) for u, v in edges]
        if n is None:
            n = max((max(p) for p in pairs), default=0) + 1
        unique = sorted({(min(u, v), max(u, v)) for u, v in pairs})
        _check_edges(n, unique)
        return cls(n=n, edges=tuple(unique), name=name)

    @classmethod
    def from_graph(cls, graph: nx.Graph, name: str = "mis") -> "MisInstance":
        if nx.number_of_selfloops(graph):
            loop = next(iter(nx.selfloop_edges(graph)))
            raise InvalidGraphError(f"self-loop on vertex {loop[0]}")
        n = max(graph.nodes, default=0) + 1
        return cls.from_edges(list(graph.edges), n=n, name=name)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def neighbors(self, v: int) -> List[int]:
        """Sorted N(v)."""
        return sorted(self.graph.neighbors(v))

    def degree(self, v: int) -> int:
        return int(self.graph.degree(v))

    def is_independent(self, x: BitsLike) -> bool:
        """True iff no edge has both endpoints set."""
        bits = parse_bits(x, self.n)
        return not any(bits[u] and bits[v] for u, v in self.edges)

    def feasible_mask(self) -> np.ndarray:
        """Boolean vector over basis indices: True where the bitstring is an independent set."""
        guard = get_default_config().guard("statevector_qubits")
        if self.n > guard:
            raise ResourceGuardError("MIS feasibility qubits", guard, self.n)
        bits = basis_bits(self.n)
        mask = np.ones(2 ** self.n, dtype=bool)
        for u, v in self.edges:
            mask &= ~((bits[:, u] == 1) & (bits[:, v] == 1))
        return mask

    def to_qubo(self) -> QuboProblem:
        """Objective sum_v x_v in spin form: h_v = -1/2, constant n/2."""
        return QuboProblem(
            n=self.n,
            linear={v: -0.5 for v in range(self.n)},
            constant=0.5 * self.n,
            name=f"{self.name}-size",
        )

    def to_json(self) -> dict:
        return {"n": self.n, "name": self.name, "edges": [list(e) for e in self.edges]}


def is_independent(instance: MisInstance, x: BitsLike) -> bool:
    return instance.is_independent(x)


def mis_brute_force(instance: MisInstance) -> CostReport:
    """
    Largest independent set by exhaustion; ties go to the lexicographically smallest bitstring.

    Raises:
        ResourceGuardError: If n exceeds the brute-force guard
    """
    guard = get_default_config().guard("brute_force_vars")
    if instance.n > guard:
        raise ResourceGuardError("brute-force variables", guard, instance.n)
    best_size, best_index = -1, 0
    total = 2 ** instance.n
    shifts = np.arange(instance.n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        index = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (index[:, None] >> shifts[None, :]) & 1
        ok = np.ones(len(index), dtype=bool)
        for u, v in instance.edges:
            ok &= ~((bits[:, u] == 1) & (bits[:, v] == 1))
        sizes = np.where(ok, bits.sum(axis=1), -1)
        local = int(np.argmax(sizes))
        if sizes[local] > best_size:
            best_size, best_index = int(sizes[local]), int(index[local])
    best = [(best_index >> s) & 1 for s in shifts]
    return CostReport(bitstring=bits_to_str(best), value=float(best_size))

