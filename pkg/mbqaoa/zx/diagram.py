"""
ZX diagrams as open multigraphs.

Spiders carry a colour and a Phase; edges are plain or Hadamard; boundary ports
are bare node ids listed in `inputs`/`outputs`. Diagrams are frozen values:
every rewrite builds a new diagram.
"""

import json
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from mbqaoa.core.errors import MalformedDiagramError
from mbqaoa.zx.phase import Phase, PhaseLike


class SpiderColor(str, Enum):
    """Spider colours."""
    Z = "Z"
    X = "X"

    def flipped(self) -> "SpiderColor":
        return SpiderColor.X if self is SpiderColor.Z else SpiderColor.Z


class Spider(BaseModel):
    """Z or X spider; degree is implied by incident edges."""
    model_config = ConfigDict(frozen=True)

    id: int
    color: SpiderColor
    phase: Phase = Field(default_factory=Phase.zero)

    def with_phase(self, phase: PhaseLike) -> "Spider":
        return self.model_copy(update={"phase": Phase.coerce(phase)})

    def with_color(self, color: SpiderColor) -> "Spider":
        return self.model_copy(update={"color": color})


class Edge(BaseModel):
    """Unordered edge between two nodes, optionally carrying a Hadamard."""
    model_config = ConfigDict(frozen=True)

    id: int
    a: int
    b: int
    hadamard: bool = False

    def other(self, node: int) -> int:
        return self.b if self.a == node else self.a

    def touches(self, node: int) -> bool:
        return self.a == node or self.b == node

    @property
    def is_self_loop(self) -> bool:
        return self.a == self.b


class ZxDiagram(BaseModel):
    """Open graph of spiders with boundary ports and a tracked global scalar."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spiders: Tuple[Spider, ...] = ()
    edges: Tuple[Edge, ...] = ()
    inputs: Tuple[int, ...] = ()
    outputs: Tuple[int, ...] = ()
    scalar: complex = 1.0 + 0.0j

    # Lookups

    def spider_map(self) -> Dict[int, Spider]:
        return {s.id: s for s in self.spiders}

    def spider(self, node: int) -> Spider:
        for s in self.spiders:
            if s.id == node:
                return s
        raise KeyError(f"No spider with id {node}")

    def has_spider(self, node: int) -> bool:
        return any(s.id == node for s in self.spiders)

    def boundary_ids(self) -> Tuple[int, ...]:
        return self.inputs + self.outputs

    def is_boundary(self, node: int) -> bool:
        return node in self.inputs or node in self.outputs

    def node_ids(self) -> List[int]:
        return [s.id for s in self.spiders] + list(self.boundary_ids())

    def edge(self, edge_id: int) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"No edge with id {edge_id}")

    def incident(self, node: int) -> List[Edge]:
        return [e for e in self.edges if e.touches(node)]

    def degree(self, node: int) -> int:
        return sum(2 if e.is_self_loop else 1 for e in self.incident(node))

    def neighbors(self, node: int) -> List[int]:
        return [e.other(node) for e in self.incident(node) if not e.is_self_loop]

    def edges_between(self, a: int, b: int) -> List[Edge]:
        return [e for e in self.edges if {e.a, e.b} == {a, b} and a != b]

    def fresh_node_id(self) -> int:
        ids = self.node_ids()
        return max(ids) + 1 if ids else 0

    def fresh_edge_id(self) -> int:
        return max((e.id for e in self.edges), default=-1) + 1

    # Functional updates

    def replace(self, **changes: Any) -> "ZxDiagram":
        """Copy with fields replaced (tuples are converted from any sequence)."""
        for key in ("spiders", "edges", "inputs", "outputs"):
            if key in changes:
                changes[key] = tuple(changes[key])
        if "scalar" in changes:
            changes["scalar"] = complex(changes["scalar"])
        return self.model_copy(update=changes)

    def scaled(self, factor: complex) -> "ZxDiagram":
        return self.replace(scalar=self.scalar * complex(factor))

    # Structure checks

    def structure_problems(self) -> List[str]:
        """List every well-formedness violation (empty when the diagram is sound)."""
        problems: List[str] = []
        spider_ids = [s.id for s in self.spiders]
        boundary = list(self.boundary_ids())

        if len(set(spider_ids)) != len(spider_ids):
            problems.append("duplicate spider ids")
        if len(set(boundary)) != len(boundary):
            problems.append("boundary port listed twice")
        clash = set(spider_ids) & set(boundary)
        if clash:
            problems.append(f"ids used as both spider and boundary: {sorted(clash)}")

        known = set(spider_ids) | set(boundary)
        edge_ids = [e.id for e in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            problems.append("duplicate edge ids")
        for e in self.edges:
            for end in (e.a, e.b):
                if end not in known:
                    problems.append(f"edge {e.id} dangles at unknown node {end}")

        for port in boundary:
            deg = self.degree(port)
            if deg != 1:
                problems.append(f"boundary port {port} has degree {deg}, expected 1")

        if self.scalar == 0:
            problems.append("scalar is zero")
        return problems

    def check(self) -> "ZxDiagram":
        """Raise MalformedDiagramError if the diagram is not well formed."""
        problems = self.structure_problems()
        if problems:
            raise MalformedDiagramError("; ".join(problems))
        return self

    # Serialization

    def to_json(self) -> Dict[str, Any]:
        spiders = []
        for s in self.spiders:
            doc: Dict[str, Any] = {"id": s.id, "color": s.color.value}
            doc.update(s.phase.to_json("phase"))
            spiders.append(doc)
        return {
            "spiders": spiders,
            "edges": [{"a": e.a, "b": e.b, "hadamard": e.hadamard} for e in self.edges],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "scalar": {"re": self.scalar.real, "im": self.scalar.imag},
        }

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "ZxDiagram":
        spiders = [
            Spider(id=int(s["id"]), color=SpiderColor(s["color"]), phase=Phase.from_json(s))
            for s in doc.get("spiders", [])
        ]
        edges = [
            Edge(id=i, a=int(e["a"]), b=int(e["b"]), hadamard=bool(e.get("hadamard", False)))
            for i, e in enumerate(doc.get("edges", []))
        ]
        scalar = doc.get("scalar", {"re": 1.0, "im": 0.0})
        diagram = cls(
            spiders=tuple(spiders),
            edges=tuple(edges),
            inputs=tuple(int(i) for i in doc.get("inputs", [])),
            outputs=tuple(int(o) for o in doc.get("outputs", [])),
            scalar=complex(float(scalar["re"]), float(scalar["im"])),
        )
        return diagram.check()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


class DiagramBuilder:
    """Small mutable helper for assembling diagrams with predictable ids."""

    def __init__(self) -> None:
        self._spiders: List[Spider] = []
        self._edges: List[Edge] = []
        self._inputs: List[int] = []
        self._outputs: List[int] = []
        self._next_node = 0
        self.scalar: complex = 1.0 + 0.0j

    def _take(self, node: Optional[int]) -> int:
        if node is None:
            node = self._next_node
        self._next_node = max(self._next_node, node + 1)
        return node

    def input(self, node: Optional[int] = None) -> int:
        node = self._take(node)
        self._inputs.append(node)
        return node

    def output(self, node: Optional[int] = None) -> int:
        node = self._take(node)
        self._outputs.append(node)
        return node

    def z(self, phase: PhaseLike = 0, node: Optional[int] = None) -> int:
        node = self._take(node)
        self._spiders.append(Spider(id=node, color=SpiderColor.Z, phase=Phase.coerce(phase)))
        return node

    def x(self, phase: PhaseLike = 0, node: Optional[int] = None) -> int:
        node = self._take(node)
        self._spiders.append(Spider(id=node, color=SpiderColor.X, phase=Phase.coerce(phase)))
        return node

    def connect(self, a: int, b: int, hadamard: bool = False) -> int:
        edge_id = len(self._edges)
        self._edges.append(Edge(id=edge_id, a=a, b=b, hadamard=hadamard))
        return edge_id

    def chain(self, nodes: Sequence[int], hadamard: Iterable[bool] = ()) -> None:
        flags = list(hadamard) or [False] * (len(nodes) - 1)
        for (a, b), flag in zip(zip(nodes, nodes[1:]), flags):
            self.connect(a, b, flag)

    def build(self) -> ZxDiagram:
        return ZxDiagram(
            spiders=tuple(self._spiders),
            edges=tuple(self._edges),
            inputs=tuple(self._inputs),
            outputs=tuple(self._outputs),
            scalar=self.scalar,
        ).check()
