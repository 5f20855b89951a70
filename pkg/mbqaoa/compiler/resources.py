"""
Resource accounting for compiled QAOA patterns.

Per layer the construction uses |E| edge ancillas, 2|V| mixer ancillas and |V_h|
linear ancillas, with 2|E| + 2|V| + |V_h| CZs. Input nodes are reported
separately as logical qubits.
"""

from typing import Any, Dict, List, Optional

import networkx as nx
from pydantic import BaseModel, Field

from mbqaoa.gates.circuits import GateResources, gate_model_resources
from mbqaoa.patterns.pattern import MeasurementPattern
from mbqaoa.patterns.runtime import peak_window
from mbqaoa.problems.qubo import QuboProblem


class LayerResources(BaseModel):
    """Counts for one QAOA layer."""
    edge_ancillas: int
    vertex_ancillas: int
    linear_ancillas: int
    cz_count: int

    @property
    def ancillas(self) -> int:
        return self.edge_ancillas + self.vertex_ancillas + self.linear_ancillas


class ResourceEstimate(BaseModel):
    """Exact MBQC resource counts with the closed-form bounds alongside."""
    depth: int
    logical_qubits: int
    ancillas_total: int
    entangling_edges_total: int
    per_layer: List[LayerResources] = Field(default_factory=list)
    bound_qubits: int
    bound_edges: int
    linear_vertices: int = 0
    gate_model: GateResources

    @property
    def total_nodes(self) -> int:
        return self.logical_qubits + self.ancillas_total

    def within_bounds(self) -> bool:
        slack = self.depth * self.linear_vertices
        return (
            self.ancillas_total <= self.bound_qubits + slack
            and self.entangling_edges_total <= self.bound_edges + slack
        )


def resource_estimate(problem: QuboProblem, p: int) -> ResourceEstimate:
    """Counts implied by the layered construction, without compiling."""
    e, n, h = len(problem.edges), problem.n, len(problem.linear_vertices)
    layer = LayerResources(
        edge_ancillas=e, vertex_ancillas=2 * n, linear_ancillas=h, cz_count=2 * e + 2 * n + h
    )
    return ResourceEstimate(
        depth=p,
        logical_qubits=n,
        ancillas_total=p * layer.ancillas,
        entangling_edges_total=p * layer.cz_count,
        per_layer=[layer] * p,
        bound_qubits=p * (e + 2 * n),
        bound_edges=p * (2 * e + 2 * n),
        linear_vertices=h,
        gate_model=gate_model_resources(problem, p),
    )


class PatternCounts(BaseModel):
    """Counts read back from an emitted pattern."""
    nodes: int
    inputs: int
    ancillas: int
    entangling_edges: int
    measurements: int
    peak_window: int

    def matches(self, estimate: ResourceEstimate) -> bool:
        return (
            self.inputs == estimate.logical_qubits
            and self.ancillas == estimate.ancillas_total
            and self.entangling_edges == estimate.entangling_edges_total
        )


def recount(pattern: MeasurementPattern) -> PatternCounts:
    return PatternCounts(
        nodes=len(pattern.nodes),
        inputs=len(pattern.inputs),
        ancillas=len(pattern.nodes) - len(pattern.inputs),
        entangling_edges=len(pattern.entangle),
        measurements=len(pattern.measurements),
        peak_window=peak_window(pattern),
    )


class ResourceGraph(BaseModel):
    """Graph-state skeleton of a pattern."""
    name: str = "resource"
    nodes: List[Dict[str, Any]]
    edges: List[List[int]]
    planar: bool
    peak_window: int

    def to_json(self) -> Dict[str, Any]:
        return self.model_dump()

    def to_dot(self) -> str:
        lines = [f'graph "{self.name}" {{']
        for node in self.nodes:
            label = f"{node['id']}"
            if node["order"] is not None:
                label += f" #{node['order']}"
            shape = {"input": "box", "output": "doublecircle"}.get(node["role"], "circle")
            lines.append(f'  {node["id"]} [label="{label}", shape={shape}];')
        for a, b in self.edges:
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def resource_graph(pattern: MeasurementPattern) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(pattern.nodes)
    graph.add_edges_from(pattern.entangle)
    return graph


def export_resource_graph(
    pattern: MeasurementPattern, name: Optional[str] = None
) -> ResourceGraph:
    """
    Nodes (role and measurement index), CZ edges and a planarity verdict.

    The graph is named after `name`, else the source problem in the metadata.
    """
    if name is None:
        source = pattern.metadata.get("source") or {}
        name = str(source.get("problem", {}).get("name", "resource"))
    order = pattern.measurement_index()
    nodes = []
    for node in pattern.nodes:
        if node in pattern.outputs:
            role = "output"
        elif node in pattern.inputs:
            role = "input"
        else:
            role = "ancilla"
        nodes.append({"id": node, "role": role, "order": order.get(node)})
    planar, _ = nx.check_planarity(resource_graph(pattern))
    return ResourceGraph(
        name=name,
        nodes=nodes,
        edges=[[a, b] for a, b in pattern.entangle],
        planar=bool(planar),
        peak_window=peak_window(pattern),
    )
