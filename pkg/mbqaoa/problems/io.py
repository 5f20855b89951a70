"""
JSON ingestion for problems and graphs.

Problem documents: {n, quadratic: [{u, v, weight}], linear: [{v, weight}], constant}.
Graph documents:   {n, edges: [[u, v], ...]} or edges as {u, v, weight} objects;
                   read as MaxCut when a QUBO is wanted.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import networkx as nx

from mbqaoa.core.errors import InvalidInputError
from mbqaoa.problems.mis import MisInstance
from mbqaoa.problems.qubo import QuboProblem, maxcut_to_qubo

PathLike = Union[str, Path]


def load_json(path: PathLike) -> Dict[str, Any]:
    """
    Read a JSON object from disk.

    Raises:
        InvalidInputError: If the file is missing, is not valid JSON (line and column
            are reported) or does not hold an object
    """
    path = Path(path)
    if not path.exists():
        raise InvalidInputError(f"{path}: file not found")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise InvalidInputError(f"{path}: expected a JSON object, got {type(doc).__name__}")
    return doc


def _require(doc: Dict[str, Any], key: str, where: str = "document") -> Any:
    if key not in doc:
        raise InvalidInputError(f"missing key '{key}' in {where}")
    return doc[key]


def _edge_list(doc: Dict[str, Any]) -> List[Tuple[int, int, float]]:
    edges = []
    for k, item in enumerate(_require(doc, "edges")):
        if isinstance(item, dict):
            u = int(_require(item, "u", f"edges[{k}]"))
            v = int(_require(item, "v", f"edges[{k}]"))
            edges.append((u, v, float(item.get("weight", 1.0))))
        elif isinstance(item, (list, tuple)) and len(item) in (2, 3):
            weight = float(item[2]) if len(item) == 3 else 1.0
            edges.append((int(item[0]), int(item[1]), weight))
        else:
            raise InvalidInputError(f"edges[{k}] must be [u, v], [u, v, w] or an object")
    return edges


def _vertex_count(doc: Dict[str, Any], edges: List[Tuple[int, int, float]]) -> int:
    if "n" in doc:
        return int(doc["n"])
    return max((max(u, v) for u, v, _ in edges), default=0) + 1


def graph_from_json(doc: Dict[str, Any]) -> nx.Graph:
    edges = _edge_list(doc)
    graph = nx.Graph()
    graph.add_nodes_from(range(_vertex_count(doc, edges)))
    for u, v, w in edges:
        graph.add_edge(u, v, weight=w)
    return graph


def problem_from_json(doc: Dict[str, Any]) -> QuboProblem:
    """QUBO document, or a graph document read as weighted MaxCut."""
    if "edges" in doc and "quadratic" not in doc:
        graph = graph_from_json(doc)
        return maxcut_to_qubo(graph, n=graph.number_of_nodes())

    n = int(_require(doc, "n"))
    quadratic = {}
    for k, item in enumerate(doc.get("quadratic", [])):
        u = int(_require(item, "u", f"quadratic[{k}]"))
        v = int(_require(item, "v", f"quadratic[{k}]"))
        quadratic[(u, v)] = float(_require(item, "weight", f"quadratic[{k}]"))
    linear = {}
    for k, item in enumerate(doc.get("linear", [])):
        linear[int(_require(item, "v", f"linear[{k}]"))] = float(
            _require(item, "weight", f"linear[{k}]")
        )
    return QuboProblem.build(
        n=n,
        quadratic=quadratic,
        linear=linear,
        constant=float(doc.get("constant", 0.0)),
        name=str(doc.get("name", "qubo")),
    )


def mis_from_json(doc: Dict[str, Any]) -> MisInstance:
    edges = _edge_list(doc)
    return MisInstance.from_edges(
        [(u, v) for u, v, _ in edges],
        n=_vertex_count(doc, edges),
        name=str(doc.get("name", "mis")),
    )


def load_problem(path: PathLike) -> QuboProblem:
    return problem_from_json(load_json(path))


def load_mis(path: PathLike) -> MisInstance:
    return mis_from_json(load_json(path))
