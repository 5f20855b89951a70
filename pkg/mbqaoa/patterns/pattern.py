"""
Measurement patterns.

A pattern prepares every non-input node in |+>, applies the CZ list, measures the
non-output nodes in the listed order with adaptive angles, and finishes with
Pauli corrections on the outputs:

    theta = (-1)^{parity(sign_domain)} * base + pi * parity(offset_domain)

XY basis:  |m_theta> = (|0> + (-1)^m e^{i theta} |1>) / sqrt(2)
YZ basis:  |m_theta> = e^{-i theta X / 2} |m>
"""

import json
import math
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator

from mbqaoa.core.errors import InvalidInputError, PatternValidationError
from mbqaoa.zx.phase import Phase

PATTERN_FORMAT = 1


class Plane(str, Enum):
    """Measurement planes."""
    XY = "XY"
    YZ = "YZ"


class Pauli(str, Enum):
    """Correction operators."""
    X = "X"
    Z = "Z"


def parity(domain: Iterable[int], outcomes: Mapping[int, int]) -> int:
    return sum(outcomes[node] for node in domain) % 2


class MeasureCmd(BaseModel):
    """One adaptive measurement."""
    model_config = ConfigDict(frozen=True)

    node: int
    angle: Phase = Field(default_factory=Phase.zero)
    plane: Plane = Plane.XY
    sign_domain: FrozenSet[int] = frozenset()
    offset_domain: FrozenSet[int] = frozenset()

    @field_validator("angle", mode="before")
    @classmethod
    def _coerce_angle(cls, v: Any) -> Phase:
        return Phase.coerce(v)

    def effective_angle(self, outcomes: Mapping[int, int]) -> float:
        """Angle in radians once the domains' outcomes are known."""
        sign = -1.0 if parity(self.sign_domain, outcomes) else 1.0
        offset = math.pi if parity(self.offset_domain, outcomes) else 0.0
        return sign * self.angle.radians + offset

    def depends_on(self) -> FrozenSet[int]:
        return self.sign_domain | self.offset_domain

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"node": self.node}
        doc.update(self.angle.to_json("angle"))
        if self.plane is not Plane.XY:
            doc["plane"] = self.plane.value
        doc["sign_domain"] = sorted(self.sign_domain)
        doc["offset_domain"] = sorted(self.offset_domain)
        return doc

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "MeasureCmd":
        return cls(
            node=int(_key(doc, "node", "measure entry")),
            angle=Phase.from_json(doc, "angle"),
            plane=Plane(doc.get("plane", "XY")),
            sign_domain=frozenset(int(x) for x in doc.get("sign_domain", [])),
            offset_domain=frozenset(int(x) for x in doc.get("offset_domain", [])),
        )


class Correction(BaseModel):
    """Terminal Pauli on an output node, applied when parity(domain) = 1."""
    model_config = ConfigDict(frozen=True)

    node: int
    pauli: Pauli
    domain: FrozenSet[int] = frozenset()

    def to_json(self) -> Dict[str, Any]:
        return {"node": self.node, "pauli": self.pauli.value, "domain": sorted(self.domain)}

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "Correction":
        return cls(
            node=int(_key(doc, "node", "correction entry")),
            pauli=Pauli(_key(doc, "pauli", "correction entry")),
            domain=frozenset(int(x) for x in doc.get("domain", [])),
        )


class PatternValidation(BaseModel):
    """Diagnostics from validate()."""
    violations: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def should_abort(self) -> bool:
        """Check if violations make the pattern unusable."""
        return len(self.violations) > 0


class MeasurementPattern(BaseModel):
    """Nodes, CZ list, ordered measurements and terminal corrections."""
    model_config = ConfigDict(frozen=True)

    nodes: Tuple[int, ...]
    inputs: Tuple[int, ...] = ()
    outputs: Tuple[int, ...] = ()
    entangle: Tuple[Tuple[int, int], ...] = ()
    measurements: Tuple[MeasureCmd, ...] = ()
    corrections: Tuple[Correction, ...] = ()
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @property
    def measured_nodes(self) -> List[int]:
        return [m.node for m in self.measurements]

    def measurement_index(self) -> Dict[int, int]:
        return {m.node: i for i, m in enumerate(self.measurements)}

    def with_metadata(self, **values: Any) -> "MeasurementPattern":
        return self.model_copy(update={"metadata": {**self.metadata, **values}})

    # Serialization

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "format": PATTERN_FORMAT,
            "nodes": list(self.nodes),
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "entangle": [list(pair) for pair in self.entangle],
            "measure": [m.to_json() for m in self.measurements],
            "corrections": [c.to_json() for c in self.corrections],
        }
        if self.metadata:
            doc["metadata"] = self.metadata
        return doc

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "MeasurementPattern":
        """
        Parse a pattern document.

        Raises:
            InvalidInputError: On a missing key or an unsupported format version
        """
        version = int(doc.get("format", PATTERN_FORMAT))
        if version != PATTERN_FORMAT:
            raise InvalidInputError(f"unsupported pattern format {version}")
        return cls(
            nodes=tuple(int(n) for n in _key(doc, "nodes", "pattern")),
            inputs=tuple(int(n) for n in _key(doc, "inputs", "pattern")),
            outputs=tuple(int(n) for n in _key(doc, "outputs", "pattern")),
            entangle=tuple((int(a), int(b)) for a, b in doc.get("entangle", [])),
            measurements=tuple(MeasureCmd.from_json(m) for m in doc.get("measure", [])),
            corrections=tuple(Correction.from_json(c) for c in doc.get("corrections", [])),
            metadata=dict(doc.get("metadata", {})),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _key(doc: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in doc:
        raise InvalidInputError(f"missing key '{key}' in {where}")
    return doc[key]


def validate(pattern: MeasurementPattern) -> PatternValidation:
    """
    Check uniqueness, coverage and causality; never raises.

    Every non-output node must be measured exactly once, outputs never; every
    measurement domain may only cite nodes measured strictly earlier; CZ pairs
    must join two distinct existing nodes; corrections act on outputs.
    """
    result = PatternValidation()
    violations, warnings = result.violations, result.warnings
    nodes = set(pattern.nodes)

    if len(nodes) != len(pattern.nodes):
        violations.append("duplicate node ids")
    for label, ports in (("input", pattern.inputs), ("output", pattern.outputs)):
        if len(set(ports)) != len(ports):
            violations.append(f"{label} listed twice")
        for node in ports:
            if node not in nodes:
                violations.append(f"{label} {node} is not a node")

    seen: Dict[int, int] = {}
    for index, cmd in enumerate(pattern.measurements):
        if cmd.node not in nodes:
            violations.append(f"measurement {index} targets unknown node {cmd.node}")
        if cmd.node in pattern.outputs:
            violations.append(f"output {cmd.node} is measured")
        if cmd.node in seen:
            violations.append(f"node {cmd.node} measured twice")
        for name, domain in (("sign", cmd.sign_domain), ("offset", cmd.offset_domain)):
            for dep in sorted(domain):
                if dep not in seen:
                    violations.append(
                        f"causality: {name} domain of node {cmd.node} cites {dep}, "
                        "which is not measured earlier"
                    )
        seen[cmd.node] = index
    for node in sorted(nodes - set(pattern.outputs) - set(seen)):
        violations.append(f"node {node} is neither measured nor an output")

    pairs = set()
    for a, b in pattern.entangle:
        if a == b:
            violations.append(f"entangle pair ({a}, {b}) joins a node to itself")
        if a not in nodes or b not in nodes:
            violations.append(f"entangle pair ({a}, {b}) names an unknown node")
        key = (min(a, b), max(a, b))
        if key in pairs:
            warnings.append(f"entangle pair {key} repeated (CZs cancel)")
        pairs.add(key)

    for corr in pattern.corrections:
        if corr.node not in pattern.outputs:
            violations.append(f"correction on non-output node {corr.node}")
        for dep in sorted(corr.domain):
            if dep not in seen:
                violations.append(f"correction domain of node {corr.node} cites unmeasured {dep}")

    if not pattern.outputs:
        warnings.append("pattern has no outputs")
    return result


def require_valid(pattern: MeasurementPattern) -> MeasurementPattern:
    """Raise PatternValidationError listing every violation, else return the pattern."""
    result = validate(pattern)
    if result.should_abort():
        logger.error(f"Pattern validation failed with {len(result.violations)} violations")
        raise PatternValidationError(result.violations)
    return pattern
