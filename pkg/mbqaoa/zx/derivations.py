"""
Replayable chains of rewrites.

A Derivation is an initial diagram, an ordered list of (rule, site) steps and the
gate-level matrix the chain is meant to realize. Outcome bits are plain
parameters: each chain is built for one assignment, and the tests enumerate all
of them.

The library chains:
  cnot_to_gadget      CNOT . Z(g) on target . CNOT becomes the phase gadget
  gadget_to_mbqc      phase gadget becomes a CZ-attached ancilla with a YZ readout
  z_rotation_to_mbqc  Z rotation becomes a single-leg ancilla on a kept carrier
  x_rotation_to_mbqc  X rotation becomes two teleportation steps (three rows)
  qubo_layer_to_mbqc  one coupling plus one linear term sharing a wire
  teleport_example    one XY measurement teleports H . Z(-a)
"""

import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from mbqaoa.compiler.conventions import (
    EDGE_ANGLE_FACTOR,
    MIXER_ANGLE_FACTOR,
    edge_angle,
    linear_angle,
)
from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import DerivationError, MbqaoaError, RuleNotApplicableError
from mbqaoa.zx.builders import phase_gadget, x_rotation, z_rotation
from mbqaoa.zx.diagram import DiagramBuilder, SpiderColor, ZxDiagram
from mbqaoa.zx.phase import Phase
from mbqaoa.zx.rules import Rule, RuleSite, apply_rule, site
from mbqaoa.zx.semantics import HADAMARD, equal_up_to_scalar, to_matrix

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Z_DIAG = np.array([1.0, -1.0])


class DerivationStep(BaseModel):
    """One rewrite in a chain."""
    model_config = ConfigDict(frozen=True)

    rule: Rule
    site: RuleSite
    note: str = ""


class Derivation(BaseModel):
    """Initial diagram, steps, and the matrix the chain realizes up to scalar."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    initial: ZxDiagram
    steps: Tuple[DerivationStep, ...]
    target: np.ndarray


class DerivationReport(BaseModel):
    """Outcome of checking a derivation against the contraction semantics."""
    name: str
    steps: int
    broken_steps: List[int] = []  # indices i where diagram i+1 differs from diagram i
    matches_target: bool = False

    @property
    def ok(self) -> bool:
        return not self.broken_steps and self.matches_target


def replay_derivation(
    initial: ZxDiagram, steps: Sequence[DerivationStep]
) -> List[ZxDiagram]:
    """
    Apply the steps in order.

    Returns:
        [initial, after step 0, after step 1, ...]

    Raises:
        DerivationError: If a step is illegal; carries the step index
    """
    diagrams = [initial]
    for index, step in enumerate(steps):
        try:
            diagrams.append(apply_rule(diagrams[-1], step.rule, step.site))
        except (RuleNotApplicableError, KeyError) as exc:
            raise DerivationError(index, exc) from exc
    return diagrams


def check_derivation(derivation: Derivation, tol: Optional[float] = None) -> DerivationReport:
    """Replay a derivation and compare every consecutive pair and the end point by contraction."""
    if tol is None:
        tol = get_default_config().tolerance("scalar_equality")
    logger.debug(f"Checking derivation {derivation.name} ({len(derivation.steps)} steps)")
    diagrams = replay_derivation(derivation.initial, derivation.steps)
    matrices = [to_matrix(d) for d in diagrams]
    broken = [
        i
        for i in range(len(matrices) - 1)
        if not equal_up_to_scalar(matrices[i + 1], matrices[i], tol)
    ]
    for i in broken:
        step = derivation.steps[i]
        logger.warning(f"{derivation.name}: step {i} ({step.rule.value}) changed the semantics")
    matches = equal_up_to_scalar(matrices[-1], derivation.target, tol)
    return DerivationReport(
        name=derivation.name,
        steps=len(derivation.steps),
        broken_steps=broken,
        matches_target=matches,
    )


class _Recorder:
    """Applies steps as they are written so later sites can name ids earlier steps created."""

    def __init__(self, initial: ZxDiagram):
        self.initial = initial
        self.diagram = initial
        self.steps: List[DerivationStep] = []

    def apply(self, rule: Rule, where: RuleSite, note: str = "") -> "_Recorder":
        self.diagram = apply_rule(self.diagram, rule, where)
        self.steps.append(DerivationStep(rule=rule, site=where, note=note))
        return self

    def edge(self, a: int, b: int) -> int:
        between = self.diagram.edges_between(a, b)
        if len(between) != 1:
            raise MbqaoaError(f"expected one edge {a}-{b}, found {len(between)}")
        return between[0].id

    def phase(self, node: int) -> Phase:
        return self.diagram.spider(node).phase

    def finish(self, name: str, target: np.ndarray) -> Derivation:
        return Derivation(name=name, initial=self.initial, steps=tuple(self.steps), target=target)


def _pi(bit: int) -> Phase:
    return Phase.from_pi(int(bit) % 2)


def _zz_rotation(theta: float) -> np.ndarray:
    signs = np.kron(_Z_DIAG, _Z_DIAG)
    return np.diag(np.exp(1j * theta * signs))


def _z_rotation(theta: float) -> np.ndarray:
    return np.diag(np.exp(1j * theta * _Z_DIAG))


def _x_rotation(theta: float) -> np.ndarray:
    return math.cos(theta) * np.eye(2, dtype=complex) + 1j * math.sin(theta) * _X


# Chains


def cnot_to_gadget(gamma: float) -> Derivation:
    """CNOT . (I x Z(gamma)) . CNOT rewritten into the phase gadget by fusion and bialgebra."""
    gamma = float(gamma)
    builder = DiagramBuilder()
    in0, in1 = builder.input(), builder.input()
    c1, c2 = builder.z(), builder.z()
    t1, rz, t2 = builder.x(), builder.z(gamma), builder.x()
    out0, out1 = builder.output(), builder.output()
    builder.chain([in0, c1, c2, out0])
    builder.chain([in1, t1, rz, t2, out1])
    builder.connect(c1, t1)
    builder.connect(c2, t2)
    chain = _Recorder(builder.build())

    leaf, hub, hub_x, wire_z = 9, 10, 11, 12
    chain.apply(Rule.FUSION, site(c1, c2), "merge the two controls")
    chain.apply(
        Rule.FUSION, site(rz, phase=gamma, new_ids=(leaf,), reverse=True), "split off the phase"
    )
    links = (chain.edge(c1, t1), chain.edge(c1, t2))
    chain.apply(
        Rule.FUSION, site(c1, edges=links, new_ids=(hub,), reverse=True), "split the control"
    )
    chain.apply(
        Rule.BIALGEBRA,
        RuleSite(left=(hub, rz), right=(t1, t2), new_ids=(hub_x, wire_z)),
        "collapse the 2x2 block",
    )
    target = np.diag(np.exp(1j * gamma * np.array([0.0, 1.0, 1.0, 0.0])))
    return chain.finish("cnot_to_gadget", target)


def _push_byproduct(
    chain: _Recorder,
    ancilla: int,
    leaf: int,
    wires: Sequence[int],
    outcome: int,
    new_ids: Sequence[int],
) -> None:
    """
    Z(2 m pi) = Z(0) goes on the ancilla-leaf leg and is split into Z(m pi) Z(m pi).
    One half fuses into the leaf; the other is pi-copied through the ancilla and fused
    into each wire spider. For m = 0 the inserted spider is removed again.
    """
    split, kept, *pushed = new_ids
    chain.apply(
        Rule.IDENTITY,
        site(edge=chain.edge(ancilla, leaf), color=SpiderColor.Z, new_ids=(split,), reverse=True),
        "Z(2m pi) on the readout leg",
    )
    chain.apply(
        Rule.FUSION,
        site(split, edges=(chain.edge(split, leaf),), phase=_pi(outcome), new_ids=(kept,),
             reverse=True),
        "split into Z(m pi) Z(m pi)",
    )
    chain.apply(Rule.FUSION, site(leaf, kept), "one half joins the leaf")
    if not outcome % 2:
        chain.apply(Rule.IDENTITY, site(split))
        return
    chain.apply(
        Rule.PI_COPY,
        site(split, ancilla, new_ids=tuple(pushed[: len(wires)])),
        "the other half crosses the ancilla",
    )
    for wire, node in zip(wires, pushed):
        chain.apply(Rule.FUSION, site(wire, node))


def _split_corrections(
    chain: _Recorder, wires: Sequence[int], outputs: Sequence[int], new_ids: Sequence[int]
) -> None:
    """Move each wire spider's accumulated phase onto a correction spider next to the output."""
    for wire, out, node in zip(wires, outputs, new_ids):
        chain.apply(
            Rule.FUSION,
            site(wire, edges=(chain.edge(wire, out),), phase=chain.phase(wire), new_ids=(node,),
                 reverse=True),
            "byproduct left on the wire",
        )


def _readout(chain: _Recorder, ancilla: int, leaf: int, outcome: int, effect: int) -> None:
    chain.apply(Rule.COLOR_CHANGE, site(ancilla), "ancilla attached by CZ")
    chain.apply(Rule.COLOR_CHANGE, site(leaf), "leaf becomes an X rotation")
    chain.apply(
        Rule.FUSION,
        site(leaf, phase=_pi(outcome), new_ids=(effect,), reverse=True),
        "separate the outcome effect",
    )


def gadget_to_mbqc(theta: float, outcome: int) -> Derivation:
    """
    Phase gadget for e^{i theta ZZ} rewritten into an ancilla joined to both wires by
    Hadamard edges (CZ), read out as X(-2 theta) then <m|, with Z^m left on both wires.
    """
    m = int(outcome) % 2
    chain = _Recorder(phase_gadget(Phase.from_radians(-EDGE_ANGLE_FACTOR * theta)))
    zu, zv, hub, leaf, out_u, out_v = 2, 3, 4, 5, 6, 7
    _push_byproduct(chain, hub, leaf, (zu, zv), m, new_ids=(8, 9, 10, 11))
    _split_corrections(chain, (zu, zv), (out_u, out_v), new_ids=(12, 13))
    _readout(chain, hub, leaf, m, effect=14)
    return chain.finish(f"gadget_to_mbqc[m={m}]", _zz_rotation(theta))


def z_rotation_to_mbqc(theta: float, outcome: int) -> Derivation:
    """e^{i theta Z} rewritten into a kept carrier plus a single-leg ancilla with a YZ readout."""
    m = int(outcome) % 2
    alpha = Phase.from_radians(-EDGE_ANGLE_FACTOR * theta)
    chain = _Recorder(z_rotation(alpha))
    carrier, wire_out = 1, 2
    leaf, ancilla = 3, 4
    chain.apply(Rule.FUSION, site(carrier, phase=alpha, new_ids=(leaf,), reverse=True))
    chain.apply(
        Rule.IDENTITY,
        site(edge=chain.edge(carrier, leaf), color=SpiderColor.X, new_ids=(ancilla,), reverse=True),
    )
    _push_byproduct(chain, ancilla, leaf, (carrier,), m, new_ids=(5, 6, 7))
    _split_corrections(chain, (carrier,), (wire_out,), new_ids=(8,))
    _readout(chain, ancilla, leaf, m, effect=9)
    return chain.finish(f"z_rotation_to_mbqc[m={m}]", _z_rotation(theta))


def x_rotation_to_mbqc(beta: float, carrier_outcome: int, prime_outcome: int) -> Derivation:
    """
    e^{i beta X} rewritten into three rows: carrier measured at 0, prime measured at
    (-1)^{m_v} 2 beta, and the output row with X^{m'_v} then Z^{m_v} applied.
    """
    m_v, m_p = int(carrier_outcome) % 2, int(prime_outcome) % 2
    angle = Phase.from_radians(-MIXER_ANGLE_FACTOR * beta)
    chain = _Recorder(x_rotation(angle))
    wire_in, rot, wire_out = 0, 1, 2
    carrier, correction_z, correction_x, output_row, carrier_effect, prime_effect = 3, 4, 5, 6, 7, 8

    if m_v:
        chain.apply(Rule.IDENTITY, site(edge=chain.edge(wire_in, rot), new_ids=(10,), reverse=True))
        chain.apply(
            Rule.FUSION,
            site(10, edges=(chain.edge(wire_in, 10),), phase=1, new_ids=(carrier,), reverse=True),
            "pair of Z(pi) on the input",
        )
        chain.apply(Rule.PI_COPY, site(10, rot, new_ids=(correction_z,)), "push Z(pi) through")
    else:
        for (a, b), fresh in (((wire_in, rot), carrier), ((rot, wire_out), correction_z)):
            chain.apply(
                Rule.IDENTITY, site(edge=chain.edge(a, b), new_ids=(fresh,), reverse=True)
            )

    chain.apply(
        Rule.FUSION,
        site(rot, edges=(chain.edge(rot, correction_z),), phase=_pi(m_p), new_ids=(correction_x,),
             reverse=True),
        "split off the X byproduct",
    )
    chain.apply(
        Rule.IDENTITY,
        site(edge=chain.edge(rot, correction_x), new_ids=(output_row,), reverse=True),
    )
    chain.apply(Rule.COLOR_CHANGE, site(rot), "prime row joined by CZ on both sides")
    chain.apply(
        Rule.FUSION,
        site(carrier, phase=_pi(m_v), new_ids=(carrier_effect,), reverse=True),
        "carrier readout",
    )
    chain.apply(
        Rule.FUSION,
        site(rot, phase=chain.phase(rot), new_ids=(prime_effect,), reverse=True),
        "prime readout",
    )
    return chain.finish(f"x_rotation_to_mbqc[m={m_v}{m_p}]", _x_rotation(beta))


def qubo_layer_to_mbqc(
    gamma: float, coupling: float, field: float, edge_outcome: int, linear_outcome: int
) -> Derivation:
    """
    One coupling on (u, v) and one linear term on v, rewritten together: an edge ancilla
    on both wires and a single-leg ancilla on v. Both byproducts are pushed onto v and
    leave one Z^{m_e + m_l} correction there.
    """
    theta_j, theta_h = edge_angle(gamma, coupling), linear_angle(gamma, field)
    m_e, m_l = int(edge_outcome) % 2, int(linear_outcome) % 2

    builder = DiagramBuilder()
    in_u, in_v = builder.input(), builder.input()
    zu, zv = builder.z(), builder.z()
    hub = builder.x()
    leaf = builder.z(Phase.from_radians(-EDGE_ANGLE_FACTOR * theta_j))
    rot_v = builder.z(Phase.from_radians(-EDGE_ANGLE_FACTOR * theta_h))
    out_u, out_v = builder.output(), builder.output()
    builder.chain([in_u, zu, out_u])
    builder.chain([in_v, zv, rot_v, out_v])
    builder.connect(zu, hub)
    builder.connect(zv, hub)
    builder.connect(hub, leaf)
    chain = _Recorder(builder.build())

    _push_byproduct(chain, hub, leaf, (zu, zv), m_e, new_ids=(9, 10, 11, 12))
    lin_leaf, lin_ancilla = 13, 14
    chain.apply(
        Rule.FUSION, site(rot_v, phase=chain.phase(rot_v), new_ids=(lin_leaf,), reverse=True)
    )
    chain.apply(
        Rule.IDENTITY,
        site(edge=chain.edge(rot_v, lin_leaf), color=SpiderColor.X, new_ids=(lin_ancilla,),
             reverse=True),
    )
    _push_byproduct(chain, lin_ancilla, lin_leaf, (rot_v,), m_l, new_ids=(15, 16, 17))
    chain.apply(Rule.FUSION, site(zv, rot_v), "both byproducts meet on v")
    _split_corrections(chain, (zu, zv), (out_u, out_v), new_ids=(18, 19))
    _readout(chain, hub, leaf, m_e, effect=20)
    _readout(chain, lin_ancilla, lin_leaf, m_l, effect=21)

    zz = _zz_rotation(theta_j)
    z_on_v = np.kron(np.eye(2), _z_rotation(theta_h))
    return chain.finish(f"qubo_layer_to_mbqc[m={m_e}{m_l}]", z_on_v @ zz)


def teleport_example(alpha: float, outcome: int) -> Derivation:
    """H . Z(-alpha) rewritten into one XY measurement at alpha followed by X^m."""
    m = int(outcome) % 2
    alpha = float(alpha)
    builder = DiagramBuilder()
    wire_in = builder.input()
    measured = builder.z(-alpha)
    received = builder.z()
    wire_out = builder.output()
    builder.connect(wire_in, measured)
    builder.connect(measured, received, hadamard=True)
    builder.connect(received, wire_out)
    chain = _Recorder(builder.build())

    pair_a, pair_b, pushed, effect = 4, 5, 6, 7
    chain.apply(
        Rule.IDENTITY,
        site(edge=chain.edge(received, wire_out), color=SpiderColor.X, new_ids=(pair_a,),
             reverse=True),
    )
    chain.apply(
        Rule.FUSION,
        site(pair_a, edges=(chain.edge(pair_a, wire_out),), phase=_pi(m), new_ids=(pair_b,),
             reverse=True),
        "X^m X^m inserted",
    )
    if m:
        chain.apply(Rule.PI_COPY, site(pair_a, received, new_ids=(pushed,)))
        chain.apply(Rule.COLOR_CHANGE, site(pushed), "X(pi) through H becomes Z(pi)")
        chain.apply(Rule.FUSION, site(measured, pushed))
    else:
        chain.apply(Rule.IDENTITY, site(pair_a))
    chain.apply(
        Rule.FUSION,
        site(measured, phase=chain.phase(measured), new_ids=(effect,), reverse=True),
        "measurement effect",
    )
    target = HADAMARD @ np.diag([1.0, np.exp(-1j * alpha)])
    return chain.finish(f"teleport_example[m={m}]", target)


DERIVATIONS: Dict[str, Callable[..., Derivation]] = {
    "cnot_to_gadget": cnot_to_gadget,
    "gadget_to_mbqc": gadget_to_mbqc,
    "z_rotation_to_mbqc": z_rotation_to_mbqc,
    "x_rotation_to_mbqc": x_rotation_to_mbqc,
    "qubo_layer_to_mbqc": qubo_layer_to_mbqc,
    "teleport_example": teleport_example,
}
