"""
Pattern fragments with Pauli-frame bookkeeping.

Each logical wire has a carrier node and a byproduct frame: the physical state
of the wire is X^{x} Z^{z} applied to the logical state, with x and z the parities
of the outcome sets x_frame and z_frame. Gadgets fold the frames into their
measurement domains and push their own outcomes into the frames; the frames
left at the end become terminal corrections (X first, then Z).

Measurements are grouped per layer in this order: edge ancillas, linear
ancillas, carriers, primes. An edge or linear gadget added after a later group
opens a new layer.
"""

from enum import IntEnum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from mbqaoa.compiler.conventions import EDGE_ANGLE_FACTOR, MIXER_ANGLE_FACTOR
from mbqaoa.core.errors import CompilerStateError, ContractViolation
from mbqaoa.patterns.pattern import Correction, MeasureCmd, MeasurementPattern, Pauli, Plane
from mbqaoa.zx.phase import Phase

Frame = FrozenSet[int]


class Group(IntEnum):
    """Measurement groups within a layer, in emission order."""
    EDGE = 0
    LINEAR = 1
    CARRIER = 2
    PRIME = 3


class PatternFragment(BaseModel):
    """A runnable pattern plus the wire state it leaves behind."""
    model_config = ConfigDict(frozen=True)

    pattern: MeasurementPattern
    carriers: Dict[int, int]
    x_frames: Dict[int, Frame]
    z_frames: Dict[int, Frame]
    owners: Dict[int, Tuple[int, ...]]  # node -> wires it belongs to
    roles: Dict[int, str]  # node -> input / edge / linear / carrier / prime

    def wire_frames(self, wire: int) -> Tuple[Frame, Frame]:
        return self.x_frames[wire], self.z_frames[wire]


class FragmentContext:
    """
    Accumulates nodes, CZs and tagged measurements for a set of logical wires.

    Args:
        wires: Logical qubit labels; wire k gets input node k in the given order
    """

    def __init__(self, wires: Iterable[int]):
        self.wires: List[int] = list(wires)
        if len(set(self.wires)) != len(self.wires):
            raise ContractViolation(f"duplicate wire labels in {self.wires}")
        self.inputs: List[int] = list(range(len(self.wires)))
        self.nodes: List[int] = list(self.inputs)
        self.carriers: Dict[int, int] = dict(zip(self.wires, self.inputs))
        self.x_frames: Dict[int, Frame] = {w: frozenset() for w in self.wires}
        self.z_frames: Dict[int, Frame] = {w: frozenset() for w in self.wires}
        self.owners: Dict[int, Tuple[int, ...]] = {n: (w,) for w, n in self.carriers.items()}
        self.roles: Dict[int, str] = {n: "input" for n in self.inputs}
        self.entangle: List[Tuple[int, int]] = []
        self._tagged: List[Tuple[int, int, int, MeasureCmd]] = []
        self._layer = 0
        self._last_group = -1

    # Bookkeeping

    def carrier(self, wire: int) -> int:
        if wire not in self.carriers:
            raise CompilerStateError(f"no live carrier for wire {wire}")
        return self.carriers[wire]

    def new_node(self, role: str, owners: Tuple[int, ...]) -> int:
        node = len(self.nodes)
        self.nodes.append(node)
        self.roles[node] = role
        self.owners[node] = owners
        return node

    def new_layer(self) -> None:
        if self._last_group >= 0:
            self._layer += 1
            self._last_group = -1

    def cz(self, a: int, b: int) -> None:
        self.entangle.append((a, b))

    def measure(self, group: Group, cmd: MeasureCmd) -> None:
        # mixers share a layer; an ancilla gadget after them starts the next one
        if group < self._last_group and group < Group.CARRIER:
            self.new_layer()
        self._last_group = int(group)
        self._tagged.append((self._layer, int(group), len(self._tagged), cmd))

    @property
    def layer(self) -> int:
        return self._layer

    # Output

    def measurements(self) -> List[MeasureCmd]:
        return [cmd for _, _, _, cmd in sorted(self._tagged, key=lambda t: t[:3])]

    def corrections(self) -> List[Correction]:
        out: List[Correction] = []
        for wire in self.wires:
            node = self.carriers[wire]
            if self.x_frames[wire]:
                out.append(Correction(node=node, pauli=Pauli.X, domain=self.x_frames[wire]))
            if self.z_frames[wire]:
                out.append(Correction(node=node, pauli=Pauli.Z, domain=self.z_frames[wire]))
        return out

    def fragment(self, metadata: Optional[dict] = None) -> PatternFragment:
        pattern = MeasurementPattern(
            nodes=tuple(self.nodes),
            inputs=tuple(self.inputs),
            outputs=tuple(self.carriers[w] for w in self.wires),
            entangle=tuple(self.entangle),
            measurements=tuple(self.measurements()),
            corrections=tuple(self.corrections()),
            metadata=metadata or {},
        )
        return PatternFragment(
            pattern=pattern,
            carriers=dict(self.carriers),
            x_frames=dict(self.x_frames),
            z_frames=dict(self.z_frames),
            owners=dict(self.owners),
            roles=dict(self.roles),
        )


def _angle(factor: float, theta: float) -> Phase:
    return Phase.from_radians(factor * theta)


def compile_phase_gadget(ctx: FragmentContext, u: int, v: int, theta: float) -> PatternFragment:
    """
    e^{i theta Z_u Z_v}: one ancilla joined to both carriers, measured in the YZ plane
    at EDGE_ANGLE_FACTOR * theta. Its outcome enters the Z frames of u and v.
    """
    if u == v:
        raise ContractViolation(f"phase gadget needs two distinct wires, got {u} twice")
    cu, cv = ctx.carrier(u), ctx.carrier(v)
    ancilla = ctx.new_node("edge", (u, v))
    ctx.cz(ancilla, cu)
    ctx.cz(ancilla, cv)
    ctx.measure(
        Group.EDGE,
        MeasureCmd(
            node=ancilla,
            angle=_angle(EDGE_ANGLE_FACTOR, theta),
            plane=Plane.YZ,
            sign_domain=ctx.x_frames[u] ^ ctx.x_frames[v],
        ),
    )
    ctx.z_frames[u] = ctx.z_frames[u] ^ {ancilla}
    ctx.z_frames[v] = ctx.z_frames[v] ^ {ancilla}
    return ctx.fragment()


def compile_z_rotation(ctx: FragmentContext, v: int, theta: float) -> PatternFragment:
    """
    e^{i theta Z_v}: a single-leg ancilla on the kept carrier, measured in the YZ plane
    at EDGE_ANGLE_FACTOR * theta. Its outcome enters the Z frame of v.
    """
    cv = ctx.carrier(v)
    ancilla = ctx.new_node("linear", (v,))
    ctx.cz(cv, ancilla)
    ctx.measure(
        Group.LINEAR,
        MeasureCmd(
            node=ancilla,
            angle=_angle(EDGE_ANGLE_FACTOR, theta),
            plane=Plane.YZ,
            sign_domain=ctx.x_frames[v],
        ),
    )
    ctx.z_frames[v] = ctx.z_frames[v] ^ {ancilla}
    return ctx.fragment()


def compile_x_rotation(ctx: FragmentContext, v: int, theta: float) -> PatternFragment:
    """
    e^{i theta X_v} by two teleportation steps v -> v' -> v''.

    The carrier is measured at 0 with the Z frame as offset; v' at
    MIXER_ANGLE_FACTOR * theta with sign {m_v} and the old X frame as offset.
    v'' becomes the carrier with frames X = {m'_v}, Z = {m_v}.
    """
    carrier = ctx.carrier(v)
    prime = ctx.new_node("prime", (v,))
    second = ctx.new_node("carrier", (v,))
    ctx.cz(carrier, prime)
    ctx.cz(prime, second)
    ctx.measure(Group.CARRIER, MeasureCmd(node=carrier, offset_domain=ctx.z_frames[v]))
    ctx.measure(
        Group.PRIME,
        MeasureCmd(
            node=prime,
            angle=_angle(MIXER_ANGLE_FACTOR, theta),
            sign_domain=frozenset({carrier}),
            offset_domain=ctx.x_frames[v],
        ),
    )
    ctx.carriers[v] = second
    ctx.x_frames[v] = frozenset({prime})
    ctx.z_frames[v] = frozenset({carrier})
    return ctx.fragment()
