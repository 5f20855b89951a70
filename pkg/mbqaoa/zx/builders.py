"""
Small reference diagrams: wires, single-qubit rotations, CNOT and the phase gadget.

Phases follow spider semantics: Z(a) on a wire is diag(1, e^{ia}), X(a) is the
same in the |+>/|-> basis.
"""

from mbqaoa.zx.diagram import DiagramBuilder, ZxDiagram
from mbqaoa.zx.phase import PhaseLike


def wire(n_qubits: int = 1) -> ZxDiagram:
    """n parallel bare wires."""
    builder = DiagramBuilder()
    ins = [builder.input() for _ in range(n_qubits)]
    outs = [builder.output() for _ in range(n_qubits)]
    for i, o in zip(ins, outs):
        builder.connect(i, o)
    return builder.build()


def z_rotation(alpha: PhaseLike) -> ZxDiagram:
    """in - Z(alpha) - out.  Ids: in 0, spider 1, out 2."""
    builder = DiagramBuilder()
    builder.chain([builder.input(), builder.z(alpha), builder.output()])
    return builder.build()


def x_rotation(alpha: PhaseLike) -> ZxDiagram:
    """in - X(alpha) - out.  Ids: in 0, spider 1, out 2."""
    builder = DiagramBuilder()
    builder.chain([builder.input(), builder.x(alpha), builder.output()])
    return builder.build()


def cnot() -> ZxDiagram:
    """CNOT with qubit 0 as control. Ids: inputs 0, 1; control 2; target 3; outputs 4, 5."""
    builder = DiagramBuilder()
    in0, in1 = builder.input(), builder.input()
    control, target = builder.z(), builder.x()
    out0, out1 = builder.output(), builder.output()
    builder.chain([in0, control, out0])
    builder.chain([in1, target, out1])
    builder.connect(control, target)
    return builder.build()


def phase_gadget(alpha: PhaseLike) -> ZxDiagram:
    """
    Two-qubit phase gadget: diag(1, e^{ia}, e^{ia}, 1) up to scalar.

    Ids: inputs 0, 1; wire spiders 2, 3; X hub 4; Z(alpha) leaf 5; outputs 6, 7.
    """
    builder = DiagramBuilder()
    in0, in1 = builder.input(), builder.input()
    zu, zv = builder.z(), builder.z()
    hub = builder.x()
    leaf = builder.z(alpha)
    out0, out1 = builder.output(), builder.output()
    builder.chain([in0, zu, out0])
    builder.chain([in1, zv, out1])
    builder.connect(zu, hub)
    builder.connect(zv, hub)
    builder.connect(hub, leaf)
    return builder.build()
