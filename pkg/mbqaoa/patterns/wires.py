"""Reference patterns for one logical wire."""

from mbqaoa.patterns.pattern import Correction, MeasureCmd, MeasurementPattern, Pauli


def hadamard_wire() -> MeasurementPattern:
    """One teleportation step, 0 -> 1: measuring 0 at angle 0 leaves H|psi> on 1 after X^{m_0}."""
    return MeasurementPattern(
        nodes=(0, 1),
        inputs=(0,),
        outputs=(1,),
        entangle=((0, 1),),
        measurements=(MeasureCmd(node=0),),
        corrections=(Correction(node=1, pauli=Pauli.X, domain=frozenset({0})),),
    )


def identity_wire() -> MeasurementPattern:
    """Two teleportation steps 0 -> 1 -> 2; corrected by X^{m_1} then Z^{m_0}."""
    return MeasurementPattern(
        nodes=(0, 1, 2),
        inputs=(0,),
        outputs=(2,),
        entangle=((0, 1), (1, 2)),
        measurements=(MeasureCmd(node=0), MeasureCmd(node=1)),
        corrections=(
            Correction(node=2, pauli=Pauli.X, domain=frozenset({1})),
            Correction(node=2, pauli=Pauli.Z, domain=frozenset({0})),
        ),
    )
