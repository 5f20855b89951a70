"""
Angle conventions shared by the gate model, the compiler and the derivations.

Gates are e^{i theta P}. The cost unitary is e^{-i s gamma H_C} with s = PHASE_SCALE,
so an edge with coupling J becomes ZZ(theta) with theta = -s gamma J. A ZZ or Z
rotation by theta is an ancilla measured in the YZ plane at EDGE_ANGLE_FACTOR *
theta; an X rotation by theta is a prime node measured at MIXER_ANGLE_FACTOR *
theta. The mixer is e^{-i beta X}, i.e. theta = -beta.
"""

PHASE_SCALE = 2.0
EDGE_ANGLE_FACTOR = 2.0
MIXER_ANGLE_FACTOR = 2.0


def edge_angle(gamma: float, coupling: float) -> float:
    """ZZ rotation angle for one cost term."""
    return -PHASE_SCALE * gamma * coupling


def linear_angle(gamma: float, field: float) -> float:
    """Z rotation angle for one linear cost term."""
    return -PHASE_SCALE * gamma * field


def mixer_angle(beta: float) -> float:
    """X rotation angle of the transverse-field mixer."""
    return -beta
