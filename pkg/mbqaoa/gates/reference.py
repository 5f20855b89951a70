"""
Matrix-exponential reference states.

Built from dense Hamiltonians with scipy.linalg.expm, independent of the gate
decomposition, so the gate simulator and the MBQC runtime are both checked
against something that shares none of their code paths.
"""

from functools import reduce
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from mbqaoa.compiler.conventions import PHASE_SCALE
from mbqaoa.gates.circuits import InitKind, MisInit, QaoaParams
from mbqaoa.gates.statevector import X_MATRIX, Statevector, check_width
from mbqaoa.problems.mis import MisInstance
from mbqaoa.problems.qubo import QuboProblem

_I2 = np.eye(2, dtype=complex)
_P0 = np.diag([1.0, 0.0]).astype(complex)


def _on(n: int, ops: dict) -> np.ndarray:
    """Kronecker product with ops[q] on qubit q and identity elsewhere."""
    return reduce(np.kron, [ops.get(q, _I2) for q in range(n)])


def transverse_field(n: int) -> np.ndarray:
    """B = sum_v X_v."""
    return sum(_on(n, {v: X_MATRIX}) for v in range(n))


def partial_mixer_hamiltonian(instance: MisInstance, v: int) -> np.ndarray:
    """X_v times the projector onto N(v) = 0; U_v(beta) = expm(i beta H_v)."""
    ops = {v: X_MATRIX}
    ops.update({u: _P0 for u in instance.neighbors(v)})
    return _on(instance.n, ops)


def reference_state(problem: QuboProblem, params: QaoaParams) -> Statevector:
    """prod_k e^{-i beta_k B} e^{-i s gamma_k H_C} |+>^n."""
    check_width(problem.n)
    cost = np.diag(problem.hamiltonian_diagonal()).astype(complex)
    mixer = transverse_field(problem.n)
    psi = Statevector.plus(problem.n).amplitudes
    for gamma, beta in params.layers():
        psi = expm(-1j * PHASE_SCALE * gamma * cost) @ psi
        psi = expm(-1j * beta * mixer) @ psi
    return Statevector.of(psi, normalize=True)


def mis_reference_state(
    instance: MisInstance,
    params: QaoaParams,
    order: Optional[Sequence[int]] = None,
    init: Optional[MisInit] = None,
) -> Statevector:
    """MIS ansatz from expm of the size Hamiltonian and of each partial-mixer Hamiltonian."""
    check_width(instance.n)
    order = list(order) if order is not None else list(range(instance.n))
    init = init or MisInit()
    hams: List[np.ndarray] = [partial_mixer_hamiltonian(instance, v) for v in order]

    bits = [1 if v in init.vertices else 0 for v in range(instance.n)]
    psi = Statevector.basis(bits).amplitudes
    if init.kind is InitKind.CLASSICAL_SET:
        pre = init.pre_mixer_beta if init.pre_mixer_beta is not None else params.betas[0]
        for ham in hams:
            psi = expm(1j * pre * ham) @ psi

    size = np.diag(instance.to_qubo().hamiltonian_diagonal()).astype(complex)
    for gamma, beta in params.layers():
        psi = expm(-1j * PHASE_SCALE * gamma * size) @ psi
        for ham in hams:
            psi = expm(1j * beta * ham) @ psi
    return Statevector.of(psi, normalize=True)
