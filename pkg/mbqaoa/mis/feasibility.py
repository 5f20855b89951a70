"""Feasibility and expectation checks for the MIS ansatz."""

from typing import Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import ResourceGuardError
from mbqaoa.gates.circuits import MisInit, QaoaParams, build_mis_qaoa
from mbqaoa.gates.statevector import Statevector, apply_partial_mixer, phase_distance, run
from mbqaoa.problems.mis import MisInstance

__all__ = [
    "FeasibilityReport",
    "MisExpectation",
    "MisInit",
    "feasibility_check_suite",
    "mis_expectation",
    "mis_state",
    "mixer_order_dependence",
]


def _check_size(instance: MisInstance) -> None:
    limit = get_default_config().guard("mis_qubits")
    if instance.n > limit:
        raise ResourceGuardError("MIS vertices", limit, instance.n)


class FeasibilityReport(BaseModel):
    """Largest amplitude any partial mixer pushed outside the independent sets."""
    trials: int
    mixers_applied: int
    feasible_states: int
    max_leakage: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_leakage <= self.tolerance


def _random_feasible_state(mask: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    amps = rng.normal(size=mask.size) + 1j * rng.normal(size=mask.size)
    amps[~mask] = 0.0
    return amps / np.linalg.norm(amps)


def feasibility_check_suite(
    instance: MisInstance, trials: int = 100, seed: int = 0, tol: Optional[float] = None
) -> FeasibilityReport:
    """
    Apply every U_v(beta) to random feasible states and measure leakage.

    Each trial draws a random beta and a random superposition of independent sets.

    Raises:
        ResourceGuardError: If n exceeds the mis_qubits guard
    """
    _check_size(instance)
    tol = get_default_config().tolerance("leakage") if tol is None else tol
    rng = np.random.default_rng(seed)
    mask = instance.feasible_mask()
    leakage = 0.0
    applied = 0
    for _ in range(trials):
        beta = float(rng.uniform(0.0, 2.0 * np.pi))
        state = Statevector(amplitudes=_random_feasible_state(mask, rng), n=instance.n)
        for v in range(instance.n):
            image = apply_partial_mixer(state, instance, v, beta).amplitudes
            leakage = max(leakage, float(np.max(np.abs(image[~mask]), initial=0.0)))
            applied += 1
    logger.debug(f"Feasibility: {trials} trials, {applied} mixers, max leakage {leakage:.2e}")
    return FeasibilityReport(
        trials=trials,
        mixers_applied=applied,
        feasible_states=int(mask.sum()),
        max_leakage=leakage,
        tolerance=tol,
    )


class MisExpectation(BaseModel):
    expected_size: float
    infeasible_mass: float
    best_size: int
    best_probability: float


def mis_state(
    instance: MisInstance,
    params: QaoaParams,
    order: Optional[Sequence[int]] = None,
    init: Optional[MisInit] = None,
) -> Statevector:
    _check_size(instance)
    return run(build_mis_qaoa(instance, params, order, init), instance.n)


def mis_expectation(
    instance: MisInstance,
    params: QaoaParams,
    order: Optional[Sequence[int]] = None,
    init: Optional[MisInit] = None,
) -> MisExpectation:
    """
    Expected independent-set size of the ansatz output.

    Also reports the probability mass on non-independent sets (zero up to rounding
    for any feasible start) and the probability of the largest set with support.

    Raises:
        ResourceGuardError: If n exceeds the mis_qubits guard
        InvalidInputError: If the classical starting set is not independent
    """
    probs = mis_state(instance, params, order, init).probabilities()
    sizes = instance.to_qubo().hamiltonian_diagonal()
    mask = instance.feasible_mask()
    support = mask & (probs > get_default_config().tolerance("norm"))
    best = int(np.rint(np.max(sizes[support]))) if support.any() else 0
    return MisExpectation(
        expected_size=float(np.dot(probs, sizes)),
        infeasible_mass=float(probs[~mask].sum()),
        best_size=best,
        best_probability=float(probs[support & (np.rint(sizes) == best)].sum()),
    )


def mixer_order_dependence(
    instance: MisInstance,
    params: QaoaParams,
    first: Sequence[int],
    second: Sequence[int],
    init: Optional[MisInit] = None,
) -> float:
    """Phase-aligned distance between the ansatz states for two mixer orders."""
    a = mis_state(instance, params, first, init)
    b = mis_state(instance, params, second, init)
    return phase_distance(a.amplitudes, b.amplitudes)
