"""
Exact execution of measurement patterns.

Nodes are prepared lazily: a CZ is applied just before the first measurement of
either endpoint (CZs between outputs at the very end), a node enters the state
vector when a CZ or measurement first touches it, and a measured node leaves it
immediately. The simulated width is therefore the pattern's active window, not
its node count.
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import ContractViolation, ResourceGuardError
from mbqaoa.gates.statevector import Statevector, phase_distance
from mbqaoa.patterns.pattern import (
    MeasureCmd,
    MeasurementPattern,
    Pauli,
    Plane,
    parity,
    require_valid,
)
from mbqaoa.problems.qubo import bits_to_str

_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
_ZERO_PROBABILITY = 1e-14

Outcomes = Dict[int, int]


class BranchResult(BaseModel):
    """One full assignment of measurement outcomes."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    outcomes: Dict[int, int]
    probability: float
    output_state: Statevector


def basis_vector(cmd: MeasureCmd, angle: float, outcome: int) -> np.ndarray:
    """|m_theta> for the command's plane."""
    if cmd.plane is Plane.XY:
        sign = -1.0 if outcome else 1.0
        return np.array([1.0, sign * np.exp(1j * angle)], dtype=complex) / math.sqrt(2.0)
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    if outcome == 0:
        return np.array([c, -1j * s], dtype=complex)
    return np.array([-1j * s, c], dtype=complex)


class _Schedule:
    """When each CZ fires and which nodes are live at each step."""

    def __init__(self, pattern: MeasurementPattern):
        self.pattern = pattern
        order = pattern.measurement_index()
        horizon = len(pattern.measurements)
        self.before: List[List[Tuple[int, int]]] = [[] for _ in range(horizon)]
        self.tail: List[Tuple[int, int]] = []
        for a, b in pattern.entangle:
            when = min(order.get(a, horizon), order.get(b, horizon))
            (self.tail if when == horizon else self.before[when]).append((a, b))

    def peak_window(self) -> int:
        """Largest number of simultaneously live nodes."""
        live = set(self.pattern.inputs)
        peak = len(live)
        for index, cmd in enumerate(self.pattern.measurements):
            for a, b in self.before[index]:
                live.update((a, b))
            live.add(cmd.node)
            peak = max(peak, len(live))
            live.discard(cmd.node)
        for a, b in self.tail:
            live.update((a, b))
        live.update(self.pattern.outputs)
        return max(peak, len(live))


class _Frame:
    """Live amplitude tensor with one axis per live node."""

    def __init__(self, psi: np.ndarray, live: List[int]):
        self.psi = psi
        self.live = live

    def copy(self) -> "_Frame":
        return _Frame(self.psi, list(self.live))

    def activate(self, node: int) -> int:
        if node not in self.live:
            self.psi = np.multiply.outer(self.psi, _PLUS)
            self.live.append(node)
        return self.live.index(node)

    def cz(self, a: int, b: int) -> None:
        i, j = self.activate(a), self.activate(b)
        psi = self.psi.copy()
        index = [slice(None)] * psi.ndim
        index[i], index[j] = 1, 1
        psi[tuple(index)] *= -1.0
        self.psi = psi

    def project(self, node: int, vector: np.ndarray) -> "_Frame":
        axis = self.activate(node)
        psi = np.tensordot(vector.conj(), self.psi, axes=([0], [axis]))
        live = self.live[:axis] + self.live[axis + 1:]
        return _Frame(psi, live)

    def pauli(self, node: int, pauli: Pauli) -> None:
        axis = self.live.index(node)
        if pauli is Pauli.X:
            self.psi = np.flip(self.psi, axis=axis).copy()
        else:
            psi = self.psi.copy()
            index = [slice(None)] * psi.ndim
            index[axis] = 1
            psi[tuple(index)] *= -1.0
            self.psi = psi

    def norm2(self) -> float:
        return float(np.vdot(self.psi, self.psi).real)


class _Runner:
    def __init__(self, pattern: MeasurementPattern, input_state: Optional[Statevector]):
        self.pattern = require_valid(pattern)
        self.schedule = _Schedule(pattern)
        window = self.schedule.peak_window()
        guard = get_default_config().guard("pattern_window")
        if window > guard:
            raise ResourceGuardError("pattern active window", guard, window)
        self.window = window
        n_in = len(pattern.inputs)
        if input_state is None:
            psi = np.full((2,) * n_in, 2.0 ** (-n_in / 2), dtype=complex)
        else:
            if input_state.n != n_in:
                raise ContractViolation(
                    f"input state has {input_state.n} qubits, pattern has {n_in} inputs"
                )
            psi = input_state.tensor().copy()
        self.start = _Frame(psi, list(pattern.inputs))

    def branch(
        self, frame: _Frame, step: int, outcomes: Outcomes
    ) -> List[Tuple[int, float, _Frame]]:
        """Both outcomes of measurement `step` as (outcome, conditional probability, frame)."""
        frame = frame.copy()
        for a, b in self.schedule.before[step]:
            frame.cz(a, b)
        cmd = self.pattern.measurements[step]
        angle = cmd.effective_angle(outcomes)
        total = frame.norm2()
        results = []
        for outcome in (0, 1):
            child = frame.project(cmd.node, basis_vector(cmd, angle, outcome))
            prob = child.norm2() / total
            if prob > _ZERO_PROBABILITY:
                child.psi = child.psi / math.sqrt(child.norm2())
            results.append((outcome, prob, child))
        return results

    def finish(self, frame: _Frame, outcomes: Outcomes) -> Statevector:
        frame = frame.copy()
        for a, b in self.schedule.tail:
            frame.cz(a, b)
        for node in self.pattern.outputs:
            frame.activate(node)
        for corr in self.pattern.corrections:
            if parity(corr.domain, outcomes):
                frame.pauli(corr.node, corr.pauli)
        axes = [frame.live.index(node) for node in self.pattern.outputs]
        psi = np.transpose(frame.psi, axes).reshape(-1) if axes else frame.psi.reshape(-1)
        return Statevector.of(psi, normalize=True)


def peak_window(pattern: MeasurementPattern) -> int:
    """Largest number of simultaneously simulated nodes under lazy scheduling."""
    return _Schedule(pattern).peak_window()


def enumerate_branches(
    pattern: MeasurementPattern, input_state: Optional[Statevector] = None
) -> List[BranchResult]:
    """
    Every outcome branch with its exact probability and corrected output state.

    Branches of probability zero are pruned, so probabilities sum to 1.

    Raises:
        ResourceGuardError: If the measured-node count or active window exceeds its guard
        PatternValidationError: If the pattern is not valid
    """
    guard = get_default_config().guard("branch_bits")
    measured = len(pattern.measurements)
    if measured > guard:
        raise ResourceGuardError(
            "measured nodes", guard, measured, hint="use sample_branches for large patterns"
        )
    runner = _Runner(pattern, input_state)
    results: List[BranchResult] = []

    def walk(frame: _Frame, step: int, outcomes: Outcomes, prob: float) -> None:
        if step == measured:
            results.append(
                BranchResult(
                    outcomes=dict(outcomes),
                    probability=prob,
                    output_state=runner.finish(frame, outcomes),
                )
            )
            return
        node = pattern.measurements[step].node
        for outcome, p, child in runner.branch(frame, step, outcomes):
            if p <= _ZERO_PROBABILITY:
                continue
            outcomes[node] = outcome
            walk(child, step + 1, outcomes, prob * p)
            del outcomes[node]

    walk(runner.start, 0, {}, 1.0)
    logger.debug(
        f"Enumerated {len(results)} branches ({measured} measurements, window {runner.window})"
    )
    return results


def sample_branches(
    pattern: MeasurementPattern,
    count: int,
    seed: int = 0,
    input_state: Optional[Statevector] = None,
) -> List[BranchResult]:
    """
    `count` outcome paths drawn from the exact conditional distribution.

    Each result carries the probability of its full path. Reproducible for a seed.
    """
    runner = _Runner(pattern, input_state)
    rng = np.random.default_rng(seed)
    results = []
    for _ in range(count):
        frame, outcomes, prob = runner.start, {}, 1.0
        for step, cmd in enumerate(pattern.measurements):
            options = runner.branch(frame, step, outcomes)
            pick = 0 if rng.random() < options[0][1] else 1
            _, p, frame = options[pick]
            outcomes[cmd.node] = pick
            prob *= p
        results.append(
            BranchResult(
                outcomes=outcomes, probability=prob, output_state=runner.finish(frame, outcomes)
            )
        )
    return results


def sample(
    pattern: MeasurementPattern,
    shots: int,
    seed: int = 0,
    input_state: Optional[Statevector] = None,
) -> Dict[str, int]:
    """
    Finite-shot run: outcomes drawn from the exact conditional distribution with
    feedforward, outputs read in the computational basis.

    Shots sharing an outcome prefix share its simulation, so the work is bounded
    by min(shots, branches). Reproducible for a seed.

    Returns:
        Counts keyed by output bitstring (in `pattern.outputs` order)
    """
    runner = _Runner(pattern, input_state)
    rng = np.random.default_rng(seed)
    measured = len(pattern.measurements)
    draws = rng.random((shots, measured))
    leaves: List[Tuple[Tuple[int, ...], int, np.ndarray]] = []

    def walk(
        frame: _Frame, step: int, outcomes: Outcomes, shot_ids: np.ndarray, path: Tuple[int, ...]
    ) -> None:
        if step == measured:
            state = runner.finish(frame, outcomes)
            leaves.append((path, len(shot_ids), state.probabilities()))
            return
        options = runner.branch(frame, step, outcomes)
        node = pattern.measurements[step].node
        takes_zero = draws[shot_ids, step] < options[0][1]
        for outcome, _, child in options:
            chosen = shot_ids[takes_zero] if outcome == 0 else shot_ids[~takes_zero]
            if len(chosen) == 0:
                continue
            outcomes[node] = outcome
            walk(child, step + 1, outcomes, chosen, path + (outcome,))
            del outcomes[node]

    walk(runner.start, 0, {}, np.arange(shots), ())

    counts: Dict[str, int] = {}
    n_out = len(pattern.outputs)
    for _, shots_here, probs in sorted(leaves, key=lambda leaf: leaf[0]):
        drawn = rng.multinomial(shots_here, probs / probs.sum())
        for index in np.nonzero(drawn)[0]:
            key = bits_to_str(((int(index) >> (n_out - 1 - k)) & 1 for k in range(n_out)))
            counts[key] = counts.get(key, 0) + int(drawn[index])
    logger.debug(f"Sampled {shots} shots over {len(leaves)} outcome paths")
    return dict(sorted(counts.items()))


def output_distribution(branches: Sequence[BranchResult]) -> np.ndarray:
    """Branch-weighted distribution over output basis states."""
    if not branches:
        raise ContractViolation("no branches")
    total = np.zeros_like(branches[0].output_state.probabilities())
    weight = 0.0
    for branch in branches:
        total += branch.probability * branch.output_state.probabilities()
        weight += branch.probability
    return total / weight


def max_state_deviation(branches: Sequence[BranchResult], reference: Statevector) -> float:
    """Largest phase-aligned elementwise deviation of any branch output from `reference`."""
    return max(phase_distance(b.output_state.amplitudes, reference.amplitudes) for b in branches)


def check_determinism(
    pattern: MeasurementPattern,
    tol: Optional[float] = None,
    branches: Optional[Sequence[BranchResult]] = None,
    input_state: Optional[Statevector] = None,
) -> bool:
    """True iff every branch ends in the same output state up to global phase."""
    if tol is None:
        tol = get_default_config().tolerance("state_deviation")
    if branches is None:
        branches = enumerate_branches(pattern, input_state)
    first = branches[0].output_state
    return max_state_deviation(branches, first) <= tol
