"""Tests for the gate-model statevector oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from mbqaoa.core.errors import ContractViolation, InvalidInputError, ResourceGuardError
from mbqaoa.gates.circuits import (
    MisInit,
    QaoaParams,
    build_mis_qaoa,
    build_qaoa_circuit,
    circuit_from_json,
    circuit_to_json,
    gate_model_resources,
)
from mbqaoa.gates.ops import GateKind, GateOp, cnot, ctrl0_rx, h, rx, rz, zz
from mbqaoa.gates.reference import mis_reference_state, reference_state
from mbqaoa.gates.statevector import (
    Statevector,
    apply,
    apply_partial_mixer,
    expectation_cost,
    phase_distance,
    run,
)
from mbqaoa.problems.mis import MisInstance

angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)


class TestGateOps:
    def test_validation(self):
        with pytest.raises(ValidationError):
            GateOp(kind=GateKind.CZ, qubits=(0,))
        with pytest.raises(ValidationError):
            GateOp(kind=GateKind.RX, qubits=(0,))
        with pytest.raises(ValidationError):
            zz(0.1, 2, 2)

    def test_controls_and_targets(self):
        assert cnot(0, 1).target == 1
        assert cnot(0, 1).controls == (0,)
        op = ctrl0_rx(0.3, 2, (0, 4))
        assert op.target == 2
        assert op.controls == (0, 4)
        assert op.is_entangling

    def test_circuit_json(self, k2, params1):
        circuit = build_qaoa_circuit(k2, params1)
        assert circuit_from_json(circuit_to_json(circuit)) == circuit


class TestStatevector:
    def test_constructors(self):
        assert np.allclose(Statevector.zeros(2).amplitudes, [1, 0, 0, 0])
        assert np.allclose(Statevector.plus(1).amplitudes, [1 / math.sqrt(2)] * 2)
        assert Statevector.basis("10").amplitudes[2] == 1.0

    def test_norm_is_enforced(self):
        with pytest.raises(ValidationError):
            Statevector(amplitudes=np.array([1.0, 1.0], dtype=complex), n=1)

    def test_width_guard(self):
        with pytest.raises(ResourceGuardError):
            Statevector.zeros(15)

    def test_big_endian_order(self):
        state = run([rx(math.pi / 2, 0)], 2)
        assert state.probabilities()[0b10] == pytest.approx(1.0)

    def test_rotation_conventions(self):
        # RZ(t) = e^{itZ}, RX(t) = e^{itX}, ZZ(t) = e^{itZZ}
        plus = Statevector.plus(1)
        out = apply(plus, rz(0.4, 0)).amplitudes
        assert np.allclose(out, np.exp(0.4j * np.array([1, -1])) / math.sqrt(2))
        zero = Statevector.zeros(1)
        out = apply(zero, rx(0.4, 0)).amplitudes
        assert np.allclose(out, [math.cos(0.4), 1j * math.sin(0.4)])
        out = apply(Statevector.basis("01"), zz(0.4, 0, 1)).amplitudes
        assert out[1] == pytest.approx(np.exp(-0.4j))

    def test_hadamard_and_cnot_make_bell_pair(self):
        state = run([h(0), cnot(0, 1)], 2)
        assert np.allclose(state.probabilities(), [0.5, 0, 0, 0.5])

    def test_gate_outside_register(self):
        with pytest.raises(ContractViolation):
            run([h(3)], 2)

    def test_phase_distance_ignores_global_phase(self):
        a = np.array([1.0, 1.0j]) / math.sqrt(2)
        assert phase_distance(a, np.exp(0.7j) * a) < 1e-12
        assert phase_distance(a, a.conj()) > 0.5

    @given(angles, angles, st.integers(0, 2))
    def test_gates_preserve_norm(self, a, b, q):
        state = run([h(0), h(1), zz(a, 0, 2), rx(b, q), ctrl0_rx(a, q, ())], 3)
        assert state.norm() == pytest.approx(1.0)


class TestQaoa:
    @pytest.mark.parametrize(
        "gamma, beta", [(math.pi / 4, math.pi / 8), (0.3, 0.2), (1.0, -0.7)]
    )
    def test_single_edge_closed_form(self, k2, gamma, beta):
        state = run(build_qaoa_circuit(k2, QaoaParams.of([gamma], [beta])), 2)
        expected = 0.5 + 0.5 * math.sin(4 * beta) * math.sin(2 * gamma)
        assert expectation_cost(state, k2) == pytest.approx(expected)

    def test_single_edge_optimum(self, k2):
        state = run(build_qaoa_circuit(k2, QaoaParams.of([math.pi / 4], [math.pi / 8])), 2)
        assert expectation_cost(state, k2) == pytest.approx(1.0)

    def test_zero_angles_give_uniform_state(self, k3):
        state = run(build_qaoa_circuit(k3, QaoaParams.of([0.0], [0.0])), 3)
        assert np.allclose(state.probabilities(), 1 / 8)

    @pytest.mark.parametrize("problem", ["k3", "qubo3"])
    def test_matches_matrix_exponential(self, problem, params2, request):
        qubo = request.getfixturevalue(problem)
        gate = run(build_qaoa_circuit(qubo, params2), qubo.n)
        assert gate.equal_up_to_phase(reference_state(qubo, params2), tol=1e-9)

    def test_schedule_length_checked(self):
        with pytest.raises(ValidationError):
            QaoaParams(p=2, gammas=(0.1,), betas=(0.1, 0.2))

    def test_gate_model_resources(self, k3):
        resources = gate_model_resources(k3, 2)
        assert resources.qubits == 3
        assert resources.entangling_gates == 12

    def test_expectation_size_mismatch(self, k3):
        with pytest.raises(ContractViolation):
            expectation_cost(Statevector.zeros(2), k3)


class TestMisCircuit:
    def test_zero_angles_keep_empty_set(self, c5):
        state = run(build_mis_qaoa(c5, QaoaParams.of([0.0], [0.0])), 5)
        assert state.probabilities()[0] == pytest.approx(1.0)

    def test_matches_matrix_exponential(self, c5, params2):
        gate = run(build_mis_qaoa(c5, params2, order=[4, 2, 0, 1, 3]), 5)
        ref = mis_reference_state(c5, params2, order=[4, 2, 0, 1, 3])
        assert gate.equal_up_to_phase(ref, tol=1e-9)

    def test_classical_start_matches_reference(self, c5, params1):
        init = MisInit.classical([0, 2], pre_mixer_beta=0.3)
        gate = run(build_mis_qaoa(c5, params1, init=init), 5)
        assert gate.equal_up_to_phase(mis_reference_state(c5, params1, init=init), tol=1e-9)

    def test_dependent_start_rejected(self, c5, params1):
        with pytest.raises(InvalidInputError, match="not independent"):
            build_mis_qaoa(c5, params1, init=MisInit.classical([0, 1]))

    def test_order_must_be_permutation(self, c5, params1):
        with pytest.raises(InvalidInputError, match="permutation"):
            build_mis_qaoa(c5, params1, order=[0, 1, 2])

    def test_isolated_vertex_mixer_is_rx(self):
        instance = MisInstance.from_edges([], n=1)
        state = Statevector.zeros(1)
        mixed = apply_partial_mixer(state, instance, 0, 0.6)
        assert np.allclose(mixed.amplitudes, apply(state, rx(0.6, 0)).amplitudes)

    def test_blocked_vertex_does_not_move(self):
        instance = MisInstance.from_edges([(0, 1)], n=2)
        state = Statevector.basis("01")
        mixed = apply_partial_mixer(state, instance, 0, 0.6)
        assert np.allclose(mixed.amplitudes, state.amplitudes)
