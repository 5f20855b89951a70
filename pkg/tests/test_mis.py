"""Tests for the constraint-preserving MIS ansatz."""

import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from mbqaoa.core.errors import ContractViolation, ResourceGuardError
from mbqaoa.gates.circuits import MisInit, QaoaParams
from mbqaoa.gates.reference import partial_mixer_hamiltonian
from mbqaoa.gates.statevector import Statevector, apply_partial_mixer, rx_matrix
from mbqaoa.mis.feasibility import (
    feasibility_check_suite,
    mis_expectation,
    mixer_order_dependence,
)
from mbqaoa.mis.mixers import PartialMixerSpec, decomposed_partial_mixer, partial_mixer_matrix
from mbqaoa.problems.mis import MisInstance

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)


@pytest.fixture
def p3() -> MisInstance:
    return MisInstance.from_edges([(0, 1), (1, 2)], name="P3")


def star(leaves: int) -> MisInstance:
    return MisInstance.from_edges([(0, k) for k in range(1, leaves + 1)], name="star")


class TestPartialMixer:
    def test_register_layout(self, c5):
        spec = PartialMixerSpec.of(c5, 0, 0.3)
        assert spec.controls == (1, 4)
        assert spec.register == (0, 1, 4)
        assert spec.degree == 2
        with pytest.raises(ContractViolation):
            PartialMixerSpec.of(c5, 5, 0.3)

    def test_isolated_vertex_is_rx(self):
        instance = MisInstance.from_edges([], n=1)
        mixer = partial_mixer_matrix(instance, 0, 0.7)
        expected = math.cos(0.7) * np.eye(2) + 1j * math.sin(0.7) * np.array([[0, 1], [1, 0]])
        assert np.allclose(mixer.matrix, expected)
        assert np.allclose(mixer.matrix, rx_matrix(0.7))

    def test_zero_angle_is_identity(self, c5):
        assert np.allclose(partial_mixer_matrix(c5, 2, 0.0).matrix, np.eye(8))

    def test_projector_formula(self, c5):
        beta = 0.7
        p0 = np.zeros((4, 4))
        p0[0, 0] = 1.0
        expected = np.kron(rx_matrix(beta), p0) + np.kron(np.eye(2), np.eye(4) - p0)
        assert np.allclose(partial_mixer_matrix(c5, 3, beta).matrix, expected)

    def test_is_unitary(self, c5):
        matrix = partial_mixer_matrix(c5, 1, 1.3).matrix
        assert np.allclose(matrix.conj().T @ matrix, np.eye(8))

    @pytest.mark.parametrize("beta", [0.0, 0.7, -1.9, math.pi / 2])
    @pytest.mark.parametrize("vertex", [0, 1])
    def test_hadamard_decomposition(self, beta, vertex):
        instance = star(3)
        assert np.allclose(
            decomposed_partial_mixer(instance, vertex, beta).matrix,
            partial_mixer_matrix(instance, vertex, beta).matrix,
        )

    @given(angles, angles)
    def test_group_law(self, b1, b2):
        instance = MisInstance.from_edges([(0, 1), (0, 2)])
        product = (
            partial_mixer_matrix(instance, 0, b1).matrix
            @ partial_mixer_matrix(instance, 0, b2).matrix
        )
        combined = partial_mixer_matrix(instance, 0, b1 + b2).matrix
        assert np.max(np.abs(product - combined)) < 1e-10

    def test_group_law_on_states(self, c5):
        rng = np.random.default_rng(4)
        state = Statevector.of(rng.normal(size=32) + 1j * rng.normal(size=32), normalize=True)
        twice = apply_partial_mixer(apply_partial_mixer(state, c5, 2, 0.4), c5, 2, 0.9)
        once = apply_partial_mixer(state, c5, 2, 1.3)
        assert np.allclose(twice.amplitudes, once.amplitudes, atol=1e-10)

    def test_degree_guard(self):
        with pytest.raises(ResourceGuardError):
            partial_mixer_matrix(star(11), 0, 0.1)
        assert partial_mixer_matrix(star(11), 1, 0.1).n_inputs == 2


class TestFeasibility:
    def test_empty_graph(self):
        report = feasibility_check_suite(MisInstance.from_edges([], n=4), trials=5)
        assert report.max_leakage == 0.0
        assert report.feasible_states == 16
        assert report.passed

    def test_triangle(self, triangle):
        report = feasibility_check_suite(triangle, trials=20)
        assert report.feasible_states == 4
        assert report.mixers_applied == 60
        assert report.passed

    def test_triangle_dynamics(self, triangle):
        mask = triangle.feasible_mask()
        assert [i for i in range(8) if mask[i]] == [0b000, 0b001, 0b010, 0b100]
        for v in range(3):
            for index in np.nonzero(mask)[0]:
                basis = np.zeros(8, dtype=complex)
                basis[index] = 1.0
                image = apply_partial_mixer(Statevector.of(basis), triangle, v, 0.9)
                assert np.allclose(image.amplitudes[~mask], 0.0)

    def test_all_graphs_on_four_vertices(self):
        pairs = list(itertools.combinations(range(4), 2))
        for size in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, size):
                instance = MisInstance.from_edges(list(edges), n=4)
                assert feasibility_check_suite(instance, trials=3).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_all_graphs_up_to_five_vertices(self, n):
        pairs = list(itertools.combinations(range(n), 2))
        for size in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, size):
                instance = MisInstance.from_edges(list(edges), n=n)
                assert feasibility_check_suite(instance, trials=2, seed=size).passed, edges

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100))
    def test_random_graphs(self, seed):
        graph = nx.gnp_random_graph(8, 0.3, seed=seed)
        graph.add_nodes_from(range(8))
        report = feasibility_check_suite(MisInstance.from_graph(graph), trials=20, seed=seed)
        assert report.max_leakage < 1e-12

    @pytest.mark.parametrize("beta", [0.0, 0.6, -2.3])
    @pytest.mark.parametrize("graph", ["triangle", "c5", "p3"])
    def test_mixer_commutes_with_feasible_projector(self, graph, beta, request):
        instance = request.getfixturevalue(graph)
        size = 2 ** instance.n
        projector = np.diag(instance.feasible_mask().astype(complex))
        for v in range(instance.n):
            columns = []
            for index in range(size):
                basis = np.zeros(size, dtype=complex)
                basis[index] = 1.0
                image = apply_partial_mixer(Statevector.of(basis), instance, v, beta)
                columns.append(image.amplitudes)
            unitary = np.column_stack(columns)
            assert np.allclose(unitary, expm(1j * beta * partial_mixer_hamiltonian(instance, v)))
            assert np.max(np.abs(unitary @ projector - projector @ unitary)) < 1e-12

    def test_size_guard(self):
        with pytest.raises(ResourceGuardError):
            feasibility_check_suite(MisInstance.from_edges([], n=13), trials=1)


class TestExpectation:
    def test_zero_angles_give_empty_set(self, p3):
        result = mis_expectation(p3, QaoaParams.of([0.0], [0.0]))
        assert result.expected_size == pytest.approx(0.0)
        assert result.best_size == 0
        assert result.best_probability == pytest.approx(1.0)

    def test_isolated_vertices_reach_full_set(self):
        instance = MisInstance.from_edges([], n=3)
        result = mis_expectation(instance, QaoaParams.of([0.3], [math.pi / 2]))
        assert result.expected_size == pytest.approx(3.0)
        assert result.best_size == 3

    @pytest.mark.parametrize("seed", range(5))
    def test_cycle_bounded_by_optimum(self, c5, seed):
        rng = np.random.default_rng(seed)
        params = QaoaParams.of(rng.uniform(-math.pi, math.pi, 2), rng.uniform(-math.pi, math.pi, 2))
        result = mis_expectation(c5, params)
        assert result.expected_size <= 2.0 + 1e-9
        assert result.infeasible_mass < 1e-10
        assert result.best_size <= 2

    def test_classical_start(self, c5, params2):
        result = mis_expectation(c5, params2, init=MisInit.classical([1, 3]))
        assert result.infeasible_mass < 1e-10
        assert result.expected_size > 0.0

    def test_mixer_order_matters(self, p3, params1):
        assert mixer_order_dependence(p3, params1, [0, 1, 2], [2, 1, 0]) > 1e-3

    def test_commuting_mixers_do_not_depend_on_order(self, params1):
        instance = MisInstance.from_edges([(0, 1)], n=4)
        assert mixer_order_dependence(instance, params1, [0, 1, 2, 3], [0, 1, 3, 2]) < 1e-12
