"""Tests for ZX diagrams, builders and contraction semantics."""

import math

import numpy as np
import pytest

from mbqaoa.core.errors import ContractViolation, MalformedDiagramError, ResourceGuardError
from mbqaoa.zx.builders import cnot, phase_gadget, wire, x_rotation, z_rotation
from mbqaoa.zx.diagram import DiagramBuilder, Edge, SpiderColor, ZxDiagram
from mbqaoa.zx.semantics import HADAMARD, LinearMap, equal_up_to_scalar, to_matrix

CNOT = np.eye(4)[[0, 1, 3, 2]]


class TestStructure:
    def test_builder_assigns_sequential_ids(self):
        d = cnot()
        assert d.inputs == (0, 1)
        assert d.outputs == (4, 5)
        assert d.spider(2).color is SpiderColor.Z
        assert d.spider(3).color is SpiderColor.X
        assert sorted(d.neighbors(2)) == [0, 3, 4]

    def test_dangling_edge_is_reported(self):
        d = ZxDiagram(inputs=(0,), outputs=(1,), edges=(Edge(id=0, a=0, b=7),))
        assert any("dangles" in p for p in d.structure_problems())
        with pytest.raises(MalformedDiagramError):
            d.check()

    def test_boundary_degree_must_be_one(self):
        builder = DiagramBuilder()
        port = builder.input()
        a, b = builder.z(), builder.z()
        builder.connect(port, a)
        builder.connect(port, b)
        builder.connect(a, b)
        with pytest.raises(MalformedDiagramError, match="degree 2"):
            builder.build()

    def test_fresh_ids_skip_existing(self):
        d = phase_gadget(0.3)
        assert d.fresh_node_id() == 8
        assert d.fresh_edge_id() == len(d.edges)

    def test_json_round_trip_preserves_semantics(self):
        d = phase_gadget(0.3).scaled(2.0)
        again = ZxDiagram.from_json(d.to_json())
        assert again.spider(5).phase.close_to(d.spider(5).phase)
        assert np.allclose(to_matrix(again).matrix, to_matrix(d).matrix)


class TestSemantics:
    def test_wire_is_identity(self):
        assert np.allclose(to_matrix(wire(2)).matrix, np.eye(4))

    def test_z_rotation(self):
        m = to_matrix(z_rotation(0.7)).matrix
        assert np.allclose(m, np.diag([1.0, np.exp(0.7j)]))

    def test_x_rotation_is_hadamard_conjugate(self):
        m = to_matrix(x_rotation(0.7)).matrix
        expected = HADAMARD @ np.diag([1.0, np.exp(0.7j)]) @ HADAMARD
        assert np.allclose(m, expected)

    def test_cnot_up_to_scalar(self):
        assert equal_up_to_scalar(to_matrix(cnot()), CNOT)

    @pytest.mark.parametrize("alpha", [0.0, 0.4, math.pi / 3, math.pi])
    def test_phase_gadget(self, alpha):
        expected = np.diag(np.exp(1j * alpha * np.array([0, 1, 1, 0])))
        assert equal_up_to_scalar(to_matrix(phase_gadget(alpha)), expected)

    def test_contraction_orders_agree(self):
        d = phase_gadget(1.1)
        greedy = to_matrix(d, order="greedy").matrix
        sequential = to_matrix(d, order="sequential").matrix
        assert np.allclose(greedy, sequential)

    def test_unknown_order_rejected(self):
        with pytest.raises(ValueError):
            to_matrix(cnot(), order="random")

    def test_hadamard_edge(self):
        builder = DiagramBuilder()
        builder.connect(builder.input(), builder.output(), hadamard=True)
        assert np.allclose(to_matrix(builder.build()).matrix, HADAMARD)

    def test_scalar_only_diagram(self):
        builder = DiagramBuilder()
        builder.z(math.pi)
        m = to_matrix(builder.build())
        assert m.matrix.shape == (1, 1)
        assert abs(m.matrix[0, 0]) < 1e-12

    def test_port_guard(self):
        with pytest.raises(ResourceGuardError) as info:
            to_matrix(wire(7))
        assert info.value.limit == 12
        assert info.value.actual == 14


class TestEqualUpToScalar:
    def test_global_phase_ignored(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
        assert equal_up_to_scalar(a, 1j * 5.0 * a)

    def test_different_maps(self):
        assert not equal_up_to_scalar(np.eye(2), np.diag([1.0, -1.0]))

    def test_scaled_identity(self):
        assert equal_up_to_scalar(2.0 * np.eye(2), np.eye(2))

    def test_tolerance_is_absolute(self):
        noisy = 1000.0 * np.eye(2, dtype=complex)
        noisy[0, 1] = 1e-9
        assert not equal_up_to_scalar(noisy, np.eye(2), tol=1e-10)
        assert equal_up_to_scalar(noisy, np.eye(2), tol=1e-8)

    def test_tolerance_in_units_of_first_operand(self):
        tiny = 1e-6 * np.diag([1.0, 1.0 + 1e-5])
        assert equal_up_to_scalar(tiny, np.eye(2), tol=1e-10)
        assert not equal_up_to_scalar(1e6 * tiny, np.eye(2), tol=1e-10)

    def test_zero_only_matches_zero(self):
        assert equal_up_to_scalar(np.zeros((2, 2)), np.zeros((2, 2)))
        assert not equal_up_to_scalar(np.zeros((2, 2)), np.eye(2))

    def test_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            equal_up_to_scalar(np.eye(2), np.eye(4))

    def test_linear_map_of_vector(self):
        state = LinearMap.of(np.array([1.0, 0.0, 0.0, 0.0]))
        assert (state.n_outputs, state.n_inputs) == (2, 0)
