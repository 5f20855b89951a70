"""Tests for measurement patterns and their exact runtime."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import binomtest

from mbqaoa.compiler.qaoa import compile_qaoa
from mbqaoa.compiler.verify import total_variation
from mbqaoa.core.errors import InvalidInputError, PatternValidationError, ResourceGuardError
from mbqaoa.gates.circuits import build_qaoa_circuit
from mbqaoa.gates.statevector import H_MATRIX, Statevector, distribution, run
from mbqaoa.patterns.pattern import (
    Correction,
    MeasureCmd,
    MeasurementPattern,
    Pauli,
    Plane,
    require_valid,
    validate,
)
from mbqaoa.patterns.runtime import (
    basis_vector,
    check_determinism,
    enumerate_branches,
    output_distribution,
    peak_window,
    sample,
    sample_branches,
)
from mbqaoa.patterns.wires import hadamard_wire, identity_wire

PSI = Statevector.of([0.6, 0.8j])


def rotated_wire(angle: float) -> MeasurementPattern:
    return hadamard_wire().model_copy(update={"measurements": (MeasureCmd(node=0, angle=angle),)})


class TestValidation:
    def test_reference_wires_are_valid(self):
        for pattern in (hadamard_wire(), identity_wire()):
            result = validate(pattern)
            assert result.ok
            assert not result.should_abort()

    def test_causality_violation(self):
        pattern = identity_wire().model_copy(
            update={
                "measurements": (
                    MeasureCmd(node=0, sign_domain=frozenset({1})),
                    MeasureCmd(node=1),
                )
            }
        )
        result = validate(pattern)
        assert result.should_abort()
        assert any(v.startswith("causality") for v in result.violations)

    def test_unmeasured_node(self):
        pattern = identity_wire().model_copy(update={"measurements": (MeasureCmd(node=0),)})
        assert "node 1 is neither measured nor an output" in validate(pattern).violations
        with pytest.raises(PatternValidationError) as excinfo:
            require_valid(pattern)
        assert excinfo.value.violations

    def test_measured_output_and_foreign_correction(self):
        pattern = MeasurementPattern(
            nodes=(0, 1),
            inputs=(0,),
            outputs=(1,),
            measurements=(MeasureCmd(node=0), MeasureCmd(node=1)),
            corrections=(Correction(node=0, pauli=Pauli.Z),),
        )
        violations = validate(pattern).violations
        assert "output 1 is measured" in violations
        assert "correction on non-output node 0" in violations

    def test_repeated_cz_is_a_warning(self):
        pattern = hadamard_wire().model_copy(update={"entangle": ((0, 1), (1, 0))})
        result = validate(pattern)
        assert result.ok
        assert result.warnings

    def test_invalid_pattern_is_not_run(self):
        pattern = identity_wire().model_copy(update={"measurements": ()})
        with pytest.raises(PatternValidationError):
            enumerate_branches(pattern)


class TestJson:
    def test_round_trip(self):
        pattern = identity_wire().with_metadata(label="wire")
        assert MeasurementPattern.from_json(pattern.to_json()) == pattern

    def test_float_angle_and_plane_survive(self):
        cmd = MeasureCmd(node=3, angle=0.25, plane=Plane.YZ, offset_domain=frozenset({1}))
        back = MeasureCmd.from_json(cmd.to_json())
        assert back.plane is Plane.YZ
        assert back.angle.radians == pytest.approx(0.25)

    def test_missing_key(self):
        doc = identity_wire().to_json()
        del doc["nodes"]
        with pytest.raises(InvalidInputError, match="missing key 'nodes'"):
            MeasurementPattern.from_json(doc)

    def test_unsupported_format(self):
        doc = identity_wire().to_json()
        doc["format"] = 2
        with pytest.raises(InvalidInputError, match="format"):
            MeasurementPattern.from_json(doc)


class TestBases:
    @given(st.floats(min_value=-math.pi, max_value=math.pi), st.sampled_from(list(Plane)))
    def test_bases_are_orthonormal(self, angle, plane):
        cmd = MeasureCmd(node=0, plane=plane)
        zero, one = basis_vector(cmd, angle, 0), basis_vector(cmd, angle, 1)
        assert np.vdot(zero, zero).real == pytest.approx(1.0)
        assert abs(np.vdot(zero, one)) < 1e-12

    def test_yz_at_zero_is_computational(self):
        cmd = MeasureCmd(node=0, plane=Plane.YZ)
        assert np.allclose(basis_vector(cmd, 0.0, 0), [1, 0])
        assert np.allclose(basis_vector(cmd, 0.0, 1), [0, 1])

    def test_effective_angle(self):
        cmd = MeasureCmd(node=5, angle=0.3, sign_domain=frozenset({1}), offset_domain={2})
        assert cmd.effective_angle({1: 0, 2: 0}) == pytest.approx(0.3)
        assert cmd.effective_angle({1: 1, 2: 0}) == pytest.approx(-0.3)
        assert cmd.effective_angle({1: 1, 2: 1}) == pytest.approx(math.pi - 0.3)


class TestRuntime:
    def test_hadamard_wire(self):
        branches = enumerate_branches(hadamard_wire(), PSI)
        assert len(branches) == 2
        expected = Statevector.of(H_MATRIX @ PSI.amplitudes)
        for branch in branches:
            assert branch.output_state.equal_up_to_phase(expected)

    @pytest.mark.parametrize("angle", [0.0, 0.4, -1.3, math.pi / 2])
    def test_rotated_wire(self, angle):
        branches = enumerate_branches(rotated_wire(angle), PSI)
        rotated = np.diag([1.0, np.exp(-1j * angle)]) @ PSI.amplitudes
        expected = Statevector.of(H_MATRIX @ rotated)
        assert all(b.output_state.equal_up_to_phase(expected) for b in branches)

    def test_identity_wire(self):
        branches = enumerate_branches(identity_wire(), PSI)
        assert sum(b.probability for b in branches) == pytest.approx(1.0)
        assert all(b.output_state.equal_up_to_phase(PSI) for b in branches)
        assert check_determinism(identity_wire(), branches=branches)

    def test_missing_correction_breaks_determinism(self):
        pattern = identity_wire().model_copy(update={"corrections": ()})
        assert not check_determinism(pattern, input_state=PSI)

    def test_output_distribution(self):
        dist = output_distribution(enumerate_branches(identity_wire(), PSI))
        assert np.allclose(dist, [0.36, 0.64])

    def test_peak_window(self):
        assert peak_window(hadamard_wire()) == 2
        assert peak_window(identity_wire()) == 2

    def test_branch_guard(self, override_guards):
        override_guards(branch_bits=1)
        with pytest.raises(ResourceGuardError, match="sample_branches"):
            enumerate_branches(identity_wire())

    def test_window_guard(self, override_guards):
        override_guards(pattern_window=1)
        with pytest.raises(ResourceGuardError):
            sample(hadamard_wire(), 10)


class TestSampling:
    def test_reproducible(self):
        pattern = rotated_wire(math.pi / 2)
        assert sample(pattern, 200, seed=7) == sample(pattern, 200, seed=7)

    def test_deterministic_output(self):
        assert sample(hadamard_wire(), 50) == {"0": 50}

    def test_fair_coin(self):
        shots = 2000
        counts = sample(rotated_wire(math.pi / 2), shots, seed=3)
        assert sum(counts.values()) == shots
        assert binomtest(counts.get("0", 0), shots, 0.5).pvalue > 1e-3

    def test_sampled_paths(self):
        paths = sample_branches(identity_wire(), 20, seed=1, input_state=PSI)
        assert len(paths) == 20
        assert all(p.probability == pytest.approx(0.25) for p in paths)
        assert all(p.output_state.equal_up_to_phase(PSI) for p in paths)

    def test_triangle_at_many_shots(self, k3, params1):
        pattern = compile_qaoa(k3, params1)
        shots = 100_000
        counts = sample(pattern, shots, seed=21)
        assert counts == sample(pattern, shots, seed=21)
        assert sum(counts.values()) == shots
        keys = [format(i, "03b") for i in range(8)]
        empirical = [counts.get(key, 0) / shots for key in keys]
        exact = distribution(run(build_qaoa_circuit(k3, params1), 3))
        assert total_variation(empirical, exact) < 0.02

    def test_seed_changes_counts(self, k3, params1):
        pattern = compile_qaoa(k3, params1)
        assert sample(pattern, 500, seed=1) != sample(pattern, 500, seed=2)
