"""Tests for pattern-versus-circuit verification."""

import pytest

from mbqaoa.compiler.qaoa import compile_qaoa
from mbqaoa.compiler.verify import (
    VerificationMode,
    pattern_source,
    total_variation,
    verify_pattern,
)
from mbqaoa.core.errors import InvalidInputError
from mbqaoa.gates.circuits import QaoaParams
from mbqaoa.patterns.wires import hadamard_wire
from mbqaoa.problems.qubo import maxcut_to_qubo


def test_total_variation():
    assert total_variation([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
    assert total_variation([0.25] * 4, [0.25] * 4) == 0.0


def test_source_round_trip(qubo3, params1):
    problem, params = pattern_source(compile_qaoa(qubo3, params1))
    assert problem.quadratic == qubo3.quadratic
    assert params == params1


def test_pattern_without_source():
    with pytest.raises(InvalidInputError, match="source"):
        verify_pattern(hadamard_wire())


def test_summary(k2, params1):
    summary = verify_pattern(compile_qaoa(k2, params1)).summary()
    assert summary["passed"] is True
    assert summary["mode"] == VerificationMode.EXHAUSTIVE
    assert "pattern_distribution" not in summary


def test_zero_tolerance_fails(k2, params1):
    report = verify_pattern(compile_qaoa(k2, params1), tvd_tol=0.0)
    assert report.deterministic
    assert not report.passed


def test_sampled_mode(k3, params1, override_guards):
    override_guards(exhaustive_bits=4)
    report = verify_pattern(compile_qaoa(k3, params1), seed=5)
    assert report.mode is VerificationMode.SAMPLED
    assert report.branches_examined == 64
    assert report.passed


def test_branch_guard_also_forces_sampling(k2, params1, override_guards):
    override_guards(branch_bits=3)
    report = verify_pattern(compile_qaoa(k2, params1))
    assert report.mode is VerificationMode.SAMPLED
    assert report.passed


def test_exhaustive_up_to_the_limit():
    cycle = maxcut_to_qubo([(0, 1), (1, 2), (2, 3), (0, 3)], n=4)
    pattern = compile_qaoa(cycle, QaoaParams.of([0.52], [-0.3]))
    assert len(pattern.measurements) == 12
    report = verify_pattern(pattern)
    assert report.mode is VerificationMode.EXHAUSTIVE
    assert report.passed


def test_two_layers_on_four_vertices_are_sampled():
    path = maxcut_to_qubo([(0, 1), (1, 2), (2, 3)], n=4)
    pattern = compile_qaoa(path, QaoaParams.of([0.37, 1.12], [0.81, -0.44]))
    assert len(pattern.measurements) == 22
    report = verify_pattern(pattern, seed=3)
    assert report.mode is VerificationMode.SAMPLED
    assert report.passed
    assert report.tvd < 1e-9


def test_sampled_mode_two_layers(qubo3, params2):
    report = verify_pattern(compile_qaoa(qubo3, params2))
    assert report.mode is VerificationMode.SAMPLED
    assert report.passed


def test_sampled_mode_is_seeded(k3, params2):
    pattern = compile_qaoa(k3, params2)
    first = verify_pattern(pattern, seed=11)
    second = verify_pattern(pattern, seed=11)
    assert first.max_state_deviation == second.max_state_deviation
    assert first.pattern_distribution == second.pattern_distribution
