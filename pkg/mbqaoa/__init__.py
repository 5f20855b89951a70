"""
mbqaoa - QAOA to measurement-based quantum computing

Compiles QAOA circuits for QUBO and MaxCut problems into measurement patterns,
checks the rewrite derivations behind them, and verifies every pattern exactly
against a gate-model statevector simulation.
"""

__version__ = "0.1.0"

from mbqaoa.compiler.qaoa import compile_qaoa
from mbqaoa.compiler.resources import export_resource_graph, resource_estimate
from mbqaoa.compiler.verify import verify_pattern
from mbqaoa.gates.circuits import QaoaParams, build_mis_qaoa, build_qaoa_circuit
from mbqaoa.mis.feasibility import feasibility_check_suite, mis_expectation
from mbqaoa.patterns.pattern import MeasurementPattern, validate
from mbqaoa.patterns.runtime import enumerate_branches, sample
from mbqaoa.problems.mis import MisInstance
from mbqaoa.problems.qubo import QuboProblem, maxcut_to_qubo
from mbqaoa.zx.derivations import DERIVATIONS, check_derivation

__all__ = [
    "compile_qaoa",
    "export_resource_graph",
    "resource_estimate",
    "verify_pattern",
    "QaoaParams",
    "build_mis_qaoa",
    "build_qaoa_circuit",
    "feasibility_check_suite",
    "mis_expectation",
    "MeasurementPattern",
    "validate",
    "enumerate_branches",
    "sample",
    "MisInstance",
    "QuboProblem",
    "maxcut_to_qubo",
    "DERIVATIONS",
    "check_derivation",
]
