"""
Equivalence check of a compiled pattern against the gate-model oracle.

Exhaustive mode enumerates every outcome branch; once the measured-node count passes
the `exhaustive_bits` guard, a seeded sample of outcome paths is checked instead.
"""

from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from mbqaoa.core.config import get_default_config
from mbqaoa.core.errors import InvalidInputError
from mbqaoa.gates.circuits import QaoaParams, build_qaoa_circuit
from mbqaoa.gates.statevector import distribution, run
from mbqaoa.patterns.pattern import MeasurementPattern, require_valid
from mbqaoa.patterns.runtime import (
    BranchResult,
    enumerate_branches,
    max_state_deviation,
    output_distribution,
    sample_branches,
)
from mbqaoa.problems.io import problem_from_json
from mbqaoa.problems.qubo import QuboProblem


class VerificationMode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class VerificationReport(BaseModel):
    """Outcome of one pattern-vs-circuit comparison."""
    mode: VerificationMode
    tvd: float
    deterministic: bool
    max_state_deviation: float
    branches_examined: int
    tvd_tolerance: float
    state_tolerance: float
    pattern_distribution: List[float] = Field(default_factory=list)
    oracle_distribution: List[float] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.deterministic and self.tvd < self.tvd_tolerance

    def summary(self) -> dict:
        doc = self.model_dump(exclude={"pattern_distribution", "oracle_distribution"})
        doc["passed"] = self.passed
        return doc


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def pattern_source(pattern: MeasurementPattern) -> tuple:
    """(problem, params) embedded in a compiled pattern's metadata."""
    source = pattern.metadata.get("source")
    if not isinstance(source, dict) or "problem" not in source or "params" not in source:
        raise InvalidInputError(
            "pattern metadata carries no 'source' problem and params; pass them explicitly"
        )
    return problem_from_json(source["problem"]), QaoaParams.from_json(source["params"])


def verify_pattern(
    pattern: MeasurementPattern,
    problem: Optional[QuboProblem] = None,
    params: Optional[QaoaParams] = None,
    tvd_tol: Optional[float] = None,
    state_tol: Optional[float] = None,
    seed: int = 0,
) -> VerificationReport:
    """
    Compare a QAOA pattern with the gate-model circuit for the same problem.

    Args:
        pattern: Compiled pattern; outputs must follow vertex order
        problem: Source problem, read from pattern metadata when omitted
        params: Angle schedule, read from pattern metadata when omitted
        tvd_tol: Distribution tolerance (config `tvd` by default)
        state_tol: Per-branch state tolerance (config `state_deviation` by default)
        seed: Seed for sampled mode

    Returns:
        VerificationReport; `passed` requires TVD below tolerance and every
        examined branch within the state tolerance of the oracle

    Raises:
        InvalidInputError: If problem or params are missing and not embedded
        PatternValidationError: If the pattern is not valid
    """
    config = get_default_config()
    tvd_tol = config.tolerance("tvd") if tvd_tol is None else tvd_tol
    state_tol = config.tolerance("state_deviation") if state_tol is None else state_tol
    if problem is None or params is None:
        embedded_problem, embedded_params = pattern_source(pattern)
        problem = problem or embedded_problem
        params = params or embedded_params
    require_valid(pattern)

    logger.info(f"Verifying {len(pattern.measurements)}-measurement pattern for {problem.name}")
    oracle = run(build_qaoa_circuit(problem, params), problem.n)

    branches: List[BranchResult]
    measured = len(pattern.measurements)
    limit = min(config.guard("exhaustive_bits"), config.guard("branch_bits"))
    if measured > limit:
        count = int(config.sampling_default("verify_branches", 64))
        logger.info(
            f"{measured} measured nodes exceed the exhaustive limit of {limit}; "
            f"checking {count} sampled outcome paths"
        )
        mode = VerificationMode.SAMPLED
        branches = sample_branches(pattern, count, seed=seed)
        # Each sampled branch is a full state; its marginal is compared directly
        pattern_probs = np.mean([b.output_state.probabilities() for b in branches], axis=0)
    else:
        mode = VerificationMode.EXHAUSTIVE
        branches = enumerate_branches(pattern)
        pattern_probs = output_distribution(branches)

    oracle_probs = distribution(oracle)
    deviation = max_state_deviation(branches, oracle)
    report = VerificationReport(
        mode=mode,
        tvd=total_variation(pattern_probs, oracle_probs),
        deterministic=deviation <= state_tol,
        max_state_deviation=deviation,
        branches_examined=len(branches),
        tvd_tolerance=tvd_tol,
        state_tolerance=state_tol,
        pattern_distribution=[float(x) for x in pattern_probs],
        oracle_distribution=[float(x) for x in oracle_probs],
    )
    if report.passed:
        logger.success(f"PASS ({mode.value}): TVD {report.tvd:.3e}, {len(branches)} branches")
    else:
        logger.error(
            f"FAIL ({mode.value}): TVD {report.tvd:.3e}, max deviation {deviation:.3e}"
        )
    return report
