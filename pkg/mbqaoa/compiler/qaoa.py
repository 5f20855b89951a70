"""Layered QAOA_p compilation of a QUBO into one measurement pattern."""

from loguru import logger

from mbqaoa.compiler.conventions import edge_angle, linear_angle, mixer_angle
from mbqaoa.compiler.fragments import (
    FragmentContext,
    PatternFragment,
    compile_phase_gadget,
    compile_x_rotation,
    compile_z_rotation,
)
from mbqaoa.gates.circuits import QaoaParams
from mbqaoa.patterns.pattern import MeasurementPattern, require_valid
from mbqaoa.problems.qubo import QuboProblem


def compile_qaoa_fragment(problem: QuboProblem, params: QaoaParams) -> PatternFragment:
    """
    Compile QAOA_p, keeping the wire frames and node roles.

    Vertex v enters as input node v in |+>. Each layer emits one edge gadget per
    nonzero coupling (ascending key), one linear gadget per nonzero field
    (ascending vertex), then the mixer on every vertex, isolated ones included.
    """
    ctx = FragmentContext(range(problem.n))
    for k, (gamma, beta) in enumerate(params.layers(), start=1):
        ctx.new_layer()
        for (u, v) in problem.edges:
            compile_phase_gadget(ctx, u, v, edge_angle(gamma, problem.quadratic[(u, v)]))
        for v in problem.linear_vertices:
            compile_z_rotation(ctx, v, linear_angle(gamma, problem.linear[v]))
        for v in range(problem.n):
            compile_x_rotation(ctx, v, mixer_angle(beta))
        logger.debug(f"[{k}/{params.p}] layer emitted, {len(ctx.nodes)} nodes so far")
    source = {"problem": problem.to_json(), "params": params.to_json()}
    return ctx.fragment(metadata={"source": source})


def compile_qaoa(problem: QuboProblem, params: QaoaParams) -> MeasurementPattern:
    """
    Compile QAOA_p for a QUBO into a validated measurement pattern.

    Outputs are the final carriers in vertex order; the source problem and angle
    schedule are embedded in the pattern metadata.

    Raises:
        PatternValidationError: If the emitted pattern fails validation
    """
    logger.info(f"Compiling {problem.name}: n={problem.n}, |E|={len(problem.edges)}, p={params.p}")
    pattern = require_valid(compile_qaoa_fragment(problem, params).pattern)
    logger.success(
        f"Compiled pattern: {len(pattern.nodes)} nodes, {len(pattern.entangle)} CZs, "
        f"{len(pattern.measurements)} measurements"
    )
    return pattern
