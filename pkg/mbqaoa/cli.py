"""
Command-line entry point.

Usage:
    mbqaoa compile --input graph.json --gammas 0.25pi --betas 0.125pi --out k2.pattern.json
    mbqaoa verify --input k2.pattern.json
    mbqaoa sample --input graph.json --gammas 0.3 --betas 0.2 --shots 10000 --seed 7
    mbqaoa resources --input graph.json --depth 3
    mbqaoa mis --input graph.json --gammas 0.4 --betas 0.9 --init-set 0,2
    mbqaoa sweep --input graph.json --gammas 0:1:16 --betas 0:0.5:16
    mbqaoa export-graph --input graph.json --depth 1 --format dot

Angles are radians; a trailing "pi" makes a value a multiple of pi ("0.25pi").
Sweep grids are start:stop:num in multiples of pi, stop excluded.

Exit codes: 0 pass, 1 verification failed, 2 input error, 3 resource guard.
"""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import ValidationError

from mbqaoa import __version__
from mbqaoa.compiler.qaoa import compile_qaoa
from mbqaoa.compiler.resources import export_resource_graph, recount, resource_estimate
from mbqaoa.compiler.verify import pattern_source, total_variation, verify_pattern
from mbqaoa.core.config import Settings, get_default_config, load_config, set_default_config
from mbqaoa.core.errors import InvalidInputError, MbqaoaError, ResourceGuardError
from mbqaoa.gates.circuits import MisInit, QaoaParams, build_qaoa_circuit
from mbqaoa.gates.statevector import distribution, expectation_cost, run
from mbqaoa.mis.feasibility import feasibility_check_suite, mis_expectation
from mbqaoa.patterns.pattern import MeasurementPattern
from mbqaoa.patterns.runtime import sample
from mbqaoa.problems.io import load_json, mis_from_json, problem_from_json
from mbqaoa.problems.qubo import QuboProblem, bits_to_str

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_GUARD = 3


# Argument parsing

def parse_angle(text: str) -> float:
    text = text.strip()
    try:
        if text.endswith("pi"):
            head = text[:-2].rstrip("*")
            return (float(head) if head else 1.0) * math.pi
        return float(text)
    except ValueError as exc:
        raise InvalidInputError(f"bad angle '{text}'") from exc


def parse_angles(text: Optional[str]) -> List[float]:
    if not text:
        return []
    return [parse_angle(part) for part in text.split(",") if part.strip()]


def parse_grid(text: Optional[str], start: float, stop: float, num: int) -> np.ndarray:
    """start:stop:num in multiples of pi, stop excluded; None gives the config default."""
    if text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidInputError(f"grid '{text}' must be start:stop:num")
        try:
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise InvalidInputError(f"grid '{text}' must be start:stop:num") from exc
    if num < 1:
        raise InvalidInputError(f"grid needs at least one point, got {num}")
    return np.linspace(start, stop, num, endpoint=False) * math.pi


def parse_vertices(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"bad vertex list '{text}'") from exc


def _params(args: argparse.Namespace) -> QaoaParams:
    gammas, betas = parse_angles(args.gammas), parse_angles(args.betas)
    if not gammas or not betas:
        raise InvalidInputError("--gammas and --betas are required")
    depth = args.depth or len(gammas)
    if len(gammas) == 1 and len(betas) == 1 and depth > 1:
        gammas, betas = gammas * depth, betas * depth
    if len(gammas) != depth or len(betas) != depth:
        raise InvalidInputError(
            f"--depth {depth} needs {depth} gammas and betas "
            f"(got {len(gammas)} and {len(betas)})"
        )
    return QaoaParams.of(gammas, betas)


def _is_pattern(doc: Dict[str, Any]) -> bool:
    return "measure" in doc or "entangle" in doc


def _load_pattern(args: argparse.Namespace) -> Tuple[MeasurementPattern, QuboProblem, QaoaParams]:
    """A pattern document as given, or a problem document compiled with the CLI angles."""
    doc = load_json(args.input)
    if _is_pattern(doc):
        pattern = MeasurementPattern.from_json(doc)
        problem, params = pattern_source(pattern)
        return pattern, problem, params
    problem = problem_from_json(doc)
    params = _params(args)
    return compile_qaoa(problem, params), problem, params


def _load_problem(args: argparse.Namespace) -> QuboProblem:
    doc = load_json(args.input)
    if _is_pattern(doc):
        return pattern_source(MeasurementPattern.from_json(doc))[0]
    return problem_from_json(doc)


def _emit(payload: Any, out: Optional[str]) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _resource_report(problem: QuboProblem, depth: int, pattern: MeasurementPattern) -> dict:
    """Closed-form estimate, bound check and recount of the emitted pattern."""
    estimate, counts = resource_estimate(problem, depth), recount(pattern)
    doc = estimate.model_dump()
    doc["total_nodes"] = estimate.total_nodes
    doc["within_bounds"] = estimate.within_bounds()
    doc["emitted"] = counts.model_dump()
    doc["emitted_matches"] = counts.matches(estimate)
    return doc


def _resources_path(args: argparse.Namespace) -> Optional[str]:
    if args.resources_out:
        return args.resources_out
    if args.out:
        return str(Path(args.out).with_suffix(".resources.json"))
    return None


# Commands

def cmd_compile(args: argparse.Namespace) -> int:
    problem = problem_from_json(load_json(args.input))
    params = _params(args)
    logger.info("[1/3] Compiling")
    pattern = compile_qaoa(problem, params)
    report = _resource_report(problem, params.p, pattern)
    logger.info(
        f"Ancillas {report['emitted']['ancillas']} (closed form {report['bound_qubits']}), "
        f"CZs {report['emitted']['entangling_edges']} (closed form {report['bound_edges']})"
    )
    logger.info("[2/3] Writing pattern")
    _emit(pattern.to_json(), args.out)
    resources_out = _resources_path(args)
    if resources_out:
        logger.info("[3/3] Writing resources")
        _emit(report, resources_out)
    else:
        logger.info("[3/3] No --out or --resources-out, resources not written")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    logger.info("[1/2] Loading pattern")
    pattern, problem, params = _load_pattern(args)
    logger.info("[2/2] Branch enumeration against the gate model")
    report = verify_pattern(pattern, problem, params, tvd_tol=args.tol, seed=args.seed)
    doc = report.summary()
    doc["problem"] = problem.name
    _emit(doc, args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_sample(args: argparse.Namespace) -> int:
    logger.info("[1/3] Loading pattern")
    pattern, problem, params = _load_pattern(args)
    shots = args.shots or int(get_default_config().sampling_default("shots", 1000))
    logger.info(f"[2/3] Sampling {shots} shots")
    counts = sample(pattern, shots, seed=args.seed)
    logger.info("[3/3] Exact distribution")
    exact = distribution(run(build_qaoa_circuit(problem, params), problem.n))
    n = problem.n
    keys = [bits_to_str((i >> (n - 1 - k)) & 1 for k in range(n)) for i in range(2 ** n)]
    empirical = [counts.get(key, 0) / shots for key in keys]
    _emit(
        {
            "shots": shots,
            "seed": args.seed,
            "counts": counts,
            "exact": {key: float(p) for key, p in zip(keys, exact) if p > 0.0},
            "tvd": total_variation(empirical, exact),
        },
        args.out,
    )
    return EXIT_OK


def cmd_resources(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    depth = args.depth or 1
    pattern = compile_qaoa(problem, QaoaParams.of([0.0] * depth, [0.0] * depth))
    _emit(_resource_report(problem, depth, pattern), args.out)
    return EXIT_OK


def cmd_mis(args: argparse.Namespace) -> int:
    instance = mis_from_json(load_json(args.input))
    params = _params(args)
    init_set = parse_vertices(args.init_set)
    init = MisInit.classical(init_set) if init_set is not None else MisInit()
    logger.info(f"[1/2] MIS ansatz on {instance.n} vertices, p={params.p}")
    expectation = mis_expectation(instance, params, parse_vertices(args.order), init)
    logger.info("[2/2] Partial-mixer feasibility")
    feasibility = feasibility_check_suite(instance, trials=args.trials, seed=args.seed)
    _emit(
        {
            "instance": instance.name,
            "expectation": expectation.model_dump(),
            "feasibility": {**feasibility.model_dump(), "passed": feasibility.passed},
        },
        args.out,
    )
    return EXIT_OK if feasibility.passed else EXIT_FAILED


def cmd_sweep(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    config = get_default_config()
    gammas = parse_grid(
        args.gammas,
        config.sweep_default("gamma_start_pi"),
        config.sweep_default("gamma_stop_pi"),
        config.sweep_default("gamma_points"),
    )
    betas = parse_grid(
        args.betas,
        config.sweep_default("beta_start_pi"),
        config.sweep_default("beta_stop_pi"),
        config.sweep_default("beta_points"),
    )
    depth = args.depth or 1
    grid = np.zeros((len(gammas), len(betas)))
    for i, gamma in enumerate(gammas):
        for j, beta in enumerate(betas):
            params = QaoaParams.of([gamma] * depth, [beta] * depth)
            state = run(build_qaoa_circuit(problem, params), problem.n)
            grid[i, j] = expectation_cost(state, problem)
        logger.info(f"[{i + 1}/{len(gammas)}] gamma={gamma:.4f}: best {grid[i].max():.6f}")
    i, j = np.unravel_index(int(np.argmax(grid)), grid.shape)
    _emit(
        {
            "problem": problem.name,
            "depth": depth,
            "best": {
                "gamma": float(gammas[i]),
                "beta": float(betas[j]),
                "value": float(grid[i, j]),
            },
            "gammas": gammas.tolist(),
            "betas": betas.tolist(),
            "expectation": grid.tolist(),
        },
        args.out,
    )
    return EXIT_OK


def cmd_export_graph(args: argparse.Namespace) -> int:
    doc = load_json(args.input)
    if _is_pattern(doc):
        pattern = MeasurementPattern.from_json(doc)
    else:
        depth = args.depth or 1
        pattern = compile_qaoa(
            problem_from_json(doc), QaoaParams.of([0.0] * depth, [0.0] * depth)
        )
    graph = export_resource_graph(pattern)
    _emit(graph.to_dot() if args.format == "dot" else graph.to_json(), args.out)
    return EXIT_OK


COMMANDS = {
    "compile": cmd_compile,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "resources": cmd_resources,
    "mis": cmd_mis,
    "sweep": cmd_sweep,
    "export-graph": cmd_export_graph,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbqaoa", description="Compile and verify QAOA as measurement patterns"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON config file (default config/defaults.json)")
    level = parser.add_mutually_exclusive_group()
    level.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    level.add_argument("--quiet", "-q", action="store_true", help="warnings only")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="problem, graph or pattern JSON")
    common.add_argument("--out", "-o", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    angles = argparse.ArgumentParser(add_help=False)
    angles.add_argument("--depth", "-p", type=int, help="QAOA depth (default: from angles)")
    angles.add_argument("--gammas", help="comma-separated phase angles")
    angles.add_argument("--betas", help="comma-separated mixer angles")

    sub = parser.add_subparsers(dest="command", required=True)
    comp = sub.add_parser(
        "compile", parents=[common, angles], help="compile a problem to a pattern"
    )
    comp.add_argument(
        "--resources-out", help="resource JSON path (default: --out with .resources.json)"
    )
    verify = sub.add_parser(
        "verify", parents=[common, angles], help="check a pattern against the gate model"
    )
    verify.add_argument("--tol", type=float, help="TVD tolerance (default from config)")
    samp = sub.add_parser("sample", parents=[common, angles], help="finite-shot pattern run")
    samp.add_argument("--shots", type=int)
    sub.add_parser("resources", parents=[common, angles], help="qubit and CZ counts")
    mis = sub.add_parser("mis", parents=[common, angles], help="MIS ansatz and feasibility")
    mis.add_argument("--order", help="comma-separated partial-mixer order")
    mis.add_argument("--init-set", help="comma-separated classical starting set")
    mis.add_argument("--trials", type=int, default=20, help="feasibility trials")
    sub.add_parser(
        "sweep", parents=[common, angles], help="grid search of the p-layer expectation"
    )
    export = sub.add_parser("export-graph", parents=[common, angles], help="resource graph")
    export.add_argument("--format", choices=["json", "dot"], default="json")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = Settings().log_level.upper()
    if args.verbose:
        level = "DEBUG"
    elif args.quiet:
        level = "WARNING"
    logger.remove()
    logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> {message}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        if args.config:
            set_default_config(load_config(args.config))
        return COMMANDS[args.command](args)
    except ResourceGuardError as exc:
        logger.error(str(exc))
        return EXIT_GUARD
    except (MbqaoaError, ValueError, ValidationError, FileNotFoundError) as exc:
        logger.error(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
