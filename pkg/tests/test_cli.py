"""Tests for the mbqaoa command line."""

import json
import math
import sys

import pytest
from loguru import logger

from mbqaoa.cli import (
    EXIT_FAILED,
    EXIT_GUARD,
    EXIT_INPUT,
    EXIT_OK,
    build_parser,
    main,
    parse_angle,
    parse_grid,
)
from mbqaoa.core.errors import InvalidInputError


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    logger.remove()
    logger.add(sys.stderr)


@pytest.fixture
def write(tmp_path):
    def write_doc(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return write_doc


@pytest.fixture
def k2_graph(write):
    return write("k2.json", {"n": 2, "edges": [[0, 1]]})


@pytest.fixture
def k3_graph(write):
    return write("k3.json", {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]})


def run_json(capsys, argv):
    code = main(["-q", *argv])
    return code, json.loads(capsys.readouterr().out)


class TestParsing:
    def test_angles(self):
        assert parse_angle("0.25pi") == pytest.approx(math.pi / 4)
        assert parse_angle("pi") == pytest.approx(math.pi)
        assert parse_angle("0.5*pi") == pytest.approx(math.pi / 2)
        assert parse_angle("-0.3") == -0.3
        with pytest.raises(InvalidInputError):
            parse_angle("quarter")

    def test_grid(self):
        grid = parse_grid("0:1:4", 0.0, 0.0, 1)
        assert grid.tolist() == pytest.approx([0, math.pi / 4, math.pi / 2, 3 * math.pi / 4])
        assert len(parse_grid(None, 0.0, 0.5, 16)) == 16
        with pytest.raises(InvalidInputError):
            parse_grid("0:1", 0.0, 1.0, 1)

    def test_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(["export-graph", "-i", "g.json", "--format", "dot"])
        assert args.command == "export-graph"
        with pytest.raises(SystemExit):
            parser.parse_args(["--verbose", "--quiet", "resources", "-i", "g.json"])


class TestCommands:
    def test_compile_then_verify(self, capsys, k2_graph, tmp_path):
        out = tmp_path / "k2.pattern.json"
        argv = ["compile", "-i", k2_graph, "--gammas", "0.25pi", "--betas", "0.125pi"]
        assert main(["-q", *argv, "--out", str(out)]) == EXIT_OK
        code, report = run_json(capsys, ["verify", "-i", str(out)])
        assert code == EXIT_OK
        assert report["passed"] is True
        assert report["mode"] == "exhaustive"

    def test_compile_writes_resources_next_to_pattern(self, k3_graph, tmp_path):
        out = tmp_path / "k3.pattern.json"
        argv = ["compile", "-i", k3_graph, "--gammas", "0.3", "--betas", "0.2"]
        assert main(["-q", *argv, "--out", str(out)]) == EXIT_OK
        doc = json.loads((tmp_path / "k3.pattern.resources.json").read_text())
        assert (doc["ancillas_total"], doc["entangling_edges_total"]) == (9, 12)
        assert (doc["emitted"]["ancillas"], doc["emitted"]["entangling_edges"]) == (9, 12)
        assert doc["emitted_matches"] is True
        assert json.loads(out.read_text())["nodes"]

    def test_compile_resources_out(self, capsys, k3_graph, tmp_path):
        resources = tmp_path / "counts.json"
        argv = ["compile", "-i", k3_graph, "--gammas", "0.3", "--betas", "0.2"]
        code, pattern = run_json(capsys, [*argv, "--resources-out", str(resources)])
        assert code == EXIT_OK
        assert "measure" in pattern
        assert json.loads(resources.read_text())["ancillas_total"] == 9

    def test_verify_problem_directly(self, capsys, k2_graph):
        code, report = run_json(
            capsys, ["verify", "-i", k2_graph, "-p", "2", "--gammas", "0.3", "--betas", "0.7"]
        )
        assert code == EXIT_OK
        assert report["tvd"] < 1e-9

    def test_corrupted_pattern_fails(self, capsys, k2_graph, write):
        main(["-q", "compile", "-i", k2_graph, "--gammas", "0.4", "--betas", "0.3"])
        doc = json.loads(capsys.readouterr().out)
        doc["corrections"] = []
        code, report = run_json(capsys, ["verify", "-i", write("bad.json", doc)])
        assert code == EXIT_FAILED
        assert report["deterministic"] is False

    def test_resources(self, capsys, k3_graph):
        code, doc = run_json(capsys, ["resources", "-i", k3_graph])
        assert code == EXIT_OK
        assert (doc["ancillas_total"], doc["entangling_edges_total"]) == (9, 12)
        assert doc["emitted_matches"] is True

    def test_resources_with_linear_terms(self, capsys, write):
        qubo = {
            "n": 3,
            "quadratic": [{"u": 0, "v": 1, "weight": 0.5}],
            "linear": [{"v": 2, "weight": 1.5}],
        }
        code, doc = run_json(capsys, ["resources", "-i", write("q.json", qubo), "-p", "2"])
        assert code == EXIT_OK
        assert doc["ancillas_total"] == 2 * (1 + 6 + 1)
        assert doc["emitted"]["ancillas"] == doc["ancillas_total"]

    def test_sample_is_reproducible(self, capsys, k2_graph):
        argv = ["sample", "-i", k2_graph, "--gammas", "0.3", "--betas", "0.2"]
        _, first = run_json(capsys, [*argv, "--shots", "500", "--seed", "7"])
        _, second = run_json(capsys, [*argv, "--shots", "500", "--seed", "7"])
        assert first == second
        assert sum(first["counts"].values()) == 500

    def test_mis(self, capsys, write):
        path = write("p3.json", {"n": 3, "edges": [[0, 1], [1, 2]]})
        code, doc = run_json(capsys, ["mis", "-i", path, "--gammas", "0.4", "--betas", "0.9"])
        assert code == EXIT_OK
        assert doc["expectation"]["infeasible_mass"] < 1e-10
        assert doc["feasibility"]["passed"] is True

    def test_mis_rejects_dependent_start(self, write):
        path = write("p3.json", {"n": 3, "edges": [[0, 1], [1, 2]]})
        argv = ["mis", "-i", path, "--gammas", "0.4", "--betas", "0.9", "--init-set", "0,1"]
        assert main(["-q", *argv]) == EXIT_INPUT

    def test_sweep_finds_single_edge_optimum(self, capsys, k2_graph):
        code, doc = run_json(capsys, ["sweep", "-i", k2_graph])
        assert code == EXIT_OK
        assert doc["best"]["value"] == pytest.approx(1.0, abs=1e-6)
        assert doc["best"]["gamma"] == pytest.approx(math.pi / 4)
        assert doc["best"]["beta"] == pytest.approx(math.pi / 8)
        assert len(doc["gammas"]) == len(doc["betas"]) == 16

    def test_export_dot(self, capsys, k2_graph):
        assert main(["-q", "export-graph", "-i", k2_graph, "--format", "dot"]) == EXIT_OK
        assert capsys.readouterr().out.startswith('graph "maxcut" {')


class TestExitCodes:
    def test_malformed_json(self, write, capsys):
        path = write("broken.json", '{"n": 2,\n "edges": [[0, 1]')
        assert main(["resources", "-i", path]) == EXIT_INPUT
        assert "line 2" in capsys.readouterr().err

    def test_missing_key(self, write, capsys):
        path = write("nokey.json", {"quadratic": []})
        assert main(["resources", "-i", path]) == EXIT_INPUT
        assert "missing key 'n'" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["-q", "resources", "-i", str(tmp_path / "absent.json")]) == EXIT_INPUT

    def test_missing_angles(self, k2_graph):
        assert main(["-q", "compile", "-i", k2_graph]) == EXIT_INPUT

    def test_guard(self, write):
        path = write("path15.json", {"n": 15, "edges": [[k, k + 1] for k in range(14)]})
        argv = ["verify", "-i", path, "--gammas", "0.1", "--betas", "0.1"]
        assert main(["-q", *argv]) == EXIT_GUARD

    def test_config_file(self, write, k2_graph):
        config = write("tight.json", {"guards": {"statevector_qubits": 1}})
        argv = ["--config", config, "-q", "verify", "-i", k2_graph]
        assert main([*argv, "--gammas", "0.1", "--betas", "0.1"]) == EXIT_GUARD
