import json
import subprocess
import sys

import pandas as pd
import pytest

from ghz_tangles.entrypoints.ghz_tangles import main
from ghz_tangles.entrypoints.parser import parse_args


def run(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as info:
        main(argv)
    return info.value.code


def run_json(argv: list[str], capsys) -> tuple[int, dict]:
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


class TestEntrypoint:
    def test_module_entrypoint_is_set(self):
        process = subprocess.run(
            [sys.executable, "-m", "ghz_tangles.entrypoints.ghz_tangles", "--help"], capture_output=True, text=True
        )
        assert process.returncode == 0
        assert "surface" in process.stdout

    def test_unknown_command(self):
        assert run(["nonsense"]) == 2


class TestParser:
    def test_flags_before_and_after_command(self):
        args, config = parse_args(["--seed", "5", "sample", "necessity", "--samples", "2"])
        assert args.suite == "necessity"
        assert (config.seed, config.samples) == (5, 2)

    def test_flags_override_file(self, test_data):
        _, config = parse_args(["--config", str(test_data / "config.json"), "sample", "ckw", "--samples", "3"])
        assert (config.seed, config.samples, config.loglevel) == (7, 3, "WARNING")

    def test_loglevel_case(self):
        _, config = parse_args(["--loglevel", "debug", "check", "0", "0", "0", "1"])
        assert config.loglevel == "DEBUG"


class TestTangles:
    def test_ghz(self, test_data, capsys):
        code, report = run_json(["tangles", str(test_data / "ghz3.json")], capsys)
        assert code == 0
        assert report["three_qubit"]["t"] == pytest.approx(1.0)
        assert report["one_tangles"] == pytest.approx([1.0, 1.0, 1.0])
        assert len(report["subsets"]) == 4

    def test_broken_file(self, test_data):
        assert run(["tangles", str(test_data / "broken.json")]) == 2

    def test_missing_file(self, tmp_path):
        assert run(["tangles", str(tmp_path / "missing.json")]) == 2

    def test_ghz_params(self, test_data, capsys):
        code, report = run_json(["ghz", str(test_data / "params.json")], capsys)
        assert code == 0
        assert report["three_qubit"]["y"] == pytest.approx(6**0.5 / 8)


class TestCheck:
    def test_feasible(self, capsys):
        code, report = run_json(["check", "0", "0", "0", "1"], capsys)
        assert code == 0
        assert report["status"] == "feasible"
        assert report["witness"]["r"] == pytest.approx(1.0)
        assert report["marginal_margins"] == pytest.approx([0.5, 0.5, 0.5])

    def test_infeasible(self, capsys):
        code, report = run_json(["check", "1", "1", "0", "0"], capsys)
        assert code == 1
        assert report["status"] == "infeasible"
        assert report["margins"]["achievability"] == pytest.approx(-1.0)
        assert report["marginal_margins"] is None

    def test_boundary_degenerate(self, capsys):
        third = str(2 / 3)
        code, report = run_json(["check", third, third, third, "0"], capsys)
        assert code == 0
        assert report["status"] == "boundary-degenerate"
        assert report["witness"] is None

    def test_witness_follows_tolerance(self, capsys):
        code, report = run_json(["check", "0.01", "0.01", "0", "1", "--tol", "1e-3"], capsys)
        assert code == 0
        assert report["status"] == "feasible"
        assert report["witness"]["r"] < 1.0
        assert report["witness"]["feasible"]

    def test_out_of_range(self):
        assert run(["check", "1.5", "0", "0", "0"]) == 2


class TestInvert:
    def test_ghz(self, capsys):
        code, result = run_json(["invert", "0", "0", "0", "1"], capsys)
        assert code == 0
        assert result["r"] == pytest.approx(1.0)

    def test_infeasible(self, capsys):
        code, result = run_json(["invert", "1", "1", "0", "0.1"], capsys)
        assert code == 1
        assert not result["feasible"]

    def test_degenerate(self):
        assert run(["invert", "0.5", "0.5", "0.5", "0"]) == 2


class TestSample:
    def test_necessity(self, capsys):
        code, summary = run_json(["sample", "necessity", "--samples", "5", "--seed", "3"], capsys)
        assert code == 0
        assert (summary["suite"], summary["samples"], summary["seed"]) == ("necessity", 5, 3)
        assert summary["violations"] == 0

    def test_config_file(self, test_data, capsys):
        code, summary = run_json(["sample", "marginal", "--config", str(test_data / "config.json")], capsys)
        assert code == 0
        assert (summary["seed"], summary["samples"]) == (7, 20)

    def test_bad_qubits(self):
        assert run(["sample", "k-to-km1", "-n", "4", "--samples", "1"]) == 2

    def test_bad_config(self):
        assert run(["sample", "necessity", "--samples", "0"]) == 2


class TestSurface:
    def test_stdout(self, capsys):
        code = run(["surface", "steiner-convex", "--steps", "3"])
        lines = capsys.readouterr().out.splitlines()
        assert code == 0
        assert lines[0] == "x,y,z,t2,margin"
        assert len(lines) == 28

    def test_parquet(self, test_data, tmp_path):
        path = tmp_path / "surface.parquet"
        assert run(["surface", "achievability", "--grid", str(test_data / "grid.json"), "--output", str(path)]) == 0
        assert len(pd.read_parquet(path)) == 250

    def test_slices(self, capsys):
        assert run(["surface", "assistance-boundary", "--steps", "2", "--slices", "0.5", "-0.5"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 17


class TestCanonical:
    def test_ket(self, test_data, capsys):
        code, report = run_json(["canonical", str(test_data / "w3.json")], capsys)
        assert code == 0
        assert report["residual"] <= 1e-9
        assert [report["tangles"][k] for k in "xyzt"] == pytest.approx([2 / 3, 2 / 3, 2 / 3, 0], abs=1e-9)

    def test_form(self, test_data, capsys):
        code, report = run_json(["canonical", "--form", str(test_data / "acin_pi.json")], capsys)
        assert code == 0
        assert report["residual"] is None
        assert report["certificates"]["branch"] == "pi"
        assert report["certificates"]["square_term"] == pytest.approx(report["certificates"]["lhs"], abs=1e-12)

    def test_not_normalized(self, test_data):
        assert run(["canonical", "--form", str(test_data / "params.json")]) == 2


class TestMonogamy:
    def test_params(self, test_data, capsys):
        code, report = run_json(["monogamy", str(test_data / "params4.json")], capsys)
        assert code == 0
        assert report["n"] == 4
        assert report["max_abs_residual"] <= 1e-9


class TestRoof:
    def test_ghz_pair(self, test_data, capsys):
        code, report = run_json(["roof", str(test_data / "density_ghz_ab.json"), "--grid-points", "181"], capsys)
        assert code == 0
        assert report["rank"] == 2
        assert report["bruteforce"]["convex"] == pytest.approx(0.0, abs=1e-6)
        assert report["formula"]["concave"] == pytest.approx(1.0, abs=1e-9)
