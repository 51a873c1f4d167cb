"""CLI subcommands: argument handling, exit codes, deterministic outputs."""

import json

import pytest

from incidence_lab.cli import main
from incidence_lab.predicates import edge_count, instance_from_json

CIRCLE_IDEAL = "dim=2\nvariety_dim=1\n1 * x1^2 + 1 * x2^2 - 1\n"

POINTS_1D = "\n".join(f"{v}/7" for v in (-95, -61, -34, -8, 3, 47, 81, 120)) + "\n"

LINES = "\n".join(
    ["line 1 1 0", "line 1 -1 0", "line 1 2 -3", "line 0 1 -2", "circle 0 0 9"]
) + "\n"


def run(*argv):
    return main(list(argv))


class TestGen:
    def test_writes_instance_file(self, tmp_path):
        out = tmp_path / "inst.json"
        assert run("gen", "--name", "st_grid", "--N", "3", "--out", str(out)) == 0
        inst = instance_from_json(out.read_text())
        assert (inst.m, inst.n) == (54, 27)
        assert edge_count(inst) == 81

    def test_stdout_when_no_out(self, capsys):
        assert run("gen", "--name", "st_grid", "--N", "2") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["format"] == "semialg_graph/v1"

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            run("gen", "--name", "hyperplane_dual", "--m", "6", "--n", "5",
                "--seed", "9", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_generator_rejected(self, capsys):
        with pytest.raises(SystemExit):
            run("gen", "--name", "mystery")


class TestCountAndKkkfree:
    @pytest.fixture()
    def grid_instance(self, tmp_path):
        path = tmp_path / "grid.json"
        run("gen", "--name", "st_grid", "--N", "3", "--out", str(path))
        return str(path)

    def test_count_prints_edge_count(self, grid_instance, capsys):
        assert run("count", "--instance", grid_instance) == 0
        assert capsys.readouterr().out.strip() == "81"

    def test_count_budget_exhaustion_is_exit_2(self, grid_instance, capsys):
        code = run("count", "--instance", grid_instance, "--pair-budget", "10")
        assert code == 2
        assert "undecided" in capsys.readouterr().out

    def test_kkkfree_clean_instance(self, grid_instance, capsys):
        assert run("kkkfree", "--instance", grid_instance, "--k", "2") == 0
        assert "yes" in capsys.readouterr().out

    def test_kkkfree_violation_is_exit_1(self, tmp_path, capsys):
        path = tmp_path / "grid22.json"
        run("gen", "--name", "unit_grid", "--N", "2", "--out", str(path))
        code = run("kkkfree", "--instance", str(path), "--k", "2")
        assert code == 1
        out = capsys.readouterr().out
        assert "no" in out and "vertices" in out


class TestHilbert:
    @pytest.fixture()
    def ideal_file(self, tmp_path):
        path = tmp_path / "circle.ideal"
        path.write_text(CIRCLE_IDEAL)
        return str(path)

    def test_values_match_closed_form(self, ideal_file, capsys):
        assert run("hilbert", "--ideal", ideal_file, "--m", "0", "--m", "1", "--m", "5") == 0
        lines = capsys.readouterr().out.splitlines()
        # plane curve of degree 2: h(m) = 2m + 1 once m >= 1
        assert lines == ["h(0) = 1", "h(1) = 3", "h(5) = 11"]

    def test_fit_reports_dimension_and_leading(self, ideal_file, capsys):
        assert run("hilbert", "--ideal", ideal_file, "--fit", "2", "8") == 0
        out = capsys.readouterr().out
        assert "degree 1" in out
        assert "leading coefficient 2" in out

    def test_too_short_fit_window_is_exit_2(self, ideal_file, capsys):
        assert run("hilbert", "--ideal", ideal_file, "--fit", "2", "3") == 2
        assert "no stable difference order" in capsys.readouterr().out


class TestPartition:
    def test_report_fields_and_exit(self, tmp_path):
        points = tmp_path / "pts.txt"
        points.write_text(POINTS_1D)
        out = tmp_path / "part.json"
        code = run("partition", "--points", str(points), "--r", "4",
                   "--auto-refine", "--out", str(out))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["schema"] == "incidence-partition/v1"
        assert doc["m"] == 8
        assert doc["within_cap"] is True
        assert doc["max_component_count"] <= doc["count_cap"] == 2
        assert doc["polynomial"]
        assert len(doc["per_round_bisector_degrees"]) == doc["rounds"]
        assert {"c1", "c_d", "dprime"} <= set(doc["envelope"])
        total = sum(int(size) * mult for size, mult in doc["component_histogram"].items())
        assert total <= 8

    def test_rerun_is_bit_identical(self, tmp_path):
        points = tmp_path / "pts.txt"
        points.write_text(POINTS_1D)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            run("partition", "--points", str(points), "--r", "2",
                "--auto-refine", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_empty_points_file_rejected(self, tmp_path):
        points = tmp_path / "pts.txt"
        points.write_text("# nothing here\n")
        with pytest.raises(SystemExit, match="no points"):
            run("partition", "--points", str(points), "--r", "2")


class TestCutting:
    def test_report_shows_default_and_override(self, tmp_path):
        curves = tmp_path / "curves.txt"
        curves.write_text(LINES)
        out = tmp_path / "cut.json"
        assert run("cutting", "--curves", str(curves), "--r", "2", "--out", str(out)) == 0
        doc = json.loads(out.read_text())
        assert doc["schema"] == "incidence-cutting/v1"
        assert doc["curves"] == 5
        assert doc["accepted"] is True
        assert doc["sample_size_default"] == doc["sample_size"]
        assert doc["acceptance_factor"] == "8"
        assert doc["threshold"] == "20"
        override = tmp_path / "cut2.json"
        assert run("cutting", "--curves", str(curves), "--r", "2",
                   "--sample-size", "3", "--out", str(override)) == 0
        doc2 = json.loads(override.read_text())
        assert doc2["sample_size"] == 3
        assert doc2["sample_size_default"] == doc["sample_size_default"]

    def test_bad_curve_line_names_location(self, tmp_path):
        curves = tmp_path / "curves.txt"
        curves.write_text("line 1 1\n")
        with pytest.raises(SystemExit, match="curves.txt:1"):
            run("cutting", "--curves", str(curves), "--r", "2")

    def test_rerun_is_bit_identical(self, tmp_path):
        curves = tmp_path / "curves.txt"
        curves.write_text(LINES)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            run("cutting", "--curves", str(curves), "--r", "3", "--seed", "11",
                "--out", str(path))
        assert a.read_bytes() == b.read_bytes()


class TestSweepFitVerify:
    def sweep_files(self, tmp_path, tag, **extra):
        files = {
            "csv": tmp_path / f"{tag}.csv",
            "json": tmp_path / f"{tag}.json",
            "dat": tmp_path / f"{tag}.dat",
        }
        argv = ["sweep", "--generator", "st_grid", "--sizes", "2,3,4,5",
                "--bounds", "kst,planar",
                "--csv", str(files["csv"]), "--json", str(files["json"]),
                "--dat", str(files["dat"])]
        for key, value in extra.items():
            argv += [key, value]
        assert main(argv) == 0
        return files

    def test_outputs_are_bit_identical_across_reruns(self, tmp_path):
        first = self.sweep_files(tmp_path, "a")
        second = self.sweep_files(tmp_path, "b")
        for key in ("csv", "json", "dat"):
            assert first[key].read_bytes() == second[key].read_bytes()

    def test_fit_against_target(self, tmp_path, capsys):
        files = self.sweep_files(tmp_path, "fit")
        assert run("fit", "--report", str(files["json"]),
                   "--target", "1.3333333333333333", "--tolerance", "0.06") == 0
        assert "pass" in capsys.readouterr().out
        assert run("fit", "--report", str(files["json"]),
                   "--target", "2.0", "--tolerance", "0.01") == 1

    def test_verify_pass_fail_and_fitted(self, tmp_path, capsys):
        files = self.sweep_files(tmp_path, "verify")
        assert run("verify", "--report", str(files["json"]), "--constant", "4") == 0
        capsys.readouterr()
        assert run("verify", "--report", str(files["json"]), "--constant", "1/1000") == 1
        assert "verdict: fail" in capsys.readouterr().out
        assert run("verify", "--report", str(files["json"]), "--fit-constant") == 0
        out = capsys.readouterr().out
        assert "fitted constant" in out and "verdict: pass" in out

    def test_undecided_rows_give_exit_2(self, tmp_path, capsys):
        report = tmp_path / "tiny.json"
        assert main(["sweep", "--generator", "st_grid", "--sizes", "2,3",
                     "--bounds", "planar", "--pair-budget", "20",
                     "--json", str(report)]) == 0
        assert run("verify", "--report", str(report), "--constant", "4") == 2
        assert "verdict: undecided" in capsys.readouterr().out

    def test_hypothesis_failure_is_not_bound_failure(self, tmp_path, capsys):
        report = tmp_path / "planted.json"
        assert main(["sweep", "--generator", "unit_grid", "--sizes", "2",
                     "--bounds", "kst", "--json", str(report)]) == 0
        assert run("verify", "--report", str(report), "--constant", "1000000") == 0
        out = capsys.readouterr().out
        assert "hypothesis failed" in out
        assert "verdict: pass" in out

    def test_aborting_generator_is_exit_1(self, tmp_path, capsys):
        code = main(["sweep", "--generator", "unit_r4", "--sizes", "4,7",
                     "--k", "4", "--bounds", "unit-r4",
                     "--json", str(tmp_path / "abort.json")])
        assert code == 1
        assert "aborted: size 7" in capsys.readouterr().err
