"""Tests for the geoik command-line interface."""

import csv
import json
import math

import pytest
from typer.testing import CliRunner

from geoik import __version__
from geoik.cli import app
from geoik.commands import batch as batch_command

runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Point the default geometry location at an empty directory."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    monkeypatch.setattr("sys.platform", "linux")


def _geometry(tmp_path, **values):
    doc = {"d1": 3, "d2": 3, "long_mano": 2}
    doc.update(values)
    path = tmp_path / "arm.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


class TestApp:
    def test_version(self):
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_bare_invocation_shows_help(self):
        result = runner.invoke(app, [])
        assert result.exit_code == 0
        assert "solve" in result.output
        assert "sweep" in result.output


class TestSolveCommand:
    def test_worked_example(self, tmp_path):
        result = runner.invoke(app, [
            "solve", "--geometry", _geometry(tmp_path), "--wrist", "3,3,-3", "--elbow-t", "3.14159",
        ])
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        assert doc["status"] == "Solved"
        elbow = doc["solution"]["elbow"]
        assert (elbow["x"], elbow["y"], elbow["z"]) == pytest.approx((2.56, 0.44, -1.5), abs=0.01)
        assert doc["solution"]["joints"]["codo"]["deg"] == pytest.approx(120.0, abs=0.1)

    def test_worked_example_with_tip(self, tmp_path):
        result = runner.invoke(app, [
            "solve", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "--tip", "3,4,-3", "--policy", "mid",
        ])
        assert result.exit_code == 0
        joints = json.loads(result.stdout)["solution"]["joints"]
        assert joints["muneca"]["deg"] == pytest.approx(114.11, abs=0.2)
        assert joints["mano"]["deg"] == pytest.approx(148.40, abs=0.3)

    def test_target_pose(self, tmp_path):
        result = runner.invoke(app, [
            "solve", "-g", _geometry(tmp_path, long_mano=1), "--tip", "3,4,-3",
            "--ang-muneca", str(math.pi / 2), "--ang-mano", str(-math.pi / 2),
        ])
        assert result.exit_code == 0
        wrist = json.loads(result.stdout)["wrist"]
        assert (wrist["x"], wrist["y"], wrist["z"]) == pytest.approx((3, 3, -3), abs=1e-9)

    def test_too_far_exits_2(self, tmp_path):
        result = runner.invoke(app, ["solve", "--geometry", _geometry(tmp_path), "--wrist", "9,0,0"])
        assert result.exit_code == 2
        assert "TooFar" in result.output

    def test_missing_geometry_exits_1(self):
        result = runner.invoke(app, ["solve", "--wrist", "3,3,-3"])
        assert result.exit_code == 1
        assert "--init" in result.output

    def test_invalid_geometry_exits_1(self, tmp_path):
        result = runner.invoke(app, ["solve", "--geometry", _geometry(tmp_path, d1=0), "--wrist", "3,3,-3"])
        assert result.exit_code == 1
        assert "d1 must be > 0" in result.output

    @pytest.mark.parametrize("args", [
        ["--wrist", "1,2"],
        ["--wrist", "a,b,c"],
        ["--tip", "3,4,-3"],
        ["--wrist", "3,3,-3", "--policy", "fixed"],
        ["--wrist", "3,3,-3", "--policy", "mid", "--elbow-t", "1.0"],
        ["--wrist", "3,3,-3", "--policy", "closest"],
        ["--wrist", "3,3,-3", "--elbow-t", "7.0"],
        ["--wrist", "3,3,-3", "--constraints", "ceiling"],
        ["--wrist", "3,3,-3", "--ang-mano", "1.0"],
        [],
    ])
    def test_usage_errors_exit_1(self, tmp_path, args):
        result = runner.invoke(app, ["solve", "--geometry", _geometry(tmp_path)] + args)
        assert result.exit_code == 1

    def test_elbow_outside_body_arc_exits_2(self, tmp_path):
        result = runner.invoke(app, ["solve", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "--elbow-t", "0.2"])
        assert result.exit_code == 2
        assert "PolicyViolation" in result.output

    def test_constraints_none_frees_the_circle(self, tmp_path):
        result = runner.invoke(app, [
            "solve", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "--elbow-t", "0.2", "--constraints", "none",
        ])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["circle"]["feasible_arc"] == [[0.0, pytest.approx(2 * math.pi)]]

    def test_out_file_and_current_pose(self, tmp_path):
        geometry = _geometry(tmp_path)
        first = tmp_path / "first.json"
        result = runner.invoke(app, [
            "solve", "-g", geometry, "--wrist", "3,3,-3", "--elbow-t", "2.0", "--out", str(first),
        ])
        assert result.exit_code == 0
        assert json.loads(first.read_text(encoding="utf-8"))["elbow_t"] == 2.0

        result = runner.invoke(app, [
            "solve", "-g", geometry, "--wrist", "3,3,-3", "--policy", "nearest", "--current", str(first),
        ])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["elbow_t"] == pytest.approx(2.0, abs=1e-6)

    def test_verbose_logs_stages_and_joints(self, tmp_path):
        result = runner.invoke(app, [
            "solve", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "-v", "-o", str(tmp_path / "r.json"),
        ])
        assert result.exit_code == 0
        assert "[6/6]" in result.output
        assert "Joint angles" in result.output

    def test_current_needs_nearest(self, tmp_path):
        result = runner.invoke(app, [
            "solve", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "--current", str(tmp_path / "x.json"),
        ])
        assert result.exit_code == 1

    def test_schema(self):
        result = runner.invoke(app, ["solve", "--schema"])
        assert result.exit_code == 0
        assert "status" in json.loads(result.stdout)["properties"]


class TestBatchCommand:
    def _input(self, tmp_path, lines):
        path = tmp_path / "targets.csv"
        path.write_text("\n".join(["id,wrist_x,wrist_y,wrist_z"] + lines) + "\n", encoding="utf-8")
        return str(path)

    def test_solved_too_far_too_close(self, tmp_path):
        out = tmp_path / "out.csv"
        result = runner.invoke(app, [
            "batch", self._input(tmp_path, ["p1,3,3,-3", "far,9,0,0", "close,0.2,0,0"]),
            "--geometry", _geometry(tmp_path, d2=2.5), "--out", str(out),
        ])
        assert result.exit_code == 0
        rows = _read_csv(out)
        assert [r["id"] for r in rows] == ["p1", "far", "close"]
        assert [r["status"] for r in rows] == ["Solved", "Infeasible", "Infeasible"]
        assert [r["reason"] for r in rows] == ["", "TooFar", "TooClose"]
        assert float(rows[0]["codo_deg"]) == pytest.approx(math.degrees(float(rows[0]["codo_rad"])), abs=1e-9)
        assert rows[1]["codo_rad"] == ""

    def test_malformed_row_does_not_abort(self, tmp_path):
        out = tmp_path / "out.csv"
        result = runner.invoke(app, [
            "batch", self._input(tmp_path, ["a,3,3,-3", "b,abc,1,1", "c,3,3,-3"]),
            "-g", _geometry(tmp_path), "-o", str(out),
        ])
        assert result.exit_code == 0
        rows = _read_csv(out)
        assert [r["status"] for r in rows] == ["Solved", "ParseError", "Solved"]
        assert "wrist_x" in rows[1]["reason"]

    def test_header_only(self, tmp_path):
        out = tmp_path / "out.csv"
        result = runner.invoke(app, ["batch", self._input(tmp_path, []), "-g", _geometry(tmp_path), "-o", str(out)])
        assert result.exit_code == 0
        assert _read_csv(out) == []

    def test_duplicate_ids_are_labels(self, tmp_path):
        out = tmp_path / "out.csv"
        result = runner.invoke(app, [
            "batch", self._input(tmp_path, ["x,3,3,-3", "x,9,0,0"]), "-g", _geometry(tmp_path), "-o", str(out),
        ])
        assert result.exit_code == 0
        assert [r["status"] for r in _read_csv(out)] == ["Solved", "Infeasible"]

    def test_per_row_policy(self, tmp_path):
        path = tmp_path / "targets.csv"
        path.write_text(
            "id,wrist_x,wrist_y,wrist_z,policy,elbow_t\n"
            "fixed,3,3,-3,fixed,2.0\n"
            "mid,3,3,-3,,\n",
            encoding="utf-8",
        )
        out = tmp_path / "out.csv"
        result = runner.invoke(app, ["batch", str(path), "-g", _geometry(tmp_path), "-o", str(out)])
        assert result.exit_code == 0
        rows = _read_csv(out)
        assert float(rows[0]["elbow_t"]) == 2.0
        assert float(rows[1]["elbow_t"]) == pytest.approx(math.pi)

    def test_stdout_output(self, tmp_path):
        result = runner.invoke(app, ["batch", self._input(tmp_path, ["a,3,3,-3"]), "-g", _geometry(tmp_path)])
        assert result.exit_code == 0
        assert "Solved" in result.stdout

    def test_unreadable_file_exits_1(self, tmp_path):
        result = runner.invoke(app, ["batch", str(tmp_path / "missing.csv"), "-g", _geometry(tmp_path)])
        assert result.exit_code == 1

    def test_thousand_targets_with_workers(self, tmp_path, mocker):
        spy = mocker.spy(batch_command, "solve_batch")
        lines = [f"r{i},{3 + (i % 7) * 0.1},3,-3" for i in range(1000)]
        out = tmp_path / "out.csv"
        result = runner.invoke(app, [
            "batch", self._input(tmp_path, lines), "-g", _geometry(tmp_path), "-o", str(out), "--workers", "4",
        ])
        assert result.exit_code == 0
        assert spy.call_count == 1
        assert spy.call_args.args[3] == 4
        rows = _read_csv(out)
        assert len(rows) == 1000
        assert [r["id"] for r in rows] == [f"r{i}" for i in range(1000)]


class TestSweepCommand:
    def test_five_samples(self, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(app, [
            "sweep", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "--tip", "3,4,-3",
            "--samples", "5", "--out", str(out),
        ])
        assert result.exit_code == 0
        rows = _read_csv(out)
        ts = [float(r["elbow_t"]) for r in rows]
        assert ts == pytest.approx([math.pi / 2, 3 * math.pi / 4, math.pi, 5 * math.pi / 4, 3 * math.pi / 2])
        assert float(rows[2]["elbow_x"]) == pytest.approx(2.5607, abs=1e-4)
        assert float(rows[2]["codo_deg"]) == pytest.approx(120.0)
        assert [r["status"] for r in rows] == ["Solved"] * 5
        assert [r["reason"] for r in rows] == [""] * 5

    def test_two_samples_are_the_endpoints(self, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(app, [
            "sweep", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "-n", "2", "-o", str(out),
        ])
        assert result.exit_code == 0
        ts = [float(r["elbow_t"]) for r in _read_csv(out)]
        assert ts == pytest.approx([math.pi / 2, 3 * math.pi / 2])

    def test_one_sample_is_usage_error(self, tmp_path):
        result = runner.invoke(app, ["sweep", "-g", _geometry(tmp_path), "--wrist", "3,3,-3", "-n", "1"])
        assert result.exit_code == 1

    def test_infeasible_exits_2(self, tmp_path):
        result = runner.invoke(app, ["sweep", "-g", _geometry(tmp_path), "--wrist", "9,0,0", "-n", "5"])
        assert result.exit_code == 2


class TestConfigCommand:
    def test_init_then_show_then_solve(self, tmp_path):
        result = runner.invoke(app, ["config", "--init"])
        assert result.exit_code == 0
        assert (tmp_path / "config" / "geoik" / "geometry.json").exists()

        result = runner.invoke(app, ["config", "--show"])
        assert result.exit_code == 0
        assert "long_mano" in result.output

        result = runner.invoke(app, ["solve", "--wrist", "3,3,-3"])
        assert result.exit_code == 0

    def test_init_keeps_existing_file(self, tmp_path):
        runner.invoke(app, ["config", "--init"])
        path = tmp_path / "config" / "geoik" / "geometry.json"
        path.write_text(json.dumps({"d1": 1, "d2": 1, "long_mano": 1}), encoding="utf-8")
        result = runner.invoke(app, ["config", "--init"])
        assert result.exit_code == 0
        assert json.loads(path.read_text(encoding="utf-8"))["d1"] == 1

    def test_show_without_geometry_exits_1(self):
        result = runner.invoke(app, ["config"])
        assert result.exit_code == 1
