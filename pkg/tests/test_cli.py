import csv
import json
import subprocess
import sys

from roughlab import cli
from roughlab.errors import NumericalError
from roughlab.experiments import EXPERIMENTS, ExperimentResult


def write_config(path, **kwargs):
    path.write_text(json.dumps(kwargs))
    return str(path)


def read_report(prefix):
    with open(f"{prefix}.report.csv", newline="") as handle:
        return list(csv.reader(handle))


class TestListAndVersion:
    def test_list_covers_all_experiments(self, capsys):
        assert cli.main(["list"]) == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
        assert len(lines) >= 14
        names = {line.split()[0] for line in lines}
        assert names == set(EXPERIMENTS)

    def test_version_prints(self, capsys):
        assert cli.main(["version"]) == 0
        assert "roughlab" in capsys.readouterr().out

    def test_console_script_installed(self):
        out = subprocess.run(
            [sys.executable, "-m", "roughlab.cli", "list"], capture_output=True, text=True
        )
        assert out.returncode == 0
        assert "pvar-oracle" in out.stdout


class TestRun:
    def test_successful_run_writes_reports(self, tmp_path):
        prefix = tmp_path / "out" / "t2"
        config = write_config(
            tmp_path / "cfg.json",
            experiment="t2-finite-dim",
            params={"k": 3, "cases": 25},
            seed=7,
            output=str(prefix),
        )
        assert cli.main(["run", config]) == 0
        rows = read_report(prefix)
        assert rows[0] == ["experiment", "param", "lhs", "rhs", "holds", "gap"]
        assert len(rows) == 26
        assert all(row[4] == "true" for row in rows[1:])
        meta = json.loads((tmp_path / "out" / "t2.meta.json").read_text())
        assert meta["all_hold"] is True
        assert meta["config"]["seed"] == 7
        assert "roughlab" in meta["version"]
        assert meta["wall_time_seconds"] >= 0

    def test_malformed_json_exits_2_without_output(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("not json {")
        assert cli.main(["run", str(bad)]) == 2
        assert "malformed JSON" in capsys.readouterr().err
        assert list(tmp_path.glob("*.csv")) == []

    def test_unknown_experiment_suggests_nearest(self, tmp_path, capsys):
        config = write_config(tmp_path / "cfg.json", experiment="pvar-oracel")
        assert cli.main(["run", config]) == 2
        err = capsys.readouterr().err
        assert "pvar-oracle" in err

    def test_bad_parameter_exits_2(self, tmp_path, capsys):
        config = write_config(
            tmp_path / "cfg.json",
            experiment="pvar-oracle",
            params={"max_points": 99},
            output=str(tmp_path / "x"),
        )
        assert cli.main(["run", config]) == 2
        assert "max_points" in capsys.readouterr().err

    def test_property_failure_exits_1(self, tmp_path, capsys):
        # C = 0.5 breaks the quadratic transport inequality at mean shifts
        config = write_config(
            tmp_path / "cfg.json",
            experiment="t2-finite-dim",
            params={"k": 2, "cases": 10, "C": 0.5},
            seed=1,
            output=str(tmp_path / "fail"),
        )
        assert cli.main(["run", config]) == 1
        assert "property failures" in capsys.readouterr().err
        rows = read_report(tmp_path / "fail")
        assert any(row[4] == "false" for row in rows[1:])

    def test_numerical_error_exits_3(self, tmp_path, capsys, monkeypatch):
        def explode(params, seed, threads):
            raise NumericalError("synthetic blow-up")

        monkeypatch.setitem(EXPERIMENTS, "pvar-oracle", (explode, "doc"))
        config = write_config(
            tmp_path / "cfg.json", experiment="pvar-oracle", output=str(tmp_path / "x")
        )
        assert cli.main(["run", config]) == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_extra_files_written(self, tmp_path, monkeypatch):
        def with_extra(params, seed, threads):
            return ExperimentResult(
                columns=("a", "b"),
                rows=[(1, 2.0)],
                all_hold=True,
                extra_files={"quantiles": (("r", "v"), [(0.1, -1.0)])},
            )

        monkeypatch.setitem(EXPERIMENTS, "pvar-oracle", (with_extra, "doc"))
        config = write_config(
            tmp_path / "cfg.json", experiment="pvar-oracle", output=str(tmp_path / "q")
        )
        assert cli.main(["run", config]) == 0
        assert (tmp_path / "q.quantiles.csv").exists()

    def test_invalid_seed_type_rejected(self, tmp_path):
        config = write_config(
            tmp_path / "cfg.json", experiment="pvar-oracle", seed="seven"
        )
        assert cli.main(["run", config]) == 2


class TestDeterminism:
    def test_rerun_byte_identical(self, tmp_path):
        for tag in ("a", "b"):
            config = write_config(
                tmp_path / f"cfg_{tag}.json",
                experiment="lift-consistency",
                params={"cases": 40},
                seed=11,
                output=str(tmp_path / tag),
            )
            assert cli.main(["run", config]) == 0
        assert (tmp_path / "a.report.csv").read_bytes() == (
            tmp_path / "b.report.csv"
        ).read_bytes()

    def test_thread_count_does_not_change_report(self, tmp_path):
        for tag, threads in (("one", 1), ("four", 4)):
            config = write_config(
                tmp_path / f"cfg_{tag}.json",
                experiment="pvar-oracle",
                params={"cases": 40, "max_points": 9},
                seed=5,
                threads=threads,
                output=str(tmp_path / tag),
            )
            assert cli.main(["run", config]) == 0
        assert (tmp_path / "one.report.csv").read_bytes() == (
            tmp_path / "four.report.csv"
        ).read_bytes()

    def test_env_override_for_threads(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LAB_THREADS", "2")
        config = write_config(
            tmp_path / "cfg.json",
            experiment="pvar-oracle",
            params={"cases": 10, "max_points": 8},
            seed=5,
            threads=1,
            output=str(tmp_path / "env"),
        )
        assert cli.main(["run", config]) == 0
        monkeypatch.setenv("LAB_THREADS", "zebra")
        assert cli.main(["run", config]) == 2
