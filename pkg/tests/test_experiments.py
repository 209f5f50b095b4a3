import json

import pytest

from roughlab import cli
from roughlab.experiments import EXPERIMENTS

# Small but valid parameter sets: every registered experiment must be
# accepted by the runner and produce a report.  The rde-shift association
# is a statistical property that needs volume, so its smoke run may
# legitimately exit 1; everything else must pass outright.
SMOKE_CONFIGS = {
    "pvar-oracle": ({"cases": 30, "max_points": 9}, {0}),
    "lift-consistency": ({"cases": 30}, {0}),
    "translate-consistency": ({"cases": 20}, {0}),
    "nalpha-tails": ({"trials": 10_000, "n": 64, "quantile_lo": 0.55, "quantile_dump": True}, {0}),
    "additive-lipschitz": ({"trials": 40, "n": 64}, {0}),
    "sobolev-ratio": ({"trials": 5, "n": 64}, {0}),
    "rde-convergence": ({"n": 1024}, {0}),
    "rde-shift": ({"trials": 200, "n": 64}, {0, 1}),
    "t2-finite-dim": ({"k": 3, "C": 2.0, "cases": 100}, {0}),
    "t2-shift-path": ({"n": 65, "trials": 10}, {0}),
    "pushforward": ({"k": 2, "trials": 2, "n": 300}, {0}),
    "metric-axioms": ({"triples": 4}, {0}),
    "empirical-concentration": ({"k": 2, "n_grid": [8, 32], "trials": 60}, {0}),
    "fernique": ({"trials": 10_000, "n": 64, "functional": "running_max"}, {0}),
}


def test_every_registered_experiment_has_a_smoke_config():
    assert set(SMOKE_CONFIGS) == set(EXPERIMENTS)


@pytest.mark.parametrize("name", sorted(SMOKE_CONFIGS))
def test_experiment_runs_and_reports(name, tmp_path):
    params, allowed = SMOKE_CONFIGS[name]
    prefix = tmp_path / name
    config = tmp_path / f"{name}.json"
    config.write_text(
        json.dumps(
            {"experiment": name, "params": params, "seed": 7, "output": str(prefix)}
        )
    )
    status = cli.main(["run", str(config)])
    assert status in allowed
    report = prefix.parent / f"{name}.report.csv"
    assert report.exists()
    header = report.read_text().splitlines()[0]
    assert "," in header
    meta = json.loads((prefix.parent / f"{name}.meta.json").read_text())
    assert meta["config"]["experiment"] == name


def test_t2_config_from_documentation(tmp_path):
    # the documented example: k=3, C=2, 100 cases, seed 7 -> exit 0 and
    # one hundred holds=true rows
    prefix = tmp_path / "doc"
    config = tmp_path / "doc.json"
    config.write_text(
        json.dumps(
            {
                "experiment": "t2-finite-dim",
                "params": {"k": 3, "C": 2, "cases": 100},
                "seed": 7,
                "output": str(prefix),
            }
        )
    )
    assert cli.main(["run", str(config)]) == 0
    lines = (tmp_path / "doc.report.csv").read_text().splitlines()
    assert len(lines) == 101
    assert all(line.split(",")[4] == "true" for line in lines[1:])


def test_nalpha_quantile_dump_contents(tmp_path):
    prefix = tmp_path / "dump"
    config = tmp_path / "dump.json"
    config.write_text(
        json.dumps(
            {
                "experiment": "nalpha-tails",
                "params": {"trials": 10_000, "n": 64, "quantile_lo": 0.55, "quantile_dump": True},
                "seed": 7,
                "output": str(prefix),
            }
        )
    )
    assert cli.main(["run", str(config)]) == 0
    lines = (tmp_path / "dump.quantiles.csv").read_text().splitlines()
    assert lines[0] == "r,log_survival,fit"
    assert len(lines) > 3
