"""Command-line interface: products, formats, determinism, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from kgbohm.cli import main
from kgbohm.config import ScenarioConfig, load_config
from kgbohm.scenarios import BUILTIN_SCENARIOS


def write_config(path, **overrides):
    cfg = {
        "name": "test-run",
        "params": {"p0": 3.0, "t_final": 2.0, "dt_out": 0.5},
        "representation": "canonical",
        "outputs": ["density-maps"],
        "table_times": [0.0, 2.0],
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return path


def read_table(path):
    lines = path.read_text().splitlines()
    header = lines[0].split()
    rows = np.array([[float(tok) for tok in line.split()] for line in lines[1:]])
    return header, rows


class TestListAndVersion:
    def test_list_scenarios(self, capsys):
        assert main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        for name in BUILTIN_SCENARIOS:
            assert name in out

    def test_module_entry_point(self):
        res = subprocess.run(
            [sys.executable, "-m", "kgbohm", "list-scenarios"],
            capture_output=True,
            text=True,
        )
        assert res.returncode == 0
        assert "free-trajectories" in res.stdout


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("canonical_density")
    code = main(["run", "canonical-density", "-o", str(out)])
    assert code == 0
    return out


class TestRunDensityScenario:
    def test_writes_two_density_tables(self, run_dir):
        assert (run_dir / "canonical_density_t0.000.dat").exists()
        assert (run_dir / "canonical_density_t2.000.dat").exists()

    def test_table_format_and_roundtrip(self, run_dir):
        header, rows = read_table(run_dir / "canonical_density_t0.000.dat")
        assert header == ["t", "x", "value", "mask"]
        assert rows.shape == (1024, 4)
        assert np.all(rows[:, 0] == 0.0)
        assert np.all(rows[:, 3] == 1.0)
        # 17 significant digits round-trip float64 exactly: the peak value
        # re-read from text equals the binary density peak
        assert float(np.max(rows[:, 2])) <= 0.3989422804014327 * (1 + 1e-12)

    def test_final_table_has_negative_values(self, run_dir):
        _, rows = read_table(run_dir / "canonical_density_t2.000.dat")
        assert float(np.min(rows[:, 2])) < -1e-2

    def test_manifest_and_summary(self, run_dir):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        assert manifest["backend"] in ("numba", "numpy")
        assert manifest["grid_summary"]["n_modes"] == 1024
        assert "canonical_density_t2.000.dat" in manifest["data_checksums"]
        summary = json.loads((run_dir / "summary.json").read_text())
        assert summary["per_representation"]["canonical"]["charge_drift"] < 1e-10
        assert (run_dir / "canonical_density_map.png").exists()


class TestRunTrajectories:
    def test_quick_trajectory_run(self, tmp_path):
        cfg = write_config(
            tmp_path / "traj.json",
            name="quick-traj",
            params={"p0": 0.0, "t_final": 2.0, "dt_out": 0.5},
            representation="uncoupled",
            outputs=["trajectories", "superluminal-report"],
            seeds=8,
            table_times=[0.0, 2.0],
            output_dir=str(tmp_path / "out"),
        )
        assert main(["run", str(cfg)]) == 0
        lines = (tmp_path / "out" / "trajectories.dat").read_text().splitlines()
        assert lines[0] == "trajectory t x v"
        rows = np.array([[float(t) for t in ln.split()] for ln in lines[1:]])
        assert rows.shape == (8 * 5, 4)  # 8 paths, samples at t = 0..2 step 0.5
        assert np.max(np.abs(rows[:, 3])) < 1.0
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["trajectories"]["non_crossing"] is True
        scan = json.loads((tmp_path / "out" / "superluminal_uncoupled.json").read_text())
        assert scan["supported_region"]["cell_count"] == 0

    def test_trajectories_need_uncoupled(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "bad.json",
            representation="canonical",
            outputs=["trajectories"],
        )
        assert main(["run", str(cfg)]) == 2
        assert "uncoupled" in capsys.readouterr().err


class TestDeterminism:
    def test_identical_config_identical_checksums(self, tmp_path):
        cfg = write_config(tmp_path / "det.json", output_dir=str(tmp_path / "out"))
        assert main(["run", str(cfg)]) == 0
        first = json.loads((tmp_path / "out" / "manifest.json").read_text())["data_checksums"]
        assert main(["run", str(cfg)]) == 0
        second = json.loads((tmp_path / "out" / "manifest.json").read_text())["data_checksums"]
        assert first == second


class TestConfigErrors:
    def test_unknown_root_key(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", typo_key=1)
        assert main(["run", str(cfg)]) == 2
        assert "typo_key" in capsys.readouterr().err

    def test_unknown_nested_key(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", params={"p0": 3.0, "sigmaa": 1.0})
        assert main(["run", str(cfg)]) == 2
        assert "sigmaa" in capsys.readouterr().err

    def test_invalid_value(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", params={"n_modes": 100})
        assert main(["run", str(cfg)]) == 2

    def test_not_json(self, tmp_path):
        bad = tmp_path / "c.json"
        bad.write_text("not json at all {")
        assert main(["run", str(bad)]) == 2

    def test_missing_file_or_scenario(self):
        assert main(["run", "no-such-scenario"]) == 2

    def test_unknown_output(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", outputs=["density-mapz"])
        assert main(["run", str(cfg)]) == 2

    def test_config_roundtrip_is_identity(self, tmp_path):
        path = write_config(tmp_path / "c.json")
        cfg = load_config(path)
        snapshot = cfg.to_dict()
        again = ScenarioConfig.from_dict(snapshot)
        assert again.to_dict() == snapshot
        # all defaults are materialized in the snapshot
        assert snapshot["params"]["x_span"] is not None
        assert snapshot["integrator"]["dt"] == 0.01


class TestGuardAbort:
    def test_boundary_contamination_exits_3(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "tight.json",
            params={"p0": 3.0, "sigma": 1.0, "x_span": [-6.0, 6.0], "n_modes": 64,
                    "t_final": 2.0, "dt_out": 0.5},
        )
        assert main(["run", str(cfg)]) == 3
        assert "guard" in capsys.readouterr().err


class TestValidationOutput:
    def test_validation_product_in_run(self, tmp_path):
        out = tmp_path / "val"
        assert main(["run", "validation", "-o", str(out)]) == 0
        text = (out / "validation.txt").read_text()
        assert "[PASS]" in text and "[FAIL]" not in text
        summary = json.loads((out / "summary.json").read_text())
        assert summary["validation_passed"] is True

    def test_map_times_never_exceed_t_final(self, tmp_path):
        cfg = write_config(
            tmp_path / "odd.json",
            params={"p0": 3.0, "t_final": 2.0, "dt_out": 0.3},
            table_times=[0.0, 2.0],
            output_dir=str(tmp_path / "out"),
        )
        from kgbohm.config import load_config as lc

        times = lc(cfg).map_times
        assert max(times) <= 2.0
        assert times[0] == 0.0


class TestValidate:
    def test_validate_passes(self, capsys):
        assert main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out
        assert "[FAIL]" not in out

    def test_detector_tightened_tolerance_fails(self, capsys):
        # fast path and oracle differ at the ~1e-16 level; an impossible
        # tolerance must be reported as a failure (exit 4)
        assert main(["validate", "--oracle-tol", "1e-18"]) == 4
        assert "[FAIL]" in capsys.readouterr().out
