import csv
import json

import numpy as np
import pytest

from flywheel_opt import __version__, default_config_dict, evaluate_design, load_config
from flywheel_opt.cli import (
    CONVERGENCE_CSV_HEADER,
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    PROFILE_CSV_HEADER,
    STRESS_CSV_HEADER,
    main,
)
from flywheel_opt.config import config_digest
from flywheel_opt.errors import ConfigError

CONST_X = ",".join(["0.02"] * 8)


def write_config(tmp_path, name="cfg.json", mutate=None):
    data = default_config_dict()
    if mutate:
        mutate(data)
    path = tmp_path / name
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return path


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], [[float(v) for v in row] for row in rows[1:]]


class TestInitConfig:
    def test_writes_loadable_defaults(self, tmp_path, spec):
        target = tmp_path / "defaults.json"
        assert main(["init-config", str(target)]) == EXIT_OK
        loaded = load_config(target)
        assert loaded.spec == spec
        assert loaded.step_size == 0.01
        assert loaded.problem.population_size == 1000
        assert loaded.problem.penalty_constant == 1e8
        assert loaded.problem.max_stall_generations == 50
        assert loaded.problem.function_tolerance == 1e-6


class TestConfigLoading:
    def test_empty_object_uses_defaults(self, tmp_path, spec):
        path = tmp_path / "empty.json"
        path.write_text("{}\n", encoding="utf-8")
        loaded = load_config(path)
        assert loaded.spec == spec

    def test_unit_conversions(self, tmp_path):
        path = write_config(tmp_path)
        loaded = load_config(path)
        assert loaded.spec.allowable_stress == 6.4e6      # from N/mm^2
        assert loaded.spec.elastic_modulus == 210e9       # from GPa

    def test_malformed_json_reports_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"material": {,}}\n', encoding="utf-8")
        with pytest.raises(ConfigError, match=r"line 1"):
            load_config(path)

    def test_unknown_section_rejected(self, tmp_path):
        path = write_config(tmp_path, mutate=lambda d: d.update(extra={}))
        with pytest.raises(ConfigError, match="extra"):
            load_config(path)

    def test_unknown_field_rejected(self, tmp_path):
        path = write_config(
            tmp_path, mutate=lambda d: d["design"].update(spokes=4))
        with pytest.raises(ConfigError, match=r"spokes"):
            load_config(path)

    def test_bad_type_names_field(self, tmp_path):
        path = write_config(
            tmp_path, mutate=lambda d: d["material"].update(density_kg_m3="heavy"))
        with pytest.raises(ConfigError, match=r"material\.density_kg_m3"):
            load_config(path)

    def test_invalid_geometry_rejected(self, tmp_path):
        path = write_config(
            tmp_path, mutate=lambda d: d["design"].update(outer_radius_m=0.01))
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bound_list_accepted(self, tmp_path):
        path = write_config(
            tmp_path,
            mutate=lambda d: d["optimizer"].update(lower_bounds_m=[0.01] * 8))
        loaded = load_config(path)
        assert loaded.problem.lower_bounds.shape == (8,)

    def test_digest_matches_file_bytes(self, tmp_path):
        path = write_config(tmp_path)
        loaded = load_config(path)
        assert loaded.digest == config_digest(path.read_bytes())


class TestEvaluateCommand:
    def test_reports_summary(self, tmp_path, capsys, spec):
        path = write_config(tmp_path)
        assert main(["evaluate", "--config", str(path), "--x", CONST_X]) == EXIT_OK
        out = capsys.readouterr().out
        ev = evaluate_design(np.full(8, 0.02), spec)
        assert f"{ev.mass:.6f} kg" in out
        assert f"{ev.kinetic_energy:.6f} J" in out
        assert f"{ev.max_stress / 1e6:.6f} N/mm^2" in out
        assert "feasible:            no" in out

    def test_out_of_bounds_warns_but_evaluates(self, tmp_path, capsys):
        path = write_config(tmp_path)
        x = ",".join(["0.002"] * 8)  # below the optimizer lower bound
        assert main(["evaluate", "--config", str(path), "--x", x]) == EXIT_OK
        captured = capsys.readouterr()
        assert "warning" in captured.err
        assert "kinetic energy" in captured.out

    @pytest.mark.parametrize("bad_x", ["", "0.02,0.02", "a,b,c,d,e,f,g,h"])
    def test_bad_design_vector_is_usage_error(self, tmp_path, bad_x):
        path = write_config(tmp_path)
        with pytest.raises(SystemExit) as err:
            main(["evaluate", "--config", str(path), "--x", bad_x])
        assert err.value.code == 2

    def test_missing_config_is_config_error(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        code = main(["evaluate", "--config", str(missing), "--x", CONST_X])
        assert code == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_malformed_config_exit_code(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("not json", encoding="utf-8")
        code = main(["evaluate", "--config", str(path), "--x", CONST_X])
        assert code == EXIT_CONFIG


class TestAnalyzeCommand:
    def test_writes_stress_csv(self, tmp_path, spec):
        path = write_config(tmp_path)
        csv_path = tmp_path / "field.csv"
        code = main(["analyze", "--config", str(path), "--x", CONST_X,
                     "--csv", str(csv_path)])
        assert code == EXIT_OK
        header, rows = read_csv(csv_path)
        assert header == STRESS_CSV_HEADER
        assert len(rows) == 501  # span 5 at step 0.01
        first, last = rows[0], rows[-1]
        assert first[0] == 0.0 and last[0] == 5.0
        assert first[1] == pytest.approx(spec.inner_radius)
        assert last[1] == pytest.approx(spec.outer_radius)
        # free boundaries carry no radial stress
        assert first[4] == 0.0 and last[4] == 0.0

    def test_constant_profile_tangential_stress_decreases(self, tmp_path):
        path = write_config(tmp_path)
        csv_path = tmp_path / "field.csv"
        main(["analyze", "--config", str(path), "--x", CONST_X, "--csv", str(csv_path)])
        _, rows = read_csv(csv_path)
        sigma_theta = np.array([row[5] for row in rows])
        assert np.all(np.diff(sigma_theta) < 0.0)

    def test_optional_svg_plot(self, tmp_path):
        path = write_config(tmp_path)
        svg = tmp_path / "field.svg"
        code = main(["analyze", "--config", str(path), "--x", CONST_X,
                     "--csv", str(tmp_path / "f.csv"), "--svg", str(svg)])
        assert code == EXIT_OK
        assert svg.stat().st_size > 0
        assert svg.read_bytes().lstrip().startswith(b"<?xml")

    def test_incompatible_step_size_is_numerical_error(self, tmp_path, capsys):
        path = write_config(
            tmp_path, mutate=lambda d: d["solver"].update(step_size=0.013))
        code = main(["analyze", "--config", str(path), "--x", CONST_X,
                     "--csv", str(tmp_path / "f.csv")])
        assert code == EXIT_NUMERICAL
        assert "error" in capsys.readouterr().err


class TestOptimizeCommand:
    @pytest.fixture()
    def run_dir(self, tmp_path, small_config):
        out = tmp_path / "out"
        code = main(["optimize", "--config", str(small_config),
                     "--seed", "9", "--out", str(out)])
        assert code == EXIT_OK
        return out

    def test_all_outputs_exist(self, run_dir):
        for name in ("summary.json", "convergence.csv", "profile.csv",
                     "stress.csv", "convergence.png", "profile.png",
                     "stress.png", "manifest.json"):
            assert (run_dir / name).is_file(), name

    def test_manifest_contents(self, run_dir, small_config):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        assert manifest["tool_version"] == __version__
        assert manifest["config_digest"] == config_digest(small_config.read_bytes())
        assert manifest["seed"] == 9
        assert "created_utc" in manifest
        listed = set(manifest["outputs"])
        present = {p.name for p in run_dir.iterdir()}
        assert listed == present

    def test_convergence_history_never_worsens(self, run_dir):
        header, rows = read_csv(run_dir / "convergence.csv")
        assert header == CONVERGENCE_CSV_HEADER
        best = np.array([row[1] for row in rows])
        assert np.all(np.diff(best) <= 0.0)
        iterations = [row[0] for row in rows]
        assert iterations == list(range(len(rows)))

    def test_profile_spans_the_radii_and_mirrors(self, run_dir):
        header, rows = read_csv(run_dir / "profile.csv")
        assert header == PROFILE_CSV_HEADER
        assert rows[0][1] == pytest.approx(0.06)
        assert rows[-1][1] == pytest.approx(0.5)
        for row in rows[:: len(rows) // 10]:
            assert row[3] == -row[2]

    def test_stress_csv_header(self, run_dir):
        header, _ = read_csv(run_dir / "stress.csv")
        assert header == STRESS_CSV_HEADER

    def test_summary_round_trips_through_evaluate(self, run_dir, small_config):
        summary = json.loads((run_dir / "summary.json").read_text())
        loaded = load_config(small_config)
        ev = evaluate_design(np.array(summary["best_x_m"]), loaded.spec, loaded.step_size)
        assert summary["mass_kg"] == ev.mass
        assert summary["kinetic_energy_j"] == ev.kinetic_energy
        assert summary["max_von_mises_pa"] == ev.max_stress
        assert summary["g1_kg"] == ev.g1
        assert summary["g2_pa"] == ev.g2
        assert summary["feasible"] == ev.feasible
        assert summary["seed"] == 9

    def test_rerun_same_seed_is_bit_identical(self, run_dir, tmp_path, small_config):
        again = tmp_path / "again"
        code = main(["optimize", "--config", str(small_config),
                     "--seed", "9", "--out", str(again)])
        assert code == EXIT_OK
        assert (again / "summary.json").read_bytes() == (run_dir / "summary.json").read_bytes()
        assert (again / "convergence.csv").read_bytes() == \
            (run_dir / "convergence.csv").read_bytes()

    def test_config_seed_used_when_not_overridden(self, tmp_path, small_config):
        out = tmp_path / "cfgseed"
        assert main(["optimize", "--config", str(small_config), "--out", str(out)]) == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary["seed"] == 5

    def test_thread_env_var_does_not_change_results(self, run_dir, tmp_path,
                                                    small_config, monkeypatch):
        monkeypatch.setenv("FLYWHEEL_THREADS", "3")
        out = tmp_path / "threaded"
        code = main(["optimize", "--config", str(small_config),
                     "--seed", "9", "--out", str(out)])
        assert code == EXIT_OK
        assert (out / "summary.json").read_bytes() == (run_dir / "summary.json").read_bytes()

    def test_csv_rows_newline_terminated_with_dot_decimals(self, run_dir):
        raw = (run_dir / "convergence.csv").read_text(encoding="utf-8")
        assert raw.endswith("\n")
        assert "," in raw and ";" not in raw
