import json

import pytest

from salpaudit import cli


def write_config(path, **overrides):
    config = {
        "algorithms": ["rs", "sso", "sso-code", "asso"],
        "objectives": [{"name": "sphere", "dimension": 2, "shift": 100.0}],
        "population_size": 8,
        "iterations": 10,
        "repetitions": 3,
        "base_seed": 7,
    }
    config.update(overrides)
    path.write_text(json.dumps(config))
    return path


@pytest.fixture
def result_dir(tmp_path):
    cfg = write_config(tmp_path / "config.json")
    out = tmp_path / "results"
    assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    return out


class TestRunCommand:
    def test_success_writes_manifest(self, tmp_path):
        cfg = write_config(tmp_path / "config.json")
        out = tmp_path / "out"
        assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["base_seed"] == 7
        assert (out / "sphere_shift100_2d" / "asso.traces.csv").exists()
        assert (out / "sphere_shift100_2d" / "asso.abf.csv").exists()
        assert (out / "sphere_shift100_2d" / "report.json").exists()

    def test_unknown_algorithm_exits_2_naming_it(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "config.json", algorithms=["rs", "megaswarm"])
        assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "megaswarm" in capsys.readouterr().err

    def test_overwrite_guard(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "config.json")
        out = tmp_path / "out"
        assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 4
        assert "manifest exists" in capsys.readouterr().err
        assert cli.main(["run", "--config", str(cfg), "--out", str(out), "--force"]) == 0

    def test_overrides(self, tmp_path):
        cfg = write_config(tmp_path / "config.json")
        out = tmp_path / "out"
        code = cli.main([
            "run", "--config", str(cfg), "--out", str(out),
            "--seed", "99", "--reps", "2", "--set", "iterations=5",
        ])
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["base_seed"] == 99
        assert manifest["config"]["repetitions"] == 2
        assert manifest["config"]["iterations"] == 5

    def test_invalid_json_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli.main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2

    def test_missing_config_file_is_io_error(self, tmp_path):
        assert cli.main(["run", "--config", str(tmp_path / "none.json"),
                         "--out", str(tmp_path / "o")]) == 3

    def test_out_path_collides_with_file_is_io_error(self, tmp_path):
        cfg = write_config(tmp_path / "config.json")
        blocker = tmp_path / "blocked"
        blocker.write_text("")
        assert cli.main(["run", "--config", str(cfg), "--out", str(blocker)]) == 3


class TestReportCommand:
    def test_outputs(self, result_dir, tmp_path):
        out = tmp_path / "report"
        assert cli.main(["report", str(result_dir), "--out", str(out)]) == 0
        report = json.loads((out / "sphere_shift100_2d.report.json").read_text())
        assert len(report["pairs"]) == 6  # C(4, 2)
        svg = (out / "sphere_shift100_2d.abf.svg").read_text()
        assert svg.count("<polyline") == 4
        assert "log_floor" in svg
        box = (out / "sphere_shift100_2d.box.svg").read_text()
        assert box.count('class="box"') == 4
        csv_lines = (out / "sphere_shift100_2d.report.csv").read_text().splitlines()
        assert csv_lines[0].startswith("algorithm,")

    def test_deterministic_bytes(self, result_dir, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert cli.main(["report", str(result_dir), "--out", str(out1)]) == 0
        assert cli.main(["report", str(result_dir), "--out", str(out2)]) == 0
        for name in ("sphere_shift100_2d.report.json", "sphere_shift100_2d.abf.svg",
                     "sphere_shift100_2d.box.svg"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_missing_traces_exit_2(self, tmp_path, capsys):
        assert cli.main(["report", str(tmp_path / "nowhere"), "--out", str(tmp_path / "o")]) == 2
        assert "manifest" in capsys.readouterr().err

    def test_partial_result_dir_exit_2(self, result_dir, tmp_path, capsys):
        (result_dir / "sphere_shift100_2d" / "asso.traces.csv").unlink()
        assert cli.main(["report", str(result_dir), "--out", str(tmp_path / "o")]) == 2
        assert "asso" in capsys.readouterr().err


class TestDynamicsCommand:
    def test_csv_and_svg(self, tmp_path):
        out = tmp_path / "dyn"
        code = cli.main([
            "dynamics", "--preset", "sso-nofood", "--bound", "100", "--record", "10",
            "--iterations", "20", "--population", "12", "--seed", "5", "--out", str(out),
        ])
        assert code == 0
        lines = (out / "dynamics_sso-nofood.csv").read_text().splitlines()
        assert lines[0] == "iteration,member,x0,x1"
        assert len(lines) == 1 + 10 * 12
        svg = (out / "dynamics_sso-nofood.svg").read_text()
        assert 'class="leader"' in svg
        assert ">Start<" in svg
        summary = json.loads((out / "dynamics_sso-nofood.json").read_text())
        assert summary["population_size"] == 12
        assert summary["generator"] == "numpy-pcg64"

    def test_deterministic_bytes(self, tmp_path):
        args = ["dynamics", "--preset", "sso", "--record", "3", "--iterations", "5",
                "--population", "6", "--seed", "1"]
        assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
        assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a" / "dynamics_sso.svg").read_bytes() == \
            (tmp_path / "b" / "dynamics_sso.svg").read_bytes()

    def test_bad_preset_exits_2(self, tmp_path, capsys):
        code = cli.main(["dynamics", "--preset", "rs", "--out", str(tmp_path / "x")])
        assert code == 2
        assert "rs" in capsys.readouterr().err


class TestBounceCommand:
    def test_k7_fraction_is_one(self, tmp_path, capsys):
        out = tmp_path / "bounce"
        assert cli.main(["bounce", "--k", "7", "--seed", "3", "--out", str(out)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["outside_fraction"] == 1.0
        saved = json.loads((out / "bounce.json").read_text())
        assert saved == payload


class TestCompareCommand:
    def test_asso_probe(self, capsys):
        code = cli.main([
            "compare", "--algorithm", "asso", "--objective", "sphere",
            "--shift", "1000", "--seed", "2", "--iterations", "30", "--population", "10",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["max_deviation"] <= 1e-6 * 1000
        assert payload["algorithm_id"] == "asso"
