import json

import pandas as pd
import pytest
from click.testing import CliRunner
from PIL import Image

import cli as cli_module
from FileFormats.Images import read_pgm
from FileFormats.Manifest import read_manifest
from FileFormats.Spectra import read_spectrum
from utils.config import config_hash, load_experiment


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch):
    monkeypatch.setattr(cli_module, "setup_logging", lambda *args, **kwargs: None)


@pytest.fixture
def runner():
    return CliRunner()


def _error_line(output: str) -> dict:
    return json.loads([line for line in output.splitlines() if line.startswith("{")][-1])


def test_selftest_passes(runner):
    result = runner.invoke(cli_module.cli, ["selftest"])
    assert result.exit_code == 0, result.output
    assert "5/5 checks passed" in result.output
    assert "FAIL" not in result.output


@pytest.mark.parametrize("mode", ["direct", "fourier"])
def test_render_pinwheel(runner, tmp_path, mode):
    result = runner.invoke(cli_module.cli, ["render-pinwheel", "--omega-phi", "3", "--n", "32", "--mode", mode,
                                            "--crop", "16", "--out-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    stem = f"pinwheel_{mode}_3_0_-1_32"
    with Image.open(tmp_path / f"{stem}.png") as img:
        assert img.size == (16, 16)
    assert read_pgm(tmp_path / f"{stem}.pgm").shape == (16, 16)
    manifest = read_manifest(tmp_path / f"{stem}.manifest.json")
    assert manifest.command == "render-pinwheel" and manifest.config_hash is None
    assert manifest.parameters["mode"] == mode


def test_render_pinwheel_rejects_odd_grid(runner, tmp_path):
    result = runner.invoke(cli_module.cli, ["render-pinwheel", "--n", "31", "--out-dir", str(tmp_path)])
    assert result.exit_code == 2
    record = _error_line(result.output)
    assert record["error"] == "ConfigError"
    assert record["context"]["key"] == "n"


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(cli_module.cli, ["run", "--config", str(tmp_path / "absent.cfg")])
    assert result.exit_code == 2
    assert _error_line(result.output)["error"] == "ConfigError"


def test_invalid_config_reports_line(runner, tmp_path, tiny_cfg_text):
    path = tmp_path / "bad.cfg"
    path.write_text(tiny_cfg_text.replace("tau = 9.0", "tau = -1"))
    result = runner.invoke(cli_module.cli, ["gen-filter", "--config", str(path), "--out-dir", str(tmp_path)])
    assert result.exit_code == 2
    record = _error_line(result.output)
    assert record["context"]["key"] == "process.tau"
    assert record["context"]["line"] == tiny_cfg_text.splitlines().index("tau = 9.0") + 1


def test_gen_filter_then_run(runner, tmp_path, tiny_cfg_path):
    filter_dir = tmp_path / "filter"
    result = runner.invoke(cli_module.cli, ["gen-filter", "--config", str(tiny_cfg_path), "--threads", "2",
                                            "--out-dir", str(filter_dir)])
    assert result.exit_code == 0, result.output
    filt = read_spectrum(filter_dir / "filter.pwsp")
    assert filt.shape == (4, 4, 4, 4)
    manifest = read_manifest(filter_dir / "filter.manifest.json")
    assert manifest.config_hash == config_hash(load_experiment(tiny_cfg_path))
    assert manifest.seed == 7

    run_dir = tmp_path / "run"
    result = runner.invoke(cli_module.cli, ["run", "--config", str(tiny_cfg_path), "--filter",
                                            str(filter_dir / "filter.pwsp"), "--threads", "1",
                                            "--out-dir", str(run_dir)])
    assert result.exit_code == 0, result.output
    assert read_pgm(run_dir / "completion.pgm").shape == (16, 16)
    assert read_spectrum(run_dir / "forward.pwsp").shape == (16, 16, 4, 4)
    assert read_spectrum(run_dir / "backward.pwsp").shape == (16, 16, 4, 4)
    norms = pd.read_csv(run_dir / "norms.csv")
    assert len(norms) == 2
    assert not (run_dir / "filter.pwsp").exists()
    manifest = read_manifest(run_dir / "manifest.json")
    assert manifest.command == "run"
    assert "norms.csv" in manifest.outputs


def test_run_seed_override_changes_hash(runner, tmp_path, tiny_cfg_path):
    result = runner.invoke(cli_module.cli, ["gen-filter", "--config", str(tiny_cfg_path), "--seed", "11",
                                            "--out-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    manifest = read_manifest(tmp_path / "filter.manifest.json")
    assert manifest.seed == 11
    assert manifest.config_hash != config_hash(load_experiment(tiny_cfg_path))


def test_unwritable_out_dir_reports_json_line(runner, tmp_path):
    blocker = tmp_path / "taken"
    blocker.write_text("not a directory")
    result = runner.invoke(cli_module.cli, ["render-pinwheel", "--n", "16", "--out-dir", str(blocker / "sub")])
    assert result.exit_code == 1
    record = _error_line(result.output)
    assert record["error"] in ("NotADirectoryError", "FileExistsError", "FileNotFoundError")
    assert record["message"]
    assert "taken" in str(record["context"]["path"])


def test_selftest_unexpected_failure_reports_json_line(runner, monkeypatch):
    def broken():
        raise RuntimeError("matrix went sideways")

    monkeypatch.setattr(cli_module, "SELFTESTS", [("broken", broken)])
    result = runner.invoke(cli_module.cli, ["selftest"])
    assert result.exit_code == 1
    record = _error_line(result.output)
    assert record["error"] == "RuntimeError"
    assert record["message"] == "matrix went sideways"
    assert record["context"]["command"] == "selftest"


def test_gen_filter_is_reproducible_for_a_seed(runner, tmp_path, tiny_cfg_path):
    outputs = []
    for threads, name in (("1", "first"), ("3", "second")):
        target = tmp_path / name
        result = runner.invoke(cli_module.cli, ["gen-filter", "--config", str(tiny_cfg_path), "--seed", "5",
                                                "--threads", threads, "--out-dir", str(target)])
        assert result.exit_code == 0, result.output
        outputs.append((target / "filter.pwsp").read_bytes())
    assert outputs[0] == outputs[1]
