"""
Tests for configuration loading, environment overrides and run validation.
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from sinr_region.config import AppConfig, RunConfig, Tolerances, find_config_file, load_config
from sinr_region.constants import ENV_VERIFY_TOL
from sinr_region.exceptions import ConfigError


@pytest.fixture
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """
    Point every config search location at an empty temporary directory.
    """
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(ENV_VERIFY_TOL, raising=False)
    return tmp_path


def test_missing_config_uses_defaults(isolated_config):
    if Path("/etc/sinr-region").exists():
        pytest.skip("system-wide config present")

    assert find_config_file(None) is None
    config = load_config()

    assert config == AppConfig()
    assert config.tolerances.power_shift == 1e-12
    assert config.sweep.points == 181
    assert config.verify.relative_tolerance == 1e-7


def test_explicit_missing_config_is_an_error(isolated_config):
    with pytest.raises(ConfigError, match="does not exist"):
        find_config_file(isolated_config / "nope.yaml")


def test_yaml_values_override_defaults(isolated_config):
    path = isolated_config / "custom.yaml"
    path.write_text(
        "tolerances:\n  power_tol: 1.0e-12\n"
        "sweep:\n  points: 41\n  workers: 4\n"
        "verify:\n  relative_tolerance: 1.0e-6\n",
        encoding="utf-8",
    )

    config = load_config(path)

    assert config.tolerances.power_tol == 1e-12
    assert config.tolerances.residual_tol == Tolerances().residual_tol
    assert config.sweep.points == 41
    assert config.sweep.workers == 4
    assert config.verify.relative_tolerance == 1e-6


def test_config_found_in_xdg_directory(isolated_config):
    directory = isolated_config / "xdg" / "sinr-region"
    directory.mkdir(parents=True)
    (directory / "config.yaml").write_text("sweep:\n  points: 9\n", encoding="utf-8")

    assert load_config().sweep.points == 9


@pytest.mark.parametrize(
    "payload",
    [
        pytest.param("tolerances:\n  unknown: 1\n", id="unknown-key"),
        pytest.param("sweep:\n  points: 1\n", id="too-few-points"),
        pytest.param("- just\n- a list\n", id="not-a-mapping"),
        pytest.param("sweep: [unclosed\n", id="bad-yaml"),
    ],
)
def test_invalid_config_is_rejected(isolated_config, payload):
    path = isolated_config / "bad.yaml"
    path.write_text(payload, encoding="utf-8")

    with pytest.raises(ConfigError):
        load_config(path)


def test_env_overrides_verify_tolerance(isolated_config, monkeypatch):
    monkeypatch.setenv(ENV_VERIFY_TOL, "1e-3")
    assert load_config().verify.relative_tolerance == 1e-3


@pytest.mark.parametrize("value", ["abc", "-1", "0"])
def test_invalid_env_tolerance_is_rejected(isolated_config, monkeypatch, value):
    monkeypatch.setenv(ENV_VERIFY_TOL, value)
    with pytest.raises(ConfigError):
        load_config()


def test_run_config_splits_mu():
    run = RunConfig(command="solve", input=Path("spec.json"), mu="1, 0.5,2")
    assert run.mu == (1.0, 0.5, 2.0)


@pytest.mark.parametrize(
    "options,message",
    [
        pytest.param({"command": "solve"}, "requires --input", id="solve-without-input"),
        pytest.param({"command": "verify"}, "--input or --seed", id="verify-without-source"),
        pytest.param({"command": "solve", "input": "a.json", "mu": "1,-1"}, "nonnegative", id="negative-mu"),
        pytest.param({"command": "solve", "input": "a.json", "mu": "1,inf"}, "finite", id="infinite-mu"),
        pytest.param({"command": "sweep", "input": "a.json", "points": 1}, "greater than or equal", id="one-point"),
        pytest.param({"command": "solve", "input": "a.json", "directions": "d.json"}, "only valid", id="directions"),
        pytest.param({"command": "sweep", "input": "a.json", "mu": "1,1"}, "not --mu", id="sweep-with-mu"),
        pytest.param({"command": "plot", "input": "a.json"}, "command", id="unknown-command"),
    ],
)
def test_run_config_rejects_invalid_invocations(options, message):
    with pytest.raises(ValidationError, match=message):
        RunConfig.model_validate(options)
