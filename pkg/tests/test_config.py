"""Tests for EffdomConfig loading, validation and the fuel override."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from effdom.config import DEFAULT_FUEL, EffdomConfig, load_config, resolve_fuel


def test_load_valid_config(tmp_path: Path) -> None:
    """Load a TOML file with every field set to a non-default value.

    Asserts:
        Every field on the returned EffdomConfig matches what was written.
    """
    config_file = tmp_path / "config.toml"
    config_file.write_text(
        "fuel = 5000\n"
        "seed = 7\n"
        "precision_base = 3\n"
        "audit_budget = 16\n"
        "oracle_cap = 10\n"
        "scott_cap = 4\n"
    )

    config = load_config(config_file)

    assert config.fuel == 5000
    assert config.seed == 7
    assert config.precision_base == 3
    assert config.audit_budget == 16
    assert config.oracle_cap == 10
    assert config.scott_cap == 4


def test_missing_config_uses_defaults() -> None:
    """A nonexistent path yields the documented defaults."""
    config = load_config(Path("/nonexistent/path/config.toml"))

    assert config == EffdomConfig()
    assert config.fuel == DEFAULT_FUEL
    assert config.seed == 1729
    assert config.precision_base == 2


def test_env_fuel_overrides_file(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """EFFDOM_FUEL wins over the file value.

    Args:
        tmp_path: pytest built-in fixture for a temporary directory.
        monkeypatch: pytest fixture for patching environment variables.
    """
    monkeypatch.setenv("EFFDOM_FUEL", "123")
    config_file = tmp_path / "config.toml"
    config_file.write_text("fuel = 5000\n")

    assert load_config(config_file).fuel == 123


def test_resolve_fuel_precedence(monkeypatch: pytest.MonkeyPatch) -> None:
    """explicit > EFFDOM_FUEL > default."""
    assert resolve_fuel() == DEFAULT_FUEL
    monkeypatch.setenv("EFFDOM_FUEL", "99")
    assert resolve_fuel() == 99
    assert resolve_fuel(7) == 7


@pytest.mark.parametrize(
    "body",
    [
        "fuel = 0\n",
        "audit_budget = -1\n",
        "precision_base = 1\n",
        'seed = "abc"\n',
        "scott_cap = 9\noracle_cap = 8\n",
    ],
)
def test_invalid_config_raises(tmp_path: Path, body: str) -> None:
    """Out-of-range or mistyped values raise ValidationError."""
    config_file = tmp_path / "config.toml"
    config_file.write_text(body)

    with pytest.raises(ValidationError):
        load_config(config_file)
