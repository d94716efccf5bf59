"""Configuration loading and validation."""

import os
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pydantic import BaseModel, field_validator, model_validator


DEFAULT_CONFIG_PATH = Path.home() / ".config" / "effdom" / "config.toml"

DEFAULT_FUEL = 10_000_000

FUEL_ENV_VAR = "EFFDOM_FUEL"


class EffdomConfig(BaseModel):
    """Runtime configuration.

    Attributes:
        fuel: Micro-step ceiling for a single evaluation.
        seed: Seed for randomized property checks.
        precision_base: Audit row n is held to tolerance precision_base**-n.
        audit_budget: Emissions searched for joint bounds in directedness audits.
        oracle_cap: Largest finite carrier the way-below oracle accepts.
        scott_cap: Largest finite carrier ``scott_opens`` accepts.
    """

    fuel: int = DEFAULT_FUEL
    seed: int = 1729
    precision_base: int = 2
    audit_budget: int = 64
    oracle_cap: int = 12
    scott_cap: int = 5

    @field_validator("fuel", "audit_budget", "oracle_cap", "scott_cap")
    @classmethod
    def must_be_positive(cls, v: int) -> int:
        """Reject zero and negative limits.

        Args:
            v: Raw value.

        Returns:
            int: The value unchanged.
        """
        if v <= 0:
            raise ValueError(f"must be positive, got {v}")
        return v

    @field_validator("precision_base")
    @classmethod
    def base_above_one(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"precision base must be at least 2, got {v}")
        return v

    @model_validator(mode="after")
    def caps_ordered(self) -> "EffdomConfig":
        """Scott-open enumeration never admits carriers the oracle refuses."""
        if self.scott_cap > self.oracle_cap:
            raise ValueError("scott_cap must not exceed oracle_cap")
        return self


def _fuel_from_env() -> int | None:
    raw = os.environ.get(FUEL_ENV_VAR)
    if raw is None or not raw.strip():
        return None
    return int(raw)


def load_config(path: Path | None = None) -> EffdomConfig:
    """Load configuration from TOML, then apply ``EFFDOM_FUEL``.

    Args:
        path: Config file. Defaults to ~/.config/effdom/config.toml.

    Returns:
        EffdomConfig: Validated configuration; defaults when the file is missing.

    Raises:
        pydantic.ValidationError: If the file or environment holds invalid values.
    """
    config_path = path or DEFAULT_CONFIG_PATH

    data: dict = {}
    if config_path.exists():
        with open(config_path, "rb") as f:
            data = tomllib.load(f)

    env_fuel = _fuel_from_env()
    if env_fuel is not None:
        data["fuel"] = env_fuel

    return EffdomConfig(**data)


def resolve_fuel(explicit: int | None = None) -> int:
    """Fuel ceiling: explicit argument, else ``EFFDOM_FUEL``, else the default."""
    if explicit is not None:
        return explicit
    env_fuel = _fuel_from_env()
    return env_fuel if env_fuel is not None else DEFAULT_FUEL
