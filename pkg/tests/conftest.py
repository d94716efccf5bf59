"""Shared test fixtures for the effdom test suite."""

import random

import pytest

from effdom.config import FUEL_ENV_VAR, EffdomConfig
from effdom.domains import cantor_domain, interval_domain, unit_interval_domain

PUBLISHED_SEED = 1729


@pytest.fixture(autouse=True)
def no_fuel_override(monkeypatch):
    """Keep a host-level EFFDOM_FUEL from leaking into step-count assertions."""
    monkeypatch.delenv(FUEL_ENV_VAR, raising=False)


@pytest.fixture
def rng() -> random.Random:
    """Random source seeded with the published seed."""
    return random.Random(PUBLISHED_SEED)


@pytest.fixture
def cantor():
    return cantor_domain()


@pytest.fixture
def unit():
    return unit_interval_domain()


@pytest.fixture
def interval01():
    return interval_domain(0, 1)


@pytest.fixture
def default_config(monkeypatch):
    """Pin the CLI to the default configuration.

    Patches the loader the Typer callback calls so a config file on the
    host cannot change command output.

    Returns:
        EffdomConfig: The configuration every command sees.
    """
    config = EffdomConfig()
    monkeypatch.setattr("effdom.cli.load_config", lambda path=None: config)
    return config
