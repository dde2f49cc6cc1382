"""Scenario configuration loading and output writers."""

from s2track.data.config import (
    SEED_ENV,
    InitialCondition,
    IntegrationSettings,
    CertificationSettings,
    OutputSettings,
    ScenarioConfig,
    resolve_seed,
    build_config,
    parse_config,
    load_config,
)
from s2track.data.writers import (
    write_text_atomic,
    trajectory_csv,
    write_csv,
    json_text,
    write_json,
)

__all__ = [
    "SEED_ENV",
    "InitialCondition",
    "IntegrationSettings",
    "CertificationSettings",
    "OutputSettings",
    "ScenarioConfig",
    "resolve_seed",
    "build_config",
    "parse_config",
    "load_config",
    "write_text_atomic",
    "trajectory_csv",
    "write_csv",
    "json_text",
    "write_json",
]
