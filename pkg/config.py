"""
config.py
─────────
Environment defaults and the experiment configuration model.

Defaults come from the process environment (a ``.env`` file is honoured via
python-dotenv). ``ExperimentConfig`` is what the CLI builds from its flags,
optionally layered over a YAML file passed with ``--config``.
"""

import os
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, field_validator

from errors import InvalidModulusError, ModrepError

load_dotenv()

DEFAULT_MODULUS      = int(os.getenv("MODREP_MODULUS", "6"))
DEFAULT_SEED         = int(os.getenv("MODREP_SEED", "0"))
DEFAULT_BUDGET       = int(os.getenv("MODREP_SEARCH_BUDGET", "100000"))
LOG_LEVEL            = os.getenv("MODREP_LOG_LEVEL", "INFO").upper()
PROBE_LIMIT          = int(os.getenv("MODREP_PROBE_LIMIT", "9"))      # full n^4 probe sweep up to this n
SYMBOLIC_LIMIT       = int(os.getenv("MODREP_SYMBOLIC_LIMIT", "16"))  # materialize dot_poly up to this n

PRIME_POWER_MESSAGE = (
    "prime-power moduli admit only exact representations: over Z_{p^e} every "
    "alternative representation coincides with the polynomial itself, so no "
    "gadget with t < n exists. Use a modulus with two or more distinct prime "
    "factors, e.g. --m 6."
)


class ExperimentConfig(BaseModel):
    """Parameters of one CLI run. ``seed`` is always set so outputs can record it."""

    command:   str
    m:         int = DEFAULT_MODULUS
    n:         Optional[int] = None
    s:         Optional[int] = None
    t:         Optional[int] = None
    t_goal:    Optional[int] = None
    seed:      int = DEFAULT_SEED
    budget:    int = DEFAULT_BUDGET
    levels:    int = 1
    strategy:  str = "block"
    gadget:    Optional[Path] = None
    input:     Optional[Path] = None
    target:    Optional[Path] = None
    x:         Optional[Path] = None
    y:         Optional[Path] = None
    out:       Optional[Path] = None
    csv:       Optional[Path] = None
    probes:    bool = False
    naive:     bool = False
    format:    str = "text"

    @field_validator("m")
    @classmethod
    def _modulus_at_least_two(cls, v):
        if v < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {v}")
        return v

    @field_validator("levels")
    @classmethod
    def _levels_positive(cls, v):
        if v < 1:
            raise ValueError(f"levels must be >= 1, got {v}")
        return v


def load_yaml_config(path) -> dict:
    """Read a YAML experiment file into a flat dict of option overrides."""
    config_path = Path(path)
    if not config_path.exists():
        raise ModrepError(f"Config file not found: {config_path}")
    with open(config_path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ModrepError(f"Config file {config_path} must hold a mapping")
    # YAML keys may use dashes like the CLI flags
    values = {str(k).replace("-", "_"): v for k, v in data.items()}
    if "block_size" in values:
        values["s"] = values.pop("block_size")
    return values


def build_config(command: str, cli_values: dict, yaml_path=None) -> ExperimentConfig:
    """
    Merge YAML values and explicit CLI values; CLI wins.
    ``cli_values`` must only contain flags the user actually passed (None = unset).
    """
    merged = load_yaml_config(yaml_path) if yaml_path else {}
    merged.update({k: v for k, v in cli_values.items() if v is not None})
    merged["command"] = command
    return ExperimentConfig(**merged)
