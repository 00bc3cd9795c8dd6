"""Experiment configuration files.

Configs are YAML mappings::

    spec_version: 1            # mandatory schema version
    name: fig1                 # optional label, used in output file names
    family: gaussian           # gaussian | exponential | gamma
    parameters: {alpha: 1, mu1: 0.5, mu2: 1, mu4: 1}
    times: [1.0, 2.0, 3.0, 4.0]
    grid: {x_min: -12, x_max: 24, n: 2000}
    oracle: {enabled: true, n_steps: 3000, n_paths: 0, dt: null, seed: 0}
    output_path: out/fig1

Numbers may be written as fractions in quotes (``"1/2"``).
"""
from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from .solutions import FAMILIES, make_solution

SCHEMA_VERSION = 1
PARAM_NAMES = ("alpha", "mu1", "mu2", "mu3", "mu4")
REQUIRED_PARAMS = {
    "gaussian": ("alpha", "mu1", "mu2", "mu4"),
    "exponential": ("alpha", "mu2", "mu4"),
    "gamma": ("alpha", "mu1", "mu2", "mu3"),
}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _number(value, path: str) -> float:
    try:
        out = float(Fraction(value)) if isinstance(value, str) else float(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(path, f"expected a number, got {value!r}") from None
    if isinstance(value, bool) or not math.isfinite(out):
        raise ConfigError(path, f"expected a finite number, got {value!r}")
    return out


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


@dataclass
class GridSpec:
    x_min: float
    x_max: float
    n: int


@dataclass
class OracleSpec:
    enabled: bool = False
    n_steps: int = 1000
    n_paths: int = 0
    dt: float | None = None
    seed: int = 0


@dataclass
class ExperimentConfig:
    family: str
    parameters: dict
    times: list
    grid: GridSpec
    output_path: str
    oracle: OracleSpec = field(default_factory=OracleSpec)
    name: str = ""

    def solution(self):
        return make_solution(self.family, self.parameters)

    def effective_seed(self) -> int:
        env = os.environ.get("FPE_SEED")
        if env is None or env == "":
            return self.oracle.seed
        try:
            return int(env)
        except ValueError:
            raise ConfigError("FPE_SEED", f"expected an integer, got {env!r}") from None

    def to_dict(self) -> dict:
        out = {"spec_version": SCHEMA_VERSION}
        if self.name:
            out["name"] = self.name
        out.update(
            family=self.family,
            parameters=dict(self.parameters),
            times=list(self.times),
            grid=asdict(self.grid),
            oracle=asdict(self.oracle),
            output_path=self.output_path,
        )
        return out


def config_from_dict(raw) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")
    if "spec_version" not in raw:
        raise ConfigError("spec_version", "missing (must be 1)")
    if raw["spec_version"] != SCHEMA_VERSION:
        raise ConfigError("spec_version", f"unsupported version {raw['spec_version']!r}")
    known = {"spec_version", "name", "family", "parameters", "times", "grid", "oracle", "output_path"}
    for key in raw:
        if key not in known:
            raise ConfigError(str(key), "unknown key")

    family = raw.get("family")
    if family not in FAMILIES:
        raise ConfigError("family", f"must be one of {', '.join(FAMILIES)}, got {family!r}")

    params_raw = raw.get("parameters")
    if not isinstance(params_raw, dict):
        raise ConfigError("parameters", "must be a mapping")
    params = {}
    for key, value in params_raw.items():
        if key not in PARAM_NAMES:
            raise ConfigError(f"parameters.{key}", "unknown parameter")
        params[key] = _number(value, f"parameters.{key}")
    for key in REQUIRED_PARAMS[family]:
        if key not in params:
            raise ConfigError(f"parameters.{key}", f"required for the {family} family")

    times_raw = raw.get("times")
    if not isinstance(times_raw, list) or not times_raw:
        raise ConfigError("times", "must be a non-empty list")
    times = [_number(v, f"times[{i}]") for i, v in enumerate(times_raw)]
    for i, t in enumerate(times):
        if t <= 0:
            raise ConfigError(f"times[{i}]", "must be positive")
        if i and t <= times[i - 1]:
            raise ConfigError(f"times[{i}]", "times must be strictly increasing")

    grid_raw = raw.get("grid")
    if not isinstance(grid_raw, dict):
        raise ConfigError("grid", "must be a mapping with x_min, x_max, n")
    for key in grid_raw:
        if key not in ("x_min", "x_max", "n"):
            raise ConfigError(f"grid.{key}", "unknown key")
    try:
        grid = GridSpec(
            _number(grid_raw["x_min"], "grid.x_min"),
            _number(grid_raw["x_max"], "grid.x_max"),
            _integer(grid_raw["n"], "grid.n"),
        )
    except KeyError as exc:
        raise ConfigError(f"grid.{exc.args[0]}", "missing") from None
    if grid.x_min >= grid.x_max:
        raise ConfigError("grid.x_max", "must exceed grid.x_min")
    if grid.n < 16:
        raise ConfigError("grid.n", "must be at least 16")

    oracle_raw = raw.get("oracle", {}) or {}
    if not isinstance(oracle_raw, dict):
        raise ConfigError("oracle", "must be a mapping")
    oracle = OracleSpec()
    for key, value in oracle_raw.items():
        p = f"oracle.{key}"
        if key == "enabled":
            if not isinstance(value, bool):
                raise ConfigError(p, "must be true or false")
            oracle.enabled = value
        elif key in ("n_steps", "n_paths", "seed"):
            setattr(oracle, key, _integer(value, p))
        elif key == "dt":
            oracle.dt = None if value is None else _number(value, p)
            if oracle.dt is not None and oracle.dt <= 0:
                raise ConfigError(p, "must be positive")
        else:
            raise ConfigError(p, "unknown key")
    if oracle.n_steps < 1:
        raise ConfigError("oracle.n_steps", "must be positive")
    if oracle.n_paths < 0:
        raise ConfigError("oracle.n_paths", "must be non-negative")

    output_path = raw.get("output_path")
    if not isinstance(output_path, str) or not output_path:
        raise ConfigError("output_path", "must be a non-empty string")
    name = raw.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("name", "must be a string")

    cfg = ExperimentConfig(family, params, times, grid, output_path, oracle, name)
    try:
        cfg.solution()
    except ValueError as exc:
        raise ConfigError("parameters", str(exc)) from None
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config ({exc.strerror})") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"not valid YAML: {exc}") from None
    return config_from_dict(raw)


def dump_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(yaml.safe_dump(cfg.to_dict(), sort_keys=False))
