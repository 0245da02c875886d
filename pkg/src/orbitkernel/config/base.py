"""
Run configuration for orbitkernel - one JSON document per run.

Resolution order: DEFAULT_CONFIG < config file < command-line overrides.
The document carries a schema_version; unknown keys are rejected so that
a misspelled parameter never silently falls back to its default.
"""

import copy
import json
import os
from pathlib import Path

from orbitkernel.const import (
    BATCH_SIZE,
    DT,
    EPS_MIN,
    FD_STEP,
    GRID_COURANT,
    GRID_H,
    GRID_MARGIN,
    GRID_N_PHI,
    GRID_WIDTH_CELLS,
    MAX_HARMONIC,
    QUAD_POINTS,
    SCHEMA_VERSION,
)
from orbitkernel.errors import ConfigError
from orbitkernel.modules.generators.fields import FDScheme
from orbitkernel.modules.kernels.grid import GridSpec
from orbitkernel.modules.kernels.query import Box, KernelQuery
from orbitkernel.modules.sde.params import SimParams
from orbitkernel.utils.ranges import check_keys, parse_points, parse_range

COMMANDS = ("geometry-check", "generator-check", "sde-check", "verify-relation", "sweep")
FORMATS = ("csv", "json")

# Default scenario: lambda = 1, m = 1, V = 0, start (1, 0.5, 0),
# box around (1.2, 0.3, 0.2) with half-widths 0.15, t = 0.5, 10^6 paths
DEFAULT_CONFIG = {
    "schema_version": SCHEMA_VERSION,
    "command": "verify-relation",
    "sim": {
        "mu2kappa": 1.0,
        "mass_m": 1.0,
        "dt": DT,
        "t_total": 0.5,
        "eps_min": EPS_MIN,
        "seed": 20240917,
        "n_paths": 1_000_000,
        "potential": {"c1": 0.0, "c2": 0.0},
        "batch_size": BATCH_SIZE,
    },
    "query": {
        "start": [1.0, 0.5, 0.0],
        "box_center": [1.2, 0.3, 0.2],
        "half_widths": [0.15, 0.15, 0.15],
        "t": 0.5,
        "quad_points": QUAD_POINTS,
    },
    "fd": {"step": FD_STEP},
    "grid": {
        "enabled": False,
        "h": GRID_H,
        "q_max": None,
        "f_radius": None,
        "n_phi": GRID_N_PHI,
        "margin": GRID_MARGIN,
        "width_cells": GRID_WIDTH_CELLS,
        "courant": GRID_COURANT,
    },
    "sweep": {
        "t": [0.25, 0.5, 1.0],
        "mu2kappa": [1.0],
        "start": [[1.0, 0.5, 0.0]],
    },
    "checks": {
        "n_points": 1000,
        "seed": 12345,
        "fault": None,
        "field_points": 100,
        "harmonics": [-2, -1, 0, 1, 2],
        "sde_paths": 100_000,
        "sde_t": 0.25,
    },
    "negative_control": True,
    "output_path": None,
    "format": "json",
}

FAULTS = (None, "flip-connection")


def _merge(base, updates, where="config"):
    check_keys(updates, base.keys(), where)
    merged = copy.deepcopy(base)
    for key, value in updates.items():
        if isinstance(base[key], dict) and key not in ("potential",):
            if not isinstance(value, dict):
                raise ConfigError(f"{where}.{key} must be an object")
            merged[key] = _merge(base[key], value, f"{where}.{key}")
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _load(path):
    try:
        with open(path, encoding="utf-8") as handle:
            document = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return document


class RunConfig:
    """
    Resolved configuration of one orbitkernel run.

    Every section is validated on construction; the typed views
    (sim, query, fd, grid) are built once and exposed read-only.
    """

    def __init__(self, document=None):
        document = document or {}
        version = document.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")
        config = _merge(DEFAULT_CONFIG, document)

        if config["command"] not in COMMANDS:
            raise ConfigError(f"unknown command {config['command']!r}, expected one of {COMMANDS}")
        if config["format"] not in FORMATS:
            raise ConfigError(f"unknown format {config['format']!r}, expected csv or json")
        if config["checks"]["fault"] not in FAULTS:
            raise ConfigError(f"unknown fault {config['checks']['fault']!r}")
        harmonics = [int(n) for n in config["checks"]["harmonics"]]
        if any(abs(n) > MAX_HARMONIC for n in harmonics):
            raise ConfigError(f"harmonics are limited to |n| <= {MAX_HARMONIC}")
        self._check_output_path(config["output_path"])

        self._config = config
        self._sim = SimParams.from_dict(config["sim"])
        self._fd = FDScheme(float(config["fd"]["step"]))
        self._query = self._build_query(config["query"], self._sim)
        grid = dict(config["grid"])
        self._grid_enabled = bool(grid.pop("enabled"))
        self._grid = GridSpec(**grid)
        self._sweep = {
            "t": parse_range(config["sweep"]["t"]),
            "mu2kappa": parse_range(config["sweep"]["mu2kappa"]),
            "start": parse_points(config["sweep"]["start"]),
        }

    @staticmethod
    def _check_output_path(path):
        if path is None:
            return
        parent = Path(path).resolve().parent
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            raise ConfigError(f"output directory {parent} is not writable")

    @staticmethod
    def _build_query(section, sim):
        try:
            return KernelQuery(
                start=tuple(float(v) for v in section["start"]),
                box=Box(section["box_center"], section["half_widths"]),
                t=float(section["t"]),
                params=sim,
                quad_points=int(section["quad_points"]),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid query: {exc}") from exc

    @property
    def command(self):
        return self._config["command"]

    @property
    def sim(self):
        """SimParams of the run."""
        return self._sim

    @property
    def query(self):
        """KernelQuery built from the query section and sim."""
        return self._query

    @property
    def fd(self):
        return self._fd

    @property
    def grid(self):
        """GridSpec when the grid cross-check is enabled, else None."""
        return self._grid if self._grid_enabled else None

    @property
    def grid_spec(self):
        return self._grid

    @property
    def sweep(self):
        """Expanded sweep lists: t, mu2kappa and start points."""
        return self._sweep

    @property
    def checks(self):
        return copy.deepcopy(self._config["checks"])

    @property
    def negative_control(self):
        return bool(self._config["negative_control"])

    @property
    def output_path(self):
        return self._config["output_path"]

    @property
    def format(self):
        return self._config["format"]

    def to_dict(self):
        """The fully resolved document, as embedded in reports."""
        return copy.deepcopy(self._config)

    def with_overrides(self, **overrides):
        """
        A new RunConfig with command-line values applied.

        Args:
            command, seed, output_path, format: None leaves the value unchanged

        Returns:
            RunConfig
        """
        document = self.to_dict()
        if overrides.get("command") is not None:
            document["command"] = overrides["command"]
        if overrides.get("seed") is not None:
            document["sim"]["seed"] = int(overrides["seed"])
            document["checks"]["seed"] = int(overrides["seed"])
        if overrides.get("output_path") is not None:
            document["output_path"] = str(overrides["output_path"])
        if overrides.get("format") is not None:
            document["format"] = overrides["format"]
        return RunConfig(document)

    def __repr__(self):
        return f"RunConfig({self.command!r})"


def get_config(source=None, **overrides):
    """
    Get a RunConfig from a file path, a dict or an existing RunConfig.

    Args:
        source: Path to a JSON document, a dict, a RunConfig or None for defaults
        overrides: Command-line values (command, seed, output_path, format)

    Returns:
        RunConfig. An existing RunConfig without overrides is returned unchanged.

    Raises:
        ConfigError: On unreadable, malformed or out-of-range configuration
    """
    if isinstance(source, RunConfig):
        config = source
    elif source is None:
        config = RunConfig()
    elif isinstance(source, dict):
        config = RunConfig(source)
    else:
        config = RunConfig(_load(source))

    if any(value is not None for value in overrides.values()):
        return config.with_overrides(**overrides)
    return config
