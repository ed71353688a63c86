"""Mobius-transformation geofencing for a unicycle robot."""

import json
import os

from . import _core
from ._core import (
    GeofenceError,
    build_map,
    forward,
    inverse,
    solve_roots,
    to_transformed,
    verify,
    wheel_speeds,
)

__all__ = [
    "GeofenceError",
    "build_map",
    "feasibility",
    "forward",
    "inverse",
    "load_config",
    "simulate",
    "solve_roots",
    "to_transformed",
    "verify",
    "wheel_speeds",
]


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _config_text(config):
    if isinstance(config, (str, os.PathLike)):
        config = load_config(config)
    return json.dumps(config)


def feasibility(config):
    """Initial-condition check for a config dict or JSON file path."""
    return json.loads(_core.feasibility(_config_text(config)))


def simulate(config):
    """Run the closed loop. Returns (summary dict, dict of column lists)."""
    out = _core.simulate(_config_text(config))
    return json.loads(out["summary"]), out["columns"]
