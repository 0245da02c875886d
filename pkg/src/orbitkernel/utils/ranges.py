"""
Parse sweep range specifications.

Accepted forms:
1. A number: "0.5" or 0.5
2. A comma list: "0.25,0.5,1.0"
3. A linspace: "start:stop:count", e.g. "0.25:1.0:4"
4. A JSON list of numbers, or of 3-element points for start sweeps
"""

import numpy as np
import regex as re

from orbitkernel.errors import ConfigError

NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"

LINSPACE_PATTERN = re.compile(rf"^\s*(?P<start>{NUMBER})\s*:\s*(?P<stop>{NUMBER})\s*:\s*(?P<count>\d+)\s*$")
LIST_PATTERN = re.compile(rf"^\s*{NUMBER}(?:\s*,\s*{NUMBER})*\s*$")
KEY_PATTERN = re.compile(r"^[a-z][a-z0-9_]*$")


def parse_range(spec):
    """
    Expand a range specification into a list of floats.

    Args:
        spec: Number, string or list

    Returns:
        List of floats, in the order given

    Raises:
        ConfigError: If the specification is malformed or empty
    """
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return [float(spec)]
    if isinstance(spec, (list, tuple)):
        if not spec:
            raise ConfigError("empty range")
        try:
            return [float(value) for value in spec]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"range entries must be numbers: {spec!r}") from exc
    if not isinstance(spec, str):
        raise ConfigError(f"cannot parse range {spec!r}")

    match = LINSPACE_PATTERN.match(spec)
    if match:
        count = int(match.group("count"))
        if count < 1:
            raise ConfigError(f"linspace count must be positive in {spec!r}")
        start, stop = float(match.group("start")), float(match.group("stop"))
        return [float(value) for value in np.linspace(start, stop, count)]

    if LIST_PATTERN.match(spec):
        return [float(value) for value in re.split(r"\s*,\s*", spec.strip())]

    raise ConfigError(f"cannot parse range {spec!r}")


def parse_points(spec):
    """
    Parse a list of orbit-space points [[q_star, ft1, ft2], ...].

    A single point may be given unwrapped.
    """
    if not isinstance(spec, (list, tuple)) or not spec:
        raise ConfigError(f"expected a list of points, got {spec!r}")
    if all(isinstance(value, (int, float)) for value in spec):
        spec = [spec]
    points = []
    for point in spec:
        if not isinstance(point, (list, tuple)) or len(point) != 3:
            raise ConfigError(f"a point needs three coordinates, got {point!r}")
        points.append(tuple(float(value) for value in point))
    return points


def check_keys(section, allowed, where):
    """
    Reject misspelled or unknown configuration keys.

    Args:
        section: Dict read from the config document
        allowed: Iterable of accepted keys
        where: Section name used in the error message
    """
    allowed = set(allowed)
    for key in section:
        if not KEY_PATTERN.match(key):
            raise ConfigError(f"malformed key {key!r} in {where}")
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")
