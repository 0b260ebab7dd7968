"""
Shared utility functions for testing qsgps.

This module contains helpers shared across test modules: JSON and array
formatting, debug state management, and builders for common scenarios.
"""

import os
import json
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import numpy as np

from qsgps.models.geometry import EcefPoint, SatelliteEpoch


def format_json(obj: Any) -> str:
    """Format JSON with nice indentation and sorting."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, default=str)


def format_array(values: Any, precision: int = 6) -> str:
    """Format a numpy array compactly, dropping negligible imaginary parts."""
    values = np.asarray(values)
    if np.iscomplexobj(values) and np.allclose(values.imag, 0.0):
        values = values.real
    return np.array2string(values, precision=precision, suppress_small=True, max_line_width=120)


def format_value(value: Any) -> str:
    """Format a test input or output for display."""
    if hasattr(value, "to_dict"):
        return format_json(value.to_dict())
    if isinstance(value, np.ndarray):
        return format_array(value)
    if isinstance(value, (dict, list, tuple)):
        return format_json(value)
    return str(value)


def is_debug_enabled(flag: str) -> bool:
    """Check if a specific debug flag is enabled.

    Args:
        flag: Debug flag name (e.g., 'DEBUG_TESTS_SHOW_INPUT')

    Returns:
        True if the flag is enabled or DEBUG_TESTS_SHOW_ALL is enabled
    """
    return os.environ.get(flag) == "1" or os.environ.get("DEBUG_TESTS_SHOW_ALL") == "1"


@dataclass
class DebugState:
    """State holder for debug information during test execution."""
    input: Optional[Any] = None
    output: Optional[Any] = None


EARTH_RADIUS_M = 6_371_000.0
ORBIT_RADIUS_M = 26_600_000.0


def truth_on_equator() -> EcefPoint:
    """Receiver on the surface at (6 371 000, 0, 0) m."""
    return EcefPoint(EARTH_RADIUS_M, 0.0, 0.0)


def well_spread_satellites(count: int = 4) -> List[SatelliteEpoch]:
    """
    Fixed satellites on the 26 600 km shell, all above the horizon of
    truth_on_equator(), with good geometry.
    """
    directions = [
        (1.0, 0.0, 0.0),
        (0.8, 0.55, 0.2),
        (0.75, -0.3, 0.55),
        (0.7, -0.2, -0.65),
        (0.85, 0.3, -0.4),
        (0.8, -0.55, 0.1),
    ]
    if count > len(directions):
        raise ValueError(f"At most {len(directions)} fixed satellites, got {count}")
    sats = []
    for index, direction in enumerate(directions[:count]):
        unit = np.asarray(direction) / np.linalg.norm(direction)
        sats.append(SatelliteEpoch(f"S{index + 1}", EcefPoint.from_array(ORBIT_RADIUS_M * unit)))
    return sats


def mirrored_square_scenario() -> Tuple[List[SatelliteEpoch], EcefPoint, EcefPoint]:
    """
    Four satellites on a square in the plane x = 20 000 km and a receiver
    off that plane. The reflection of the receiver through the plane fits
    the same pseudoranges.

    Returns:
        (satellites, truth, mirror image of truth)
    """
    plane_x = 20e6
    corners = [(3e6 + dy, 1e6 + dz) for dy in (-6e6, 6e6) for dz in (-6e6, 6e6)]
    sats = [
        SatelliteEpoch(f"Q{i + 1}", EcefPoint(plane_x, y, z))
        for i, (y, z) in enumerate(corners)
    ]
    truth = truth_on_equator()
    mirror = EcefPoint(2 * plane_x - truth.x, truth.y, truth.z)
    return sats, truth, mirror
