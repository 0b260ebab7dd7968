"""
Test configuration and debug utilities for qsgps.

This module re-exports the shared test helpers and registers custom marks.

Environment variables:
    DEBUG_TESTS_SHOW_INPUT=1: Show the input of decorated tests
    DEBUG_TESTS_SHOW_OUTPUT=1: Show the output of decorated tests
    DEBUG_TESTS_SHOW_ALL=1: Enable all debug output (equivalent to setting all above flags)
"""

# Import utilities from the modular components
from tests.conftest_utils import (
    DebugState,
    format_array,
    format_json,
    format_value,
    is_debug_enabled,
    mirrored_square_scenario,
    truth_on_equator,
    well_spread_satellites,
)

# Import debug decorators
from tests.conftest_sim import debug_sim


def pytest_configure(config):
    """Configure pytest with custom marks."""
    config.addinivalue_line(
        "markers",
        "slow: Monte Carlo tests that take several seconds"
    )


# Export all components
__all__ = [
    # Debug decorators
    'debug_sim',

    # Debug state and utilities
    'DebugState',
    'is_debug_enabled',

    # Formatting utilities
    'format_array',
    'format_json',
    'format_value',

    # Scenario builders
    'mirrored_square_scenario',
    'truth_on_equator',
    'well_spread_satellites',
]
