"""Stability regions of two queues under slotted random access with feedback priority."""

from ._core import (
    DEFAULT_SEED,
    FbraError,
    analyze_qbd,
    boundary,
    ds1_steady_state,
    ds3_steady_state,
    optimal_p2,
    oracle_stationary,
    ra_boundary,
    rate_matrix,
    region,
    region_contains,
    simulate,
    spectral_radius,
    sweep,
    td_boundary,
    theorem1_boundary,
    verify,
)

__all__ = [
    "DEFAULT_SEED",
    "FbraError",
    "analyze_qbd",
    "boundary",
    "ds1_steady_state",
    "ds3_steady_state",
    "optimal_p2",
    "oracle_stationary",
    "ra_boundary",
    "rate_matrix",
    "region",
    "region_contains",
    "simulate",
    "spectral_radius",
    "sweep",
    "td_boundary",
    "theorem1_boundary",
    "verify",
]
