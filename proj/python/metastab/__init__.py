"""Metastability analysis of finite energy landscapes."""

from ._core import (
    InputError,
    Landscape,
    ParseError,
    ResourceError,
    absorption_probability,
    bc,
    capacity,
    check_sufficient_conditions,
    communication_height,
    exit_times,
    mean_hitting_time,
    minimal_gates,
    optimal_saddles,
    poly,
    relaxation_analysis,
    relaxation_bruteforce,
    stability_level,
    validate,
)

__version__ = "0.1.0"
