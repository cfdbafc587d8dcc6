"""Eigenvalues of the four pieces (inner/outer, even/odd) of the prolate operator."""

from .oracle import oracle_matrix_spectrum, wkb_phase
from .problem import METHODS, PARITIES, REGIONS, EigenvalueRecord, ProlateProblem
from .shooting import (
    DEFAULT_CONFIG, ShootingConfig, inner_spectrum, matching_coefficient, outer_positive_spectrum,
    outer_spectrum, scan_spectrum,
)

__all__ = [
    "DEFAULT_CONFIG", "METHODS", "PARITIES", "REGIONS", "EigenvalueRecord", "ProlateProblem",
    "ShootingConfig", "inner_spectrum", "matching_coefficient", "oracle_matrix_spectrum",
    "outer_positive_spectrum", "outer_spectrum", "scan_spectrum", "wkb_phase",
]
