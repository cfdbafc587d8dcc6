from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError

PARITIES = ("even", "odd")
REGIONS = ("inner", "outer")
METHODS = ("shooting", "oracle")


@dataclass(frozen=True)
class ProlateProblem:
    """One self-adjoint piece of the prolate operator.

    The operator commutes with the cut-off to ``[-lambda_, lambda_]`` and with
    reflection, so it splits into inner/outer and even/odd problems that are
    solved independently.
    """

    lambda_: float
    parity: str = "even"
    region: str = "inner"

    def __post_init__(self):
        if not (math.isfinite(self.lambda_) and self.lambda_ > 0):
            raise DomainError(f"lambda must be positive and finite, got {self.lambda_}")
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be one of {PARITIES}, got {self.parity!r}")
        if self.region not in REGIONS:
            raise DomainError(f"region must be one of {REGIONS}, got {self.region!r}")


@dataclass(frozen=True)
class EigenvalueRecord:
    """A computed eigenvalue.

    ``index`` counts from the bottom for inner problems and from zero
    downwards for outer negative eigenvalues.  ``residual`` is the absolute
    value of the normalized matching functional at ``mu`` (shooting) or the
    extrapolation error estimate (oracle).  ``label`` distinguishes outer
    eigenvalues: ``"negative"``, ``"replica"`` (coincides with an inner
    eigenvalue) or ``"positive"`` (positive without an inner partner).
    """

    mu: float
    index: int
    residual: float
    method: str = "shooting"
    label: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.index < 0:
            raise DomainError(f"index must be non-negative, got {self.index}")
