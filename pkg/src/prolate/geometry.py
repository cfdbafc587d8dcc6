"""Two-dimensional geometry with metric coefficient ``alpha(x) = -4(x^2 - 2)``.

Horizons sit at ``x = +-sqrt 2``.  Light rays satisfy ``dx/dt = alpha(x)``,
so ``t(x) = (1/(8 sqrt 2)) log((sqrt 2 + x)/(x - sqrt 2)) + c`` for
``x > sqrt 2``, and in the coordinate ``v`` with
``ds^2 = 4(x^2 - 2) dv^2 - 2 dv dx`` the non-trivial rays are
``v(x) = (1/(4 sqrt 2)) log|(x - sqrt 2)/(x + sqrt 2)| + c`` (the others are
``v = const``).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError

HORIZON = math.sqrt(2.0)
KINDS = ("t_of_x", "v_of_x", "horizontal")


def metric_alpha(x):
    """``-4 (x^2 - 2)``."""
    x = np.asarray(x, dtype=float)
    out = -4.0 * (x * x - 2.0)
    return float(out) if out.ndim == 0 else out


def metric_v_coefficients(x):
    """Coefficients ``(g_vv, g_vx)`` of ``ds^2 = g_vv dv^2 + 2 g_vx dv dx``: ``(4(x^2 - 2), -1)``."""
    x = np.asarray(x, dtype=float)
    return 4.0 * (x * x - 2.0), -np.ones_like(x)


@dataclass(frozen=True)
class CurveSamples:
    kind: str
    c: float
    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}")
        if np.any(np.abs(np.abs(self.x) - HORIZON) == 0):
            raise DomainError("samples include a horizon")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("non-finite curve values")

    @property
    def points(self):
        return list(zip(self.x.tolist(), self.values.tolist()))


def t_of_x(x, c=0.0):
    """Light ray ``t(x)``; real for ``|x| > sqrt 2`` (the log takes ``|.|`` inside the horizons)."""
    x = np.asarray(x, dtype=float)
    return np.log(np.abs((HORIZON + x) / (x - HORIZON))) / (8 * HORIZON) + c


def v_of_x(x, c=0.0):
    x = np.asarray(x, dtype=float)
    return np.log(np.abs((x - HORIZON) / (x + HORIZON))) / (4 * HORIZON) + c


def dv_dx(x):
    """``1 / (2 (x^2 - 2))``, the slope of the non-trivial rays in ``(x, v)``."""
    x = np.asarray(x, dtype=float)
    return 1.0 / (2.0 * (x * x - 2.0))


def original_curve(x):
    """The curve ``t = 0`` in the ``(x, v)`` chart, ``v = t - t(x)``: the graph of ``-t(x)``."""
    return -t_of_x(x, 0.0)


def horizontal_ray(v0: float, x_range, samples: int) -> CurveSamples:
    """The light ray ``v = v0``, which crosses the horizons smoothly."""
    lo, hi = sorted(map(float, x_range))
    x = np.linspace(lo, hi, int(samples))
    x = x[np.abs(np.abs(x) - HORIZON) > 0]
    return CurveSamples("horizontal", float(v0), x, np.full_like(x, float(v0)))


def null_curves(c: float, x_range, samples: int) -> tuple[CurveSamples, CurveSamples]:
    """Sample ``t(x)`` and ``v(x)`` on ``samples`` uniform points of ``x_range``.

    Raises
    ------
    DomainError
        If the closed range contains a horizon ``+-sqrt 2`` or ``samples < 2``.
    """
    lo, hi = sorted(map(float, x_range))
    if samples < 2:
        raise DomainError("need at least two samples")
    for h in (-HORIZON, HORIZON):
        if lo <= h <= hi:
            raise DomainError(f"range [{lo}, {hi}] touches the horizon x = {h:+.6f}")
    x = np.linspace(lo, hi, int(samples))
    return (CurveSamples("t_of_x", float(c), x, t_of_x(x, c)),
            CurveSamples("v_of_x", float(c), x, v_of_x(x, c)))


def write_curves_csv(curves: tuple[CurveSamples, CurveSamples], path) -> None:
    """CSV with columns ``x, t, v`` at 17 significant digits."""
    t, v = curves
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "t", "v"])
        for row in zip(t.x, t.values, v.values):
            w.writerow([format(float(r), ".17g") for r in row])
