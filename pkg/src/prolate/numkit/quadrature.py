"""Adaptive quadrature on finite and half-infinite intervals.

The interval work is delegated to QUADPACK (``scipy.integrate.quad``); this
module owns the treatment of infinite upper limits and the error contract.
"""

from __future__ import annotations

import math
import warnings

from scipy import integrate

from ..errors import AccuracyError
from .tolerances import DEFAULT_TOL, Tolerances

_SUBINTERVALS = 500


def _quad_piece(f, a, b, tol, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f, a, b, epsabs=tol.abs_tol, epsrel=tol.rel_tol,
            limit=min(_SUBINTERVALS, tol.max_steps), full_output=1, **kw,
        )
    value, err = out[0], out[1]
    return value, err


def _check(value, err, tol, what):
    budget = max(tol.abs_tol, tol.rel_tol * abs(value))
    # QUADPACK error estimates are pessimistic; allow a small factor before failing
    if not math.isfinite(value) or err > 50.0 * budget:
        raise AccuracyError(
            f"{what}: error estimate {err:.3g} exceeds budget {budget:.3g}",
            estimate=value, error=err,
        )


def quad_adaptive(f, a: float, b: float, tol: Tolerances = DEFAULT_TOL, *,
                  envelope=None, weight=None, wvar=None, full_output=False):
    """Integrate ``f`` over ``[a, b]``; ``b`` may be ``math.inf``.

    Infinite upper limits: the integral is split at ``c = max(a, 0) + 1`` and
    the tail ``[c, inf)`` is mapped to ``(0, 1/c]`` by ``y = 1/t``, which turns
    an algebraic ``1/y^2`` tail into a bounded integrand.  For integrands that
    oscillate with a slowly decaying envelope, pass ``envelope(c)`` returning
    an analytic bound on ``|int_c^inf f|``; the interval is then truncated at
    the first ``c`` where that bound meets the tolerance and the bound is
    added to the error.

    ``weight``/``wvar`` forward QUADPACK's oscillatory weights (finite ``b``).

    Returns the value, or ``(value, error)`` with ``full_output=True``.
    Raises :class:`AccuracyError` (carrying the best estimate) when the error
    estimate does not meet ``tol``.
    """
    a = float(a)
    b = float(b)
    if math.isinf(b) and b > 0:
        if envelope is not None:
            c = max(a, 0.0) + 1.0
            while envelope(c) > 0.1 * max(tol.abs_tol, 1e-300):
                c *= 2.0
                if c > 1e12:
                    raise AccuracyError("envelope bound never met the tolerance")
            value, err = _quad_piece(f, a, c, tol)
            err += envelope(c)
        else:
            c = max(a, 0.0) + 1.0
            head, e1 = _quad_piece(f, a, c, tol)
            tail, e2 = _quad_piece(lambda t: f(1.0 / t) / (t * t) if t > 0 else 0.0,
                                   0.0, 1.0 / c, tol)
            value, err = head + tail, e1 + e2
    else:
        kw = {}
        if weight is not None:
            kw = {"weight": weight, "wvar": wvar}
        value, err = _quad_piece(f, a, b, tol, **kw)
    _check(value, err, tol, "quad_adaptive")
    if full_output:
        return value, err
    return value
