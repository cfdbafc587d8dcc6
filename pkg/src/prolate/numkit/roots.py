from __future__ import annotations

import numpy as np
from scipy import optimize
from scipy.optimize import elementwise

from ..errors import AccuracyError, BracketError
from .tolerances import Tolerances

ROOT_TOL = Tolerances(abs_tol=1e-13, rel_tol=4e-15, max_steps=200)


def brent_root(f, lo: float, hi: float, tol: Tolerances = ROOT_TOL) -> float:
    """Root of ``f`` inside ``[lo, hi]`` by Brent's method.

    Requires ``f(lo) * f(hi) < 0``; an endpoint that is an exact zero is
    returned as is.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if not np.sign(flo) * np.sign(fhi) < 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo:.3g}, {fhi:.3g}")
    root, info = optimize.brentq(
        f, lo, hi, xtol=tol.abs_tol, rtol=max(tol.rel_tol, 4 * np.finfo(float).eps),
        maxiter=tol.max_steps, full_output=True, disp=False,
    )
    if not info.converged:
        raise AccuracyError(f"brent_root did not converge: {info.flag}", estimate=root)
    return float(root)


def bracketed_roots(fvec, lo, hi, tol: Tolerances = ROOT_TOL) -> np.ndarray:
    """Refine many brackets at once.

    ``fvec`` maps an array of abscissae to an array of values, so the expensive
    function is evaluated for every bracket in one batched call per iteration.
    Uses Chandrupatla's bracketing method (Brent's robustness, vectorized).
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.size == 0:
        return np.empty(0)
    res = elementwise.find_root(
        fvec, (lo, hi),
        tolerances=dict(xatol=tol.abs_tol, xrtol=max(tol.rel_tol, 4 * np.finfo(float).eps)),
        maxiter=tol.max_steps,
    )
    bad = ~res.success
    if np.any(res.status[bad] == -1):
        raise BracketError("some brackets carry no sign change")
    if np.any(bad):
        raise AccuracyError(f"{int(bad.sum())} roots did not converge", estimate=res.x)
    return np.asarray(res.x, dtype=float)
