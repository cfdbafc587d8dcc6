"""Adaptive integrator for linear Sturm-Liouville equations.

Solves ``-(p xi')' + q_eff xi = mu xi`` written in flux form

    xi' = F / p,      F' = (q_eff - mu) xi,      F = p xi',

with the 8(5,3) Dormand-Prince pair (DOP853) under PI step control.  ``mu``
may be an array: the system for every ``mu`` is then advanced in lock step
with a shared step size, which is how spectral scans evaluate hundreds of
trial eigenvalues in one pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
# Tableau constants only; the stepping, control and dense output live here.
from scipy.integrate._ivp import dop853_coefficients as _dop

from ..errors import IntegrationError
from .tolerances import Tolerances

ODE_TOL = Tolerances(abs_tol=1e-14, rel_tol=1e-12, max_steps=200_000)

_NS = _dop.N_STAGES
_A = _dop.A[:_NS, :_NS]
_B = _dop.B
_C = _dop.C[:_NS]
_E3 = _dop.E3
_E5 = _dop.E5
_A_EXTRA = _dop.A[_NS + 1:]
_C_EXTRA = _dop.C[_NS + 1:]
_D = _dop.D

_SAFETY = 0.9
_ALPHA = 0.117  # 1/8 - 0.2 * beta
_BETA = 0.04
_MIN_FACTOR, _MAX_FACTOR = 0.2, 10.0
_ENVELOPE_DECAY = 0.98


@dataclass
class OdeState:
    """Point on a trajectory: ``y = (value, derivative)``.

    ``y`` has shape ``(2,)`` for a single equation or ``(2, m)`` for a batch.
    """

    x: float
    y: np.ndarray

    def __post_init__(self):
        self.y = np.asarray(self.y)
        if not math.isfinite(self.x):
            raise ValueError("OdeState.x must be finite")
        if self.y.shape[0] != 2:
            raise ValueError("OdeState.y must have leading dimension 2 (value, derivative)")
        if not np.all(np.isfinite(self.y)):
            raise ValueError("OdeState.y has non-finite components")


@dataclass
class _Step:
    x_old: float
    h: float
    z_old: np.ndarray
    F: np.ndarray  # interpolation coefficients, shape (7, *zshape)


@dataclass
class OdeTrajectory:
    """Result of :func:`integrate_ode`.

    ``x``/``y`` hold the requested sample points (or every accepted step when
    none were requested) with ``y[i] = (value, derivative)``.  When dense
    output was requested the trajectory is also callable at any abscissa
    inside the integration range.
    """

    x: np.ndarray
    y: np.ndarray
    final: OdeState
    nsteps: int
    nfev: int
    _p: object = field(repr=False, default=None)
    _steps: list = field(repr=False, default_factory=list)

    def __call__(self, x):
        if not self._steps:
            raise ValueError("trajectory was computed without dense output")
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        starts = np.array([s.x_old for s in self._steps])
        direction = math.copysign(1.0, self._steps[0].h)
        lo = min(starts[0], self.final.x)
        hi = max(starts[0], self.final.x)
        if np.any(xs < lo - 1e-12 * (1 + abs(lo))) or np.any(xs > hi + 1e-12 * (1 + abs(hi))):
            raise ValueError(f"dense output requested outside [{lo}, {hi}]")
        if direction > 0:
            idx = np.clip(np.searchsorted(starts, xs, side="right") - 1, 0, len(starts) - 1)
        else:
            idx = np.clip(np.searchsorted(-starts, -xs, side="right") - 1, 0, len(starts) - 1)
        out = []
        for xi, i in zip(xs, idx):
            z = _interpolate(self._steps[i], xi)
            out.append(np.stack([z[0], z[1] / self._p(xi)]))
        out = np.array(out)
        return out[0] if np.ndim(x) == 0 else out


def _interpolate(step, x):
    s = (x - step.x_old) / step.h
    z = np.zeros_like(step.z_old)
    for i, f in enumerate(reversed(step.F)):
        z = z + f
        z = z * (s if i % 2 == 0 else 1.0 - s)
    return z + step.z_old


def integrate_ode(p, q_eff, mu, x_from: float, x_to: float, init,
                  tol: Tolerances = ODE_TOL, *, t_eval=None, dense: bool = False,
                  first_step: float | None = None, max_step: float = math.inf) -> OdeTrajectory:
    """Integrate ``-(p xi')' + q_eff xi = mu xi`` from ``x_from`` to ``x_to``.

    ``p`` and ``q_eff`` are callables of ``x``; ``[x_from, x_to]`` must not
    contain a zero of ``p``.  ``init`` is an :class:`OdeState` or a
    ``(value, derivative)`` array at ``x_from``, broadcast against ``mu``.

    With ``t_eval`` the steps are clipped to land on each requested abscissa,
    so samples carry full step accuracy; ``dense=True`` additionally keeps
    the 7th-order continuous extension of every step.
    """
    y0 = init.y if isinstance(init, OdeState) else np.asarray(init, dtype=float)
    mu_arr = np.asarray(mu, dtype=float)
    if y0.ndim == 1:
        y0 = y0.reshape((2,) + (1,) * mu_arr.ndim)
    shape = np.broadcast_shapes(y0.shape, (2,) + mu_arr.shape)
    y0 = np.broadcast_to(y0, shape).astype(float)
    if not np.all(np.isfinite(y0)):
        raise IntegrationError("non-finite initial data", last_x=x_from)
    x0, x1 = float(x_from), float(x_to)
    span = x1 - x0
    direction = 1.0 if span >= 0 else -1.0

    def rhs(x, z):
        px = p(x)
        return np.stack([z[1] / px, (q_eff(x) - mu_arr) * z[0]])

    z = np.stack([y0[0], y0[1] * p(x0)])
    samples_x = [] if t_eval is not None else [x0]
    samples_z = [] if t_eval is not None else [z.copy()]
    targets = []
    if t_eval is not None:
        targets = sorted((float(t) for t in np.atleast_1d(t_eval)), key=lambda t: direction * t)
        for t in targets:
            if direction * (t - x0) < -1e-15 * (1 + abs(x0)) or direction * (t - x1) > 1e-15 * (1 + abs(x1)):
                raise ValueError(f"t_eval point {t} outside [{x0}, {x1}]")
        while targets and targets[0] == x0:
            samples_x.append(x0)
            samples_z.append(z.copy())
            targets.pop(0)

    steps = []
    nfev = 0
    nsteps = 0
    if span == 0.0:
        final = OdeState(x0, np.stack([z[0], z[1] / p(x0)]))
        return _finish(samples_x, samples_z, p, final, 0, 0, steps, t_eval)

    atol, rtol = tol.abs_tol, tol.rel_tol
    K = np.empty((_NS + 1,) + z.shape)
    f = rhs(x0, z)
    nfev += 1
    envelope = np.abs(z)
    h = abs(first_step) if first_step else min(abs(span), max_step, 1e-3 * abs(span) + 1e-8)
    err_old = 1e-4
    x = x0
    Kf = K.reshape(_NS + 1, -1)

    while direction * (x1 - x) > 0:
        if nsteps >= tol.max_steps:
            raise IntegrationError(f"max_steps={tol.max_steps} exhausted", last_x=x)
        min_h = 16 * np.finfo(float).eps * max(abs(x), 1.0)
        stop = targets[0] if targets else x1
        h = min(h, max_step)
        landing = False
        if h >= abs(stop - x):
            h = abs(stop - x)
            landing = True
        if h < min_h:
            raise IntegrationError(f"step size underflow at x={x}", last_x=x)

        hs = direction * h
        K[0] = f
        for s in range(1, _NS):
            dz = (_A[s, :s] @ Kf[:s]).reshape(z.shape) * hs
            K[s] = rhs(x + _C[s] * hs, z + dz)
        z_new = z + hs * (_B @ Kf[:_NS]).reshape(z.shape)
        x_new = stop if landing else x + hs
        f_new = rhs(x_new, z_new)
        K[_NS] = f_new
        nfev += _NS

        scale = atol + rtol * np.maximum(envelope, np.maximum(np.abs(z), np.abs(z_new)))
        e5 = np.abs((_E5 @ Kf).reshape(z.shape)) / scale
        e3 = np.abs((_E3 @ Kf).reshape(z.shape)) / scale
        denom = e5 * e5 + 0.01 * e3 * e3
        with np.errstate(invalid="ignore", divide="ignore"):
            el = np.where(denom > 0, h * e5 * e5 / np.sqrt(np.where(denom > 0, denom, 1.0)), 0.0)
        err = float(np.max(el)) if el.size else 0.0
        if not np.isfinite(err) or not np.all(np.isfinite(z_new)):
            if h <= min_h * 2:
                raise IntegrationError(f"solution blew up near x={x}", last_x=x)
            h *= _MIN_FACTOR
            continue

        if err <= 1.0:
            if dense:
                steps.append(_dense_step(rhs, K, x, hs, z, z_new, f, f_new))
                nfev += 3
            x, z, f = x_new, z_new, f_new
            envelope = np.maximum(np.abs(z), _ENVELOPE_DECAY * envelope)
            nsteps += 1
            if landing and targets:
                samples_x.append(x)
                samples_z.append(z.copy())
                targets.pop(0)
                while targets and targets[0] == x:
                    samples_x.append(x)
                    samples_z.append(z.copy())
                    targets.pop(0)
            elif t_eval is None:
                samples_x.append(x)
                samples_z.append(z.copy())
            factor = _SAFETY * (err if err > 0 else 1e-10) ** -_ALPHA * err_old ** _BETA
            # a clipped landing step says nothing about the natural step size
            if not landing:
                h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            err_old = max(err, 1e-4)
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** -_ALPHA)

    final = OdeState(x, np.stack([z[0], z[1] / p(x)]))
    return _finish(samples_x, samples_z, p, final, nsteps, nfev, steps, t_eval)


def _dense_step(rhs, K, x, hs, z, z_new, f_old, f_new):
    Kx = np.empty((_NS + 4,) + z.shape)
    Kx[: _NS + 1] = K
    Kf = Kx.reshape(_NS + 4, -1)
    for s, (a, c) in enumerate(zip(_A_EXTRA, _C_EXTRA), start=_NS + 1):
        dz = (a[:s] @ Kf[:s]).reshape(z.shape) * hs
        Kx[s] = rhs(x + c * hs, z + dz)
    F = np.empty((_dop.INTERPOLATOR_POWER,) + z.shape)
    delta = z_new - z
    F[0] = delta
    F[1] = hs * f_old - delta
    F[2] = 2 * delta - hs * (f_new + f_old)
    F[3:] = hs * (_D @ Kf).reshape((_D.shape[0],) + z.shape)
    return _Step(x, hs, z.copy(), F)


def _finish(samples_x, samples_z, p, final, nsteps, nfev, steps, t_eval):
    xs = np.array(samples_x, dtype=float)
    if samples_z:
        zs = np.array(samples_z)
        px = np.array([p(xv) for xv in xs]).reshape((-1,) + (1,) * (zs.ndim - 2))
        ys = np.stack([zs[:, 0], zs[:, 1] / px], axis=1)
    else:
        ys = np.empty((0,) + final.y.shape)
    return OdeTrajectory(xs, ys, final, nsteps, nfev, p, steps)
