"""Shooting solver for the four pieces of the prolate spectrum.

Outer problems start from the regular Frobenius solution just right of
``x = lam`` and are integrated into the region where the optimally truncated
asymptotic basis ``(S, C)`` is accurate; the eigenvalue condition is the
vanishing of the coefficient of the member excluded by the parity (``C`` for
even, ``S`` for odd).  Inner problems are integrated from ``x = 0`` with
parity data and from ``x = lam`` with the regular solution; the two meet
inside the interval and are compared through their Wronskian.

Every kernel accepts an array of ``mu`` values and integrates them in one
batch, which keeps spectral scans and the bracket refinement vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from ..local_solutions import (
    FROBENIUS_ORDER, SINGULAR_OFFSET, TWO_PI, asymptotic_basis_batch, matching_radius,
    prolate_p, prolate_q, regular_start,
)
from ..numkit import ODE_TOL, ROOT_TOL, Tolerances, bracketed_roots, integrate_ode
from .problem import EigenvalueRecord, ProlateProblem

_N_SAMPLES = 8
_CHUNK = 512


@dataclass(frozen=True)
class ShootingConfig:
    """Knobs of the shooting method.

    ``delta`` is the offset from ``x = lam`` in units of ``lam``, ``order``
    the Frobenius order used there, ``radius_scale`` multiplies the automatic
    matching radius and ``basis_tol`` is the accuracy demanded of the
    asymptotic basis when choosing that radius.
    """

    delta: float = SINGULAR_OFFSET
    order: int = FROBENIUS_ORDER
    radius_scale: float = 1.0
    basis_tol: float = 1e-11
    ode_tol: Tolerances = field(default=ODE_TOL)
    root_tol: Tolerances = field(default=ROOT_TOL)

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise DomainError(f"delta must lie in (0, 0.5), got {self.delta}")
        if self.radius_scale < 1:
            raise DomainError("radius_scale below 1 would leave the trusted matching window")

    def scaled(self, factor: float) -> ShootingConfig:
        """Copy with every tolerance multiplied by ``factor``."""
        return ShootingConfig(self.delta, self.order, self.radius_scale,
                              self.basis_tol * factor, self.ode_tol.scaled(factor),
                              self.root_tol.scaled(factor))


DEFAULT_CONFIG = ShootingConfig()


def _outer_batch(lam, parity, mu, cfg):
    x0, init = regular_start(lam, mu, +1, cfg.delta, cfg.order)
    X = cfg.radius_scale * matching_radius(lam, mu, cfg.basis_tol)
    samples = X + np.arange(_N_SAMPLES) / (_N_SAMPLES * lam)
    traj = integrate_ode(prolate_p(lam), prolate_q(lam), mu, x0, samples[-1], init,
                         cfg.ode_tol, t_eval=samples)
    k = TWO_PI * lam
    # normal equations of the least-squares fit  xi = A S + B C  on values and
    # derivatives/k at every sample point
    G = np.zeros((2, 2) + mu.shape)
    r = np.zeros((2,) + mu.shape)
    for xs, (val, der) in zip(traj.x, traj.y):
        S, dS, C, dC, _ = asymptotic_basis_batch(lam, mu, xs)
        for b1, b2, y in ((S, C, val), (dS / k, dC / k, der / k)):
            G[0, 0] += b1 * b1
            G[0, 1] += b1 * b2
            G[1, 1] += b2 * b2
            r[0] += b1 * y
            r[1] += b2 * y
    det = G[0, 0] * G[1, 1] - G[0, 1] ** 2
    A = (G[1, 1] * r[0] - G[0, 1] * r[1]) / det
    B = (G[0, 0] * r[1] - G[0, 1] * r[0]) / det
    norm = np.hypot(A, B)
    return (B if parity == "even" else A) / norm


def _inner_batch(lam, parity, mu, cfg):
    # Shoot from both ends and meet near the turning point, where neither
    # solution has had room to grow exponentially.
    init = (1.0, 0.0) if parity == "even" else (0.0, 1.0)
    x1, reg = regular_start(lam, mu, -1, cfg.delta, cfg.order)
    turning = math.sqrt(max(float(np.median(mu)), 0.0)) / (TWO_PI * lam)
    xm = min(max(turning, 0.3 * lam), 0.9 * lam)
    p, q = prolate_p(lam), prolate_q(lam)
    left = integrate_ode(p, q, mu, 0.0, xm, init, cfg.ode_tol).final.y
    right = integrate_ode(p, q, mu, x1, xm, reg, cfg.ode_tol).final.y
    pm = p(xm)
    (xi, dxi), (f, df) = left, right
    # Wronskian in flux variables, normalized so it reads as the sine of the
    # angle between the two solution vectors
    wr = xi * (pm * df) - f * (pm * dxi)
    return wr / (np.hypot(xi, pm * dxi) * np.hypot(f, pm * df))


def _matching_batch(problem: ProlateProblem, mu, cfg: ShootingConfig = DEFAULT_CONFIG):
    mu = np.asarray(mu, dtype=float)
    flat = mu.ravel()
    out = np.empty_like(flat)
    kernel = _outer_batch if problem.region == "outer" else _inner_batch
    # chunks of similar |mu| share a matching radius and a step-size sequence
    order = np.argsort(np.abs(flat))
    for start in range(0, flat.size, _CHUNK):
        sel = order[start:start + _CHUNK]
        out[sel] = kernel(problem.lambda_, problem.parity, flat[sel], cfg)
    return out.reshape(mu.shape)


def matching_coefficient(problem: ProlateProblem, mu, cfg: ShootingConfig = DEFAULT_CONFIG):
    """Normalized matching functional; its zeros are the eigenvalues.

    Outer problems: coefficient of the parity-excluded asymptotic solution
    divided by the norm of both coefficients.  Inner problems: Wronskian of
    the parity solution from ``x = 0`` and the regular solution from
    ``x = lam``, taken at an interior meeting point and divided by the norms
    of both state vectors.  Both lie in ``[-1, 1]`` and depend continuously
    on ``mu``.

    ``mu`` may be a scalar or an array (evaluated in one batch).
    """
    out = _matching_batch(problem, mu, cfg)
    return float(out) if np.ndim(mu) == 0 else out


def _signed_sqrt_grid(mu_min, mu_max, steps):
    s = np.linspace(math.copysign(math.sqrt(abs(mu_min)), mu_min),
                    math.copysign(math.sqrt(abs(mu_max)), mu_max), steps)
    return np.sign(s) * s * s


def scan_spectrum(problem: ProlateProblem, mu_min: float, mu_max: float, steps: int,
                  cfg: ShootingConfig = DEFAULT_CONFIG) -> list[EigenvalueRecord]:
    """Eigenvalues inside ``[mu_min, mu_max]`` by sign changes on a grid.

    The grid is uniform in ``sign(mu) sqrt|mu|``, matching the roughly
    uniform spacing of the spectrum in that variable.  Records come back
    sorted by ``mu``; indices are positions within this window.
    """
    if not mu_min < mu_max:
        raise DomainError(f"need mu_min < mu_max, got [{mu_min}, {mu_max}]")
    if int(steps) != steps or steps < 2:
        raise DomainError(f"steps must be an integer >= 2, got {steps}")
    grid = _signed_sqrt_grid(mu_min, mu_max, int(steps))
    vals = _matching_batch(problem, grid, cfg)
    roots = list(grid[vals == 0.0])
    flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if flips.size:
        fn = lambda m: _matching_batch(problem, m, cfg)
        roots.extend(bracketed_roots(fn, grid[flips], grid[flips + 1], cfg.root_tol))
    roots = np.sort(np.asarray(roots, dtype=float))
    if roots.size == 0:
        return []
    res = np.abs(_matching_batch(problem, roots, cfg))
    return [EigenvalueRecord(float(m), i, float(r), "shooting") for i, (m, r) in enumerate(zip(roots, res))]


def _grid_steps(mu_min, mu_max, spacing):
    width = math.copysign(math.sqrt(abs(mu_max)), mu_max) - math.copysign(math.sqrt(abs(mu_min)), mu_min)
    return max(16, int(math.ceil(width / spacing)) + 1)


def inner_spectrum(lam: float, parity: str, n_max: int,
                   cfg: ShootingConfig = DEFAULT_CONFIG) -> list[EigenvalueRecord]:
    """The lowest ``n_max + 1`` eigenvalues of the inner problem of one parity.

    With ``c = 2 pi lam^2`` the ``j``-th eigenvalue (all parities counted)
    lies in ``[j(j+1), j(j+1) + c^2]`` by comparison with the Legendre
    operator, which fixes the scan window.
    """
    if int(n_max) != n_max or n_max < 0:
        raise DomainError(f"n_max must be a non-negative integer, got {n_max}")
    problem = ProlateProblem(lam, parity, "inner")
    j_top = 2 * int(n_max) + (parity == "odd")
    c = TWO_PI * lam * lam
    mu_max = j_top * (j_top + 1) + c * c + 1.0
    # same-parity eigenvalues sit about 2 apart in sqrt(mu); 0.1 resolves them
    recs = scan_spectrum(problem, 0.0, mu_max, _grid_steps(0.0, mu_max, 0.1), cfg)
    if len(recs) < n_max + 1:
        raise DomainError(f"found {len(recs)} eigenvalues below {mu_max}, expected {n_max + 1}")
    return recs[: n_max + 1]


def _outer_negative_window(lam, count):
    from ..semiclassical import sigma

    E = 10.0
    while 2 * sigma(E, lam).exact < 1.15 * count + 6:
        E *= 1.1
    return E * E


def outer_spectrum(lam: float, parity: str, count: int, include_positive: float | None = None,
                   cfg: ShootingConfig = DEFAULT_CONFIG) -> list[EigenvalueRecord]:
    """The ``count`` negative outer eigenvalues closest to zero.

    Records are indexed by decreasing ``mu`` (index 0 is the one nearest to
    zero).  When ``include_positive`` is a number, the positive outer
    eigenvalues up to that value are appended after the negative ones and
    labelled ``"replica"`` when they coincide (rel 1e-6) with an inner
    eigenvalue of the same parity, ``"positive"`` otherwise.
    """
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    problem = ProlateProblem(lam, parity, "outer")
    mu_floor = -_outer_negative_window(lam, count)
    # spacing in sqrt|mu| shrinks slowly (like 1/log); 0.05 is ample below |mu| ~ 1e5
    mu_top = -1e-9
    while True:
        recs = scan_spectrum(problem, mu_floor, mu_top, _grid_steps(mu_floor, mu_top, 0.05), cfg)
        if len(recs) >= count:
            break
        mu_floor *= 1.5
    neg = sorted(recs, key=lambda r: -r.mu)[:count]
    out = [EigenvalueRecord(r.mu, i, r.residual, "shooting", "negative") for i, r in enumerate(neg)]
    if include_positive:
        out.extend(outer_positive_spectrum(lam, parity, float(include_positive), cfg))
    return out


def outer_positive_spectrum(lam: float, parity: str, mu_max: float,
                            cfg: ShootingConfig = DEFAULT_CONFIG) -> list[EigenvalueRecord]:
    """Positive outer eigenvalues in ``(0, mu_max]``, labelled against the inner spectrum."""
    problem = ProlateProblem(lam, parity, "outer")
    recs = scan_spectrum(problem, 1e-9, mu_max, _grid_steps(0.0, mu_max, 0.05), cfg)
    inner = scan_spectrum(ProlateProblem(lam, parity, "inner"), 0.0, mu_max * 1.05 + 10,
                          _grid_steps(0.0, mu_max * 1.05 + 10, 0.1), cfg)
    inner_mu = np.array([r.mu for r in inner])
    out = []
    for i, r in enumerate(recs):
        replica = inner_mu.size and np.min(np.abs(inner_mu - r.mu)) <= 1e-6 * abs(r.mu)
        out.append(EigenvalueRecord(r.mu, i, r.residual, "shooting", "replica" if replica else "positive"))
    return out
