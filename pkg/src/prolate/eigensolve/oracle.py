"""Finite-difference oracle for the prolate spectrum.

Independent of the shooting machinery: no Frobenius series, no asymptotic
basis, no ODE integrator.  Both regions are discretized by a vertex-centred
finite-volume scheme on a variable that removes the singular endpoint, and the
resulting symmetric tridiagonal matrices are diagonalized with LAPACK.  The
second-order values from grids ``N, 2N, 4N`` are Richardson-extrapolated.

Inner problem, ``x = lam sin(theta)``, ``theta in [0, pi/2]``:

    -(w xi_theta)_theta + w q xi = mu w xi,        w = lam cos(theta).

Outer problem, ``x = sqrt(lam^2 + t^2)``, ``t >= 0``:

    -(x t xi_t)_t - (t/x) q xi = -mu (t/x) xi,

which is indefinite; it is truncated at a zero ``X`` of the solution that is
admissible at infinity.  That zero is located from the Milne/WKB phase of the
Liouville normal form (independent of the divergent series used by the
shooting method), and the truncation point is iterated to self-consistency
with the eigenvalue it produces.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import linalg

from ..errors import AccuracyError, DomainError
from ..numkit import Tolerances, quad_adaptive
from .problem import EigenvalueRecord, ProlateProblem

_TWO_PI = 2.0 * math.pi
_PHASE_TOL = Tolerances(1e-14, 1e-13, 2000)


def _richardson(values):
    # values from h, h/2, h/4 with error c2 h^2 + c4 h^4
    v1, v2, v4 = values
    r1 = (4 * v2 - v1) / 3
    r2 = (4 * v4 - v2) / 3
    return (16 * r2 - r1) / 15, np.abs(r2 - r1) / 15


# -- inner --------------------------------------------------------------------

def _inner_eigs(lam, parity, N, n_eigs):
    h = 0.5 * math.pi / N
    theta = h * np.arange(N + 1)
    half = np.clip(theta[:-1] + 0.5 * h, 0, 0.5 * math.pi)
    flux = lam * np.cos(half) / h  # w at cell faces / h
    edges = np.concatenate([[0.0], half, [0.5 * math.pi]])
    mass = lam * (np.sin(edges[1:]) - np.sin(edges[:-1]))  # exact integral of w
    x = lam * np.sin(theta)
    diag = np.zeros(N + 1)
    diag[:-1] += flux
    diag[1:] += flux
    diag += mass * (_TWO_PI * lam * x) ** 2
    off = -flux
    if parity == "odd":
        diag, off, mass = diag[1:], off[1:], mass[1:]
    s = 1.0 / np.sqrt(mass)
    d = diag * s * s
    e = off * s[:-1] * s[1:]
    return linalg.eigh_tridiagonal(d, e, select="i", select_range=(0, n_eigs - 1), eigvals_only=True)


# -- outer --------------------------------------------------------------------

def _outer_matrix(lam, T, N):
    # nodes t_i = i h, i = 0..N-1; Dirichlet node at t_N = T
    h = T / N
    t = h * np.arange(N)
    xt = np.sqrt(lam * lam + t * t)
    faces = t + 0.5 * h
    flux = np.sqrt(lam * lam + faces**2) * faces / h
    xf = np.concatenate([[lam], np.sqrt(lam * lam + faces**2)])
    mass = xf[1:] - xf[:-1]  # exact integral of t/x over each dual cell
    diag = np.zeros(N)
    diag += flux
    diag[1:] += flux[:-1]
    off = -flux[:-1]
    # mu (t/x) xi = -(x t xi')' ... written as  K xi - Q xi = -mu M xi,
    # i.e. (Q - K) xi = mu M xi with K the stiffness and Q = M q
    q = (_TWO_PI * lam * xt) ** 2
    s = 1.0 / np.sqrt(mass)
    d = (mass * q - diag) * s * s
    e = -off * s[:-1] * s[1:]
    return d, e


def _liouville_terms(lam, mu):
    # Q = k^2 + R with R = c/P + x^2/P^2, P = x^2 - lam^2; returns R, R', R''
    k2 = (_TWO_PI * lam) ** 2
    c = k2 * lam * lam - mu - 1.0
    l2 = lam * lam

    def terms(x):
        P = x * x - l2
        R = c / P + x * x / (P * P)
        # x^2/P^2 = 1/P + l2/P^2
        dP = 2 * x
        dR = -(c + 1.0) * dP / P**2 - 2 * l2 * dP / P**3
        d2R = (-(c + 1.0) * (2 / P**2 - 2 * dP * dP / P**3)
               - 2 * l2 * (2 / P**3 - 3 * dP * dP / P**4))
        return R, dR, d2R

    return k2, terms


def wkb_phase(lam: float, mu: float, x: float) -> float:
    """Phase ``phi(x)`` of the solution admissible at infinity, ``phi -> 2 pi lam x`` as ``x -> inf``.

    The equation is brought to Liouville normal form ``y'' + Q y = 0`` with
    ``xi = y / sqrt(x^2 - lam^2)``; the local wavenumber is the second-order
    WKB (Milne) approximation ``w = sqrt(Q - Q''/(4Q) + 5 Q'^2/(16 Q^2))`` and
    ``phi(x) = k x - int_x^inf (w - k)``.  The even-parity solution
    ``~ sin(kx)/x`` vanishes where ``phi`` is a multiple of ``pi``; the odd
    one ``~ cos(kx)/x`` at odd multiples of ``pi/2``.
    """
    k2, terms = _liouville_terms(lam, mu)
    k = math.sqrt(k2)

    def excess(s):
        R, dR, d2R = terms(s)
        Q = k2 + R
        w2_minus_k2 = R - d2R / (4 * Q) + 5 * dR * dR / (16 * Q * Q)
        if k2 + w2_minus_k2 <= 0:
            raise DomainError(f"WKB phase undefined at x={s}: turning point beyond the truncation radius")
        # w - k without cancellation
        return w2_minus_k2 / (math.sqrt(k2 + w2_minus_k2) + k)

    return k * x - quad_adaptive(excess, x, math.inf, _PHASE_TOL)


def _phase_target(lam, parity, X0):
    # multiple of pi (even) or odd multiple of pi/2 (odd) nearest below phi(X0) at mu = 0
    offset = 0.0 if parity == "even" else 0.5
    return (math.floor(wkb_phase(lam, 0.0, X0) / math.pi - offset) + offset) * math.pi


def _truncation_point(lam, mu, target, X0):
    # Newton on phi(X) = target; phi' = w is within a few percent of k out here
    k = _TWO_PI * lam
    X = X0
    for _ in range(50):
        step = (wkb_phase(lam, mu, X) - target) / k
        X -= step
        if abs(step) < 1e-14 * X:
            return X
    raise AccuracyError("truncation point iteration did not converge")


def _outer_eigs_window(lam, T, N, lo, hi):
    d, e = _outer_matrix(lam, T, N)
    return linalg.eigh_tridiagonal(d, e, select="v", select_range=(lo, hi), eigvals_only=True)


def _outer_extrapolated(lam, T, N, target):
    # follow the branch nearest to target on the finest grid, then pick the
    # coarse-grid values nearest to it
    width = max(20.0, 0.5 * abs(target))
    vals = []
    for m in (4 * N, 2 * N, N):
        ev = _outer_eigs_window(lam, T, m, target - width, target + width)
        if ev.size == 0:
            raise AccuracyError(f"oracle lost the eigenvalue near {target}")
        target = ev[np.argmin(np.abs(ev - target))]
        vals.append(target)
    return _richardson(np.array(vals[::-1]))


class _OuterTruncation:
    """Truncated outer problem with the radius tied to ``mu`` through the phase condition."""

    def __init__(self, lam, parity, grid_size, X0):
        self.lam = lam
        self.N = grid_size
        self.X0 = X0
        self.target = _phase_target(lam, parity, X0)
        self._X = {}

    def T(self, mu):
        if mu not in self._X:
            self._X[mu] = _truncation_point(self.lam, mu, self.target, self.X0)
        X = self._X[mu]
        return math.sqrt(X * X - self.lam * self.lam)

    def count_above(self, mu):
        # eigenvalues of the finest grid lying above mu; it increases by one each
        # time mu passes an eigenvalue of the untruncated problem going downwards
        d, e = _outer_matrix(self.lam, self.T(mu), 4 * self.N)
        top = float(np.max(d) + 2 * np.max(np.abs(e)))
        ev = linalg.eigh_tridiagonal(d, e, select="v", select_range=(mu, top), eigvals_only=True)
        return ev.size

    def refine(self, mu):
        for _ in range(60):
            new, err = _outer_extrapolated(self.lam, self.T(mu), self.N, mu)
            # eigenvalue rounding, amplified by the extrapolation weights, leaves
            # a wobble near 3e-10 relative; 1e-8 is well clear of it
            if abs(new - mu) <= 1e-8 * max(1.0, abs(mu)):
                return float(new), float(err)
            mu = float(new)
        raise AccuracyError(f"outer oracle fixed point did not settle near {mu}")


def _outer_oracle(lam, parity, grid_size, count, X0):
    prob = _OuterTruncation(lam, parity, grid_size, X0 or 12.0)
    top = -1e-9
    c_top = prob.count_above(top)
    floor = -50.0
    while prob.count_above(floor) - c_top < count + 1:
        floor *= 1.5
    # isolate every jump of the counting function, then refine each one
    seeds = []
    stack = [(floor, top, prob.count_above(floor), c_top)]
    while stack:
        a, b, ca, cb = stack.pop()
        if ca == cb:
            continue
        if ca - cb == 1 and b - a < 0.5:
            seeds.append(0.5 * (a + b))
            continue
        m = 0.5 * (a + b)
        cm = prob.count_above(m)
        stack.extend([(a, m, ca, cm), (m, b, cm, cb)])
    seeds.sort(reverse=True)
    out = [prob.refine(s) for s in seeds[:count]]
    return out


def oracle_matrix_spectrum(problem: ProlateProblem, grid_size: int = 800, count: int = 10,
                           extrapolate: bool = True, X0: float | None = None) -> list[EigenvalueRecord]:
    """Eigenvalues of a finite-difference discretization.

    Parameters
    ----------
    problem : ProlateProblem
    grid_size : int
        Number of cells of the coarsest grid (>= 10).
    count : int
        Number of eigenvalues: the lowest ``count`` for inner problems, the
        ``count`` negative ones nearest zero for outer problems.
    extrapolate : bool
        Richardson-extrapolate grids ``N, 2N, 4N`` (inner only; the outer
        oracle always extrapolates since it is used as a reference).
    X0 : float, optional
        Seed truncation radius for the outer problem.

    Returns
    -------
    list of EigenvalueRecord
        ``method="oracle"``; ``residual`` holds the extrapolation error
        estimate (inner) or 0 when no estimate is available.
    """
    if int(grid_size) != grid_size or grid_size < 10:
        raise DomainError(f"grid_size must be an integer >= 10, got {grid_size}")
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    lam = problem.lambda_
    try:
        if problem.region == "inner":
            if extrapolate:
                vals = [_inner_eigs(lam, problem.parity, m, count) for m in (grid_size, 2 * grid_size, 4 * grid_size)]
                mus, errs = _richardson(np.array(vals))
            else:
                mus = _inner_eigs(lam, problem.parity, grid_size, count)
                errs = np.zeros_like(mus)
            return [EigenvalueRecord(float(m), i, float(r), "oracle") for i, (m, r) in enumerate(zip(mus, errs))]
        found = _outer_oracle(lam, problem.parity, grid_size, count, X0)
    except linalg.LinAlgError as exc:
        raise AccuracyError(f"eigen-decomposition failed: {exc}") from exc
    return [EigenvalueRecord(m, i, r, "oracle", "negative") for i, (m, r) in enumerate(found)]
