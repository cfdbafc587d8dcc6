"""Riccati solutions, Darboux factorization and the Dirac spectrum.

On ``(lam, inf)`` write ``P(x) = x^2 - lam^2`` and ``V(x) = 4 pi^2 lam^2 x^2``;
then ``L = d/dx P d/dx + V`` is the prolate operator.  For a solution ``u`` of
``Lu = 0`` without zeros,

    w = P^{1/4} (P^{1/4} u)' / u = sqrt(P) u'/u + x / (2 sqrt(P))

solves the Riccati equation

    sqrt(P) w' + w^2 = -V - x^2 / (4P) + 1/2,

and with ``(grad f) = sqrt(P) f'`` and ``U f = P^{1/4} f``

    U* (grad + w)(grad - w) U = L,     U* (grad - w)(grad + w) U = L + 2 grad(w).

Complex combinations ``u = u1 + z u2`` with ``Im z != 0`` never vanish, which
gives the family ``w_z``.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .eigensolve.problem import EigenvalueRecord
from .local_solutions import SINGULAR_OFFSET, prolate_p, prolate_q, regular_start
from .numkit import ODE_TOL, integrate_ode

_TWO_PI = 2.0 * math.pi

# central first-derivative stencil of order 8
_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


@dataclass(frozen=True)
class ZeroModeBasis:
    """Real solutions ``u1`` (regular at ``lam``) and ``u2`` of ``Lu = 0`` on ``[lam + delta, x_max]``.

    ``u2`` starts with value 0 and unit flux ``P u2' = 1``, so the Wronskian
    ``P (u1' u2 - u2' u1)`` equals ``-u1(lam + delta)``, close to -1, and is
    then made orthogonal to ``u1`` in ``L^2`` of the interval (a change of
    basis that leaves the Wronskian alone).
    """

    lambda_: float
    x_min: float
    x_max: float
    _traj: object = field(repr=False)
    _mix: float = field(repr=False, default=0.0)

    def __call__(self, x):
        """``(u1, u1', u2, u2')`` at ``x`` (scalar or array)."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x_min) or np.any(x > self.x_max):
            raise DomainError(f"zero modes available on [{self.x_min}, {self.x_max}]")
        y = self._traj(x.ravel()).reshape(x.shape + (2, 2))  # (value/derivative, solution)
        u1, du1 = y[..., 0, 0], y[..., 1, 0]
        u2 = y[..., 0, 1] - self._mix * u1
        du2 = y[..., 1, 1] - self._mix * du1
        return u1, du1, u2, du2

    def wronskian(self, x):
        u1, du1, u2, du2 = self(x)
        x = np.asarray(x, dtype=float)
        return (x * x - self.lambda_**2) * (du1 * u2 - du2 * u1)


@functools.lru_cache(maxsize=16)
def zero_mode_basis(lam: float, x_max: float, delta: float = SINGULAR_OFFSET) -> ZeroModeBasis:
    """Integrate the two zero modes from ``lam (1 + delta)`` to ``x_max``."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not x_max > lam * (1 + delta):
        raise DomainError(f"x_max must exceed lambda (1 + delta), got {x_max}")
    x0, reg = regular_start(lam, 0.0, +1, delta)
    P0 = x0 * x0 - lam * lam
    init = np.array([[reg[0], 0.0], [reg[1], 1.0 / P0]])
    traj = integrate_ode(prolate_p(lam), prolate_q(lam), np.zeros(2), x0, x_max, init,
                         ODE_TOL, dense=True)
    # Gram step: remove the u1 component of u2 (L^2 on a uniform sample)
    y = traj(np.linspace(x0, x_max, 2001))
    mix = float(np.dot(y[:, 0, 0], y[:, 0, 1]) / np.dot(y[:, 0, 0], y[:, 0, 0]))
    return ZeroModeBasis(float(lam), x0, float(x_max), traj, mix)


def _basis_for(lam, x):
    top = float(np.max(x))
    return zero_mode_basis(float(lam), float(max(10.0, math.ceil(top) + 1.0)))


def _check_z(z):
    z = complex(z)
    if z.imag == 0:
        raise DomainError("z must have non-zero imaginary part: real combinations of the zero modes vanish somewhere")
    return z


@dataclass
class RiccatiSolution:
    """``w_z`` on ``(lam, x_max]`` built from ``u = u1 + z u2``."""

    lambda_: float
    z: complex
    basis: ZeroModeBasis = field(repr=False)

    def __post_init__(self):
        self.z = _check_z(self.z)

    def _parts(self, x):
        x = np.asarray(x, dtype=float)
        u1, du1, u2, du2 = self.basis(x)
        u = u1 + self.z * u2
        du = du1 + self.z * du2
        P = x * x - self.lambda_**2
        return x, P, u, du

    def __call__(self, x):
        x, P, u, du = self._parts(x)
        sP = np.sqrt(P)
        return sP * du / u + x / (2 * sP)

    def derivative(self, x):
        """``w'`` from the quotient rule with ``u''`` eliminated through ``Lu = 0``."""
        x, P, u, du = self._parts(x)
        lam = self.lambda_
        V = (_TWO_PI * lam * x) ** 2
        ddu = -(2 * x * du + V * u) / P
        r = du / u
        dr = ddu / u - r * r
        sP = np.sqrt(P)
        return x / sP * r + sP * dr - lam * lam / (2 * P * sP)


def riccati_solution(lam: float, z: complex, x_max: float = 10.0) -> RiccatiSolution:
    """:class:`RiccatiSolution` valid up to ``x_max``."""
    return RiccatiSolution(float(lam), z, _basis_for(lam, [x_max]))


def riccati_w(lam: float, z: complex, x):
    """``w_z(x)`` for ``x > lam`` (scalar or array)."""
    z = _check_z(z)
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= lam):
        raise DomainError("w_z is defined for x > lambda")
    sol = RiccatiSolution(float(lam), z, _basis_for(lam, x_arr))
    out = sol(x_arr)
    return complex(out) if np.ndim(x) == 0 else out


def _riccati_rhs(lam, x):
    P = x * x - lam * lam
    return -(_TWO_PI * lam * x) ** 2 - x * x / (4 * P) + 0.5


def riccati_residual(lam: float, z: complex, grid) -> float:
    """``sup |sqrt(P) w' + w^2 - rhs|`` over ``grid`` with the analytic ``w'``."""
    z = _check_z(z)
    x = np.asarray(grid, dtype=float)
    if np.any(x <= lam):
        raise DomainError("grid must lie in (lambda, inf)")
    sol = RiccatiSolution(float(lam), z, _basis_for(lam, x))
    P = x * x - lam * lam
    lhs = np.sqrt(P) * sol.derivative(x) + sol(x) ** 2
    rhs = _riccati_rhs(lam, x)
    return float(np.max(np.abs(lhs - rhs)))


def riccati_residual_fd(lam: float, z: complex, grid, h: float = 1e-3) -> float:
    """Same as :func:`riccati_residual` with ``w'`` from an 8th-order difference of ``w``.

    Unlike the analytic form this does not reuse the differential equation,
    so it also checks the integrated zero modes themselves.
    """
    z = _check_z(z)
    x = np.asarray(grid, dtype=float)
    offsets = h * np.arange(-4, 5)
    sol = RiccatiSolution(float(lam), z, _basis_for(lam, x + 4 * h))
    pts = x[:, None] + offsets[None, :]
    if np.any(pts <= sol.basis.x_min):
        raise DomainError("grid too close to lambda for the difference stencil")
    wv = sol(pts.ravel()).reshape(pts.shape)
    dw = wv @ _D1 / h
    P = x * x - lam * lam
    lhs = np.sqrt(P) * dw + wv[:, 4] ** 2
    rhs = _riccati_rhs(lam, x)
    return float(np.max(np.abs(lhs - rhs)))


# -- factorization on test functions ------------------------------------------

@dataclass(frozen=True)
class Bump:
    """Smooth bump ``exp(1 - 1/(1 - s^2))`` with ``s = (x - center)/half_width``, zero for ``|s| >= 1``."""

    center: float
    half_width: float

    @property
    def support(self):
        return self.center - self.half_width, self.center + self.half_width

    def __call__(self, x):
        s = (np.asarray(x, dtype=float) - self.center) / self.half_width
        out = np.zeros_like(s)
        inside = np.abs(s) < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out


def _d(y, h):
    # 8th-order first derivative; y is padded with zeros beyond the grid, which
    # is exact for the compactly supported quantities differentiated here
    pad = np.concatenate([np.zeros(4, dtype=y.dtype), y, np.zeros(4, dtype=y.dtype)])
    n = y.size
    return sum(c * pad[i:i + n] for i, c in enumerate(_D1)) / h


def _factorization_terms(lam, sol, f, points):
    a, b = f.support
    if a <= lam:
        raise DomainError("test functions must be supported inside (lambda, inf)")
    margin = 0.05 * (b - a)
    x = np.linspace(a - margin, b + margin, points)
    h = x[1] - x[0]
    P = x * x - lam * lam
    sP = np.sqrt(P)
    fx = f(x)
    w = sol(x)
    g = P**0.25 * fx
    Lf = _d(P * _d(fx, h), h) + (_TWO_PI * lam * x) ** 2 * fx
    # (grad - w) then (grad + w), and the other order
    k1 = sP * _d(g, h) - w * g
    first = P**-0.25 * (sP * _d(k1, h) + w * k1)
    k2 = sP * _d(g, h) + w * g
    second = P**-0.25 * (sP * _d(k2, h) - w * k2)
    grad_w = sP * sol.derivative(x)
    return Lf, first, second, grad_w * fx


def factorization_residual(lam: float, z: complex, testfns, entry: int = 1, points: int = 4001) -> float:
    """Largest relative ``L^2`` defect of a factorization identity over ``testfns``.

    ``entry=1`` checks ``U*(grad + w)(grad - w) U f = L f``; ``entry=2``
    checks ``U*(grad - w)(grad + w) U f = (L + 2 grad w) f``.  Derivatives
    are 8th-order central differences on ``points`` nodes covering each
    support.  Test functions need a ``support`` attribute ``(a, b)`` with
    ``a > lam``; :class:`Bump` provides one.  Identically zero test functions
    contribute a defect of zero.
    """
    z = _check_z(z)
    if entry not in (1, 2):
        raise DomainError(f"entry must be 1 or 2, got {entry}")
    worst = 0.0
    for f in testfns:
        sol = RiccatiSolution(float(lam), z, _basis_for(lam, [f.support[1] * 1.1]))
        Lf, first, second, gwf = _factorization_terms(lam, sol, f, points)
        target = Lf if entry == 1 else Lf + 2 * gwf
        got = first if entry == 1 else second
        scale = np.linalg.norm(target)
        if scale == 0.0:
            continue
        worst = max(worst, float(np.linalg.norm(got - target) / scale))
    return worst


# -- Dirac spectrum -------------------------------------------------------------

@dataclass(frozen=True)
class DiracEntry:
    xi: complex
    alpha: float
    sign: int


@dataclass
class DiracSpectrum:
    """Eigenvalues ``xi = +-2 sqrt(alpha)`` of the Dirac operator built from a spectrum of ``L``."""

    lambda_: float
    entries: list

    def __post_init__(self):
        for e in self.entries:
            if abs(e.xi * e.xi - 4 * e.alpha) > 1e-9 * max(1.0, abs(e.alpha)):
                raise ValueError(f"xi^2 != 4 alpha for {e}")
        imag = sorted(e.xi.imag for e in self.entries if e.alpha < 0)
        if not np.allclose(imag, sorted(-v for v in imag), rtol=0, atol=0):
            raise ValueError("imaginary eigenvalues are not closed under conjugation")

    def imaginary_parts(self) -> np.ndarray:
        """Sorted positive imaginary parts ``Im xi > 0``."""
        return np.array(sorted(e.xi.imag for e in self.entries if e.xi.imag > 0))

    def count(self, E: float) -> int:
        """``#{xi : 0 < Im xi <= E}``."""
        return int(np.searchsorted(self.imaginary_parts(), E, side="right"))

    @property
    def ceiling(self) -> float:
        """Largest ``Im xi`` represented (coverage limit of the source spectrum)."""
        im = self.imaginary_parts()
        return float(im[-1]) if im.size else 0.0


def dirac_eigenvalues(lam: float, w_spectrum) -> DiracSpectrum:
    """Map every eigenvalue ``alpha`` of ``L`` to the pair ``+-2 sqrt(alpha)``.

    Negative ``alpha`` give the conjugate pair ``+-2i sqrt|alpha|``; positive
    ones a real pair.  Entries are sorted by ``|Im xi|`` then ``|Re xi|``
    (then by sign, so the order is deterministic).
    """
    entries = []
    for rec in w_spectrum:
        alpha = float(rec.mu if isinstance(rec, EigenvalueRecord) else rec)
        root = 2 * cmath.sqrt(alpha)
        for sign in (1, -1):
            entries.append(DiracEntry(sign * root, alpha, sign))
    entries.sort(key=lambda e: (abs(e.xi.imag), abs(e.xi.real), -e.sign))
    return DiracSpectrum(float(lam), entries)
