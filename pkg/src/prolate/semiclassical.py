"""Semiclassical counting for the outer negative spectrum.

The classical Hamiltonian ``H(p, q) = (p^2 - lam^2)(q^2 - lam^2)`` bounds the
region ``{q >= lam, p >= lam, H <= a}`` whose area is

    I_lam(a) = int_lam^inf ( sqrt(a + lam^2 x^2 - lam^4) / sqrt(x^2 - lam^2) - lam ) dx
             = lam^2 I_1(a lam^-4),

with ``I_1(a) = a K(1 - a) - E(1 - a) + 1`` in closed form.  Eigenvalues
``mu = -E^2`` of one parity below the scale ``E`` are counted by
``2 sigma(E, lam)`` with ``sigma(E, lam) = I_lam((E/2 pi)^2 + lam^4)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numkit import Tolerances, elliptic_E, elliptic_K, quad_adaptive

SQRT2 = math.sqrt(2.0)
_QUAD_TOL = Tolerances(abs_tol=1e-13, rel_tol=1e-13, max_steps=2000)


@dataclass(frozen=True)
class CountEstimate:
    """Semiclassical quantities at one spectral scale ``E``."""

    E: float
    lambda_: float
    a: float
    I_value: float
    sigma_asymptotic: float
    predicted_count: float


@dataclass(frozen=True)
class Sigma:
    exact: float
    asymptotic: float

    def __iter__(self):
        return iter((self.exact, self.asymptotic))


def _positive(name, v):
    if not (math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be positive and finite, got {v}")


def I_of_a(a: float) -> float:
    """Closed form ``a K(1 - a) - E(1 - a) + 1`` of the area at ``lam = 1``."""
    _positive("a", a)
    m = 1.0 - a
    return a * elliptic_K(m) - elliptic_E(m) + 1.0


def I_lambda_direct(lam: float, a: float, tol: Tolerances = _QUAD_TOL) -> float:
    """Area ``I_lam(a)`` by quadrature of its defining integral.

    With ``x = lam cosh u`` the endpoint singularity cancels against the
    Jacobian and the integrand becomes
    ``sqrt(a + lam^4 sinh^2 u) - lam^2 sinh u = a / (sqrt(a + lam^4 sinh^2 u) + lam^2 sinh u)``,
    written in the second form to avoid cancellation.  It decays like
    ``e^{-u}``; the integral is cut where the remainder is below rounding and
    the remainder is added from its leading term.
    """
    _positive("lambda", lam)
    _positive("a", a)
    lam2 = lam * lam
    lam4 = lam2 * lam2

    def f(u):
        s = math.sinh(u)
        return a / (math.sqrt(a + lam4 * s * s) + lam2 * s)

    u_max = math.log(max(a, 1.0) / lam2 + 1.0) + 40.0
    return quad_adaptive(f, 0.0, u_max, tol) + _tail_correction(a, lam2, u_max)


def _tail_correction(a, lam2, u_max):
    # int_{u_max}^inf a / (2 lam^2 sinh u) du, leading term of the remaining integrand
    return a / lam2 * math.log(1.0 / math.tanh(u_max / 2.0)) / 2.0


def I_direct(a: float) -> float:
    """Area at ``lam = 1`` by direct quadrature (oracle for :func:`I_of_a`)."""
    return I_lambda_direct(1.0, a)


def I_lambda(lam: float, a: float) -> float:
    """``I_lam(a) = lam^2 I(a / lam^4)``."""
    _positive("lambda", lam)
    _positive("a", a)
    return lam * lam * I_of_a(a / lam**4)


def sigma(E: float, lam: float) -> Sigma:
    """Exact and asymptotic ``sigma(E, lam)``.

    ``exact = I_lam((E/2 pi)^2 + lam^4)``;
    ``asymptotic = (E/2 pi)(log(E/2 pi) - 1 + log 4 - 2 log lam) + lam^2``.
    """
    _positive("E", E)
    _positive("lambda", lam)
    e = E / (2 * math.pi)
    exact = I_lambda(lam, e * e + lam**4)
    asym = e * (math.log(e) - 1.0 + math.log(4.0) - 2.0 * math.log(lam)) + lam * lam
    return Sigma(exact, asym)


def predicted_dirac_count(E: float) -> float:
    """Semiclassical count ``2 sigma(E/2, sqrt 2)`` of Dirac eigenvalues ``0 < Im xi <= E``."""
    _positive("E", E)
    return 2.0 * sigma(E / 2.0, SQRT2).exact


def predicted_dirac_count_asymptotic(E: float) -> float:
    """Leading form ``(E/2 pi)(log(E/2 pi) - 1) + 4`` of :func:`predicted_dirac_count`."""
    _positive("E", E)
    e = E / (2 * math.pi)
    return e * (math.log(e) - 1.0) + 4.0


def area_omega(lam: float, E: float, tol: Tolerances = _QUAD_TOL) -> float:
    """Area of ``{q >= lam, p >= lam, (p^2 - lam^2)(q^2 - lam^2) <= a}``, ``a = (E/2 pi)^2 + lam^4``.

    The region is integrated column by column: for fixed ``q`` the momentum
    runs from ``lam`` to ``sqrt(lam^2 + a / (q^2 - lam^2))``.  The column
    heights are integrated over ``q`` after ``q = lam / s`` (the ``1/q^2``
    tail becomes a finite interval) and ``s = sin^2 phi`` (removes the inverse
    square-root singularity of the heights at ``q = lam``).
    """
    _positive("lambda", lam)
    _positive("E", E)
    a = (E / (2 * math.pi)) ** 2 + lam**4
    lam2 = lam * lam

    def height(q):
        d = q * q - lam2
        if d <= 0:
            return math.inf
        extra = a / d
        return extra / (math.sqrt(lam2 + extra) + lam)

    def g(phi):
        s = math.sin(phi) ** 2
        if s <= 0.0 or s >= 1.0:
            # limits at the endpoints: a/(2 lam^2) * 0 and sqrt(2a)
            return 0.0 if s <= 0.0 else math.sqrt(2.0 * a)
        q = lam / s
        return height(q) * lam / (s * s) * 2.0 * math.sin(phi) * math.cos(phi)

    return quad_adaptive(g, 0.0, math.pi / 2.0, tol)


def count_estimate(E: float, lam: float) -> CountEstimate:
    """All semiclassical quantities at scale ``E`` for the given ``lam``."""
    s = sigma(E, lam)
    a = (E / (2 * math.pi)) ** 2 + lam**4
    return CountEstimate(float(E), float(lam), a, s.exact, s.asymptotic, 2.0 * s.exact)


def count_table(E_grid, lam: float) -> list[CountEstimate]:
    """:func:`count_estimate` over a grid."""
    return [count_estimate(float(E), lam) for E in np.asarray(E_grid, dtype=float)]
