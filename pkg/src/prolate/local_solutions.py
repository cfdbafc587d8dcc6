"""Local solution bases of the prolate equation.

The equation is ``-((lam^2 - x^2) xi')' + (2 pi lam)^2 x^2 xi = mu xi``.

Near the regular singular point ``x = lam`` the solution that stays bounded
with vanishing flux is the power series ``f_mu(x) = sum U_n(mu) (x - lam)^n``
with ``U_0 = 1``.  Substituting into the equation gives, with
``c0 = 4 pi^2 lam^4 - mu``,

    2 lam (m+1)^2 U_{m+1} = -(m(m+1) + c0) U_m - 8 pi^2 lam^3 U_{m-1}
                            - 4 pi^2 lam^2 U_{m-2}.

At infinity the same coefficients reappear: ``g(x) = exp(-2 pi i lam x) v(x) / x``
with ``v(x) ~ sum n! U_n(mu) (2 pi i x)^(-n)`` is a formal solution.  The series
diverges, so it is summed up to its smallest term (optimal truncation).  The
real solutions ``S = -Im g ~ sin(2 pi lam x)/x`` and ``C = Re g ~ cos(2 pi lam x)/x``
form the matching basis used by the outer shooting method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, RangeError
from .numkit import ODE_TOL, Tolerances, integrate_ode, quad_adaptive

TWO_PI = 2.0 * math.pi

#: default Frobenius order and offset (relative to lam) from the singular point
FROBENIUS_ORDER = 30
SINGULAR_OFFSET = 1e-3

#: the asymptotic basis is trusted only for 2 pi lam x at or above this value
MATCH_KX = 40.0

_ASYMPTOTIC_TOL = 1e-11
_MAX_TERMS = 600


def _check_lambda(lam):
    if not (math.isfinite(lam) and lam > 0):
        raise DomainError(f"lambda must be positive and finite, got {lam}")


def prolate_p(lam):
    """Coefficient ``p(x) = lam^2 - x^2``."""
    lam2 = lam * lam
    return lambda x: lam2 - x * x


def prolate_q(lam):
    """Potential ``q(x) = (2 pi lam x)^2``."""
    k2 = (TWO_PI * lam) ** 2
    return lambda x: k2 * x * x


# -- Frobenius series at x = lam ----------------------------------------------

@dataclass
class FrobeniusSeries:
    """Regular solution ``f_mu(x) = sum_n U_n(mu) (x - lam)^n``.

    ``coeffs[n]`` holds ``U_n``; when ``mu`` is an array, ``coeffs`` has shape
    ``(N + 1,) + mu.shape`` and every operation is applied elementwise.
    """

    lambda_: float
    mu: float | np.ndarray
    coeffs: np.ndarray
    radius_hint: float

    def __post_init__(self):
        if not np.all(self.coeffs[0] == 1.0):
            raise ValueError("FrobeniusSeries requires U_0 = 1")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("FrobeniusSeries coefficients must be finite")

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1


def frobenius_coeffs(lam: float, mu, N: int = FROBENIUS_ORDER) -> FrobeniusSeries:
    """Coefficients ``U_0 .. U_N`` of the regular solution at ``x = lam``.

    Parameters
    ----------
    lam : float
        Cut-off parameter, ``lam > 0``.
    mu : float or array_like
        Spectral parameter; arrays produce one series per entry.
    N : int
        Highest order kept.

    Returns
    -------
    FrobeniusSeries
        With ``radius_hint = lam / 2``: the nearest other singular point is
        ``x = -lam``, so the series converges for ``|x - lam| < 2 lam``; the
        hint keeps evaluations well inside.
    """
    _check_lambda(lam)
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a non-negative integer, got {N}")
    mu_arr = np.asarray(mu, dtype=float)
    c0 = 4 * math.pi**2 * lam**4 - mu_arr
    a1 = 8 * math.pi**2 * lam**3
    a2 = 4 * math.pi**2 * lam**2
    U = np.zeros((N + 1,) + mu_arr.shape)
    U[0] = 1.0
    for m in range(N):
        acc = -(m * (m + 1) + c0) * U[m]
        if m >= 1:
            acc = acc - a1 * U[m - 1]
        if m >= 2:
            acc = acc - a2 * U[m - 2]
        U[m + 1] = acc / (2 * lam * (m + 1) ** 2)
    mu_out = float(mu_arr) if mu_arr.ndim == 0 else mu_arr
    return FrobeniusSeries(float(lam), mu_out, U, 0.5 * lam)


def eval_regular_solution(series: FrobeniusSeries, x: float):
    """Value and derivative of the Frobenius solution at ``x``.

    Raises
    ------
    RangeError
        If ``|x - lam|`` is not below ``series.radius_hint``.
    """
    t = float(x) - series.lambda_
    if not abs(t) < series.radius_hint:
        raise RangeError(
            f"x={x} outside the series window |x - {series.lambda_}| < {series.radius_hint}")
    U = series.coeffs
    val = np.zeros_like(U[0])
    der = np.zeros_like(U[0])
    for n in range(series.order, -1, -1):
        val = val * t + U[n]
        if n >= 1:
            der = der * t + n * U[n]
    if val.ndim == 0:
        return float(val), float(der)
    return val, der


def regular_start(lam: float, mu, side: int = 1, delta: float = SINGULAR_OFFSET,
                  N: int = FROBENIUS_ORDER) -> tuple[float, np.ndarray]:
    """Starting point ``lam + side*delta*lam`` and ``(f, f')`` for ODE continuation."""
    series = frobenius_coeffs(lam, mu, N)
    x0 = lam * (1.0 + side * delta)
    val, der = eval_regular_solution(series, x0)
    return x0, np.stack([np.asarray(val), np.asarray(der)])


# -- Optimally truncated asymptotic basis at infinity -------------------------

@dataclass
class AsymptoticBasis:
    """Real solution basis near infinity, evaluated at one abscissa.

    ``v_coeffs[n]`` is the complex term ``n! U_n(mu) (2 pi i x)^(-n)`` of
    ``v(x)``; terms up to ``truncation_order - 1`` are summed.
    ``error_estimate`` bounds the relative error of ``v`` (first omitted
    term plus rounding).
    """

    lambda_: float
    mu: float
    x: float
    v_coeffs: np.ndarray
    truncation_order: int
    error_estimate: float
    S: float
    dS: float
    C: float
    dC: float

    def values(self):
        """``(S, S', C, C')``."""
        return self.S, self.dS, self.C, self.dC


def _asymptotic_terms(lam, mu_arr, x, nmax=_MAX_TERMS):
    # Scaled terms T_n = n! U_n / (2 pi x)^n, so v = sum T_n (-i)^n.
    c0 = 4 * math.pi**2 * lam**4 - mu_arr
    a1 = 8 * math.pi**2 * lam**3
    a2 = 4 * math.pi**2 * lam**2
    s = TWO_PI * x
    T = np.zeros((nmax + 1,) + mu_arr.shape)
    T[0] = 1.0
    for m in range(nmax):
        acc = (m * (m + 1) + c0) * T[m] / s
        if m >= 1:
            acc = acc + a1 * m * T[m - 1] / s**2
        if m >= 2:
            acc = acc + a2 * m * (m - 1) * T[m - 2] / s**3
        T[m + 1] = -acc / (2 * lam * (m + 1))
        if m > 8 and np.all(np.abs(T[m + 1]) > 1e6):
            T = T[: m + 2]
            break
    return T


def _optimal_sum(T):
    # Three consecutive magnitudes smooth out accidental small terms.
    mag = np.abs(T)
    n_terms = T.shape[0]
    window = np.maximum(np.maximum(mag[:-2], mag[1:-1]), mag[2:])
    # never stop before the first term so that the leading 1 is always kept
    window[0] = np.inf
    order = np.argmin(window, axis=0)
    idx = np.arange(n_terms).reshape((-1,) + (1,) * (T.ndim - 1))
    keep = idx < order
    peak = np.max(np.where(keep, mag, 0.0), axis=0)
    err = np.take_along_axis(window, order[None], axis=0)[0] + 4 * np.finfo(float).eps * peak * (order + 1)
    return order, keep, err


def _basis_from_terms(lam, x, T, keep):
    k = TWO_PI * lam
    n = np.arange(T.shape[0]).reshape((-1,) + (1,) * (T.ndim - 1))
    tau = T * (-1j) ** n
    tau = np.where(keep, tau, 0.0)
    v = tau.sum(axis=0)
    dv = (tau * (-1j * k - (n + 1) / x)).sum(axis=0)
    phase = np.exp(-1j * k * x) / x
    g, dg = phase * v, phase * dv
    return -g.imag, -dg.imag, g.real, dg.real, tau


def asymptotic_basis(lam: float, mu: float, x: float, tol: float = 1e-9) -> AsymptoticBasis:
    """Values and derivatives of ``S ~ sin(2 pi lam x)/x`` and ``C ~ cos(2 pi lam x)/x``.

    Parameters
    ----------
    lam, mu : float
        Operator parameter and spectral parameter.
    x : float
        Abscissa; the optimal-truncation error shrinks roughly like
        ``exp(-4 pi lam x)`` once ``x`` clears the growth phase of the terms,
        which for large ``|mu|`` lasts until about ``x ~ |mu| / (90 lam)``.
    tol : float
        Relative accuracy demanded of ``v``.

    Raises
    ------
    AccuracyError
        If no truncation order meets ``tol`` at this ``x``.
    """
    _check_lambda(lam)
    if not x > lam:
        raise DomainError(f"asymptotic basis needs x > lambda, got x={x}")
    T = _asymptotic_terms(lam, np.asarray(float(mu)), float(x))
    order, keep, err = _optimal_sum(T)
    S, dS, C, dC, tau = _basis_from_terms(lam, x, T, keep)
    err = float(err)
    if err > tol:
        raise AccuracyError(
            f"asymptotic series at x={x} reaches only {err:.2e} (mu={mu}); use a larger x",
            estimate=(float(S), float(dS), float(C), float(dC)), error=err)
    order = int(order)
    return AsymptoticBasis(float(lam), float(mu), float(x), tau[:order], order, err,
                           float(S), float(dS), float(C), float(dC))


def asymptotic_basis_batch(lam, mu, x):
    """Vectorized basis ``(S, S', C, C', err)`` for an array of ``mu`` at one ``x``."""
    T = _asymptotic_terms(lam, np.asarray(mu, dtype=float), float(x))
    _, keep, err = _optimal_sum(T)
    S, dS, C, dC, _ = _basis_from_terms(lam, float(x), T, keep)
    return S, dS, C, dC, err


def matching_radius(lam: float, mu, tol: float = _ASYMPTOTIC_TOL, x_min: float | None = None) -> float:
    """Smallest radius (on a geometric ladder) where the asymptotic basis meets ``tol`` for all ``mu``."""
    x = MATCH_KX / (TWO_PI * lam) if x_min is None else x_min
    x = max(x, 1.5 * lam)
    mu_arr = np.atleast_1d(np.asarray(mu, dtype=float))
    # start near the end of the growth phase instead of climbing from scratch
    x = max(x, float(np.max(np.abs(4 * math.pi**2 * lam**4 - mu_arr))) / (100.0 * lam))
    for _ in range(200):
        *_, err = asymptotic_basis_batch(lam, mu_arr, x)
        if np.all(err <= tol):
            return x
        x *= 1.2
    raise AccuracyError(f"no matching radius below {x:.3g} meets tol={tol}")


# -- Borel / Fourier representation ------------------------------------------

@dataclass
class BorelTransform:
    """``B(t) = f_mu(t + lam)``: the Borel transform of the asymptotic series.

    Evaluated from the Frobenius series for ``t`` inside its window and from
    the integrated continuation beyond it, up to ``t_max``.
    """

    lambda_: float
    mu: float
    t_max: float
    _series: FrobeniusSeries = field(repr=False)
    _traj: object = field(repr=False)
    _t_switch: float = field(repr=False)

    def __call__(self, t):
        t = float(t)
        if t < -1e-12 * self.lambda_ or t > self.t_max * (1 + 1e-12):
            raise RangeError(f"B(t) available on [0, {self.t_max}], got t={t}")
        if t <= self._t_switch:
            return eval_regular_solution(self._series, self.lambda_ + t)[0]
        return float(self._traj(self.lambda_ + t)[0])

    def derivative(self, t):
        t = float(t)
        if t <= self._t_switch:
            return eval_regular_solution(self._series, self.lambda_ + t)[1]
        return float(self._traj(self.lambda_ + t)[1])


def borel_transform(lam: float, mu: float, t_max: float, tol: Tolerances = ODE_TOL) -> BorelTransform:
    """Build :class:`BorelTransform` on ``[0, t_max]``."""
    _check_lambda(lam)
    series = frobenius_coeffs(lam, mu, 60)
    # coefficient magnitudes fall off faster than 2^-n inside lam/4 for moderate mu
    t_switch = 0.25 * lam
    x0 = lam + t_switch
    val, der = eval_regular_solution(series, x0)
    traj = integrate_ode(prolate_p(lam), prolate_q(lam), mu, x0, lam + max(t_max, t_switch),
                         (val, der), tol, dense=True)
    return BorelTransform(float(lam), float(mu), float(t_max), series, traj, t_switch)


def _exp_integrals(z, count):
    # E_1 .. E_count at z (Re z >= 0, |z| not small) by the continued fraction
    # E_n(z) = e^{-z} / (z + n - 1 n / (z + n + 2 - 2 (n+1) / (z + n + 4 - ...)))
    # evaluated with the modified Lentz algorithm, all orders at once.  Forward
    # recurrence is useless here: E_n is its minimal solution while n < |z|.
    n = np.arange(1, count + 1, dtype=float)
    tiny = 1e-300
    b = z + n
    c = np.full(count, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 2000):
        an = -i * (n - 1 + i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-15):
            break
    else:
        raise AccuracyError(f"exponential integral continued fraction did not converge at z={z}")
    return h * np.exp(-z)


def borel_fourier_eval(lam: float, mu: float, x: float, x_cut: float | None = None,
                       tol: Tolerances = Tolerances(1e-10, 1e-10, 2000)) -> complex:
    """``int_lam^inf exp(-2 pi i x y) f_mu(y) dy`` for real ``x != 0``.

    The integral over ``[lam, x_cut]`` uses QUADPACK's Fourier weights on the
    integrated regular solution.  Beyond ``x_cut`` the solution is replaced
    by its expansion ``A S + B C`` on the asymptotic basis and integrated
    term by term through exponential integrals ``E_n``.  Negative ``x``
    return the complex conjugate of the value at ``-x``.

    Raises
    ------
    AccuracyError
        If the tail cannot be represented to the requested accuracy, which
        happens when ``x`` approaches ``lam`` (the tail stops oscillating) or
        ``|mu|`` is too large for ``x_cut``.
    """
    _check_lambda(lam)
    if x == 0:
        raise DomainError("x = 0 is not supported: the integral diverges logarithmically")
    if x < 0:
        return complex(np.conj(borel_fourier_eval(lam, mu, -x, x_cut, tol)))
    k = TWO_PI * lam
    omega = TWO_PI * x
    nu_minus = abs(omega - k)
    if x_cut is None:
        x_cut = matching_radius(lam, mu, 1e-12)
        if nu_minus > 0:
            x_cut = max(x_cut, 60.0 / nu_minus)
    if nu_minus * x_cut < 20.0 or x_cut > 1e4:
        raise AccuracyError(f"tail at x={x} is not oscillatory enough for x_cut={x_cut:.3g}")

    bt = borel_transform(lam, mu, x_cut - lam)
    head_re = head_im = 0.0
    edges = [lam, lam + bt._t_switch, x_cut]
    fun = lambda y: bt(y - lam)
    for a, b in zip(edges[:-1], edges[1:]):
        head_re += quad_adaptive(fun, a, b, tol, weight="cos", wvar=omega)
        head_im -= quad_adaptive(fun, a, b, tol, weight="sin", wvar=omega)

    # f = A S + B C = Re((B + iA) g) near x_cut
    basis = asymptotic_basis(lam, mu, x_cut, tol=1e-11)
    f_val, f_der = bt(x_cut - lam), bt.derivative(x_cut - lam)
    M = np.array([[basis.S, basis.C], [basis.dS, basis.dC]])
    A, B = np.linalg.solve(M, [f_val, f_der])
    c = B + 1j * A
    tau = basis.v_coeffs
    # g(y) = e^{-iky} sum_n tau_n (x_cut/y)^n / y with tau_n taken at x_cut, so each
    # term integrates to tau_n E_{n+1}(i nu x_cut)
    n = np.arange(len(tau))
    Ep = _exp_integrals(1j * (omega + k) * x_cut, len(tau))
    Em = _exp_integrals(1j * (omega - k) * x_cut, len(tau))
    tail = 0.5 * (c * np.sum(tau * Ep) + np.conj(c) * np.sum(np.conj(tau) * Em))
    return complex(head_re + tail.real, head_im + tail.imag)


def borel_fourier_asymptotic(lam: float, mu: float, x: float) -> complex:
    """The closed form ``v(x) exp(-2 pi i lam x) / (2 pi i x)`` from the optimally truncated series."""
    T = _asymptotic_terms(lam, np.asarray(float(mu)), float(x))
    _, keep, _ = _optimal_sum(T)
    n = np.arange(T.shape[0])
    v = np.sum(np.where(keep, T * (-1j) ** n, 0.0))
    return complex(v * np.exp(-1j * TWO_PI * lam * x) / (1j * TWO_PI * x))


def regular_solution(lam: float, mu: float, x) -> np.ndarray:
    """Regular solution ``f_mu`` (``f_mu(lam) = 1``) at points ``x > lam`` by ODE continuation."""
    _check_lambda(lam)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= lam * (1 + SINGULAR_OFFSET)):
        raise DomainError("points must lie beyond the Frobenius starting offset")
    order = np.argsort(xs)
    x0, init = regular_start(lam, float(mu))
    traj = integrate_ode(prolate_p(lam), prolate_q(lam), float(mu), x0, float(xs[order[-1]]),
                         init, ODE_TOL, t_eval=xs[order])
    out = np.empty_like(xs)
    out[order] = traj.y[:, 0]
    return out[0] if np.ndim(x) == 0 else out


def even_extension_fourier(lam: float, mu: float, x: float) -> float:
    """Fourier transform at ``x`` of the even function equal to ``f_mu`` on ``|y| > lam`` and 0 inside."""
    return 2.0 * borel_fourier_eval(lam, mu, x).real
