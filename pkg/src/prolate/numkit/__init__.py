"""Self-contained numerical kernel: elliptic integrals, quadrature, ODEs, roots."""

from .elliptic import elliptic_E, elliptic_K
from .ode import ODE_TOL, OdeState, OdeTrajectory, integrate_ode
from .quadrature import quad_adaptive
from .roots import ROOT_TOL, bracketed_roots, brent_root
from .tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "DEFAULT_TOL", "ODE_TOL", "ROOT_TOL", "OdeState", "OdeTrajectory", "Tolerances",
    "bracketed_roots", "brent_root", "elliptic_E", "elliptic_K", "integrate_ode",
    "quad_adaptive",
]
