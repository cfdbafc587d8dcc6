"""Complete elliptic integrals of the first and second kind.

Both use the parameter convention ``m`` (so ``K(m) = int_0^{pi/2} (1 - m sin^2)^(-1/2)``),
never the modulus ``k = sqrt(m)``.  Negative ``m`` is allowed; the semiclassical
area formula evaluates ``K(1 - a)`` with ``a`` far above one.
"""

import math

from ..errors import DomainError

_MAX_ITER = 64


def _agm_sequence(m):
    # Yields (a_n, b_n, c_n^2) of the arithmetic-geometric mean started at (1, sqrt(1-m)).
    a, b = 1.0, math.sqrt(1.0 - m)
    c2 = m
    yield a, b, c2
    for _ in range(_MAX_ITER):
        if abs(a - b) <= 4e-16 * a:
            return
        c2 = ((a - b) / 2.0) ** 2
        a, b = (a + b) / 2.0, math.sqrt(a * b)
        yield a, b, c2


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind ``K(m)`` for ``m < 1``.

    Computed as ``pi / (2 AGM(1, sqrt(1 - m)))``; quadratic convergence means a
    handful of iterations even for ``m = -1e8``.
    """
    m = float(m)
    if not m < 1.0:
        raise DomainError(f"K(m) diverges for m >= 1 (got m={m})")
    *_, (a, b, _) = _agm_sequence(m)
    return math.pi / (a + b)


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind ``E(m)`` for ``m <= 1``."""
    m = float(m)
    if m > 1.0:
        raise DomainError(f"E(m) is not real for m > 1 (got m={m})")
    if m == 1.0:
        return 1.0
    total = 0.0
    weight = 0.5
    a = b = 1.0
    for a, b, c2 in _agm_sequence(m):
        total += weight * c2
        weight *= 2.0
    K = math.pi / (a + b)
    return K * (1.0 - total)
