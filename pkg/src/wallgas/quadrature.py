"""Adaptive quadrature tuned for the integrals that appear in this problem.

Every integral over a support interval [a, b] here has, at worst, an
inverse-square-root singularity at the endpoints (plus an integrable log
factor when a = 0).  A single substitution x = a + (b-a) sin^2(t) removes
both endpoint singularities at once, so one rule covers all density forms,
including the interior 1/x factor.
"""

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureFailure

DEFAULT_TARGET = 1e-10


def support_quad_uv(f, a, b, target=DEFAULT_TARGET):
    """Integrate f(x, x-a, b-x) over [a, b] with endpoint singularities up
    to 1/sqrt.

    Applies x = a + (b-a) sin^2(t); the endpoint offsets are handed to the
    integrand exactly as (b-a) sin^2(t) and (b-a) cos^2(t), so narrow or
    far-from-origin supports do not lose the offsets to cancellation.
    Raises QuadratureFailure if the error estimate exceeds ``target``
    (absolute, relative to the result magnitude).
    """
    if b <= a:
        if b == a:
            return 0.0
        raise ValueError(f"empty interval [{a}, {b}]")
    width = b - a

    def g(t):
        s = np.sin(t)
        c = np.cos(t)
        u = width * s * s
        x = a + u
        return f(x, u, width * c * c) * 2.0 * width * s * c

    val, err = quad(g, 0.0, np.pi / 2.0, epsabs=1e-13, epsrel=1e-13, limit=500)
    if err > target * max(1.0, abs(val)):
        raise QuadratureFailure(
            f"support integral on [{a}, {b}]: error estimate {err:.2e} "
            f"exceeds target {target:g}"
        )
    return val


def support_quad(f, a, b, target=DEFAULT_TARGET):
    """Integrate f(x) over [a, b] with endpoint singularities up to 1/sqrt."""
    return support_quad_uv(lambda x, u, v: f(x), a, b, target=target)


def sqrt_edge_quad(f, edge, x, target=DEFAULT_TARGET):
    """Integrate f between ``edge`` and ``x`` when f ~ sqrt(|t-edge|) there.

    Used for the off-support correction integrals, whose integrands vanish
    like a square root at the support edge.  The substitution
    t = edge +/- |x-edge| s^2 makes the integrand smooth.  Orientation
    follows the sign of x - edge; the result is always the integral from
    min to max.
    """
    span = x - edge
    if span == 0.0:
        return 0.0
    sign = 1.0 if span > 0 else -1.0
    span = abs(span)

    def g(s):
        t = edge + sign * span * s * s
        return f(t) * 2.0 * span * s

    val, err = quad(g, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=400)
    if err > target * max(1.0, abs(val)):
        raise QuadratureFailure(
            f"edge integral from {edge} to {x}: error estimate {err:.2e} "
            f"exceeds target {target:g}"
        )
    return val
