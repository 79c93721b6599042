"""Logarithmic potential, Cauchy transform, Robin constant, and the
equilibrium (Euler-Lagrange) conditions.

The equilibrium measure nu satisfies, for some constant C (the modified
Robin constant),

    U(x) + Q(x)/2 = C    on the support,
    U(x) + Q(x)/2 >= C   on [sigma, a) and (b, +inf),

where U(x) = -int log|x-t| nu(dt) and Q(x) = x^2 - 2*alpha*log(x).  Off the
support, U follows from integrating the real part of the Cauchy transform,
which adds the correction integrals of

    h(t) = sqrt((b-t)(a-t)) (1 + alpha/(sqrt(ab) t))   left of a (critical),
    g(t) = sqrt((t-b)/(t-a)) (t + (b-a)/2 - alpha*sqrt(a/b)/t)  right of b.

The closed-form Robin constant is assembled from the large-x asymptotics of
the correction integrals (A1, A2, and the constant hidden in C_mu), forced
by U(x) ~ -log(x) at infinity.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .density import DensityEval, DensityForm, _pdf_uv
from .errors import OracleMismatch
from .model import SQRT2
from .quadrature import sqrt_edge_quad, support_quad_uv

ROBIN_ORACLE_TOL = 1e-7
PIECEWISE_WINDOW = 10.0  # beyond b + this, the direct integral is better conditioned


def external_potential(x, alpha):
    """Q(x) = x^2 - 2*alpha*log(x); plain x^2 when alpha = 0."""
    if alpha == 0.0:
        return x * x
    if x <= 0.0:
        raise ValueError(f"Q needs x > 0 when alpha > 0, got {x}")
    return x * x - 2.0 * alpha * math.log(x)


def _base(d):
    return d.base if d.form is DensityForm.REFLECTED_WALL else d


def _edge_functions(d):
    """The off-support correction integrands h (left) and g (right)."""
    sol = _base(d).solution
    a, b = sol.edges.a, sol.edges.b
    alpha = sol.params.alpha

    def h(t):
        v = math.sqrt((b - t) * (a - t))
        if alpha > 0.0:
            v *= 1.0 + alpha / (math.sqrt(a * b) * t)
        return v

    def g(t):
        v = math.sqrt((t - b) / (t - a)) * (t + 0.5 * (b - a))
        if alpha > 0.0:
            v -= math.sqrt((t - b) / (t - a)) * alpha * math.sqrt(a / b) / t
        return v

    return h, g


def cauchy_transform(z, d):
    """G(z) = int density(t)/(z-t) dt for z off the support cut.

    Closed form z - alpha/z - g(z) with
    g(z) = sqrt((z-b)/(z-a)) (z + (b-a)/2 - alpha*sqrt(a/b)/z); the
    principal branch of the ratio is analytic off [a, b] and gives
    g(z) ~ z at infinity.
    """
    if d.form is DensityForm.REFLECTED_WALL:
        return -cauchy_transform(-complex(z), d.base)
    sol = d.solution
    a, b = sol.edges.a, sol.edges.b
    alpha = sol.params.alpha
    z = complex(z)
    if z.imag == 0.0 and a <= z.real <= b:
        raise ValueError(f"z = {z} lies on the support cut [{a}, {b}]")
    if alpha > 0.0 and z == 0.0:
        raise ValueError("z = 0 is a pole when alpha > 0")
    s = cmath.sqrt((z - b) / (z - a))
    # z(1-s) = z(b-a)/((z-a)(1+s)) sidesteps the z ~ g(z) cancellation at
    # large |z| (principal s has Re s >= 0, so 1+s never vanishes off cut)
    out = z * (b - a) / ((z - a) * (1.0 + s)) - s * 0.5 * (b - a)
    if alpha > 0.0:
        out -= (alpha / z) * (1.0 - s * math.sqrt(a / b))
    return out


def cauchy_transform_quad(z, d):
    """Direct quadrature of int density(t)/(z-t) dt (oracle path)."""
    f, a, b = _density_callable(d)
    z = complex(z)
    re = support_quad_uv(lambda t, u, v: ((1.0 / (z - t)).real) * f(t, u, v), a, b, target=1e-8)
    im = support_quad_uv(lambda t, u, v: ((1.0 / (z - t)).imag) * f(t, u, v), a, b, target=1e-8)
    return complex(re, im)


def _density_callable(d):
    a, b = d.support
    return (lambda t, u, v: float(_pdf_uv(np.asarray(t), u, v, d))), a, b


def log_potential_quad(x, d):
    """U(x) = -int log|x-t| density(t) dt by direct (split) quadrature.

    Interior x splits the integral at the log singularity; the endpoint
    offsets are recovered from the split edge so the 1/sqrt endpoint
    factors stay accurate on each piece.
    """
    f, a, b = _density_callable(d)

    def kern(t, u, v):
        return -math.log(abs(x - t)) * f(t, u, v)

    if a < x < b:
        left = support_quad_uv(lambda t, u, v: kern(t, u, b - t), a, x, target=1e-8)
        right = support_quad_uv(lambda t, u, v: kern(t, t - a, v), x, b, target=1e-8)
        return left + right
    return support_quad_uv(kern, a, b, target=1e-8)


def log_potential(x, d, robin=None):
    """Logarithmic potential via the piecewise closed form.

    On the support this is -Q(x)/2 + C exactly; off the support the h/g
    correction integrals are added.  Far beyond the upper edge
    (x > b + 10) the piecewise form loses digits to cancellation, so the
    direct quadrature takes over there.
    """
    if d.form is DensityForm.REFLECTED_WALL:
        return log_potential(-x, d.base, robin=robin)
    sol = d.solution
    a, b = sol.edges.a, sol.edges.b
    alpha = sol.params.alpha
    sigma = sol.params.sigma
    if alpha > 0.0 and x <= 0.0:
        raise ValueError(f"potential window needs x > 0 when alpha > 0, got {x}")
    if x > b + PIECEWISE_WINDOW:
        return log_potential_quad(x, d)
    if robin is None:
        robin = robin_constant(d)
    base = -0.5 * external_potential(x, alpha) + robin
    h, g = _edge_functions(d)
    if x >= b:
        return base + sqrt_edge_quad(g, b, x)
    if x > a:
        return base
    lo = sigma if d.form is not DensityForm.SEMICIRCLE else min(sigma, x)
    if x < lo:
        raise ValueError(f"x = {x} below the admissible window [{lo}, ...)")
    return base + sqrt_edge_quad(h, a, x)


@dataclass(frozen=True)
class AsymptoticConstants:
    """Constants of the large-X expansions of the correction integrals.

    int_b^X sqrt((t-a)(t-b)) dt   = X^2/2 - (a+b)X/2 - ((b-a)^2/8) log X + A1 + o(1)
    int_b^X sqrt((t-b)/(t-a)) dt  = X - ((b-a)/2) log X + A2 + o(1)
    int_b^X sqrt((t-a)(t-b))/t dt = X - ((a+b)/2) log X - 2*Cmu + o(1)
    """

    a1: float
    a2: float
    cmu: Optional[float]


def asymptotic_constants(a, b):
    if not a < b:
        raise ValueError(f"need a < b, got ({a}, {b})")
    L = math.log((b - a) / 4.0)
    a1 = (a * a + 6.0 * a * b + b * b + 2.0 * (b - a) ** 2 * L) / 16.0
    a2 = -(a + b) / 2.0 + 0.5 * (b - a) * L
    cmu = None
    if a > 0.0:
        cmu = 0.25 * (a + b) * (1.0 - L) - 0.5 * math.sqrt(a * b) * math.log(
            (math.sqrt(b) + math.sqrt(a)) / (math.sqrt(b) - math.sqrt(a))
        )
    return AsymptoticConstants(a1=a1, a2=a2, cmu=cmu)


def aux_measure_mass(a, b):
    """(1/2pi) int_a^b sqrt((t-a)(b-t))/t dt = (sqrt(b) - sqrt(a))^2 / 4."""
    if a <= 0.0:
        raise ValueError(f"aux measure needs a > 0, got {a}")
    if b < a:
        raise ValueError(f"need b >= a, got ({a}, {b})")
    return 0.25 * (math.sqrt(b) - math.sqrt(a)) ** 2


def robin_constant_closed(alpha, a, b):
    """Closed form of the modified Robin constant.

    C = -A with A = A1 + ((a+b)/2 - alpha/sqrt(ab)) A2 + (alpha/sqrt(ab)) A3,
    where A3 = -2*Cmu is the constant of the 1/t correction integral; after
    simplification the alpha part collapses to
    -(alpha/sqrt(ab)) (a log((b-a)/4) + sqrt(ab) log((sqrt b + sqrt a)/(sqrt b - sqrt a))).
    """
    L = math.log((b - a) / 4.0)
    c = -(
        a * a
        + 6.0 * a * b
        + b * b
        + 2.0 * (b - a) ** 2 * L
        - 4.0 * (a + b) ** 2
        + 4.0 * (b * b - a * a) * L
    ) / 16.0
    if alpha > 0.0:
        c -= (alpha / math.sqrt(a * b)) * (
            a * L
            + math.sqrt(a * b)
            * math.log((math.sqrt(b) + math.sqrt(a)) / (math.sqrt(b) - math.sqrt(a)))
        )
    return c


def robin_constant(d, check=True):
    """Modified Robin constant, dual-checked against direct quadrature.

    The oracle is C = U_quad(x0) + Q(x0)/2 at a support midpoint; mismatch
    beyond 1e-7 raises OracleMismatch with both values.
    """
    base = _base(d)
    sol = base.solution
    a, b = sol.edges.a, sol.edges.b
    alpha = sol.params.alpha
    closed = robin_constant_closed(alpha, a, b)
    if check:
        x0 = a + 0.5 * (b - a)
        oracle = log_potential_quad(x0, base) + 0.5 * external_potential(x0, alpha)
        if abs(closed - oracle) > ROBIN_ORACLE_TOL * max(1.0, abs(closed)):
            raise OracleMismatch("Robin constant", closed, oracle, ROBIN_ORACLE_TOL)
    return closed


@dataclass(frozen=True)
class PotentialEval:
    density: DensityEval
    robin: float


def potential_for(d):
    return PotentialEval(density=d, robin=robin_constant(d))


@dataclass(frozen=True)
class EquilibriumReport:
    sup_support_residual: float
    min_off_support_slack: float
    grid_size: int
    passed: bool


def equilibrium_check(p, grid_size=40, support_tol=1e-6, slack_tol=-1e-8):
    """Verify the Euler-Lagrange conditions on a grid.

    On the support the potential is taken from direct quadrature (the
    piecewise path is -Q/2 + C by construction, which would be circular);
    off the support the piecewise corrections are used, whose sign is the
    claim being checked.
    """
    d = _base(p.density)
    sol = d.solution
    a, b = sol.edges.a, sol.edges.b
    alpha = sol.params.alpha
    sigma = sol.params.sigma
    C = p.robin

    ts = np.linspace(0.01, 0.99, grid_size)
    sup_res = 0.0
    for x in a + (b - a) * ts:
        u = log_potential_quad(float(x), d)
        sup_res = max(sup_res, abs(u + 0.5 * external_potential(float(x), alpha) - C))

    min_slack = math.inf
    n_off = max(2, grid_size // 2)
    for x in b + 5.0 * np.linspace(1.0 / n_off, 1.0, n_off):
        u = log_potential(float(x), d, robin=C)
        min_slack = min(min_slack, u + 0.5 * external_potential(float(x), alpha) - C)
    left_lo = sigma if d.form is not DensityForm.SEMICIRCLE else max(sigma, a - 5.0)
    if left_lo < a:
        for x in left_lo + (a - left_lo) * np.linspace(0.02, 0.98, n_off):
            u = log_potential(float(x), d, robin=C)
            min_slack = min(min_slack, u + 0.5 * external_potential(float(x), alpha) - C)

    return EquilibriumReport(
        sup_support_residual=sup_res,
        min_off_support_slack=min_slack,
        grid_size=grid_size,
        passed=(sup_res < support_tol and min_slack >= slack_tol),
    )
