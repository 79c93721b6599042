"""Ensemble parameters and the two constraint functions whose roots fix the
support of the limiting spectral measure.

The external field is Q(x) = x^2 + 2*alpha*log(1/x) on [sigma, +inf).  The
pair (a, b) of support edges is pinned down by

    phi(b, a) = b + a - 2*alpha/sqrt(a*b)          (>= 0 required)
    psi(b, a) = (3/4)(b-a)^2 + a(b-a) + 2*alpha*sqrt(a/b) - 2*alpha - 2 = 0

psi = 0 is exactly the statement that the candidate density integrates to 1;
phi >= 0 is its nonnegativity.  The critical edge a_c is the smallest a for
which both can hold, where phi(b, a_c) = 0 as well.
"""

import math
from dataclasses import dataclass

from scipy.optimize import brentq

SQRT2 = math.sqrt(2.0)
ALPHA_CAP = 1e6


@dataclass(frozen=True)
class EnsembleParams:
    """The triple (alpha, beta, sigma) defining the constrained ensemble.

    alpha  -- limit of mu_n/n, >= 0
    beta   -- Dyson index, > 0 (canonical values 1, 2, 4)
    sigma  -- hard-wall position in scaled (x/sqrt(n)) units; must be >= 0
              when alpha > 0, any real when alpha = 0
    """

    alpha: float
    beta: float = 2.0
    sigma: float = 0.0

    def __post_init__(self):
        if not (self.alpha >= 0.0):
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.alpha > ALPHA_CAP:
            raise ValueError(f"alpha capped at {ALPHA_CAP:g} (numerically untested beyond)")
        if not (self.beta > 0.0):
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.alpha > 0.0 and not (self.sigma >= 0.0):
            raise ValueError(f"sigma must be >= 0 when alpha > 0, got {self.sigma}")
        if math.isnan(self.sigma):
            raise ValueError("sigma must not be NaN")


@dataclass(frozen=True)
class EdgePair:
    """Support edges a < b in scaled eigenvalue units."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a < self.b):
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")

    @property
    def width(self):
        return self.b - self.a


def _check_domain(x, a, alpha):
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha > 0 and (x <= 0.0 or a <= 0.0):
        raise ValueError(f"phi/psi need x > 0 and a > 0 when alpha > 0, got x={x}, a={a}")


def phi(x, a, alpha):
    """x + a - 2*alpha/sqrt(a*x); the density-nonnegativity constraint."""
    _check_domain(x, a, alpha)
    if alpha == 0.0:
        return x + a
    return x + a - 2.0 * alpha / math.sqrt(a * x)


def psi(x, a, alpha):
    """(3/4)(x-a)^2 + a(x-a) + 2*alpha*sqrt(a/x) - 2*alpha - 2.

    Vanishes exactly when the candidate density on [a, x] has total mass 1.
    psi(a, a) = -2 for every admissible a.
    """
    _check_domain(x, a, alpha)
    d = x - a
    val = 0.75 * d * d + a * d - 2.0
    if alpha > 0.0:
        val += 2.0 * alpha * math.sqrt(a / x) - 2.0 * alpha
    return val


def a_crit_closed(alpha):
    """Closed form for the critical lower edge, alpha > 0.

    Loses all significance below alpha ~ 1e-3 (a_c ~ 0.92*alpha^2 while the
    radicand is a difference of O(1) terms); may return NaN there.  Use
    a_crit() for the polished value.
    """
    if not alpha > 0.0:
        raise ValueError(f"a_crit needs alpha > 0, got {alpha}")
    g = math.sqrt(1.0 + 2.0 * alpha + 4.0 * alpha * alpha)
    inner = 2.0 + 4.0 * alpha - 4.0 * alpha * alpha + 2.0 * (1.0 + alpha) * g
    rad = 5.0 / 3.0 + 5.0 * alpha / 3.0 - g / 3.0 - (2.0 / 3.0) * math.sqrt(inner)
    if rad < 0.0:
        return math.nan
    return math.sqrt(rad)


def _b_quadratic(a, alpha):
    # b solving the (phi=0)-reduced psi equation: valid exactly at criticality
    rad = 6.0 * (alpha + 1.0) - 2.0 * a * a
    return (2.0 / 3.0) * (math.sqrt(rad) - a / 2.0)


def _phi_at_quadratic_b(a, alpha):
    return phi(_b_quadratic(a, alpha), a, alpha)


def a_crit_solved(alpha):
    """Critical lower edge by bracketed root solve of phi(b(a), a) = 0.

    Independent of the closed form; serves as its debugging oracle and as
    the fallback where the closed form degrades.
    """
    if not alpha > 0.0:
        raise ValueError(f"a_crit needs alpha > 0, got {alpha}")
    sq = math.sqrt(alpha)
    lo = min(alpha * alpha / 100.0, sq / 1000.0)
    # phi(b(a), a) -> -inf as a -> 0+ and is >= 0 at a = sqrt(alpha)
    return brentq(
        _phi_at_quadratic_b, lo, sq, args=(alpha,), xtol=5e-324, rtol=8.881784197001252e-16
    )


def a_crit(alpha):
    """Critical lower edge a_c in (0, sqrt(alpha)).

    Evaluates the closed form and keeps it when its residual in the coupled
    system passes; otherwise (small alpha, where the closed form cancels
    catastrophically) refines by the bracketed solve.
    """
    ac = a_crit_closed(alpha)
    if math.isfinite(ac) and ac > 0.0:
        bc = _b_quadratic(ac, alpha)
        if abs(phi(bc, ac, alpha)) <= 1e-10 * max(1.0, bc):
            return ac
    return a_crit_solved(alpha)


def b_crit(alpha, a_c=None):
    """Upper critical edge (2/3)(sqrt(6(alpha+1) - 2 a_c^2) - a_c/2)."""
    if not alpha > 0.0:
        raise ValueError(f"b_crit needs alpha > 0, got {alpha}")
    if a_c is None:
        a_c = a_crit(alpha)
    rad = 6.0 * (alpha + 1.0) - 2.0 * a_c * a_c
    if rad < 0.0:
        raise ValueError(f"negative radicand in b_crit: a_c={a_c} invalid for alpha={alpha}")
    return (2.0 / 3.0) * (math.sqrt(rad) - a_c / 2.0)
