"""The limiting spectral densities, their moments, and the reflected
(lambda_max-constrained) variant.

Forms, on the open support (a, b):

* WALL:       (1/2pi) sqrt((b-x)/(x-a)) (2x + b - a - 2*alpha*sqrt(a/b)/x)
* PINNED:     (1/pi)  sqrt((b-x)(x-a)) (1 + alpha/(sqrt(ab) x))
* SEMICIRCLE: (1/pi)  sqrt(2 - x^2)
* reflected:  the wall/pinned form of the mirror problem evaluated at -x

When phi(b, a) = 0 the wall and pinned forms coincide pointwise: the linear
factor factorizes as 2x + (b-a) - a(a+b)/x = (2/x)(x-a)(x + (a+b)/2) and
(a+b)/2 = alpha/sqrt(ab).
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .edges import RegimeKind, SupportSolution, classify
from .errors import OracleMismatch
from .model import SQRT2, EnsembleParams
from .quadrature import support_quad, support_quad_uv


class DensityForm(enum.Enum):
    WALL = "WallForm"
    PINNED = "PinnedForm"
    SEMICIRCLE = "Semicircle"
    REFLECTED_WALL = "ReflectedWallForm"


@dataclass(frozen=True)
class DensityEval:
    """Evaluatable limiting density tied to a support solution.

    Reflected evaluations wrap the positive-side density in ``base`` and
    carry the mirrored support.
    """

    solution: SupportSolution
    form: DensityForm
    base: Optional["DensityEval"] = None

    @property
    def support(self):
        if self.form is DensityForm.REFLECTED_WALL:
            e = self.base.solution.edges
            return (-e.b, -e.a)
        e = self.solution.edges
        return (e.a, e.b)

    @property
    def params(self):
        return self.solution.params

    def pdf(self, x):
        """Vectorized evaluation strictly inside the open support."""
        x = np.asarray(x, dtype=float)
        return _pdf_array(x, self)


def density_for(params):
    """Build the limiting density for params (lambda_min >= sigma)."""
    sol = classify(params)
    form = {
        RegimeKind.CRITICAL_PINNED: DensityForm.PINNED,
        RegimeKind.WALL_PINNED: DensityForm.WALL,
        RegimeKind.FREE_SEMICIRCLE: DensityForm.SEMICIRCLE,
    }[sol.kind]
    return DensityEval(solution=sol, form=form)


def reflect_negative(alpha, sigma, beta=2.0):
    """Density of the ensemble conditioned on lambda_max <= sigma < 0.

    Solves the lambda_min problem for a wall at -sigma and mirrors it:
    g(x) = f_{alpha,-sigma}(-x) on the reflected edges.  The mirrored edge
    pair (A, B) = (-b, -a) satisfies the sign condition
    A + B + 2*alpha/sqrt(AB) <= 0, which is asserted.
    """
    if not sigma < 0.0:
        raise ValueError(f"reflect_negative needs sigma < 0, got {sigma}")
    base = density_for(EnsembleParams(alpha=alpha, beta=beta, sigma=-sigma))
    a, b = base.support
    cond = -(a + b)
    if alpha > 0.0:
        cond += 2.0 * alpha / math.sqrt(a * b)
    if cond > 1e-9:
        raise OracleMismatch("reflected sign condition a+b+2a/sqrt(ab) <= 0", cond, 0.0, 1e-9)
    return DensityEval(solution=base.solution, form=DensityForm.REFLECTED_WALL, base=base)


def _pdf_array(x, d):
    a, b = d.support
    if np.any((x <= a) | (x >= b)):
        bad = x[(x <= a) | (x >= b)] if x.ndim else x
        raise ValueError(f"x outside open support ({a}, {b}): {bad}")
    return _pdf_unchecked(x, d)


def _pdf_unchecked(x, d):
    a, b = d.support
    return _pdf_uv(x, x - a, b - x, d)


def _pdf_uv(x, u, v, d):
    """Density from the point and its exact edge offsets u = x-a, v = b-x.

    Quadrature supplies u, v straight from its substitution, which keeps
    narrow or far-from-origin supports accurate (x - a computed by
    subtraction can lose every digit there)."""
    if d.form is DensityForm.REFLECTED_WALL:
        return _pdf_uv(-x, v, u, d.base)
    a, b = d.support
    alpha = d.params.alpha
    if d.form is DensityForm.SEMICIRCLE:
        return np.sqrt(u * v) / np.pi
    if d.form is DensityForm.PINNED:
        out = np.sqrt(u * v) / np.pi
        if alpha > 0.0:
            out = out * (1.0 + alpha / (math.sqrt(a * b) * x))
        return out
    lin = 2.0 * x + (b - a)
    if alpha > 0.0:
        lin = lin - 2.0 * alpha * math.sqrt(a / b) / x
    return np.sqrt(v / u) * lin / (2.0 * np.pi)


def eval_density(x, d):
    """Density value at a point strictly inside the open support."""
    return float(_pdf_array(np.asarray(float(x)), d))


def integrate_density(d, weight=None, target=1e-10, lo=None, hi=None):
    """Quadrature of weight(x) * density(x) over the support (or over the
    intersection of [lo, hi] with it)."""
    a, b = d.support
    a2 = a if lo is None else max(a, lo)
    b2 = b if hi is None else min(b, hi)
    if b2 <= a2:
        return 0.0

    def g(x, u, v):
        # offsets relative to the true support edges, exact from the rule
        # when integrating the full support, reconstructed otherwise
        uu = u if a2 == a else x - a
        vv = v if b2 == b else b - x
        val = _pdf_uv(x, uu, vv, d)
        return val if weight is None else weight(x) * val

    return support_quad_uv(g, a2, b2, target=target)


def normalize_check(d):
    """Total mass by quadrature; contract is |result - 1| < 1e-8."""
    return integrate_density(d)


def second_moment(d):
    """Closed-form second moment, cross-checked against quadrature.

    (b-a)/128 * (15a^3 + 27a^2 b + 13ab^2 + 9b^3 - 16*alpha*sqrt(a/b)(3a+b));
    under reflection the moment is unchanged.
    """
    base = d.base if d.form is DensityForm.REFLECTED_WALL else d
    a, b = base.solution.edges.a, base.solution.edges.b
    alpha = base.params.alpha
    poly = 15.0 * a**3 + 27.0 * a * a * b + 13.0 * a * b * b + 9.0 * b**3
    if alpha > 0.0:
        poly -= 16.0 * alpha * math.sqrt(a / b) * (3.0 * a + b)
    closed = (b - a) / 128.0 * poly
    quadval = integrate_density(base, weight=lambda x: x * x)
    if abs(closed - quadval) > 1e-7 * max(1.0, abs(closed)):
        raise OracleMismatch("second moment", closed, quadval, 1e-7)
    return closed


def log_moment(d, target=1e-9):
    """integral of log(x) * density(x) dx by adaptive quadrature.

    Needs a strictly positive support, or a = 0 where the log singularity
    is integrable under the sin^2 substitution.
    """
    a, b = d.support
    if a < 0.0:
        raise ValueError(f"log moment needs support in [0, inf), got lower edge {a}")
    return integrate_density(d, weight=np.log, target=target)
