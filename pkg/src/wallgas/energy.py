"""Equilibrium energies, the positivity-probability exponent, and the
left/right large-deviation rate functions.

The energy of the constrained equilibrium measure is assembled as

    E* = C + m2/2 - alpha * int log(x) nu(dx)

(Robin constant + half the second moment minus alpha times the log moment);
each ingredient is independently verified elsewhere, which makes this
pipeline the source of truth.  Long-form closed expressions for alpha > 0
are retained for cross-checking only: they disagree with the pipeline (see
the audit module) and are reported, never reconciled.

Rate conventions: all rates are "per n^2" (right tail) or "per n" (left
tail) with the Dyson beta factored out, i.e.

    P(lambda_min >= sqrt(n) s)  ~ exp(-(beta/2) n^2 Phi_plus(s))
    P(lambda_min <= sqrt(n) x)  ~ exp(-(beta/2) n   DeltaE(x))
"""

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .density import density_for, log_moment, second_moment
from .edges import RegimeKind, solve_b
from .errors import OracleMismatch
from .model import SQRT2, EnsembleParams, a_crit, b_crit
from .potential import robin_constant
from .quadrature import sqrt_edge_quad


@dataclass(frozen=True)
class EnergyReport:
    params: EnsembleParams
    edges: Tuple[float, float]
    regime: str
    robin: float
    m2: float
    log_moment: float
    energy: float
    closed_form_energy: Optional[float] = None
    discrepancy: Optional[float] = None


def energy(params):
    """Equilibrium energy via the robin + m2/2 - alpha*logmom pipeline.

    When a long-form closed expression exists it is evaluated as well and
    the discrepancy recorded (nonzero for alpha > 0 by design; the
    pipeline wins).
    """
    d = density_for(params)
    sol = d.solution
    a, b = sol.edges.a, sol.edges.b
    alpha = params.alpha
    robin = robin_constant(d)
    m2 = second_moment(d)
    lm = log_moment(d) if alpha > 0.0 else 0.0
    e = robin + 0.5 * m2 - alpha * lm

    closed = None
    if alpha == 0.0:
        closed = energy_alpha0_closed(max(params.sigma, -SQRT2))
    elif sol.kind is RegimeKind.CRITICAL_PINNED:
        closed = closed_form_energy_critical(alpha)
    else:
        closed = closed_form_energy_wall(alpha, params.sigma)
    return EnergyReport(
        params=params,
        edges=(a, b),
        regime=sol.kind.value,
        robin=robin,
        m2=m2,
        log_moment=lm,
        energy=e,
        closed_form_energy=closed,
        discrepancy=None if closed is None else e - closed,
    )


def energy_alpha0_closed(sigma):
    """Closed-form energy for alpha = 0, sigma >= -sqrt(2).

    (1/108)(81 + 72 s^2 - 2 s^4 + (30 s + 2 s^3) sqrt(6+s^2)
            - 108 log((-s + sqrt(6+s^2))/6)).
    At s = -sqrt(2) this collapses to 3/4 + log(2)/2, the unconstrained
    (semicircle) value.
    """
    if sigma < -SQRT2:
        raise ValueError(f"closed form holds for sigma >= -sqrt(2), got {sigma}")
    s = float(sigma)
    root = math.sqrt(6.0 + s * s)
    return (
        81.0
        + 72.0 * s * s
        - 2.0 * s**4
        + (30.0 * s + 2.0 * s**3) * root
        - 108.0 * math.log((root - s) / 6.0)
    ) / 108.0


def energy_fullline(alpha):
    """Energy of the unconstrained ensemble on the whole real line.

    3/4 + log(2)/2 + (3/2 + log 2) a + a^2 log(2a) - (a^2 + a + 1/4) log(1+2a),
    with the a = 0 limit 3/4 + log(2)/2.
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    base = 0.75 + 0.5 * math.log(2.0)
    if alpha == 0.0:
        return base
    a = float(alpha)
    return (
        base
        + (1.5 + math.log(2.0)) * a
        + a * a * math.log(2.0 * a)
        - (a * a + a + 0.25) * math.log(1.0 + 2.0 * a)
    )


def theta(alpha, beta=2.0):
    """Positivity-probability exponent: log p_n ~ -beta * theta(alpha) * n^2.

    theta = (E*_{alpha, wall at 0} - E*_{alpha, full line}) / 2, both sides
    through the pipeline where available (the alpha = 0 full-line reference
    is the pipeline's semicircle energy).
    """
    constrained = energy(EnsembleParams(alpha=alpha, beta=beta, sigma=0.0)).energy
    if alpha == 0.0:
        free = energy(EnsembleParams(alpha=0.0, beta=beta, sigma=-SQRT2)).energy
    else:
        free = energy_fullline(alpha)
    return 0.5 * (constrained - free)


def _critical_edges(alpha):
    if alpha == 0.0:
        return -SQRT2, SQRT2
    ac = a_crit(alpha)
    return ac, b_crit(alpha, ac)


def phi_plus_closed(sigma):
    """Printed right rate for alpha = 0 (verified identical to the energy
    difference): (1/54)(36 s^2 - s^4 + (15 s + s^3) sqrt(s^2+6)
    + 27(log 18 - 2 log(sqrt(s^2+6) - s)))."""
    s = float(sigma)
    if s < -SQRT2:
        return 0.0
    root = math.sqrt(s * s + 6.0)
    return (
        36.0 * s * s
        - s**4
        + (15.0 * s + s**3) * root
        + 27.0 * (math.log(18.0) - 2.0 * math.log(root - s))
    ) / 54.0


def right_rate(sigma, alpha, beta=2.0):
    """Phi_plus(sigma): energy excess of the wall at sigma over the
    unconstrained-within-regime reference; zero below the critical edge.

    For alpha = 0 the printed closed form is evaluated as well and must
    agree within 1e-7.
    """
    ac, _ = _critical_edges(alpha)
    if sigma <= ac:
        return 0.0
    e_sigma = energy(EnsembleParams(alpha=alpha, beta=beta, sigma=sigma)).energy
    e_ref = energy(EnsembleParams(alpha=alpha, beta=beta, sigma=max(ac, 0.0) if alpha > 0 else -SQRT2)).energy
    rate = max(e_sigma - e_ref, 0.0)
    if alpha == 0.0:
        closed = phi_plus_closed(sigma)
        if abs(rate - closed) > 1e-7 * max(1.0, abs(rate)):
            raise OracleMismatch("right rate (alpha=0)", closed, rate, 1e-7)
    return rate


def phi_minus_closed(sigma):
    """Printed left rate for alpha = 0, sigma <= -sqrt(2):
    log 2 - s sqrt(s^2-2) - 2 log(-s + sqrt(s^2-2))."""
    s = float(sigma)
    if s > -SQRT2:
        raise ValueError(f"left tail needs sigma <= -sqrt(2), got {s}")
    root = math.sqrt(max(s * s - 2.0, 0.0))
    return math.log(2.0) - s * root - 2.0 * math.log(root - s)


def left_rate(x, alpha, beta=2.0):
    """DeltaE(x) = 2 int_x^{a_c} h(t) dt: the cost of pulling the leftmost
    charge from the critical edge down to x.

    Quadrature is authoritative; the closed forms (printed alpha = 0 form,
    and the xi/r expression for alpha > 0) are cross-checked against it.
    """
    ac, bc = _critical_edges(alpha)
    if x > ac:
        raise ValueError(f"left rate defined for x <= critical edge {ac}, got {x}")
    if alpha > 0.0 and x <= 0.0:
        raise ValueError(f"left rate needs x > 0 when alpha > 0, got {x}")
    if x == ac:
        return 0.0

    def h(t):
        v = math.sqrt((bc - t) * (ac - t))
        if alpha > 0.0:
            v *= 1.0 + alpha / (math.sqrt(ac * bc) * t)
        return v

    rate = 2.0 * abs(sqrt_edge_quad(h, ac, x))  # integral over [x, a_c]
    if alpha == 0.0:
        closed = phi_minus_closed(x)
        if abs(rate - closed) > 1e-8 * max(1.0, abs(rate)):
            raise OracleMismatch("left rate (alpha=0)", closed, rate, 1e-8)
    else:
        closed = delta_e_closed(x, alpha)
        if abs(rate - closed) > 1e-8 * max(1.0, abs(rate)):
            raise OracleMismatch("left rate (xi,r closed form)", closed, rate, 1e-8)
    return rate


def delta_e_closed(x, alpha):
    """Closed form of DeltaE for alpha > 0 in the variables
    xi = (2x - b_c - a_c)/(b_c - a_c), r = (b_c + a_c)/(b_c - a_c).

    Verified exact against the quadrature (unlike its printed series
    expansion; see tail_coefficient_quoted).
    """
    if not alpha > 0.0:
        raise ValueError("xi/r closed form applies to alpha > 0")
    ac, bc = _critical_edges(alpha)
    th = bc - ac
    xi = (2.0 * x - bc - ac) / th
    r = (bc + ac) / th
    s = math.sqrt(xi * xi - 1.0)
    sr = math.sqrt(r * r - 1.0)
    t1 = 0.25 * th * th * (-xi * s - math.log(-xi + s))
    t2 = 0.5 * (ac * ac - bc * bc) * (
        s - 1.5 * sr * math.log(r * r - 1.0) + r * math.log(-xi + s)
    )
    t3 = -0.5 * (ac * ac - bc * bc) * sr * math.log(
        (-1.0 - r * xi + math.sqrt((r * r - 1.0) * (xi * xi - 1.0))) / ((r + xi) * sr**3)
    )
    return t1 + t2 + t3


def tail_coefficient(alpha):
    """Leading coefficient C0 of DeltaE(x) ~ C0 (a_c - x)^{3/2} at the
    critical edge: C0 = (4/3) sqrt(b_c - a_c) (3 a_c + b_c)/(2 a_c), with
    the alpha = 0 value 2^{11/4}/3.
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0:
        return 2.0 ** 2.75 / 3.0
    ac, bc = _critical_edges(alpha)
    return (4.0 / 3.0) * math.sqrt(bc - ac) * (3.0 * ac + bc) / (2.0 * ac)


def tail_coefficient_quoted(alpha):
    """The published simplified bracket for C0; fails the quadrature fit
    for alpha > 0 (it goes negative) and is kept only for the audit."""
    ac, bc = _critical_edges(alpha)
    if alpha == 0.0:
        return (4.0 / 3.0) * math.sqrt(bc - ac)
    r = (bc + ac) / (bc - ac)
    return math.sqrt(bc - ac) * (
        4.0 / 3.0 + r * (r - 2.0 - math.sqrt(5.0)) * (r - 2.0 + math.sqrt(5.0)) / (6.0 * (r - 1.0))
    )


def log_prob_estimate(n, params):
    """Leading-order log P(lambda_min >= sqrt(n) sigma) against the
    unconstrained full-line ensemble:

        -(beta/2) n^2 (E*_{alpha, sigma or critical} - E*_{alpha, full line}).

    For alpha = 0 this is -(beta/2) n^2 Phi_plus(sigma) (zero once the wall
    leaves the semicircle sea); for alpha > 0 a positivity cost
     -beta theta(alpha) n^2 remains even when the wall does not bind.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    alpha, beta, sigma = params.alpha, params.beta, params.sigma
    ac, _ = _critical_edges(alpha)
    rate = right_rate(sigma, alpha, beta=beta) if sigma > ac else 0.0
    if alpha > 0.0:
        rate += 2.0 * theta(alpha, beta=beta)
    return -0.5 * beta * n * n * rate


class RateKind(enum.Enum):
    RIGHT_TAIL = "RightTail"
    LEFT_TAIL = "LeftTail"


@dataclass(frozen=True)
class RateCurve:
    kind: RateKind
    samples: List[Tuple[float, float]]
    tail_coefficient: float


def rate_curve(kind, alpha, xs, beta=2.0):
    """Sampled rate curve: (sigma, Phi_plus) or (x, DeltaE) rows."""
    kind = RateKind(kind) if not isinstance(kind, RateKind) else kind
    if kind is RateKind.RIGHT_TAIL:
        samples = [(float(s), right_rate(float(s), alpha, beta=beta)) for s in xs]
    else:
        samples = [(float(x), left_rate(float(x), alpha, beta=beta)) for x in xs]
    return RateCurve(kind=kind, samples=samples, tail_coefficient=tail_coefficient(alpha))


# --- long-form closed expressions, retained for cross-checking only ---


def _aux_long_u(x, th, L):
    # auxiliary bracket multiplying alpha in the wall-regime long form
    sq = math.sqrt((x - 1.0) / x)
    return (
        (th * th / 8.0) * (4.0 * x - 3.0) * sq
        + 0.5 * math.log((math.sqrt(x) + math.sqrt(x - 1.0)) / (math.sqrt(x) - math.sqrt(x - 1.0)))
        + (1.5 - 3.0 * x + (3.0 - 2.0 * x) * L) / (2.0 * math.sqrt(x * (x - 1.0)))
        + 0.25
        * th
        * (
            2.0
            - 2.0 * x
            + 2.0 * math.sqrt((x - 1.0) * x)
            + 2.0 * math.log(1.0 + sq)
            + math.log(x)
            - (1.0 + math.log(4.0))
        )
    )


def _aux_long_v(x, th):
    # auxiliary bracket multiplying alpha^2 in both long forms
    ratio = (math.sqrt(x) + math.sqrt(x - 1.0)) / (math.sqrt(x) - math.sqrt(x - 1.0))
    return (
        -2.0 * (x + math.sqrt(x * (x - 1.0))) * math.log(ratio)
        + math.sqrt(x * (x - 1.0)) * math.log(4.0)
        + x * math.log(4.0 * x * (x - 1.0))
    ) / (2.0 * x) + (0.5 - 0.5 * math.sqrt((x - 1.0) / x)) * math.log(th)


def closed_form_energy_wall(alpha, sigma):
    """Long-form closed energy expression for the wall regime (alpha > 0,
    sigma >= a_c), transcribed literally.  Known to disagree with the
    pipeline; reported via EnergyReport.discrepancy and the audit."""
    a = sigma
    b = solve_b(a, alpha)
    L = math.log((b - a) / 4.0)
    x = b / (b - a)
    val = -(
        a * a
        + 6.0 * a * b
        + b * b
        + 2.0 * (a - b) ** 2 * L
        - 4.0 * (b + a) ** 2
        + 4.0 * (b * b - a * a) * L
    ) / 16.0
    val += (b - a) / 256.0 * (15.0 * a**3 + 27.0 * a * a * b + 13.0 * a * b * b + 9.0 * b**3)
    val -= alpha * _aux_long_u(x, b - a, L) + alpha * alpha * _aux_long_v(x, b - a)
    return val


def closed_form_energy_critical(alpha):
    """Long-form closed energy expression for the critical regime,
    transcribed literally.  Its alpha -> 0 limit is -1/4 instead of the
    pipeline's 3/4 + log(6)/2; kept for the audit."""
    ac, bc = _critical_edges(alpha)
    th = bc - ac
    L = math.log(th / 4.0)
    xc = bc / th
    val = -(3.0 * ac * ac + 8.0 * ac * bc + 3.0 * bc * bc - 4.0 * ac * bc * L) / 16.0
    val += th / 256.0 * (15.0 * ac**3 + 27.0 * ac * ac * bc + 13.0 * ac * bc * bc + 9.0 * bc**3)
    sq = math.sqrt((xc - 1.0) / xc)
    ph = (
        (1.0 - 4.0 * math.log(2.0)) / 16.0
        + (th * th / 8.0) * (4.0 * xc - 3.0) * sq
        + 0.5 * math.log((math.sqrt(xc) + math.sqrt(xc - 1.0)) / (math.sqrt(xc) - math.sqrt(xc - 1.0)))
        + 0.25
        * th
        * th
        * (
            0.5 * math.log(th)
            - 2.0 * xc
            + 2.0 * xc * xc
            + (1.0 - 2.0 * xc) * math.sqrt((xc - 1.0) * xc)
            + 2.0 * math.log(math.sqrt(xc) + math.sqrt(xc - 1.0))
        )
    )
    val -= alpha * ph + alpha * alpha * _aux_long_v(xc, th)
    return val
