"""Support-edge solver and regime classification.

Three regimes partition the (alpha, sigma) plane:

* CRITICAL_PINNED  (alpha > 0, 0 <= sigma <= a_c): the wall does not bind;
  edges are the critical pair (a_c, b_c) and the density vanishes at both.
* WALL_PINNED      (alpha > 0, sigma > a_c, or alpha = 0, sigma > -sqrt(2)):
  the lower edge sits on the wall and the density diverges there like an
  inverse square root.
* FREE_SEMICIRCLE  (alpha = 0, sigma <= -sqrt(2)): the wall is outside the
  semicircle sea entirely.
"""

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import BracketFailure
from .model import SQRT2, EdgePair, EnsembleParams, a_crit, b_crit, phi, psi

PSI_RTOL = 8.881784197001252e-16  # brentq floor, 4*eps; contract asks <= 1e-12
RESIDUAL_PSI_BOUND = 1e-10
PHI_SLACK_BOUND = -1e-10


class RegimeKind(enum.Enum):
    CRITICAL_PINNED = "CriticalPinned"
    WALL_PINNED = "WallPinned"
    FREE_SEMICIRCLE = "FreeSemicircle"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    params: EnsembleParams


@dataclass(frozen=True)
class SupportSolution:
    regime: Regime
    edges: EdgePair
    residual_psi: float
    residual_phi_slack: float

    @property
    def kind(self):
        return self.regime.kind

    @property
    def params(self):
        return self.regime.params


def solve_b(a, alpha):
    """Unique b in (a, inf) with psi(b, a) = 0.

    Brackets on [a + eps, a + (2/sqrt(3)) sqrt(2 alpha + 2) + 1]; the upper
    end is the root's a-priori bound padded by +1 (the bound is attained
    only asymptotically).  For alpha = 0 with a < 0 the bound does not
    apply, so the bracket is extended geometrically before giving up.
    """
    lo = a + 1e-12 * max(1.0, abs(a))
    hi = a + (2.0 / math.sqrt(3.0)) * math.sqrt(2.0 * alpha + 2.0) + 1.0
    f_lo = psi(lo, a, alpha)
    f_hi = psi(hi, a, alpha)
    if f_lo > 0.0:
        raise BracketFailure(f"psi(a+eps, a) = {f_lo} > 0 at a={a}, alpha={alpha}")
    tries = 0
    while f_hi < 0.0:
        tries += 1
        if tries > 60:
            raise BracketFailure(f"no psi sign change above a={a} for alpha={alpha}")
        hi = a + 2.0 * (hi - a)
        f_hi = psi(hi, a, alpha)
    return brentq(lambda x: psi(x, a, alpha), lo, hi, xtol=5e-324, rtol=PSI_RTOL)


def classify(params):
    """Regime tag plus support edges and solver residuals for params."""
    alpha, sigma = params.alpha, params.sigma
    if alpha == 0.0:
        if sigma <= -SQRT2:
            kind = RegimeKind.FREE_SEMICIRCLE
            a, b = -SQRT2, SQRT2
        else:
            kind = RegimeKind.WALL_PINNED
            a = sigma
            b = solve_b(a, 0.0)
    else:
        ac = a_crit(alpha)
        if sigma <= ac:
            kind = RegimeKind.CRITICAL_PINNED
            a = ac
            b = b_crit(alpha, ac)
        else:
            kind = RegimeKind.WALL_PINNED
            a = sigma
            b = solve_b(a, alpha)

    res_psi = psi(b, a, alpha)
    slack = phi(b, a, alpha)
    sol = SupportSolution(
        regime=Regime(kind=kind, params=params),
        edges=EdgePair(a, b),
        residual_psi=res_psi,
        residual_phi_slack=slack,
    )
    if abs(res_psi) > RESIDUAL_PSI_BOUND * max(1.0, abs(b)):
        raise BracketFailure(f"psi residual out of contract: {res_psi} at {params}")
    if slack < PHI_SLACK_BOUND:
        raise BracketFailure(f"phi slack {slack} < {PHI_SLACK_BOUND} at {params}")
    return sol
