"""Finite-n spectral densities from half-line orthogonal polynomials.

The weight is w(x) = x^{2 mu} e^{-x^2} on [0, inf); its moments are
Gamma((k + 2 mu + 1)/2)/2.  Orthogonalization goes through a Cholesky
decomposition of the Hankel moment matrix in extended precision (the
matrix's condition number grows factorially, so one decomposition at 200+
bits with a residual check beats iterated Gram-Schmidt and is auditable).
The finite-n density is the direct sum of squared normalized wave
functions,

    f_n(x) = (1/sqrt(n)) sum_{k<n} phi_k(sqrt(n) x)^2,
    phi_k(y) = H_k(y) y^mu e^{-y^2/2} / sqrt(d_k),

which integrates to 1 exactly and converges to the limiting density with
mu_n = round(alpha n).
"""

import math
from dataclasses import dataclass
from typing import List

import numpy as np
from mpmath import mp, mpf

from .density import density_for
from .errors import PrecisionExhausted
from .model import EnsembleParams
from .montecarlo import mu_count

START_PREC = 256
MAX_PREC = 2048
ORTHO_RESIDUAL = mpf("1e-30")
MAX_DEGREES = 64


def half_line_moment(k, mu, prec=None):
    """Gamma((k + 2 mu + 1)/2)/2: the k-th moment of x^{2 mu} e^{-x^2}.

    Evaluated at ``prec`` bits (default: ambient inside build_basis, 256
    elsewhere).
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if prec is None:
        prec = max(mp.prec, START_PREC)
    with mp.workprec(prec):
        return mp.gamma((k + 2 * mpf(mu) + 1) / 2) / 2


@dataclass(frozen=True)
class OrthoBasis:
    """Monic orthogonal polynomials H_0..H_{n-1} for the half-line weight.

    coefficients[k][j] is the x^j coefficient of H_k (mpf); norms[k] is
    d_k = <H_k, H_k>_w.  All entries live at ``precision`` bits.
    """

    mu: float
    count: int
    coefficients: List[List[object]]
    norms: List[object]
    precision: int
    residual: float


def _orthogonalize(n, mu):
    moments = [half_line_moment(k, mu) for k in range(2 * n)]
    M = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            M[i, j] = moments[i + j]
    L = mp.cholesky(M)
    # forward-substitution inverse of the lower-triangular factor
    Linv = mp.matrix(n, n)
    for col in range(n):
        for row in range(col, n):
            s = mpf(1) if row == col else mpf(0)
            for j in range(col, row):
                s -= L[row, j] * Linv[j, col]
            Linv[row, col] = s / L[row, row]
    # rows of Linv are the orthonormal coefficient vectors; Gram residual
    G = Linv * M * Linv.T
    res = max(abs(G[i, j] - (1 if i == j else 0)) for i in range(n) for j in range(n))
    norms = [L[k, k] ** 2 for k in range(n)]
    coeffs = [[Linv[k, j] * L[k, k] for j in range(k + 1)] for k in range(n)]  # monic
    return coeffs, norms, res


def build_basis(n, mu, start_prec=START_PREC):
    """Orthogonalize 1, x, ..., x^{n-1}; raises the precision ladder
    (doubling, capped at 2048 bits) until the Gram residual is below 1e-30.
    """
    if not (1 <= n <= MAX_DEGREES):
        raise ValueError(f"n must be in [1, {MAX_DEGREES}], got {n}")
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    prec = start_prec
    while True:
        with mp.workprec(prec):
            coeffs, norms, res = _orthogonalize(n, mu)
            if res < ORTHO_RESIDUAL:
                return OrthoBasis(
                    mu=float(mu),
                    count=n,
                    coefficients=coeffs,
                    norms=norms,
                    precision=prec,
                    residual=float(res),
                )
        if prec >= MAX_PREC:
            raise PrecisionExhausted(
                f"Gram residual {float(res):.2e} above 1e-30 at {prec} bits (n={n}, mu={mu})"
            )
        prec = min(2 * prec, MAX_PREC)


def _fn_value(y, basis, upto=None):
    # sum_{k<upto} H_k(y)^2 / d_k * y^{2 mu} e^{-y^2}, at working precision
    upto = basis.count if upto is None else upto
    w = (y ** (2 * mpf(basis.mu)) if basis.mu else mpf(1)) * mp.exp(-y * y)
    tot = mpf(0)
    for ck, dk in zip(basis.coefficients[:upto], basis.norms[:upto]):
        h = mpf(0)
        yp = mpf(1)
        for c in ck:
            h += c * yp
            yp *= y
        tot += h * h / dk
    return tot * w


def finite_n_density(x, basis, n=None):
    """f_n(x) = (1/sqrt(n)) sum_{k<n} phi_k(sqrt(n) x)^2, as a double."""
    n = basis.count if n is None else n
    if n > basis.count:
        raise ValueError(f"basis holds {basis.count} polynomials, asked for {n}")
    if basis.mu > 0:
        if x <= 0.0:
            raise ValueError(f"x must be > 0 for mu > 0, got {x}")
    elif x < 0.0:
        raise ValueError(f"x must be >= 0 for mu = 0, got {x}")
    with mp.workprec(basis.precision):
        y = mp.sqrt(n) * mpf(x)
        return float(_fn_value(y, basis, upto=n) / mp.sqrt(n))


def density_mass(basis, n=None):
    """int_0^inf f_n, by extended-precision quadrature (equals 1 exactly)."""
    n = basis.count if n is None else n
    with mp.workprec(basis.precision):
        # in y = sqrt(n) x units: int f_n dx = (1/n) int sum_k phi_k(y)^2 dy;
        # wave functions are negligible beyond the oscillator turning point
        hi = math.sqrt(2.0 * n + 4.0 * basis.mu) + 6.0
        val = mp.quad(lambda y: _fn_value(y, basis, upto=n), [0, hi / 2, hi])
        return float(val / n)


def finite_n_grid(basis, xs, n=None):
    """Vectorized-over-points evaluation of f_n (double precision output)."""
    return np.array([finite_n_density(float(x), basis, n=n) for x in xs])


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    mu_n: int
    l1_trimmed: float
    mass: float


def convergence_study(alpha, n_list, grid=400):
    """L1 distances between f_n (mu_n = round(alpha n)) and the limiting
    density on the trimmed support [a + 0.05(b-a), b - 0.05(b-a)].

    Contract: the distances are nonincreasing between consecutive n within
    10% slack.
    """
    if list(n_list) != sorted(n_list):
        raise ValueError("n_list must be ascending")
    d = density_for(EnsembleParams(alpha=alpha, sigma=0.0))
    a, b = d.support
    th = b - a
    xs = np.linspace(a + 0.05 * th, b - 0.05 * th, grid)
    ref = d.pdf(xs)
    rows = []
    for n in n_list:
        mu_n = mu_count(alpha, n)
        basis = build_basis(n, mu_n)
        vals = finite_n_grid(basis, xs)
        l1 = float(np.trapezoid(np.abs(vals - ref), xs))
        rows.append(ConvergenceRow(n=n, mu_n=mu_n, l1_trimmed=l1, mass=density_mass(basis)))
    return rows


def trend_nonincreasing(rows, slack=0.10):
    """True when each L1 distance is at most (1+slack) times the previous."""
    ds = [r.l1_trimmed for r in rows]
    return all(ds[i + 1] <= ds[i] * (1.0 + slack) for i in range(len(ds) - 1))


def overlay_rows(basis, params=None, grid=200):
    """CSV rows (x, f_n(x), f_alpha(x)) across the limiting support."""
    if params is None:
        params = EnsembleParams(alpha=basis.mu / basis.count, sigma=0.0)
    d = density_for(params)
    a, b = d.support
    th = b - a
    xs = np.linspace(a + 1e-6 * th, b - 1e-6 * th, grid)
    fn = finite_n_grid(basis, xs)
    fa = d.pdf(xs)
    return [(float(x), float(u), float(v)) for x, u, v in zip(xs, fn, fa)]
