"""Metropolis Monte Carlo for the n-charge log-gas above a hard wall.

The chain samples the scaled joint law

    p(l_1..l_n) propto prod_i l_i^{beta*mu_n} exp(-(n beta/2) sum l_i^2)
                       * prod_{i<j} |l_i - l_j|^beta,   l_i >= sigma,

with mu_n = round(alpha*n).  Moves are single-coordinate Gaussian proposals
applied in a random order each sweep; proposals below the wall (or at
nonpositive values when alpha > 0) are rejected outright, which preserves
detailed balance trivially.

Determinism: all randomness is drawn from one numpy Generator seeded at
chain construction, in a fixed order (proposal order, step increments,
acceptance uniforms — one block per sweep), so a (seed, params, n, sweeps)
tuple fixes the trajectory bit-exactly.  Replica r of a multi-replica run
uses seed + r.  The inner loop is numba-compiled; a pure-Python sweep with
full log-density recomputation is kept as the detailed-balance oracle.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from numba import njit

from .density import density_for, integrate_density
from .errors import TuningFailure
from .model import EnsembleParams

TUNE_WINDOW = 200           # sweeps per step-width adjustment during burn-in
TARGET_ACCEPT = (0.25, 0.40)
USABLE_ACCEPT = (0.10, 0.60)
DEFAULT_THIN = 10


def mu_count(alpha, n):
    """mu_n = round(alpha*n); rounding keeps the determinant weight exact."""
    return int(round(alpha * n))


def gas_log_density(positions, n, params):
    """Log of the unnormalized joint density (full recomputation).

    beta * [ sum_i (mu_n log l_i - (n/2) l_i^2) + sum_{i<j} log|l_i - l_j| ];
    returns -inf for states below the wall or (alpha > 0) at l <= 0.
    """
    lam = np.asarray(positions, dtype=float)
    if lam.ndim != 1:
        raise ValueError("positions must be a 1-d array")
    alpha, beta, sigma = params.alpha, params.beta, params.sigma
    if np.any(lam < sigma) or (alpha > 0.0 and np.any(lam <= 0.0)):
        return -math.inf
    m = mu_count(alpha, n)
    body = -0.5 * n * float(np.sum(lam * lam))
    if m:
        body += m * float(np.sum(np.log(lam)))
    diffs = np.abs(lam[:, None] - lam[None, :])[np.triu_indices(lam.size, k=1)]
    if np.any(diffs == 0.0):
        return -math.inf
    body += float(np.sum(np.log(diffs)))
    return beta * body


@njit(cache=True, nogil=True)
def _sweep_block(pos, orders, steps, us, wall, mu_n, n_scale, beta, positive):
    """Run a block of sweeps in place; returns the number of accepted moves."""
    nsweeps, n = orders.shape
    accepted = 0
    for s in range(nsweeps):
        for k in range(n):
            i = orders[s, k]
            old = pos[i]
            new = old + steps[s, k]
            if new < wall or (positive and new <= 0.0):
                continue
            delta = -0.5 * n_scale * (new * new - old * old)
            if mu_n != 0.0:
                delta += mu_n * (np.log(new) - np.log(old))
            ok = True
            for j in range(n):
                if j == i:
                    continue
                dn = new - pos[j]
                if dn == 0.0:
                    ok = False
                    break
                delta += np.log(np.abs(dn)) - np.log(np.abs(old - pos[j]))
            if not ok:
                continue
            bd = beta * delta
            if bd >= 0.0 or us[s, k] < np.exp(bd):
                pos[i] = new
                accepted += 1
    return accepted


@dataclass
class GasChain:
    params: EnsembleParams
    n: int
    positions: np.ndarray
    step_width: float
    rng_seed: int
    rng: np.random.Generator = field(repr=False)
    mu_n: int = 0
    accepted: int = 0
    proposed: int = 0
    sweeps: int = 0

    @property
    def acceptance_rate(self):
        return self.accepted / self.proposed if self.proposed else 0.0


def _quantile_init(params, n):
    """Initial positions at the quantiles of the analytic density.

    Cuts burn-in without biasing the stationary law.  Falls back to a
    uniform band just above the wall if the analytic density is not wanted.
    """
    d = density_for(params)
    a, b = d.support
    pad = 1e-6 * (b - a)
    grid = np.linspace(a + pad, b - pad, 2048)
    pdf = d.pdf(grid)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))])
    cdf /= cdf[-1]
    qs = (np.arange(n) + 0.5) / n
    return np.interp(qs, cdf, grid)


def make_chain(params, n, seed, step_width=None, init="quantile"):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    if init == "quantile":
        pos = _quantile_init(params, n)
    else:
        lo = max(params.sigma, 0.01) if params.alpha > 0.0 else params.sigma
        pos = np.sort(rng.uniform(lo, lo + 2.0, n))
    if step_width is None:
        d = density_for(params)
        a, b = d.support
        step_width = 0.7 * (b - a) / math.sqrt(n)
    return GasChain(
        params=params,
        n=n,
        positions=np.asarray(pos, dtype=float),
        step_width=float(step_width),
        rng_seed=int(seed),
        rng=rng,
        mu_n=mu_count(params.alpha, n),
    )


def _draw_block(chain, nsweeps):
    n = chain.n
    orders = np.argsort(chain.rng.random((nsweeps, n)), axis=1)
    steps = chain.rng.normal(0.0, chain.step_width, (nsweeps, n))
    us = chain.rng.random((nsweeps, n))
    return orders, steps, us


def _advance(chain, nsweeps):
    orders, steps, us = _draw_block(chain, nsweeps)
    acc = _sweep_block(
        chain.positions,
        orders,
        steps,
        us,
        chain.params.sigma,
        float(chain.mu_n),
        float(chain.n),
        chain.params.beta,
        chain.params.alpha > 0.0,
    )
    chain.accepted += int(acc)
    chain.proposed += nsweeps * chain.n
    chain.sweeps += nsweeps
    return int(acc)


def metropolis_sweep(chain, reference=False, delta_tol=1e-10):
    """Advance the chain by one sweep (n single-coordinate proposals).

    With reference=True the sweep runs in pure Python, computing each
    move's log-density change both incrementally and by full recomputation
    and checking they agree within delta_tol; the random stream and the
    resulting state match the compiled path exactly.
    """
    if not reference:
        _advance(chain, 1)
        return chain
    orders, steps, us = _draw_block(chain, 1)
    pos = chain.positions
    n = chain.n
    params = chain.params
    mu_n = float(chain.mu_n)
    for k in range(n):
        i = orders[0, k]
        old = pos[i]
        new = old + steps[0, k]
        chain.proposed += 1
        if new < params.sigma or (params.alpha > 0.0 and new <= 0.0):
            continue
        delta = -0.5 * n * (new * new - old * old)
        if mu_n:
            delta += mu_n * (math.log(new) - math.log(old))
        others = np.abs(new - pos[np.arange(n) != i])
        if np.any(others == 0.0):
            continue
        delta += float(np.sum(np.log(others)) - np.sum(np.log(np.abs(old - pos[np.arange(n) != i]))))
        before = gas_log_density(pos, n, params)
        trial = pos.copy()
        trial[i] = new
        after = gas_log_density(trial, n, params)
        full_delta = (after - before) / params.beta
        if abs(full_delta - delta) > delta_tol:
            raise AssertionError(
                f"incremental delta {delta} vs full recompute {full_delta} "
                f"differ by {abs(full_delta - delta):.2e}"
            )
        bd = params.beta * delta
        if bd >= 0.0 or us[0, k] < math.exp(bd):
            pos[i] = new
            chain.accepted += 1
    chain.sweeps += 1
    return chain


def _tune(chain, burn_in):
    """Burn in while adjusting step_width toward 25-40% acceptance."""
    done = 0
    while done < burn_in:
        block = min(TUNE_WINDOW, burn_in - done)
        before = chain.proposed
        acc = _advance(chain, block)
        rate = acc / (chain.proposed - before)
        if rate < TARGET_ACCEPT[0]:
            chain.step_width *= 0.8
        elif rate > TARGET_ACCEPT[1]:
            chain.step_width *= 1.25
        done += block
    probe_before = chain.proposed
    acc = _advance(chain, TUNE_WINDOW)
    rate = acc / (chain.proposed - probe_before)
    if not (USABLE_ACCEPT[0] <= rate <= USABLE_ACCEPT[1]):
        raise TuningFailure(
            f"acceptance {rate:.3f} outside {USABLE_ACCEPT} after burn-in "
            f"(step_width={chain.step_width:.3g})"
        )
    return rate


@dataclass
class SpectralHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int
    density: np.ndarray
    acceptance_rate: float
    step_width: float
    seed: int

    @property
    def bin_centers(self):
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])


def default_bin_range(params):
    """Histogram range: the support padded by 15% of its width on any soft
    side, clipped at the wall on the hard side."""
    d = density_for(params)
    a, b = d.support
    th = b - a
    lo = a if a == params.sigma else max(params.sigma, a - 0.15 * th)
    hi = b + 0.15 * th
    return lo, hi


def run_and_histogram(params, n, sweeps, burn_in=None, seed=0, bins=40, thin=DEFAULT_THIN):
    """Tuned run accumulating a normalized position histogram.

    Burn-in (default max(1000, sweeps//10)) auto-tunes the step width to
    25-40% acceptance; afterwards every ``thin``-th sweep contributes all n
    positions to the histogram.  The density estimate integrates to 1 over
    the binned range.
    """
    if n < 2:
        raise ValueError(f"run_and_histogram needs n >= 2, got {n}")
    if burn_in is None:
        burn_in = max(1000, sweeps // 10)
    if sweeps <= burn_in:
        raise ValueError(f"sweeps ({sweeps}) must exceed burn_in ({burn_in})")
    chain = make_chain(params, n, seed)
    rate = _tune(chain, burn_in)
    lo, hi = default_bin_range(params)
    edges = np.linspace(lo, hi, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    n_samples = (sweeps - chain.sweeps) // thin
    if n_samples < 1:
        raise ValueError(f"sweeps ({sweeps}) leave no sampling room after burn-in")
    for _ in range(n_samples):
        _advance(chain, thin)
        c, _ = np.histogram(chain.positions, bins=edges)
        counts += c
    total = int(counts.sum())
    width = edges[1] - edges[0]
    density = counts / (total * width) if total else counts.astype(float)
    return SpectralHistogram(
        bin_edges=edges,
        counts=counts,
        total=total,
        density=density,
        acceptance_rate=rate,
        step_width=chain.step_width,
        seed=int(seed),
    )


def analytic_bin_averages(hist, d):
    """Bin-averaged analytic density on the histogram's binning."""
    out = np.zeros(hist.counts.size)
    for i, (lo, hi) in enumerate(zip(hist.bin_edges[:-1], hist.bin_edges[1:])):
        out[i] = integrate_density(d, target=1e-8, lo=lo, hi=hi) / (hi - lo)
    return out


def l1_distance(hist, d, exclude_wall_bin=None):
    """L1 distance between the histogram estimate and the analytic density
    on the common binning.

    The first bin is excluded when the analytic form diverges at the wall
    (inverse square root there makes any finite binning meaningless).
    """
    if exclude_wall_bin is None:
        a, _ = d.support
        exclude_wall_bin = abs(hist.bin_edges[0] - a) < 1e-12 and d.params.sigma == a
    analytic = analytic_bin_averages(hist, d)
    width = hist.bin_edges[1] - hist.bin_edges[0]
    diffs = np.abs(hist.density - analytic) * width
    start = 1 if exclude_wall_bin else 0
    return float(np.sum(diffs[start:]))


def min_eigenvalue_samples(params, n, replicas, sweeps, seed, burn_in=None, max_workers=None):
    """Post-burn-in time series of min(positions), one array per replica.

    Replica r runs an independent chain seeded with seed + r; replicas are
    evaluated on a thread pool (the compiled sweep releases the GIL) and
    results are ordered by replica index regardless of scheduling.
    """
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    if burn_in is None:
        burn_in = max(1000, sweeps // 10)
    if sweeps <= burn_in:
        raise ValueError(f"sweeps ({sweeps}) must exceed burn_in ({burn_in})")

    def one(r):
        chain = make_chain(params, n, seed + r)
        _tune(chain, burn_in)
        out = np.empty(sweeps - chain.sweeps)
        for k in range(out.size):
            _advance(chain, 1)
            out[k] = chain.positions.min()
        return out

    if replicas == 1:
        return [one(0)]
    with ThreadPoolExecutor(max_workers=max_workers or min(replicas, 8)) as ex:
        return list(ex.map(one, range(replicas)))


def histogram_csv_rows(hist):
    """CSV rows (bin_center, density_estimate) for export."""
    return [(float(c), float(v)) for c, v in zip(hist.bin_centers, hist.density)]


def min_series_csv_rows(series):
    """CSV rows (sweep, min_value) for one replica's time series."""
    return [(int(i), float(v)) for i, v in enumerate(series)]
