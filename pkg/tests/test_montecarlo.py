import math

import numpy as np
import pytest

from wallgas import (
    EnsembleParams,
    density_for,
    gas_log_density,
    l1_distance,
    make_chain,
    metropolis_sweep,
    min_eigenvalue_samples,
    run_and_histogram,
)
from wallgas.montecarlo import _advance, analytic_bin_averages, mu_count


class TestGasLogDensity:
    def test_single_particle_origin(self):
        p = EnsembleParams(0.0, sigma=-math.inf)
        assert gas_log_density(np.array([0.0]), 1, p) == 0.0

    def test_swap_symmetry(self):
        p = EnsembleParams(0.5, sigma=0.0)
        a = gas_log_density(np.array([0.7, 1.3]), 2, p)
        b = gas_log_density(np.array([1.3, 0.7]), 2, p)
        assert a == b

    def test_hand_value_n2(self):
        p = EnsembleParams(0.0, beta=2.0, sigma=-10.0)
        val = gas_log_density(np.array([0.0, 1.0]), 2, p)
        assert val == pytest.approx(-2.0, rel=1e-14)

    def test_wall_rejection(self):
        p = EnsembleParams(0.0, sigma=0.5)
        assert gas_log_density(np.array([0.4, 1.0]), 2, p) == -math.inf

    def test_positive_rejection(self):
        p = EnsembleParams(1.0, sigma=0.0)
        assert gas_log_density(np.array([0.0, 1.0]), 2, p) == -math.inf

    def test_coincident_points(self):
        p = EnsembleParams(0.0, sigma=-10.0)
        assert gas_log_density(np.array([1.0, 1.0]), 2, p) == -math.inf


class TestSweep:
    def test_zero_width_unchanged(self):
        p = EnsembleParams(0.0, sigma=0.0)
        chain = make_chain(p, 8, seed=1, step_width=0.0)
        before = chain.positions.copy()
        metropolis_sweep(chain)
        assert np.array_equal(chain.positions, before)
        assert chain.accepted == 8  # zero moves always accepted

    def test_deterministic(self):
        p = EnsembleParams(0.5, sigma=0.0)
        runs = []
        for _ in range(2):
            chain = make_chain(p, 12, seed=99)
            for _ in range(5):
                metropolis_sweep(chain)
            runs.append(chain.positions.copy())
        assert np.array_equal(runs[0], runs[1])

    def test_reference_path_matches_compiled(self):
        p = EnsembleParams(0.5, sigma=0.0)
        fast = make_chain(p, 8, seed=5)
        slow = make_chain(p, 8, seed=5)
        for _ in range(30):
            metropolis_sweep(fast)
            metropolis_sweep(slow, reference=True)
        assert np.array_equal(fast.positions, slow.positions)
        assert fast.accepted == slow.accepted

    def test_incremental_vs_full_recompute(self):
        # the reference sweep asserts per-move agreement at 1e-10 internally
        for alpha, sigma in ((0.0, -1.0), (2.0, 0.0)):
            chain = make_chain(EnsembleParams(alpha, sigma=sigma), 6, seed=11, step_width=0.5)
            for _ in range(50):
                metropolis_sweep(chain, reference=True, delta_tol=1e-10)

    def test_wall_never_crossed(self):
        p = EnsembleParams(0.0, sigma=1.0)
        chain = make_chain(p, 10, seed=2, step_width=0.8)
        for _ in range(200):
            metropolis_sweep(chain)
            assert np.all(chain.positions >= 1.0)

    def test_unconstrained_mean_near_zero(self):
        p = EnsembleParams(0.0, sigma=-10.0)
        chain = make_chain(p, 16, seed=3)
        means = []
        _advance(chain, 2000)
        for _ in range(8000):
            _advance(chain, 1)
            means.append(chain.positions.mean())
        assert abs(np.mean(means)) < 0.05


class TestHistogram:
    def test_reproducible(self):
        p = EnsembleParams(0.0, sigma=0.0)
        h1 = run_and_histogram(p, 16, 6000, seed=4)
        h2 = run_and_histogram(p, 16, 6000, seed=4)
        assert np.array_equal(h1.counts, h2.counts)
        assert np.array_equal(h1.density, h2.density)

    def test_normalized(self):
        p = EnsembleParams(0.0, sigma=0.0)
        h = run_and_histogram(p, 16, 6000, seed=4)
        width = h.bin_edges[1] - h.bin_edges[0]
        assert float(np.sum(h.density) * width) == pytest.approx(1.0, rel=1e-12)
        assert np.all(h.density >= 0.0)

    def test_l1_shrinks_with_budget(self):
        p = EnsembleParams(0.0, sigma=0.0)
        d = density_for(p)
        small = run_and_histogram(p, 16, 4000, burn_in=1000, seed=8)
        large = run_and_histogram(p, 16, 40000, burn_in=1000, seed=8)
        assert l1_distance(large, d) < l1_distance(small, d)

    def test_analytic_overlay_mass(self):
        p = EnsembleParams(0.5, sigma=0.0)
        h = run_and_histogram(p, 16, 5000, seed=6)
        overlay = analytic_bin_averages(h, density_for(p))
        width = h.bin_edges[1] - h.bin_edges[0]
        assert float(np.sum(overlay) * width) == pytest.approx(1.0, abs=1e-6)

    def test_validation(self):
        p = EnsembleParams(0.0, sigma=0.0)
        with pytest.raises(ValueError):
            run_and_histogram(p, 1, 100, seed=0)
        with pytest.raises(ValueError):
            run_and_histogram(p, 8, 100, burn_in=200, seed=0)


class TestMinSamples:
    def test_hard_wall_respected(self):
        p = EnsembleParams(0.0, sigma=1.0)
        series = min_eigenvalue_samples(p, 16, replicas=2, sweeps=3000, seed=10)
        assert len(series) == 2
        for s in series:
            assert np.all(s >= 1.0)
            assert np.mean(s) == pytest.approx(1.0, abs=0.15)

    def test_replica_seeds_independent_but_reproducible(self):
        p = EnsembleParams(0.0, sigma=0.0)
        s1 = min_eigenvalue_samples(p, 8, replicas=2, sweeps=2500, seed=20)
        s2 = min_eigenvalue_samples(p, 8, replicas=2, sweeps=2500, seed=20)
        assert np.array_equal(s1[0], s2[0])
        assert np.array_equal(s1[1], s2[1])
        assert not np.array_equal(s1[0], s1[1])

    def test_mu_count(self):
        assert mu_count(0.5, 32) == 16
        assert mu_count(0.1, 32) == 3
        assert mu_count(0.0, 7) == 0
