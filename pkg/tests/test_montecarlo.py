import math

import numpy as np
import pytest

from duomech import (
    ConfigError,
    McEstimate,
    PhysicalityError,
    PhysicalParams,
    SdeConfig,
    StabilityError,
    SystemMatrices,
    compare_to_lyapunov,
    derive,
    integrate_steady_covariance,
    sample_noise_increment,
    solve_lyapunov,
    system_matrices,
    write_comparison_csv,
)
from duomech import montecarlo

TWO_PI = 2 * math.pi
KAPPA = TWO_PI * 14000.0


def reference_params(**overrides) -> PhysicalParams:
    base = dict(
        omega_m=TWO_PI * 947e3, gamma=TWO_PI * 140.0, mass=145e-12,
        cavity_length=25e-3, omega_c=TWO_PI * 5.26e14, omega_l=TWO_PI * 2.82e14,
        kappa=KAPPA, temperature=1e-4, squeezing_r=1.0,
        hopping_lambda=0.2 * KAPPA, cooperativity=32.11,
    )
    base.update(overrides)
    return PhysicalParams(**base)


# fast-relaxing configuration for statistical tests (gamma/kappa = 0.05)
def fast_params(**overrides):
    return reference_params(gamma=0.05 * KAPPA, **overrides)


FAST_CONFIG = SdeConfig(dt=0.005, burn_in=220.0, sample_duration=450.0,
                        n_trajectories=32, seed=101)


class TestSdeConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(dt=0.0), dict(dt=-0.1), dict(n_trajectories=0),
        dict(burn_in=-1.0), dict(sample_duration=0.0),
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ConfigError):
            SdeConfig(**kwargs)

    def test_too_coarse_dt_rejected_at_integration(self):
        matrices = system_matrices(derive(fast_params()))
        with pytest.raises(ConfigError, match="too coarse"):
            integrate_steady_covariance(matrices, SdeConfig(dt=0.05))

    def test_too_short_burn_in_rejected(self):
        matrices = system_matrices(derive(fast_params()))
        with pytest.raises(ConfigError, match="burn_in"):
            integrate_steady_covariance(
                matrices, SdeConfig(burn_in=50.0, sample_duration=100.0)
            )


class TestNoiseIncrements:
    def test_zero_dt_gives_zero_vector(self):
        noise = system_matrices(derive(reference_params())).noise
        rng = np.random.default_rng(0)
        assert np.array_equal(sample_noise_increment(noise, 0.0, rng), np.zeros(8))

    def test_vacuum_variances(self):
        # r = 0, T = 0: independent increments, variances gamma dt / 2 and kappa dt / 2
        d = derive(reference_params(squeezing_r=0.0, temperature=0.0))
        noise = system_matrices(d).noise
        dt = 1e-6
        rng = np.random.default_rng(42)
        draws = sample_noise_increment(noise, dt, rng, size=200_000)
        var = draws.var(axis=0)
        for i, expected in enumerate([d.gamma * dt / 2] * 4 + [d.kappa * dt / 2] * 4):
            se = expected * math.sqrt(2.0 / draws.shape[0])
            assert abs(var[i] - expected) < 4.0 * se

    def test_squeezed_cross_correlation(self):
        # r = 1: q_c1/q_c2 increment covariance = +M kappa dt within 4 SE
        d = derive(reference_params(squeezing_r=1.0, temperature=0.0))
        noise = system_matrices(d).noise
        dt = 1e-6
        rng = np.random.default_rng(7)
        n = 1_000_000
        draws = sample_noise_increment(noise, dt, rng, size=n)
        cov_q = float(np.mean(draws[:, 4] * draws[:, 6]))
        expected = d.m_sq * d.kappa * dt
        se = math.sqrt((noise[4, 4] * noise[6, 6] + noise[4, 6] ** 2)) * dt / math.sqrt(n)
        assert abs(cov_q - expected) < 4.0 * se
        cov_y = float(np.mean(draws[:, 5] * draws[:, 7]))
        assert abs(cov_y + expected) < 4.0 * se

    def test_non_psd_noise_refused(self):
        rng = np.random.default_rng(0)
        with pytest.raises(PhysicalityError, match="positive semidefinite"):
            sample_noise_increment(-np.eye(8), 1.0, rng)


class TestIntegration:
    def test_vacuum_limit(self):
        d = derive(fast_params(cooperativity=0.0, hopping_lambda=0.0,
                               squeezing_r=0.0, temperature=0.0))
        est = integrate_steady_covariance(system_matrices(d), FAST_CONFIG)
        dev = np.abs(est.cov_estimate - 0.5 * np.eye(8))
        assert np.all(dev <= 4.0 * est.std_error + 1e-12)

    def test_thermal_limit(self):
        d = derive(fast_params(cooperativity=0.0, hopping_lambda=0.0,
                               squeezing_r=0.0))
        est = integrate_steady_covariance(system_matrices(d), FAST_CONFIG)
        expected = np.diag([d.n_th + 0.5] * 4 + [0.5] * 4)
        assert np.all(np.abs(est.cov_estimate - expected) <= 4.0 * est.std_error + 1e-12)

    def test_seed_determinism(self):
        matrices = system_matrices(derive(fast_params()))
        config = SdeConfig(burn_in=220.0, sample_duration=230.0,
                           n_trajectories=8, seed=5)
        a = integrate_steady_covariance(matrices, config)
        b = integrate_steady_covariance(matrices, config)
        assert np.array_equal(a.cov_estimate, b.cov_estimate)
        assert np.array_equal(a.std_error, b.std_error)
        assert a.n_samples == b.n_samples
        assert a.rng_algorithm == "PCG64"

    def test_refuses_unstable_drift(self):
        bad = SystemMatrices(drift=np.eye(8), noise=np.eye(8))
        with pytest.raises(StabilityError):
            integrate_steady_covariance(bad, FAST_CONFIG)

    def test_divergence_detector(self, monkeypatch):
        monkeypatch.setattr(montecarlo, "_DIVERGENCE_FACTOR", 1e-6)
        matrices = system_matrices(derive(fast_params()))
        with pytest.raises(PhysicalityError, match="diverged"):
            integrate_steady_covariance(matrices, FAST_CONFIG)

    def test_standard_error_shrinks_with_duration(self):
        matrices = system_matrices(derive(fast_params()))
        short = SdeConfig(burn_in=220.0, sample_duration=400.0,
                          n_trajectories=24, seed=19)
        long = SdeConfig(burn_in=220.0, sample_duration=800.0,
                         n_trajectories=24, seed=19)
        se_short = integrate_steady_covariance(matrices, short).std_error.mean()
        se_long = integrate_steady_covariance(matrices, long).std_error.mean()
        assert 1.2 <= se_short / se_long <= 1.7

    def test_step_size_robustness(self):
        # halving dt moves the converged entries by less than the noise
        matrices = system_matrices(derive(fast_params()))
        coarse = integrate_steady_covariance(
            matrices, SdeConfig(dt=0.005, burn_in=220.0, sample_duration=500.0,
                                n_trajectories=32, seed=23)
        )
        fine = integrate_steady_covariance(
            matrices, SdeConfig(dt=0.0025, burn_in=220.0, sample_duration=500.0,
                                n_trajectories=32, seed=29)
        )
        combined = np.sqrt(coarse.std_error**2 + fine.std_error**2)
        dev = np.abs(coarse.cov_estimate - fine.cov_estimate)
        assert np.all(dev <= 4.0 * combined + 1e-12)


class TestComparison:
    def test_exact_against_itself_is_all_zero(self):
        state = solve_lyapunov(system_matrices(derive(fast_params())))
        mc = McEstimate(cov_estimate=state.full.copy(),
                        std_error=np.zeros((8, 8)), n_samples=1,
                        config=SdeConfig())
        cmp = compare_to_lyapunov(mc, state)
        assert cmp.max_abs_z == 0.0
        assert cmp.passed

    def test_perturbation_is_flagged(self):
        state = solve_lyapunov(system_matrices(derive(fast_params())))
        bad = state.full.copy()
        bad[0, 0] *= 1.10
        mc = McEstimate(cov_estimate=bad,
                        std_error=np.full((8, 8), 1e-4), n_samples=1,
                        config=SdeConfig())
        cmp = compare_to_lyapunov(mc, state)
        assert not cmp.passed
        assert cmp.max_abs_z > 4.0

    def test_midpoint_of_squeezing_sweep_passes(self):
        # reduced sampling relative to the defaults, judged at the 4 SE level
        params = reference_params(squeezing_r=1.5)
        matrices = system_matrices(derive(params))
        state = solve_lyapunov(matrices)
        config = SdeConfig(dt=0.01, burn_in=2000.0, sample_duration=3000.0,
                           n_trajectories=24, seed=31)
        est = integrate_steady_covariance(matrices, config)
        cmp = compare_to_lyapunov(est, state)
        assert cmp.passed, (cmp.max_abs_z, cmp.n_unique_above_3se)

    def test_csv_artifact(self, tmp_path):
        state = solve_lyapunov(system_matrices(derive(fast_params())))
        mc = McEstimate(cov_estimate=state.full.copy(),
                        std_error=np.zeros((8, 8)), n_samples=10,
                        config=SdeConfig(seed=3))
        cmp = compare_to_lyapunov(mc, state)
        path = tmp_path / "mc.csv"
        write_comparison_csv(cmp, mc, state, path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# rng=PCG64 seed=3")
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == "i,j,exact,estimate,std_error,z,rel_dev"
        assert len(lines) - header_idx - 1 == 36
