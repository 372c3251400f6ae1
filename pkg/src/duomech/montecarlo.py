"""Stochastic-trajectory oracle for the steady-state covariance.

The linearized quadrature dynamics du = W u dt + d.eta is integrated with
the Euler-Maruyama scheme (exact enough here: the system is linear with
additive noise, so the only discretization effect is an O(dt) bias in the
stationary second moments, of order rate*dt/2 relative -- about 0.25% on
the fast optical entries at the default step and ~30x less on the slow
mechanical block; at very deep sampling the ensemble error becomes tight
enough to resolve that bias on optical entries).  Because the dynamics is
linear and the noise
matrix R is defined as the symmetric-ordered correlation of the input
operators, the classical ensemble covariance of these trajectories equals
the symmetric-ordered quantum covariance; that equivalence is what makes
this module a valid independent check of the Lyapunov solution.

Time runs in units of 1/kappa internally; configuration durations are
expressed in those units.  The generator is numpy's PCG64, seeded
explicitly, and the algorithm name is carried in the estimate for
reproducibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import CovarianceState, SystemMatrices, check_stability
from .errors import ConfigError, PhysicalityError, StabilityError

__all__ = [
    "SdeConfig",
    "McEstimate",
    "McComparison",
    "sample_noise_increment",
    "integrate_steady_covariance",
    "compare_to_lyapunov",
    "write_comparison_csv",
]

RNG_ALGORITHM = "PCG64"
_BLOCK_STEPS = 4096
_DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class SdeConfig:
    """Integration settings; durations in units of 1/kappa.

    ``burn_in`` and ``sample_duration`` default (when None) to 20/gamma and
    200/gamma respectively, gamma being the slowest relaxation rate of the
    system.  128 trajectories put the ensemble standard error near 0.5% of
    the covariance scale at the default durations, comfortably inside the
    validation tolerances.
    """

    dt: float = 0.005
    burn_in: float | None = None
    sample_duration: float | None = None
    n_trajectories: int = 128
    seed: int = 7

    def __post_init__(self) -> None:
        if not math.isfinite(self.dt) or self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if self.n_trajectories < 1:
            raise ConfigError(
                f"n_trajectories must be >= 1, got {self.n_trajectories!r}"
            )
        for name in ("burn_in", "sample_duration"):
            value = getattr(self, name)
            if value is not None and (not math.isfinite(value) or value <= 0.0):
                raise ConfigError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class McEstimate:
    """Ensemble estimate of the steady-state covariance.

    ``std_error`` is the per-entry standard error of the mean across
    trajectories (each trajectory contributes one time-averaged covariance,
    so autocorrelation within a trajectory is accounted for).
    """

    cov_estimate: np.ndarray
    std_error: np.ndarray
    n_samples: int
    config: SdeConfig
    rng_algorithm: str = field(default=RNG_ALGORITHM)


def _noise_factor(noise: np.ndarray) -> np.ndarray:
    """Lower-triangular-ish factor L with L L^T = R, tolerating a PSD matrix
    whose smallest eigenvalues sit at rounding level."""
    noise = np.asarray(noise, dtype=float)
    try:
        return np.linalg.cholesky(noise)
    except np.linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh(noise)
        floor = -1e-12 * max(float(eigvals.max()), 1.0)
        if eigvals.min() < floor:
            raise PhysicalityError(
                f"noise matrix is not positive semidefinite "
                f"(min eigenvalue {eigvals.min()!r})"
            ) from None
        return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def sample_noise_increment(noise: np.ndarray, dt: float, rng: np.random.Generator,
                           size: int | None = None) -> np.ndarray:
    """Draw noise increments with covariance ``noise * dt``.

    Returns shape (8,) for ``size=None``, else ``(size, 8)``.  ``dt`` uses
    the same time unit as ``noise`` is a rate in; dt = 0 gives exact zeros.
    """
    if dt < 0.0:
        raise ConfigError(f"dt must be >= 0, got {dt!r}")
    factor = _noise_factor(noise) * math.sqrt(dt)
    n = noise.shape[0]
    if size is None:
        return factor @ rng.standard_normal(n)
    return rng.standard_normal((size, n)) @ factor.T


def _resolve_durations(config: SdeConfig, gamma_n: float, kappa_n: float,
                       coupling_n: float, lambda_n: float) -> tuple[int, int]:
    """Validate and convert durations to step counts (rates in kappa units)."""
    fastest = max(kappa_n, gamma_n, coupling_n, lambda_n)
    if config.dt > 0.01 / fastest:
        raise ConfigError(
            f"dt = {config.dt!r} too coarse: must be <= 0.01/max rate "
            f"= {0.01 / fastest!r} (units of 1/kappa)"
        )
    slowest = min(gamma_n, kappa_n)
    burn = 20.0 / gamma_n if config.burn_in is None else config.burn_in
    if burn < 10.0 / slowest:
        raise ConfigError(
            f"burn_in = {burn!r} shorter than 10/min(gamma, kappa) "
            f"= {10.0 / slowest!r} (units of 1/kappa)"
        )
    duration = 200.0 / gamma_n if config.sample_duration is None else config.sample_duration
    return int(round(burn / config.dt)), max(int(round(duration / config.dt)), 1)


def integrate_steady_covariance(matrices: SystemMatrices,
                                config: SdeConfig | None = None) -> McEstimate:
    """Estimate the stationary covariance from an Euler-Maruyama ensemble.

    Steps u <- u + W u dt + d.eta for ``n_trajectories`` in parallel; after
    the burn-in every step contributes to a per-trajectory time average of
    the outer product.  Deterministic for a fixed config (including seed).
    """
    if config is None:
        config = SdeConfig()
    w = np.asarray(matrices.drift, dtype=float)
    r = np.asarray(matrices.noise, dtype=float)
    report = check_stability(w)
    if not report.is_stable:
        raise StabilityError(
            f"drift matrix is {report.verdict} "
            f"(max Re eig = {report.max_real:.6e} rad/s); refusing to integrate"
        )

    kappa = -2.0 * float(w[4, 4])
    wn = w / kappa
    rn = r / kappa
    gamma_n = -2.0 * float(wn[0, 0])
    n_burn, n_sample = _resolve_durations(
        config, gamma_n, 1.0, abs(float(wn[0, 4])), abs(float(wn[7, 4]))
    )

    dim = w.shape[0]
    n_traj = config.n_trajectories
    stepper = np.eye(dim) + wn * config.dt
    noise_step = _noise_factor(rn) * math.sqrt(config.dt)

    # crude stationary-scale bound for the divergence detector
    min_rate = min(gamma_n, 1.0)
    scale_bound = math.sqrt(float(np.trace(rn)) / min_rate) + 1.0
    limit = _DIVERGENCE_FACTOR * scale_bound

    rng = np.random.Generator(np.random.PCG64(config.seed))
    u = np.zeros((n_traj, dim))

    def run_block(u: np.ndarray, n_steps: int, accumulate: np.ndarray | None):
        buf = np.empty((n_steps, n_traj, dim)) if accumulate is not None else None
        z = rng.standard_normal((n_steps, n_traj, dim)) @ noise_step.T
        for k in range(n_steps):
            u = u @ stepper.T + z[k]
            if buf is not None:
                buf[k] = u
        if accumulate is not None:
            accumulate += buf.transpose(1, 2, 0) @ buf.transpose(1, 0, 2)
        if not np.all(np.abs(u) < limit):
            raise PhysicalityError(
                f"trajectory diverged: |u| exceeded {limit:.3e} "
                f"(expected scale {scale_bound:.3e})"
            )
        return u

    done = 0
    while done < n_burn:
        n = min(_BLOCK_STEPS, n_burn - done)
        u = run_block(u, n, None)
        done += n

    acc = np.zeros((n_traj, dim, dim))
    done = 0
    while done < n_sample:
        n = min(_BLOCK_STEPS, n_sample - done)
        u = run_block(u, n, acc)
        done += n

    per_traj = acc / n_sample
    per_traj = 0.5 * (per_traj + per_traj.transpose(0, 2, 1))
    estimate = per_traj.mean(axis=0)
    if n_traj > 1:
        std_error = per_traj.std(axis=0, ddof=1) / math.sqrt(n_traj)
    else:
        std_error = np.full((dim, dim), np.nan)
    return McEstimate(
        cov_estimate=estimate,
        std_error=std_error,
        n_samples=n_traj * n_sample,
        config=config,
    )


@dataclass(frozen=True)
class McComparison:
    """Entry-wise comparison of an ensemble estimate to the exact covariance."""

    z_scores: np.ndarray
    rel_dev: np.ndarray          # NaN where the exact entry has no usable scale
    max_abs_z: float
    n_unique_above_3se: int
    max_rel_dev: float           # over entries with a usable scale
    passed: bool


def compare_to_lyapunov(mc: McEstimate,
                        exact: CovarianceState | np.ndarray) -> McComparison:
    """Per-entry z-scores and relative deviations against the exact solve.

    Passes when every unique entry sits within 4 standard errors and at most
    2 of the 36 unique entries exceed 3 standard errors.  Relative deviation
    is reported for entries whose exact magnitude is above 1e-6 of the
    covariance scale; exactly-zero entries have no relative scale and are
    judged by their z-scores alone.
    """
    sigma = exact.full if isinstance(exact, CovarianceState) else np.asarray(exact)
    dev = mc.cov_estimate - sigma
    se = mc.std_error
    z = np.zeros_like(dev)
    nonzero_se = se > 0
    z[nonzero_se] = dev[nonzero_se] / se[nonzero_se]
    z[~nonzero_se & (dev != 0.0)] = np.inf

    scale = float(np.max(np.abs(np.diag(sigma))))
    usable = np.abs(sigma) > 1e-6 * scale
    rel = np.full_like(dev, np.nan)
    rel[usable] = np.abs(dev[usable]) / np.abs(sigma[usable])

    iu = np.triu_indices(sigma.shape[0])
    z_unique = np.abs(z[iu])
    n_above3 = int(np.count_nonzero(z_unique > 3.0))
    max_abs_z = float(z_unique.max())
    max_rel = float(np.nanmax(rel)) if np.any(usable) else 0.0
    passed = bool(max_abs_z <= 4.0 and n_above3 <= 2)
    return McComparison(
        z_scores=z,
        rel_dev=rel,
        max_abs_z=max_abs_z,
        n_unique_above_3se=n_above3,
        max_rel_dev=max_rel,
        passed=passed,
    )


def write_comparison_csv(comparison: McComparison, mc: McEstimate,
                         exact: CovarianceState | np.ndarray, path) -> None:
    """One row per unique covariance entry."""
    sigma = exact.full if isinstance(exact, CovarianceState) else np.asarray(exact)
    cfg = mc.config
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# rng={mc.rng_algorithm} seed={cfg.seed}\n")
        fh.write(
            f"# dt={cfg.dt:.17g} n_trajectories={cfg.n_trajectories} "
            f"n_samples={mc.n_samples}\n"
        )
        fh.write(
            f"# passed={str(comparison.passed).lower()} "
            f"max_abs_z={comparison.max_abs_z:.17g} "
            f"n_unique_above_3se={comparison.n_unique_above_3se}\n"
        )
        fh.write("i,j,exact,estimate,std_error,z,rel_dev\n")
        dim = sigma.shape[0]
        for i in range(dim):
            for j in range(i, dim):
                rel = comparison.rel_dev[i, j]
                rel_str = "" if np.isnan(rel) else f"{rel:.17g}"
                fh.write(
                    f"{i},{j},{sigma[i, j]:.17g},{mc.cov_estimate[i, j]:.17g},"
                    f"{mc.std_error[i, j]:.17g},{comparison.z_scores[i, j]:.17g},"
                    f"{rel_str}\n"
                )
