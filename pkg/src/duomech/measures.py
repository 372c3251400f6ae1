"""Gaussian correlation quantifiers for two-mode covariance matrices.

All measures are functions of the block determinants of

    sigma = [[X, Z], [Z^T, B]],    X, B, Z : 2x2,

with the vacuum-variance-1/2 convention and natural logarithms (results in
nats).  The states produced by this package are exchange symmetric (B = X,
Z = diag(z, -z)); the steering and log-negativity routines accept general
physical two-mode covariances, the discord routine is restricted to the
det Z <= 0, B = X branch its closed form covers and refuses anything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError, UnsupportedBranchError

__all__ = [
    "TwoModeCovariance",
    "CorrelationReport",
    "f_function",
    "symplectic_spectrum",
    "symplectic_eigenvalues",
    "gaussian_steering",
    "log_negativity",
    "gaussian_discord",
    "correlation_report",
    "thermal_state",
    "two_mode_squeezed_state",
]

VACUUM_VARIANCE = 0.5
_PHYS_TOL = 1e-9     # slack on the nu >= 1/2 physicality bound
_SNAP = 1e-12        # |measure| below this snaps to exactly 0


def _omega(n_modes: int) -> np.ndarray:
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j)


def symplectic_spectrum(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of an n-mode covariance matrix, ascending.

    Computed as the moduli of the eigenvalues of i Omega sigma (each value
    appears twice in that spectrum; duplicates are removed by sorting and
    taking every other entry).
    """
    cov = np.asarray(cov, dtype=float)
    n2 = cov.shape[0]
    if cov.ndim != 2 or cov.shape[1] != n2 or n2 % 2:
        raise ValueError(f"covariance must be square with even size, got {cov.shape}")
    ev = np.linalg.eigvals(1j * _omega(n2 // 2) @ cov)
    return np.sort(np.abs(ev))[::2]


@dataclass(frozen=True)
class TwoModeCovariance:
    """4x4 two-mode covariance in (q_A, Y_A, q_B, Y_B) order with cached
    block determinants."""

    matrix: np.ndarray
    x_block: np.ndarray
    b_block: np.ndarray
    z_block: np.ndarray
    det_x: float
    det_b: float
    det_z: float
    det_full: float

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, validate: bool = True) -> "TwoModeCovariance":
        m = np.asarray(matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 covariance, got shape {m.shape}")
        scale = float(np.max(np.abs(m)))
        if scale == 0.0:
            raise PhysicalityError("zero covariance matrix is unphysical")
        if np.max(np.abs(m - m.T)) > 1e-10 * scale:
            raise PhysicalityError("covariance matrix must be symmetric")
        m = 0.5 * (m + m.T)
        cov = cls(
            matrix=m,
            x_block=m[:2, :2].copy(),
            b_block=m[2:, 2:].copy(),
            z_block=m[:2, 2:].copy(),
            det_x=float(np.linalg.det(m[:2, :2])),
            det_b=float(np.linalg.det(m[2:, 2:])),
            det_z=float(np.linalg.det(m[:2, 2:])),
            det_full=float(np.linalg.det(m)),
        )
        if validate:
            nus = symplectic_spectrum(m)
            if nus[0] < VACUUM_VARIANCE - _PHYS_TOL:
                raise PhysicalityError(
                    f"unphysical covariance: min symplectic eigenvalue "
                    f"{nus[0]!r} < 1/2"
                )
        return cov


def _as_cov(cov: TwoModeCovariance | np.ndarray) -> TwoModeCovariance:
    if isinstance(cov, TwoModeCovariance):
        return cov
    return TwoModeCovariance.from_matrix(cov)


def f_function(x: float) -> float:
    """Entropy kernel f(x) = (x+1/2) ln(x+1/2) - (x-1/2) ln(x-1/2).

    Continuous at the vacuum point: f(1/2) = 0 through the x ln x -> 0
    limit.  Arguments below 1/2 by more than 1e-9 are unphysical.
    """
    if x < VACUUM_VARIANCE - _PHYS_TOL:
        raise PhysicalityError(f"f_function argument {x!r} below vacuum value 1/2")
    xm = x - VACUUM_VARIANCE
    if xm <= 0.0:
        return 0.0
    xp = x + VACUUM_VARIANCE
    return xp * math.log(xp) - xm * math.log(xm)


def _disc_band(delta: float, det_full: float, det_scale: float) -> float:
    """Roundoff band of the discriminant delta^2 - 4 det_full.

    ``det_scale`` is the pre-cancellation magnitude of the block-determinant
    combination (|det X| + |det B| + 2 |det Z|): both delta and det_full are
    differences of terms of that size, so the discriminant inherits an
    absolute error of order eps * det_scale^2 even when it is exactly zero.
    """
    return 4096.0 * np.finfo(float).eps * max(
        delta * delta, abs(4.0 * det_full), det_scale * det_scale, 1e-300
    )


def _clamped_sqrt_disc(delta: float, det_full: float, det_scale: float) -> float:
    """sqrt(delta^2 - 4 det_full) with a degeneracy roundoff guard.

    States produced by this system have exactly degenerate symplectic
    spectra (delta^2 = 4 det_full), so the cancellation leaves the
    discriminant straddling zero at roundoff level; the square root would
    amplify that into a spurious eigenvalue split.  Values inside the
    cancellation band snap to exact degeneracy; values negative beyond it
    mean a genuinely complex eigenvalue and are refused.
    """
    disc = delta * delta - 4.0 * det_full
    band = _disc_band(delta, det_full, det_scale)
    if disc < -max(band, 1e-12):
        raise PhysicalityError(
            f"complex symplectic eigenvalue: discriminant {disc!r} < 0"
        )
    if disc < band:
        return 0.0
    return math.sqrt(disc)


def symplectic_eigenvalues(cov: TwoModeCovariance | np.ndarray) -> tuple[float, float]:
    """(theta_plus, theta_minus) of a two-mode covariance from the block
    determinants, cross-validated against the i*Omega*sigma spectrum.

    theta_pm = sqrt[(Delta' +- sqrt(Delta'^2 - 4 det sigma)) / 2] with
    Delta' = det X + det B + 2 det Z.
    """
    c = _as_cov(cov)
    delta = c.det_x + c.det_b + 2.0 * c.det_z
    det_scale = abs(c.det_x) + abs(c.det_b) + 2.0 * abs(c.det_z)
    root = _clamped_sqrt_disc(delta, c.det_full, det_scale)
    theta_plus = math.sqrt((delta + root) / 2.0)
    theta_minus = math.sqrt(max((delta - root) / 2.0, 0.0))

    ref = symplectic_spectrum(c.matrix)
    # Near spectral degeneracy neither route can resolve the split below the
    # discriminant roundoff band; widen the consistency tolerance accordingly.
    band = _disc_band(delta, c.det_full, det_scale)
    split_limit = math.sqrt(band) / (4.0 * max(theta_minus, 0.25))
    tol = 1e-9 * max(1.0, theta_plus) + split_limit
    if abs(theta_minus - ref[0]) > tol or abs(theta_plus - ref[1]) > tol:
        raise RuntimeError(
            "symplectic eigenvalue formula disagrees with the i*Omega*sigma "
            f"spectrum: ({theta_plus!r}, {theta_minus!r}) vs {tuple(ref)!r}"
        )
    return theta_plus, theta_minus


def gaussian_steering(cov: TwoModeCovariance | np.ndarray) -> tuple[float, float]:
    """Gaussian steering in both directions, (S_AB, S_BA), in nats.

    S^{A->B} = max[0, (1/2) ln(det X / (4 det sigma))], and det B in place
    of det X for the reverse direction; the two coincide for the exchange
    symmetric states this system produces.
    """
    c = _as_cov(cov)
    if c.det_full <= 0.0:
        raise PhysicalityError(f"non-positive covariance determinant {c.det_full!r}")
    s_ab = 0.5 * math.log(c.det_x / (4.0 * c.det_full))
    s_ba = 0.5 * math.log(c.det_b / (4.0 * c.det_full))
    return _snap_floor(s_ab), _snap_floor(s_ba)


def log_negativity(cov: TwoModeCovariance | np.ndarray) -> tuple[float, float]:
    """(E_N, nu_minus): logarithmic negativity in nats and the smallest
    symplectic eigenvalue of the partially transposed covariance.

    nu_minus = sqrt[(Delta - sqrt(Delta^2 - 4 det sigma)) / 2] with
    Delta = det X + det B - 2 det Z; the modes are entangled iff
    nu_minus < 1/2, and E_N = max[0, -ln(2 nu_minus)].
    """
    c = _as_cov(cov)
    delta = c.det_x + c.det_b - 2.0 * c.det_z
    det_scale = abs(c.det_x) + abs(c.det_b) + 2.0 * abs(c.det_z)
    root = _clamped_sqrt_disc(delta, c.det_full, det_scale)
    nu_minus = math.sqrt(max((delta - root) / 2.0, 0.0))
    if nu_minus <= 0.0:
        raise PhysicalityError("vanishing partial-transpose symplectic eigenvalue")
    return _snap_floor(-math.log(2.0 * nu_minus)), nu_minus


def gaussian_discord(cov: TwoModeCovariance | np.ndarray) -> float:
    """Gaussian quantum discord in nats, det Z <= 0 branch.

    D = f(sqrt(det X)) - f(theta_plus) - f(theta_minus) + f(delta) with
    delta = (sqrt(det X) + 2 det X + 2 det Z) / (1 + 2 sqrt(det X)).

    The closed form for the measurement term is valid for det Z <= 0 and
    exchange-symmetric blocks (B = X), which covers every state this system
    produces; other inputs raise :class:`UnsupportedBranchError` rather than
    return a silently wrong value.
    """
    c = _as_cov(cov)
    scale = max(abs(c.det_x), abs(c.det_b), 1e-300)
    if c.det_z > _SNAP * scale:
        raise UnsupportedBranchError(
            f"gaussian_discord implements only the det Z <= 0 branch "
            f"(got det Z = {c.det_z!r})"
        )
    if abs(c.det_x - c.det_b) > 1e-9 * scale:
        raise UnsupportedBranchError(
            "gaussian_discord requires exchange-symmetric blocks "
            f"(det X = {c.det_x!r}, det B = {c.det_b!r})"
        )
    theta_plus, theta_minus = symplectic_eigenvalues(c)
    sqrt_det_x = math.sqrt(c.det_x)
    delta_disc = (sqrt_det_x + 2.0 * c.det_x + 2.0 * c.det_z) / (1.0 + 2.0 * sqrt_det_x)
    d = (
        f_function(sqrt_det_x)
        - f_function(theta_plus)
        - f_function(theta_minus)
        + f_function(delta_disc)
    )
    return _snap_floor(d)


def _snap_floor(value: float) -> float:
    """max[0, value] with |value| < 1e-12 snapped to exactly 0 so that sweep
    output is stable at the measure onset boundary."""
    if abs(value) < _SNAP:
        return 0.0
    return max(0.0, value)


@dataclass(frozen=True)
class CorrelationReport:
    """Every quantifier for one parameter point."""

    steering_ab: float
    steering_ba: float
    log_negativity: float
    discord: float
    nu_minus: float
    theta_plus: float
    theta_minus: float
    delta_disc: float
    delta_pt: float      # det X + det B - 2 det Z (partial-transpose invariant)
    delta_sympl: float   # det X + det B + 2 det Z
    stable: bool


def correlation_report(
    cov: TwoModeCovariance | np.ndarray, stable: bool = True
) -> CorrelationReport:
    """Evaluate all measures on one two-mode covariance."""
    c = _as_cov(cov)
    s_ab, s_ba = gaussian_steering(c)
    en, nu_minus = log_negativity(c)
    theta_plus, theta_minus = symplectic_eigenvalues(c)
    discord = gaussian_discord(c)
    sqrt_det_x = math.sqrt(c.det_x)
    delta_disc = (sqrt_det_x + 2.0 * c.det_x + 2.0 * c.det_z) / (1.0 + 2.0 * sqrt_det_x)
    return CorrelationReport(
        steering_ab=s_ab,
        steering_ba=s_ba,
        log_negativity=en,
        discord=discord,
        nu_minus=nu_minus,
        theta_plus=theta_plus,
        theta_minus=theta_minus,
        delta_disc=delta_disc,
        delta_pt=c.det_x + c.det_b - 2.0 * c.det_z,
        delta_sympl=c.det_x + c.det_b + 2.0 * c.det_z,
        stable=stable,
    )


def thermal_state(n_mean: float) -> np.ndarray:
    """Two-mode product thermal covariance (n + 1/2) I4."""
    if n_mean < 0.0:
        raise ValueError(f"mean occupation must be >= 0, got {n_mean!r}")
    return (n_mean + VACUUM_VARIANCE) * np.eye(4)


def two_mode_squeezed_state(s: float) -> np.ndarray:
    """Pure two-mode squeezed vacuum covariance with squeezing ``s``."""
    ch = 0.5 * math.cosh(2.0 * s)
    sh = 0.5 * math.sinh(2.0 * s)
    return np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )
