"""1-D parameter sweeps over the steady-state pipeline and deterministic CSV
output, plus the preset grids that reproduce the standard survey figures and
a bisection finder for the hopping strength at which entanglement dies."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .dynamics import CovarianceState, check_stability, solve_lyapunov, system_matrices
from .errors import BracketError, ConfigError
from .measures import CorrelationReport, TwoModeCovariance, correlation_report
from .params import DerivedParams, PhysicalParams, derive

__all__ = [
    "SWEEP_VARIABLES",
    "SweepSpec",
    "SweepRow",
    "PointResult",
    "evaluate_point",
    "run_sweep",
    "figure_preset",
    "find_critical_xi",
    "CriticalHopping",
    "emit_csv",
    "CSV_COLUMNS",
]

SWEEP_VARIABLES = ("r", "xi", "T", "gamma_over_kappa")

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SweepSpec:
    """A linear grid over one variable, with optional discrete curve values
    of a second variable (outer loop)."""

    variable: str
    start: float
    stop: float
    num: int
    held: PhysicalParams
    curve_variable: str | None = None
    curve_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"unknown sweep variable {self.variable!r}; "
                f"expected one of {SWEEP_VARIABLES}"
            )
        if not self.start < self.stop:
            raise ConfigError(
                f"sweep range must have start < stop, got [{self.start}, {self.stop}]"
            )
        if self.num < 2:
            raise ConfigError(f"sweep needs at least 2 points, got {self.num}")
        if self.curve_variable is not None:
            if self.curve_variable not in SWEEP_VARIABLES:
                raise ConfigError(f"unknown curve variable {self.curve_variable!r}")
            if self.curve_variable == self.variable:
                raise ConfigError("curve variable must differ from the swept variable")
            if not self.curve_values:
                raise ConfigError("curve_values must be non-empty when curve_variable is set")

    def grid(self) -> list[float]:
        step = (self.stop - self.start) / (self.num - 1)
        return [self.start + i * step for i in range(self.num)]


def _apply(params: PhysicalParams, variable: str, value: float) -> PhysicalParams:
    if variable == "r":
        return params.with_updates(squeezing_r=value)
    if variable == "xi":
        return params.with_updates(hopping_lambda=value * params.kappa)
    if variable == "T":
        return params.with_updates(temperature=value)
    if variable == "gamma_over_kappa":
        return params.with_updates(gamma=value * params.kappa)
    raise ConfigError(f"unknown sweep variable {variable!r}")


@dataclass(frozen=True)
class PointResult:
    """Full pipeline output at one parameter point."""

    params: PhysicalParams
    derived: DerivedParams
    stable: bool
    state: CovarianceState | None
    report: CorrelationReport | None


def evaluate_point(params: PhysicalParams) -> PointResult:
    """derive -> matrices -> stability -> Lyapunov -> mechanical measures."""
    derived = derive(params)
    matrices = system_matrices(derived)
    stability = check_stability(matrices.drift)
    if not stability.is_stable:
        return PointResult(params, derived, False, None, None)
    state = solve_lyapunov(matrices)
    cov = TwoModeCovariance.from_matrix(state.mechanical_block)
    report = correlation_report(cov, stable=True)
    return PointResult(params, derived, True, state, report)


@dataclass(frozen=True)
class SweepRow:
    """One grid point; measure fields are None when the point is unstable or
    failed (emitted as empty CSV fields, never fabricated zeros)."""

    swept_value: float
    curve_value: float | None
    r: float
    xi: float
    temperature: float
    gamma: float
    kappa: float
    cooperativity: float
    n_th: float
    sigma1: float | None
    sigma12: float | None
    sigma13: float | None
    steering: float | None
    log_negativity: float | None
    discord: float | None
    nu_minus: float | None
    stable: bool


def _row_from_point(swept_value: float, curve_value: float | None,
                    result: PointResult) -> SweepRow:
    params, derived = result.params, result.derived
    common = dict(
        swept_value=swept_value,
        curve_value=curve_value,
        r=params.squeezing_r,
        xi=derived.xi,
        temperature=params.temperature,
        gamma=params.gamma,
        kappa=params.kappa,
        cooperativity=derived.cooperativity,
        n_th=derived.n_th,
        stable=result.stable,
    )
    if result.report is None or result.state is None:
        return SweepRow(sigma1=None, sigma12=None, sigma13=None, steering=None,
                        log_negativity=None, discord=None, nu_minus=None, **common)
    mech = result.state.mechanical_block
    report = result.report
    return SweepRow(
        sigma1=float(mech[0, 0]),
        sigma12=float(mech[0, 1]),
        sigma13=float(mech[0, 2]),
        steering=report.steering_ab,
        log_negativity=report.log_negativity,
        discord=report.discord,
        nu_minus=report.nu_minus,
        **common,
    )


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the full grid in deterministic order (outer: curve values,
    inner: swept grid ascending).  Per-point failures are reported on stderr
    and yield a row with empty measures; they never abort the sweep."""
    curves: list[float | None] = (
        list(spec.curve_values) if spec.curve_variable else [None]
    )
    rows: list[SweepRow] = []
    for curve_value in curves:
        base = spec.held
        if curve_value is not None:
            base = _apply(base, spec.curve_variable, curve_value)
        for value in spec.grid():
            point_params = _apply(base, spec.variable, value)
            try:
                result = evaluate_point(point_params)
            except Exception as exc:  # per-point failure: flag, keep sweeping
                print(
                    f"warning: point {spec.variable}={value:g}"
                    + (f", {spec.curve_variable}={curve_value:g}" if curve_value is not None else "")
                    + f" failed: {exc}",
                    file=sys.stderr,
                )
                derived = derive(point_params)
                result = PointResult(point_params, derived, False, None, None)
            rows.append(_row_from_point(value, curve_value, result))
    return rows


_PRESET_BASE = dict(
    omega_m=TWO_PI * 947e3,
    gamma=TWO_PI * 140.0,
    mass=145e-12,
    cavity_length=25e-3,
    omega_c=TWO_PI * 5.26e14,
    omega_l=TWO_PI * 2.82e14,
    kappa=TWO_PI * 14000.0,
    cooperativity=32.11,
)


def figure_preset(name: str) -> SweepSpec:
    """Fully populated sweep specs for the three survey figures.

    fig2: squeezing sweep r in [0, 3], curves over hopping xi
    fig3: temperature sweep T in [1e-6, 5e-3] K, curves over gamma/kappa
          (kappa stays fixed, gamma varies, drive strength held at C = 32.11)
    fig4: hopping sweep xi in [0, 1], curves over bath temperature

    All presets drive at C = 32.11; grids use 301 points.
    """
    kappa = _PRESET_BASE["kappa"]
    if name == "fig2":
        held = PhysicalParams(temperature=1e-4, squeezing_r=0.0,
                              hopping_lambda=0.0, **_PRESET_BASE)
        return SweepSpec("r", 0.0, 3.0, 301, held,
                         curve_variable="xi", curve_values=(0.0, 0.1, 0.2, 0.3))
    if name == "fig3":
        held = PhysicalParams(temperature=1e-4, squeezing_r=1.0,
                              hopping_lambda=0.2 * kappa, **_PRESET_BASE)
        return SweepSpec("T", 1e-6, 5e-3, 301, held,
                         curve_variable="gamma_over_kappa",
                         curve_values=(0.001, 0.005, 0.01, 0.05))
    if name == "fig4":
        held = PhysicalParams(temperature=1e-4, squeezing_r=1.0,
                              hopping_lambda=0.0, **_PRESET_BASE)
        return SweepSpec("xi", 0.0, 1.0, 301, held,
                         curve_variable="T",
                         curve_values=(1e-4, 4e-4, 8e-4, 1.6e-3))
    raise ConfigError(f"unknown figure preset {name!r}; expected fig2, fig3 or fig4")


@dataclass(frozen=True)
class CriticalHopping:
    """Bisection result with the bracketing evidence."""

    xi_l: float
    bracket_lo: float
    bracket_hi: float
    en_lo: float       # log-negativity at the validated lower bracket edge
    en_hi: float
    iterations: int


def _en_at_xi(held: PhysicalParams, xi: float) -> float:
    result = evaluate_point(_apply(held, "xi", xi))
    if result.report is None:
        raise BracketError(f"point xi={xi!r} is unstable; cannot bisect across it")
    return result.report.log_negativity


def find_critical_xi(held: PhysicalParams, bracket: tuple[float, float],
                     xi_tol: float = 1e-6, en_tol: float = 1e-10) -> CriticalHopping:
    """Locate the hopping strength where the log-negativity reaches zero.

    Bisects the indicator E_N > ``en_tol`` down to a xi-resolution of
    ``xi_tol``; the bracket must satisfy E_N(lo) > 0 and E_N(hi) = 0.
    """
    lo, hi = bracket
    if not lo < hi:
        raise BracketError(f"bracket must satisfy lo < hi, got {bracket!r}")
    en_lo = _en_at_xi(held, lo)
    en_hi = _en_at_xi(held, hi)
    if en_lo <= en_tol or en_hi > en_tol:
        raise BracketError(
            "invalid bracket: need E_N(lo) > 0 and E_N(hi) = 0, got "
            f"E_N({lo:g}) = {en_lo!r}, E_N({hi:g}) = {en_hi!r}"
        )
    iterations = 0
    while hi - lo > xi_tol:
        mid = 0.5 * (lo + hi)
        if _en_at_xi(held, mid) > en_tol:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return CriticalHopping(
        xi_l=0.5 * (lo + hi), bracket_lo=lo, bracket_hi=hi,
        en_lo=_en_at_xi(held, lo), en_hi=_en_at_xi(held, hi),
        iterations=iterations,
    )


CSV_COLUMNS = (
    "swept_variable", "curve_variable", "r", "xi", "T_K", "gamma_rads",
    "kappa_rads", "C", "n_th", "sigma1", "sigma12", "sigma13", "steering",
    "log_negativity", "discord", "nu_minus", "stable",
)


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.17g}"


def emit_csv(rows, path_or_file, metadata: dict | None = None) -> None:
    """Write sweep rows as CSV: deterministic byte output for identical
    inputs (sorted '#' metadata lines, 17-significant-digit decimal text,
    no timestamps).  ``path_or_file`` may be a path or an open text stream."""
    if hasattr(path_or_file, "write"):
        _write_csv(rows, path_or_file, metadata)
        return
    with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
        _write_csv(rows, fh, metadata)


def _write_csv(rows, fh, metadata: dict | None) -> None:
    for key in sorted(metadata or {}):
        fh.write(f"# {key}={metadata[key]}\n")
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        fields = (
            _fmt(row.swept_value),
            _fmt(row.curve_value),
            _fmt(row.r),
            _fmt(row.xi),
            _fmt(row.temperature),
            _fmt(row.gamma),
            _fmt(row.kappa),
            _fmt(row.cooperativity),
            _fmt(row.n_th),
            _fmt(row.sigma1),
            _fmt(row.sigma12),
            _fmt(row.sigma13),
            _fmt(row.steering),
            _fmt(row.log_negativity),
            _fmt(row.discord),
            _fmt(row.nu_minus),
            "true" if row.stable else "false",
        )
        fh.write(",".join(fields) + "\n")
