"""Closed-form expressions for the mechanical covariance entries and their
systematic comparison against the exact Lyapunov solution.

Two closed-form routes are provided:

``closed_sigma``
    The reference expressions reproduced verbatim.  Note that the variance
    numerator carries a ``kappa^2 cosh(2r)`` term that is dimensionally
    inconsistent (a rate squared added to a rate); the expressions are exact
    only when all rates are expressed in units of the cavity linewidth
    (kappa = 1).  They are kept verbatim so the comparison report can
    quantify the consequences; nothing downstream consumes them.

``closed_sigma_corrected``
    Derived here by solving the steady-state covariance equations exactly in
    the +/- collective-mode basis (the two sectors decouple and are 4x4 each).
    The result differs from the verbatim form only in that single power:
    ``kappa cosh(2r)`` instead of ``kappa^2 cosh(2r)``.  The correlation
    entries sigma12 and sigma13 come out identical to the verbatim
    expressions, which are exact as printed.

The Lyapunov route is authoritative: every physics result in this package is
computed from the exact solve, never from either closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import check_stability, solve_lyapunov, system_matrices
from .errors import ConfigError
from .params import DerivedParams

__all__ = [
    "MechanicalCovarianceClosed",
    "GridPoint",
    "ClosedFormRow",
    "ClosedFormReport",
    "closed_sigma",
    "closed_sigma_corrected",
    "validate_closed_forms",
    "default_validation_grid",
    "write_report_csv",
]


@dataclass(frozen=True)
class MechanicalCovarianceClosed:
    """Closed-form (sigma1, sigma12, sigma13) with the inputs echoed."""

    sigma1: float
    sigma12: float
    sigma13: float
    cooperativity: float
    squeezing_r: float
    xi: float
    gamma: float
    kappa: float
    n_th: float


def _validate_inputs(coop: float, r: float, xi: float, gamma: float, kappa: float,
                     n_th: float) -> None:
    for name, value in (("cooperativity", coop), ("squeezing_r", r), ("xi", xi),
                        ("n_th", n_th)):
        if not math.isfinite(value) or value < 0.0:
            raise ConfigError(f"{name} must be finite and >= 0, got {value!r}")
    for name, value in (("gamma", gamma), ("kappa", kappa)):
        if not math.isfinite(value) or value <= 0.0:
            raise ConfigError(f"{name} must be finite and positive, got {value!r}")


def closed_sigma(
    cooperativity: float,
    squeezing_r: float,
    xi: float,
    gamma: float,
    kappa: float,
    n_th: float,
) -> MechanicalCovarianceClosed:
    """Verbatim reference closed form (see module docstring for its caveat)."""
    _validate_inputs(cooperativity, squeezing_r, xi, gamma, kappa, n_th)
    c, g, k = cooperativity, gamma, kappa
    two_n1 = 1.0 + 2.0 * n_th
    ch = math.cosh(2.0 * squeezing_r)
    sh = math.sinh(2.0 * squeezing_r)
    quad = k * k + 2.0 * k * g + g * g          # (gamma + kappa)^2, as printed
    sigma1 = (
        c * (g + k) * (g * two_n1 + k * k * ch)
        + two_n1 * (quad + 4.0 * k * k * xi * xi)
    ) / (2.0 * quad * (c + 1.0) + 8.0 * k * k * xi * xi)
    den = (quad + 4.0 * k * k * xi * xi) * (c * c + 2.0 * c + 1.0 + 4.0 * xi * xi)
    sigma12 = k * c * sh * (k * c + g + 2.0 * k) * xi / den
    sigma13 = k * c * sh * ((g + k) * (c + 1.0) - 4.0 * k * xi * xi) / (2.0 * den)
    return MechanicalCovarianceClosed(
        sigma1=sigma1, sigma12=sigma12, sigma13=sigma13,
        cooperativity=cooperativity, squeezing_r=squeezing_r, xi=xi,
        gamma=gamma, kappa=kappa, n_th=n_th,
    )


def closed_sigma_corrected(
    cooperativity: float,
    squeezing_r: float,
    xi: float,
    gamma: float,
    kappa: float,
    n_th: float,
) -> MechanicalCovarianceClosed:
    """Exact closed form, derived from the collective-mode steady state.

    In the (q1 +/- q2)/sqrt(2) basis the drift decouples into two 4x4
    sectors whose steady-state covariances are obtained in closed form; the
    mirror entries follow as sums/differences of the sector solutions.
    Agrees with the Lyapunov solve to rounding for all physical inputs.
    """
    _validate_inputs(cooperativity, squeezing_r, xi, gamma, kappa, n_th)
    c, g, k = cooperativity, gamma, kappa
    two_n1 = 1.0 + 2.0 * n_th
    ch = math.cosh(2.0 * squeezing_r)
    sh = math.sinh(2.0 * squeezing_r)
    gpk2 = (g + k) ** 2
    sigma1 = (
        c * (g + k) * (g * two_n1 + k * ch)
        + two_n1 * (gpk2 + 4.0 * k * k * xi * xi)
    ) / (2.0 * (gpk2 * (c + 1.0) + 4.0 * k * k * xi * xi))
    den = (gpk2 + 4.0 * k * k * xi * xi) * ((c + 1.0) ** 2 + 4.0 * xi * xi)
    sigma12 = k * c * sh * (k * c + g + 2.0 * k) * xi / den
    sigma13 = k * c * sh * ((g + k) * (c + 1.0) - 4.0 * k * xi * xi) / (2.0 * den)
    return MechanicalCovarianceClosed(
        sigma1=sigma1, sigma12=sigma12, sigma13=sigma13,
        cooperativity=cooperativity, squeezing_r=squeezing_r, xi=xi,
        gamma=gamma, kappa=kappa, n_th=n_th,
    )


@dataclass(frozen=True)
class GridPoint:
    """One comparison point; rates enter only through gamma/kappa apart from
    the verbatim formula's explicit kappa dependence."""

    cooperativity: float
    squeezing_r: float
    xi: float
    gamma_over_kappa: float
    n_th: float


@dataclass(frozen=True)
class ClosedFormRow:
    point: GridPoint
    sigma1_closed: float
    sigma1_lyap: float
    rel_dev_1: float
    sigma12_closed: float
    sigma12_lyap: float
    rel_dev_12: float
    sigma13_closed: float
    sigma13_lyap: float
    rel_dev_13: float


@dataclass(frozen=True)
class ClosedFormReport:
    rows: tuple[ClosedFormRow, ...]
    kappa: float
    skipped_unstable: tuple[GridPoint, ...]
    max_rel_dev_1: float
    max_rel_dev_12: float
    max_rel_dev_13: float
    max_rel_dev_at_c0: float           # all three entries, C = 0 rows
    max_rel_dev_12_13_at_r0: float     # correlation entries, r = 0 rows
    max_rel_dev_1_normalized: float    # sigma1 verbatim re-evaluated at kappa = 1

    @property
    def agrees_within_1e8(self) -> bool:
        return max(self.max_rel_dev_1, self.max_rel_dev_12, self.max_rel_dev_13) < 1e-8


def _rel_dev(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def _derived_from_point(point: GridPoint, kappa: float) -> DerivedParams:
    gamma = point.gamma_over_kappa * kappa
    coupling = math.sqrt(point.cooperativity * gamma * kappa / 4.0)
    n_sq = math.sinh(point.squeezing_r) ** 2
    m_sq = math.sinh(point.squeezing_r) * math.cosh(point.squeezing_r)
    return DerivedParams(
        n_th=point.n_th, n_sq=n_sq, m_sq=m_sq, coupling=coupling,
        cooperativity=point.cooperativity, xi=point.xi, phi=0.0,
        gamma_prime=gamma * (point.n_th + 0.5),
        kappa_prime=kappa * (n_sq + 0.5),
        gamma=gamma, kappa=kappa, hopping_lambda=point.xi * kappa,
    )


def validate_closed_forms(
    grid, kappa: float = 2.0 * math.pi * 14000.0
) -> ClosedFormReport:
    """Compare the verbatim closed form against the Lyapunov solution on a
    grid of :class:`GridPoint`; unstable points are skipped with notation.

    The summary also re-evaluates the verbatim variance formula with rates
    normalized to kappa = 1, which isolates the inconsistent linewidth power
    as the sole source of deviation.
    """
    rows: list[ClosedFormRow] = []
    skipped: list[GridPoint] = []
    dev_c0: list[float] = [0.0]
    dev_r0: list[float] = [0.0]
    dev_norm: list[float] = [0.0]
    for point in grid:
        derived = _derived_from_point(point, kappa)
        matrices = system_matrices(derived)
        if not check_stability(matrices.drift).is_stable:
            skipped.append(point)
            continue
        mech = solve_lyapunov(matrices).mechanical_block
        s1_l, s12_l, s13_l = mech[0, 0], mech[0, 1], mech[0, 2]
        closed = closed_sigma(point.cooperativity, point.squeezing_r, point.xi,
                              derived.gamma, kappa, point.n_th)
        row = ClosedFormRow(
            point=point,
            sigma1_closed=closed.sigma1, sigma1_lyap=float(s1_l),
            rel_dev_1=_rel_dev(closed.sigma1, float(s1_l)),
            sigma12_closed=closed.sigma12, sigma12_lyap=float(s12_l),
            rel_dev_12=_rel_dev(closed.sigma12, float(s12_l)),
            sigma13_closed=closed.sigma13, sigma13_lyap=float(s13_l),
            rel_dev_13=_rel_dev(closed.sigma13, float(s13_l)),
        )
        rows.append(row)
        if point.cooperativity == 0.0:
            dev_c0.append(max(row.rel_dev_1, row.rel_dev_12, row.rel_dev_13))
        if point.squeezing_r == 0.0:
            dev_r0.append(max(row.rel_dev_12, row.rel_dev_13))
        normalized = closed_sigma(point.cooperativity, point.squeezing_r, point.xi,
                                  point.gamma_over_kappa, 1.0, point.n_th)
        dev_norm.append(_rel_dev(normalized.sigma1, float(s1_l)))
    return ClosedFormReport(
        rows=tuple(rows),
        kappa=kappa,
        skipped_unstable=tuple(skipped),
        max_rel_dev_1=max((r.rel_dev_1 for r in rows), default=0.0),
        max_rel_dev_12=max((r.rel_dev_12 for r in rows), default=0.0),
        max_rel_dev_13=max((r.rel_dev_13 for r in rows), default=0.0),
        max_rel_dev_at_c0=max(dev_c0),
        max_rel_dev_12_13_at_r0=max(dev_r0),
        max_rel_dev_1_normalized=max(dev_norm),
    )


def default_validation_grid(n_th: float = 1.7380208490312972) -> list[GridPoint]:
    """Comparison grid: the undriven point, an r-scan without hopping, and an
    r x xi scan at the standard drive strength."""
    grid = [GridPoint(0.0, 1.0, 0.2, 0.01, n_th)]
    for r in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]:
        grid.append(GridPoint(32.11, r, 0.0, 0.01, n_th))
    for xi in [0.0, 0.1, 0.2, 0.3]:
        for r in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0]:
            grid.append(GridPoint(32.11, r, xi, 0.01, n_th))
    for gok in [0.001, 0.005, 0.05]:
        grid.append(GridPoint(32.11, 1.0, 0.2, gok, n_th))
    return grid


_CSV_COLUMNS = (
    "C", "r", "xi", "gamma_over_kappa", "n_th",
    "sigma1_closed", "sigma1_lyap", "rel_dev_1",
    "sigma12_closed", "sigma12_lyap", "rel_dev_12",
    "sigma13_closed", "sigma13_lyap", "rel_dev_13",
)


def write_report_csv(report: ClosedFormReport, path) -> None:
    """Write the discrepancy report; '#' metadata lines carry the summary."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# kappa_rads={report.kappa:.17g}\n")
        fh.write(f"# skipped_unstable={len(report.skipped_unstable)}\n")
        fh.write(f"# max_rel_dev_1={report.max_rel_dev_1:.17g}\n")
        fh.write(f"# max_rel_dev_12={report.max_rel_dev_12:.17g}\n")
        fh.write(f"# max_rel_dev_13={report.max_rel_dev_13:.17g}\n")
        fh.write(f"# max_rel_dev_at_c0={report.max_rel_dev_at_c0:.17g}\n")
        fh.write(f"# max_rel_dev_12_13_at_r0={report.max_rel_dev_12_13_at_r0:.17g}\n")
        fh.write(
            f"# max_rel_dev_1_normalized={report.max_rel_dev_1_normalized:.17g}\n"
        )
        fh.write(f"# agrees_within_1e8={str(report.agrees_within_1e8).lower()}\n")
        fh.write(
            "# note=sigma12/sigma13 expressions are exact; the sigma1 deviation "
            "disappears when rates are expressed in units of kappa, isolating "
            "the kappa^2 cosh(2r) bracket term as the sole inconsistency\n"
        )
        fh.write(",".join(_CSV_COLUMNS) + "\n")
        for row in report.rows:
            p = row.point
            values = (
                p.cooperativity, p.squeezing_r, p.xi, p.gamma_over_kappa, p.n_th,
                row.sigma1_closed, row.sigma1_lyap, row.rel_dev_1,
                row.sigma12_closed, row.sigma12_lyap, row.rel_dev_12,
                row.sigma13_closed, row.sigma13_lyap, row.rel_dev_13,
            )
            fh.write(",".join(f"{v:.17g}" for v in values) + "\n")
