"""Compare the closed-form mechanical covariance entries against the exact
Lyapunov solution across a parameter grid.

Outcome of the comparison (also written to closedform_report.csv):

* the correlation entries sigma12 and sigma13 agree with the exact solve to
  machine precision everywhere, in physical units;
* the variance entry sigma1 agrees only in the undriven limit C = 0: its
  numerator mixes a rate with a rate squared (the kappa^2 cosh(2r) term),
  which is dimensionally inconsistent;
* re-evaluating the same printed formula with all rates expressed in units
  of kappa removes the sigma1 deviation entirely, isolating that single
  power of kappa as the sole problem.  The corrected form
  (closed_sigma_corrected) replaces kappa^2 cosh(2r) by kappa cosh(2r) and
  matches the exact solve for all inputs.
"""

import math

import duomech as dm

KAPPA = 2 * math.pi * 14000.0

report = dm.validate_closed_forms(dm.default_validation_grid())
dm.write_report_csv(report, "closedform_report.csv")
print(f"wrote closedform_report.csv ({len(report.rows)} comparison points)\n")

print("maximum relative deviation of the printed expressions vs exact solve")
print(f"  sigma1  : {report.max_rel_dev_1:.3e}")
print(f"  sigma12 : {report.max_rel_dev_12:.3e}")
print(f"  sigma13 : {report.max_rel_dev_13:.3e}")
print(f"  sigma1, rates normalized to kappa = 1: "
      f"{report.max_rel_dev_1_normalized:.3e}")
print(f"  on the undriven line (C = 0): {report.max_rel_dev_at_c0:.3e}")

point = report.rows[10]
print("\nexample row "
      f"(C={point.point.cooperativity}, r={point.point.squeezing_r}, "
      f"xi={point.point.xi}):")
print(f"  sigma1  closed {point.sigma1_closed:.6g}  vs exact {point.sigma1_lyap:.6g}")
print(f"  sigma12 closed {point.sigma12_closed:.6g} vs exact {point.sigma12_lyap:.6g}")
print(f"  sigma13 closed {point.sigma13_closed:.6g} vs exact {point.sigma13_lyap:.6g}")

corrected = dm.closed_sigma_corrected(32.11, 1.0, 0.2, 0.01 * KAPPA, KAPPA, 1.738)
print("\ncorrected closed form at the standard point: "
      f"sigma1={corrected.sigma1:.6f}, sigma12={corrected.sigma12:.6f}, "
      f"sigma13={corrected.sigma13:.6f}")
