"""Sweep the squeezing parameter for several photon-hopping strengths.

Without hopping (xi = 0) all three correlation measures grow monotonically
with the input squeezing and saturate.  With hopping they appear only above
a threshold squeezing r_min (sudden birth), peak, and then decay again
(sudden death at large r) -- stronger hopping shifts the birth threshold up
and the peak down.
"""

import duomech as dm

spec = dm.figure_preset("fig2")
rows = dm.run_sweep(spec)
dm.emit_csv(rows, "squeezing_sweep.csv", metadata={"preset": "fig2"})
print(f"wrote squeezing_sweep.csv ({len(rows)} rows)\n")

by_curve = {}
for row in rows:
    by_curve.setdefault(row.curve_value, []).append(row)

print(f"{'xi':>5} {'r_min':>7} {'r_peak':>7} {'EN_peak':>8} {'EN(r=3)':>8} "
      f"{'S_max':>7} {'D_max':>7}")
for xi, curve in by_curve.items():
    en = [r.log_negativity for r in curve]
    rs = [r.swept_value for r in curve]
    entangled = [r for r, e in zip(rs, en) if e > 1e-10]
    r_min = entangled[0] if entangled else float("nan")
    i_peak = max(range(len(en)), key=en.__getitem__)
    s_max = max(r.steering for r in curve)
    d_max = max(r.discord for r in curve)
    print(f"{xi:5.2f} {r_min:7.3f} {rs[i_peak]:7.2f} {en[i_peak]:8.4f} "
          f"{en[-1]:8.4f} {s_max:7.4f} {d_max:7.4f}")

print("\nthe birth threshold r_min grows with xi; for xi > 0 the measures")
print("peak at moderate squeezing and die again as r increases")
