"""Training program vs. CPS comparison group: what does OLS weight?

Run:  python3 demos/01_nsw_diagnostics.py
"""

from hetdiag import decompose_bias, diagnose, hypothetical_weight
from hetdiag.cli import render_report
from hetdiag.datasets import NSW_SPECS, nswcps_dataset

# 185 treated men against ~16,000 survey respondents: rho is about 1%
data = nswcps_dataset(4)
report = diagnose(data)
print(render_report(report, "treated"))
print()

# Only 1% of the sample is treated, yet OLS puts 98% of its weight on ATT.
# The bigger group gets the smaller weight.
print(f"robust SE of OLS: {report.se_ols:.1f}")
for target in ("ATE", "ATT"):
    b = decompose_bias(report, target)
    print(f"OLS - {target}: {b.ols_minus_target:9.1f}  = {b.multiplier:.3f} x (ATU - ATT)")

# which weight on ATT would make OLS a convex combination of ATT and ATU?
print("implied weight on ATT:",
      round(hypothetical_weight(report.tau_ols, report.aple1, report.aple0), 4))
print()

# the same diagnostics for the four covariate sets
print(f"{'spec':>4} {'OLS':>8} {'w0':>7} {'delta':>7} {'w0*':>7} {'delta*':>7}")
for spec in NSW_SPECS:
    r = diagnose(nswcps_dataset(spec))
    w = r.weights
    print(f"{spec:>4} {r.tau_ols:8.1f} {w.w0:7.3f} {w.delta:7.3f} {w.w0_star:7.3f} "
          f"{w.delta_star:7.3f}")
