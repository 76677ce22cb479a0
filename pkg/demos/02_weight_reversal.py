"""Weight reversal in a population with three strata.

Shifting every propensity up makes the treated group larger, and its
weight in OLS smaller.

Run:  python3 demos/02_weight_reversal.py
"""

import numpy as np

from hetdiag import diagnose
from hetdiag.oracle import DgpConfig, shift_intercept_sweep, synth_dgp

cfg = DgpConfig(n=50_000, stratum_shares=(0.3, 0.4, 0.3),
                stratum_propensities=(0.2, 0.35, 0.5),
                alpha1=2.0, gamma1=4.0, alpha0=0.0, gamma0=0.0, noise=1.0, seed=1)

print(f"{'shift':>6} {'rho':>6} {'w1':>6}   population")
for pt in shift_intercept_sweep(cfg, np.linspace(-0.15, 0.45, 7)):
    print(f"{pt.shift:6.2f} {pt.rho:6.3f} {pt.w1:6.3f}")

# the sample version tracks the population one
print()
print(f"{'shift':>6} {'w1 (sample)':>12} {'w1 (truth)':>11} {'OLS':>7} {'ATE':>7}")
for s in (-0.1, 0.1, 0.3):
    c = cfg.shifted(s)
    r, t = diagnose(synth_dgp(c)), c.truth()
    print(f"{s:6.2f} {r.weights.w1:12.3f} {t.w1:11.3f} {r.tau_ols:7.3f} {t.aple:7.3f}")
