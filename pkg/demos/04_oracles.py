"""Cross-checks that share no code with the main pipeline.

Run:  python3 demos/04_oracles.py
"""

import numpy as np

from hetdiag import diagnose, fit_ols, add_intercept
from hetdiag.oracle import (angrist_tau, interaction_oracle, moment_variances,
                            random_saturated_config, stratum_table, synth_dgp)

rng = np.random.default_rng(7)
cfg = random_saturated_config(rng, n=5000)
data, strata = synth_dgp(cfg, return_strata=True)
r = diagnose(data)

# saturated regression = variance-weighted average of stratum contrasts
tau_a, weights = angrist_tau(stratum_table(data.y, data.d, strata))
print(f"OLS {r.tau_ols:.10f}   stratum formula {tau_a:.10f}")
print("stratum weights", np.round(weights, 3))

# ATT/ATU analogues from one interacted regression each
p = r.propensity.p
print(f"ATT {r.aple1:.10f}   interaction {interaction_oracle(data.y, p, data.d, 1):.10f}")
print(f"ATU {r.aple0:.10f}   interaction {interaction_oracle(data.y, p, data.d, 0):.10f}")

# group variances from raw moments of p
a0, a1 = moment_variances(p)
m = r.moments
print(f"rho Var[p|d=1]     {m.rho * m.var_p_1:.12f}   raw moments {a0:.12f}")
print(f"(1-rho) Var[p|d=0] {(1 - m.rho) * m.var_p_0:.12f}   raw moments {a1:.12f}")

# Frisch-Waugh: the coefficient on d only uses d - p(X)
e = data.d - p
print(f"partialled-out slope {fit_ols(data.y, add_intercept(e)).coef[1]:.10f}")
