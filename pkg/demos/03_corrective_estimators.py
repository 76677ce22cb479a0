"""Estimators that undo the OLS weighting.

Run:  python3 demos/03_corrective_estimators.py
"""

from hetdiag import diagnose, downweight_untreated, regression_adjustment, wls_correction
from hetdiag.datasets import nswcps_dataset

data = nswcps_dataset(4)
r = diagnose(data)

# separate regressions of y on X in each arm, then impute the missing outcome
ra = regression_adjustment(data)
print(f"regression adjustment  ATE {ra.ate:9.1f}  ATT {ra.att:7.1f}  ATU {ra.atu:9.1f}")

# reweighting the two arms so that OLS on [1, d, p(X)] targets the ATE analogue
tau_w = wls_correction(data.y, r.propensity.p, data.d, r.moments, r.weights)
print(f"WLS correction         {tau_w:9.1f}   (ATE analogue {r.aple:.1f})")
print()

# giving untreated units weight 1/k moves OLS away from ATT and toward ATU
print("k    estimate")
for k in (1, 2, 5, 10, 50):
    print(f"{k:<4} {downweight_untreated(data, k):8.1f}")
