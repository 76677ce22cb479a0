"""Pairs bootstrap standard errors.

The propensity score is re-estimated on every resample.

Run:  python3 demos/05_bootstrap.py [reps]
"""

import sys
import time

from hetdiag import pairs_bootstrap
from hetdiag.datasets import nswcps_dataset
from hetdiag.inference import REPORT_STAT_NAMES, report_statistic

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 200
data = nswcps_dataset(4)

t0 = time.perf_counter()
res = pairs_bootstrap(report_statistic, data, reps=reps, seed=0, n_jobs=4)
print(f"{reps} replications in {time.perf_counter() - t0:.1f}s, {res.n_failed} failed")
lo, hi = res.interval()
for name, est, se, a, b in zip(REPORT_STAT_NAMES, res.estimate, res.se, lo, hi):
    print(f"{name:>8} {est:10.3f} ({se:8.3f})   [{a:10.3f}, {b:10.3f}]")
