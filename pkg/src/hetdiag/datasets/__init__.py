"""Bundled NSW-CPS data.

185 treated men from the Dehejia-Wahba subsample of the National Supported
Work experiment, combined with the 15,992 men of LaLonde's CPS-1 comparison
group (16,177 rows). Earnings are in 1982 dollars; ``age2`` is age squared.
"""

from importlib.resources import files

import pandas as pd

from ..ingest import from_frame

OUTCOME = "re78"
TREATMENT = "treated"

_DEMOGRAPHICS = ["age", "age2", "educ", "black", "hispanic", "married", "nodegree"]

# the four covariate sets of the classic OLS comparison, by column number
NSW_SPECS = {
    1: _DEMOGRAPHICS,
    2: ["re75"],
    3: _DEMOGRAPHICS + ["re75"],
    4: _DEMOGRAPHICS + ["re74", "re75"],
}


def nswcps_path():
    return files(__name__).joinpath("nswcps.csv")


def load_nswcps() -> pd.DataFrame:
    with nswcps_path().open("r", encoding="utf-8") as fh:
        return pd.read_csv(fh)


def nswcps_dataset(spec=4):
    """Dataset for one of the :data:`NSW_SPECS` covariate sets."""
    data, _ = from_frame(load_nswcps(), OUTCOME, TREATMENT, NSW_SPECS[spec])
    return data
