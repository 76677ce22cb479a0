"""Estimators that correct or stress-test the OLS coefficient."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import GroupMoments, OlsWeights
from .errors import Assumption2Error, RankDeficientError
from .ingest import Dataset
from .linproj import ProjectionFit, add_intercept, fit_ols, fit_wls


@dataclass(frozen=True, eq=False)
class RaEstimates:
    ate: float
    att: float
    atu: float
    fit_treated: ProjectionFit
    fit_untreated: ProjectionFit

    @property
    def group_fits(self):
        return self.fit_treated, self.fit_untreated


def regression_adjustment(data: Dataset) -> RaEstimates:
    """Oaxaca-Blinder regression adjustment on the full covariate vector.

    Each group's outcome regression imputes the other group's counterfactual;
    equivalent to OLS of ``y`` on ``d``, ``X`` and all ``d*X`` interactions.
    """
    t = data.d == 1
    W = add_intercept(data.X)
    fits = []
    for mask, label in ((t, "treated"), (~t, "untreated")):
        try:
            fits.append(fit_ols(data.y[mask], W[mask]))
        except RankDeficientError as exc:
            raise RankDeficientError(f"{label} group: {exc}", exc.columns) from exc
    f1, f0 = fits
    att = float(np.mean(data.y[t] - W[t] @ f0.coef))
    atu = float(np.mean(W[~t] @ f1.coef - data.y[~t]))
    rho = t.mean()
    return RaEstimates(rho * att + (1 - rho) * atu, att, atu, f1, f0)


def correction_weights(d, m: GroupMoments, w: OlsWeights):
    """Per-unit weights ``(1-rho)/w0`` for treated and ``rho/w1`` for untreated."""
    d = np.asarray(d, dtype=float)
    return (1 - m.rho) / w.w0 * d + m.rho / w.w1 * (1 - d)


def wls_correction(y, p, d, m: GroupMoments, w: OlsWeights) -> float:
    """Coefficient on ``d`` from WLS of ``y`` on ``[1, d, p]``.

    The weights undo the OLS group weights and impose the sample shares, so
    the result is the overall average partial linear effect.
    """
    if not (0 < w.w0 < 1 and 0 < w.w1 < 1):
        raise Assumption2Error("OLS weights must lie strictly inside (0, 1)")
    fit = fit_wls(y, add_intercept(d, p), correction_weights(d, m, w))
    return float(fit.coef[1])


def downweight_untreated(data: Dataset, k: float) -> float:
    """OLS coefficient on ``d`` after giving untreated units weight ``1/k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    weights = np.where(data.d == 1, 1.0, 1.0 / k)
    fit = fit_wls(data.y, add_intercept(data.d, data.X), weights)
    return float(fit.coef[1])
