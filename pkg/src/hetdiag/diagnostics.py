"""What does the OLS coefficient on a binary treatment average over?

The pipeline is:

1. fit the linear-probability propensity ``p(X)`` by regressing ``d`` on
   ``[1, X]``;
2. regress ``y`` on ``[1, p]`` separately among treated and untreated units;
3. combine the two lines into average partial linear effects for the whole
   sample (reported as ATE) and for each group (ATT, ATU);
4. weight the group effects by

       w1 = (1 - rho) Var[p | d=0] / (rho Var[p | d=1] + (1 - rho) Var[p | d=0])

   and ``w0 = 1 - w1``. The OLS coefficient equals ``w1*ATT + w0*ATU``
   exactly in sample.

Group variances divide by the group size. With that convention every step
is a sample least-squares fit and the decomposition holds to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .errors import Assumption2Error, IdentityBrokenError
from .ingest import Dataset
from .linproj import ProjectionFit, add_intercept, fit_ols

ASSUMPTION2_TOL = 1e-12
NOISE_TOL = 1e-10
IDENTITY_TOL = 1e-6

CAVEAT = ("ATE, ATT and ATU are average partial linear effects; they have a causal "
          "reading only under ignorability and linearity of E[y(j) | p(X)].")


@dataclass(frozen=True, eq=False)
class PropensityFit:
    p: np.ndarray
    coef: np.ndarray
    fit: ProjectionFit | None = None


@dataclass(frozen=True)
class GroupMoments:
    rho: float
    mean_p_1: float
    mean_p_0: float
    var_p_1: float
    var_p_0: float

    @property
    def mean_p(self):
        return self.rho * self.mean_p_1 + (1 - self.rho) * self.mean_p_0


@dataclass(frozen=True)
class OlsWeights:
    w1: float
    w0: float
    delta: float
    w0_star: float
    delta_star: float


@dataclass(frozen=True)
class ApleComponents:
    alpha1: float
    gamma1: float
    alpha0: float
    gamma0: float


@dataclass(frozen=True)
class BiasDecomposition:
    target: str
    multiplier: float
    heterogeneity_gap: float
    bias: float
    ols_minus_target: float


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    tau_ols: float
    weights: OlsWeights
    moments: GroupMoments
    components: ApleComponents
    aple: float
    aple1: float
    aple0: float
    identity_residual: float
    n: int
    treatment_name: str = "d"
    ols_fit: ProjectionFit | None = None
    propensity: PropensityFit | None = None

    @property
    def se_ols(self):
        """HC1 robust standard error of the OLS coefficient on treatment."""
        return float(np.sqrt(self.ols_fit.vcov_robust[1, 1]))

    # conventional labels for the three effects
    @property
    def ate(self):
        return self.aple

    @property
    def att(self):
        return self.aple1

    @property
    def atu(self):
        return self.aple0

    def as_dict(self):
        """Flat dictionary of every scalar in the report (full precision)."""
        out = {
            "n": self.n,
            "treatment": self.treatment_name,
            "tau_ols": self.tau_ols,
            "se_ols": self.se_ols,
            "rho": self.moments.rho,
            "p_d0": 1.0 - self.moments.rho,
            "aple": self.aple,
            "aple1": self.aple1,
            "aple0": self.aple0,
            "ate": self.aple,
            "att": self.aple1,
            "atu": self.aple0,
            "identity_residual": self.identity_residual,
        }
        out.update(asdict(self.weights))
        out.update({k: v for k, v in asdict(self.moments).items() if k != "rho"})
        out.update(asdict(self.components))
        return out


def propensity_lpm(d, X) -> PropensityFit:
    """Linear-probability propensity: fitted values of ``d`` on ``[1, X]``.

    Fitted values outside [0, 1] are kept as they are.
    """
    fit = fit_ols(d, add_intercept(X))
    return PropensityFit(fit.fitted, fit.coef, fit)


def group_moments(p, d) -> GroupMoments:
    p = np.asarray(p, dtype=float)
    t = np.asarray(d) == 1
    n1 = int(t.sum())
    if n1 == 0 or n1 == len(p):
        raise Assumption2Error("both treatment groups must be non-empty")
    p1, p0 = p[t], p[~t]
    m1, m0 = p1.mean(), p0.mean()
    v1 = float(np.mean((p1 - m1) ** 2))
    v0 = float(np.mean((p0 - m0) ** 2))
    scale = float(np.var(p))
    # relative cut, plus an absolute one so that a p(X) constant up to rounding
    # (variances ~ 1e-33) is not mistaken for genuine variation
    floor = max(ASSUMPTION2_TOL * scale, (NOISE_TOL * float(np.abs(p).max())) ** 2)
    if scale <= floor or v1 <= floor or v0 <= floor:
        which = [g for g, v in (("treated", v1), ("untreated", v0)) if v <= floor] or ["both"]
        raise Assumption2Error(
            "Assumption 2 fails: the propensity score p(X) has no variance among the "
            f"{' and '.join(which)} units, so the OLS weights w1/w0 and the group "
            "projections of y on p(X) are undefined (e.g. a completely randomized design)")
    return GroupMoments(n1 / len(p), float(m1), float(m0), v1, v0)


def ols_weights(m: GroupMoments) -> OlsWeights:
    a0 = m.rho * m.var_p_1
    a1 = (1 - m.rho) * m.var_p_0
    w1 = a1 / (a0 + a1)
    w0 = a0 / (a0 + a1)
    return OlsWeights(w1, w0, m.rho - w1, m.rho, 2 * m.rho - 1)


def _line(y, x):
    fit = fit_ols(y, add_intercept(x))
    return float(fit.coef[0]), float(fit.coef[1])


def aple_components(y, p, d) -> ApleComponents:
    """Separate regressions of ``y`` on ``[1, p]`` for treated and untreated."""
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    t = np.asarray(d) == 1
    for mask, label in ((t, "treated"), (~t, "untreated")):
        if mask.sum() < 2 or np.ptp(p[mask]) == 0:
            raise Assumption2Error(
                f"Assumption 2 fails: p(X) is constant among {label} units; "
                "the projection of y on p(X) in that group is not unique")
    a1, g1 = _line(y[t], p[t])
    a0, g0 = _line(y[~t], p[~t])
    return ApleComponents(a1, g1, a0, g0)


def aple_effects(c: ApleComponents, m: GroupMoments, mean_p_all=None):
    """(APLE, APLE_1, APLE_0): the linear-effect contrast evaluated at the
    overall, treated and untreated means of ``p``."""
    if mean_p_all is None:
        mean_p_all = m.mean_p
    da = c.alpha1 - c.alpha0
    dg = c.gamma1 - c.gamma0
    return da + dg * mean_p_all, da + dg * m.mean_p_1, da + dg * m.mean_p_0


def diagnose(data: Dataset, check_identity=True) -> DiagnosticsReport:
    y, d, X = data.y, data.d, data.X
    ols = fit_ols(y, add_intercept(d, X))
    tau = float(ols.coef[1])

    prop = propensity_lpm(d, X)
    m = group_moments(prop.p, d)
    w = ols_weights(m)
    c = aple_components(y, prop.p, d)
    aple, aple1, aple0 = aple_effects(c, m, float(prop.p.mean()))

    resid = abs(tau - (w.w1 * aple1 + w.w0 * aple0))
    if check_identity and resid > IDENTITY_TOL * (1 + abs(tau)):
        raise IdentityBrokenError(
            f"OLS = w1*ATT + w0*ATU fails by {resid:.3g}; this indicates a numerical "
            "problem, not a property of the data")
    return DiagnosticsReport(tau, w, m, c, aple, aple1, aple0, resid, data.n,
                             data.treatment_name, ols, prop)


def decompose_bias(report: DiagnosticsReport, target="ATE") -> BiasDecomposition:
    """Heterogeneity part of OLS minus the ATE (multiplier delta) or the ATT
    (multiplier w0); ``ols_minus_target`` is the direct difference."""
    target = target.upper()
    gap = report.aple0 - report.aple1
    if target == "ATE":
        mult, ref = report.weights.delta, report.aple
    elif target == "ATT":
        mult, ref = report.weights.w0, report.aple1
    else:
        raise ValueError("target must be 'ATE' or 'ATT'")
    return BiasDecomposition(target, mult, gap, mult * gap, report.tau_ols - ref)


def diff_in_means_check(y, p, d, c: ApleComponents, w: OlsWeights) -> float:
    """Raw difference in means minus the ``p``-imbalance term.

    The result reproduces the OLS coefficient on ``d``.
    """
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    t = np.asarray(d) == 1
    raw = y[t].mean() - y[~t].mean()
    gap = p[t].mean() - p[~t].mean()
    return float(raw - (w.w0 * c.gamma1 + w.w1 * c.gamma0) * gap)


def hypothetical_weight(tau, att, atu):
    """Weight ``w`` solving ``tau = w*att + (1 - w)*atu``."""
    return (tau - atu) / (att - atu)
