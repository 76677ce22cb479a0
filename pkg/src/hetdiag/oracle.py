"""Brute-force cross-checks and synthetic data.

Nothing here calls into :mod:`hetdiag.diagnostics`. The stratum formulas
and moment expressions are closed form; the interaction oracle uses only
the raw least-squares kernel. That keeps them usable as independent checks
of the main pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import BadConfigError, NoVariationError
from .ingest import Dataset
from .linproj import add_intercept, fit_ols


# ---------------------------------------------------------------------------
# Saturated (stratum) machinery
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StratumTable:
    labels: np.ndarray
    shares: np.ndarray
    treated_shares: np.ndarray
    contrasts: np.ndarray

    def __post_init__(self):
        if not np.isclose(self.shares.sum(), 1.0, rtol=0, atol=1e-12):
            raise BadConfigError("stratum shares must sum to one")
        if np.any((self.treated_shares < 0) | (self.treated_shares > 1)):
            raise BadConfigError("treated shares must lie in [0, 1]")

    @property
    def pure(self):
        """Strata with no treated or no untreated units; their contrast is NaN."""
        return (self.treated_shares == 0) | (self.treated_shares == 1)


def stratum_table(y, d, strata) -> StratumTable:
    """Empirical shares, treated shares and treated-minus-untreated means."""
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    labels, inv = np.unique(np.asarray(strata), return_inverse=True)
    n = len(y)
    shares = np.bincount(inv, minlength=len(labels)) / n
    contrasts = np.full(len(labels), np.nan)
    treated = np.empty(len(labels))
    for s in range(len(labels)):
        ys, ds = y[inv == s], d[inv == s]
        treated[s] = ds.mean()
        if 0 < treated[s] < 1:
            contrasts[s] = ys[ds == 1].mean() - ys[ds == 0].mean()
    return StratumTable(labels, shares, treated, contrasts)


def angrist_tau(table: StratumTable):
    """Variance-weighted average of stratum contrasts.

    Stratum ``s`` gets weight proportional to ``share * p_s * (1 - p_s)``, the
    weighting that regression on a full set of stratum dummies implies.
    Returns ``(tau, weights)``.
    """
    raw = table.shares * table.treated_shares * (1 - table.treated_shares)
    total = raw.sum()
    if total <= 0:
        raise NoVariationError("every stratum is all-treated or all-untreated")
    weights = raw / total
    return float(np.sum(weights * np.nan_to_num(table.contrasts))), weights


def _exact_raw_moments(p):
    """E[p], E[p^2], E[p^3] as exact fractions of the stored doubles."""
    ratios = [float(v).as_integer_ratio() for v in p]
    den = max(q for _, q in ratios)  # powers of two, so every q divides den
    nums = [a * (den // q) for a, q in ratios]
    n = len(nums)
    return tuple(Fraction(sum(v ** r for v in nums), n * den ** r) for r in (1, 2, 3))


def moment_variances(p):
    """Group-variance terms written with raw moments of ``p`` only.

    ``a0 = E[p^3] - E[p^2]^2 / E[p]`` and
    ``a1 = E[p^2] - E[p^3] - (E[p] - E[p^2])^2 / (1 - E[p])``.
    When ``E(d|X) = p`` these equal ``rho*Var[p|d=1]`` and
    ``(1-rho)*Var[p|d=0]``; on a saturated sample that holds exactly.

    The differences cancel badly when ``p`` barely varies, so they are
    evaluated in exact rational arithmetic and rounded once at the end.
    """
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)):
        raise ValueError("p must be finite")
    m1, m2, m3 = _exact_raw_moments(p)
    if not 0 < m1 < 1:
        raise ValueError("mean of p must lie strictly inside (0, 1)")
    a0 = m3 - m2 ** 2 / m1
    a1 = m2 - m3 - (m1 - m2) ** 2 / (1 - m1)
    return float(a0), float(a1)


def interaction_oracle(y, p, d, j):
    """Coefficient on ``d`` in the regression of ``y`` on
    ``[1, d, p, d*(p - mean(p | d=j))]``. Equals the group-``j`` average
    partial linear effect."""
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    centre = p[d == j].mean()
    fit = fit_ols(y, add_intercept(d, p, d * (p - centre)))
    return float(fit.coef[1])


# ---------------------------------------------------------------------------
# Synthetic data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DgpTruth:
    rho: float
    mean_p: float
    mean_p_1: float
    mean_p_0: float
    aple: float
    aple1: float
    aple0: float
    w1: float
    w0: float

    @property
    def tau_ols(self):
        return self.w1 * self.aple1 + self.w0 * self.aple0


@dataclass(frozen=True)
class DgpConfig:
    """Population for simulations where ``E(d|X)`` is linear in ``X``.

    ``layout="saturated"``: mutually exclusive strata with the given shares
    and treatment probabilities; ``X`` holds dummies for strata 2..S.
    ``layout="continuous"``: ``k = len(p_slopes)`` independent U(0, 1)
    covariates and ``p(X) = p_intercept + X @ p_slopes``.

    Outcomes follow ``y = alpha_j + gamma_j * p(X) + noise * e`` in group ``j``.
    ``p_shift`` is added to every propensity (the intercept of ``p``).
    ``exact`` (saturated only) fixes stratum and treated counts at their
    rounded expected values instead of drawing them.
    """

    n: int
    layout: str = "saturated"
    stratum_shares: tuple = (0.5, 0.5)
    stratum_propensities: tuple = (0.25, 0.75)
    p_intercept: float = 0.5
    p_slopes: tuple = ()
    alpha1: float = 1.0
    gamma1: float = 0.0
    alpha0: float = 0.0
    gamma0: float = 0.0
    noise: float = 1.0
    p_shift: float = 0.0
    exact: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise BadConfigError("n must be at least 2")
        if self.noise < 0:
            raise BadConfigError("noise scale must be non-negative")
        if self.layout == "saturated":
            shares = np.asarray(self.stratum_shares, dtype=float)
            if len(shares) != len(self.stratum_propensities) or len(shares) < 1:
                raise BadConfigError("need one propensity per stratum")
            if np.any(shares <= 0) or not np.isclose(shares.sum(), 1.0):
                raise BadConfigError("stratum shares must be positive and sum to one")
        elif self.layout == "continuous":
            if len(self.p_slopes) < 1:
                raise BadConfigError("continuous layout needs at least one slope")
        else:
            raise BadConfigError(f"unknown layout {self.layout!r}")
        lo, hi = self.propensity_range()
        if not (0 < lo and hi < 1):
            raise BadConfigError(
                f"implied propensities span [{lo:.3g}, {hi:.3g}]; they must lie in (0, 1)")

    def shifted(self, shift):
        return replace(self, p_shift=self.p_shift + shift)

    def propensities(self):
        """Saturated layout: per-stratum P(d=1 | stratum) after the shift."""
        return np.asarray(self.stratum_propensities, dtype=float) + self.p_shift

    def propensity_range(self):
        if self.layout == "saturated":
            p = self.propensities()
            return float(p.min()), float(p.max())
        b = np.asarray(self.p_slopes, dtype=float)
        base = self.p_intercept + self.p_shift
        return base + b[b < 0].sum(), base + b[b > 0].sum()

    def _p_moments(self):
        """E[p], E[p^2], E[p^3] in the population."""
        if self.layout == "saturated":
            pi, p = np.asarray(self.stratum_shares, dtype=float), self.propensities()
            return tuple(float(np.sum(pi * p ** r)) for r in (1, 2, 3))
        # p = c + sum_k b_k U_k with U_k iid U(0,1): expand the cumulants
        b = np.asarray(self.p_slopes, dtype=float)
        mean = self.p_intercept + self.p_shift + b.sum() / 2
        var = np.sum(b ** 2) / 12
        # third central moment of a symmetric variable is zero
        return mean, var + mean ** 2, mean ** 3 + 3 * mean * var

    def truth(self) -> DgpTruth:
        """Population estimands implied by the configuration."""
        m1, m2, m3 = self._p_moments()
        rho = m1
        mean_p_1 = m2 / m1
        mean_p_0 = (m1 - m2) / (1 - m1)
        a0 = m3 - m2 ** 2 / m1
        a1 = m2 - m3 - (m1 - m2) ** 2 / (1 - m1)
        da, dg = self.alpha1 - self.alpha0, self.gamma1 - self.gamma0
        w1 = a1 / (a0 + a1) if a0 + a1 > 0 else float("nan")
        return DgpTruth(rho, m1, mean_p_1, mean_p_0, da + dg * m1, da + dg * mean_p_1,
                        da + dg * mean_p_0, w1, 1 - w1)


TOY8 = DgpConfig(n=8, stratum_shares=(0.5, 0.5), stratum_propensities=(0.25, 0.75),
                 alpha1=1.0, gamma1=4.0, alpha0=0.0, gamma0=0.0, noise=0.0, exact=True)


def _saturated_draw(cfg: DgpConfig, rng):
    shares = np.asarray(cfg.stratum_shares, dtype=float)
    props = cfg.propensities()
    S = len(shares)
    if cfg.exact:
        counts = np.round(cfg.n * shares).astype(int)
        counts[-1] = cfg.n - counts[:-1].sum()
        if np.any(counts < 0):
            raise BadConfigError("exact layout cannot realise these shares at this n")
        strata = np.repeat(np.arange(S), counts)
        d = np.concatenate([
            np.r_[np.ones(t), np.zeros(c - t)]
            for c, t in zip(counts, np.round(counts * props).astype(int))
        ])
    else:
        strata = np.sort(rng.choice(S, size=cfg.n, p=shares))
        d = (rng.random(cfg.n) < props[strata]).astype(float)
    X = (strata[:, None] == np.arange(1, S)[None, :]).astype(float)
    return strata, props[strata], d, X


def synth_dgp(cfg: DgpConfig, return_strata=False):
    """Draw a :class:`Dataset` from ``cfg`` (deterministic in ``cfg.seed``).

    The population estimands are available from ``cfg.truth()``. With
    ``return_strata`` the saturated layout also returns stratum labels.
    """
    rng = np.random.default_rng(cfg.seed)
    if cfg.layout == "saturated":
        if len(cfg.stratum_shares) < 2:
            raise BadConfigError("saturated layout needs at least two strata")
        strata, p, d, X = _saturated_draw(cfg, rng)
        names = [f"s{j + 2}" for j in range(X.shape[1])]
    else:
        strata = None
        b = np.asarray(cfg.p_slopes, dtype=float)
        X = rng.random((cfg.n, len(b)))
        p = cfg.p_intercept + cfg.p_shift + X @ b
        d = (rng.random(cfg.n) < p).astype(float)
        names = [f"x{j + 1}" for j in range(len(b))]
    y = np.where(d == 1, cfg.alpha1 + cfg.gamma1 * p, cfg.alpha0 + cfg.gamma0 * p)
    if cfg.noise:
        y = y + cfg.noise * rng.standard_normal(cfg.n)
    data = Dataset(y, d, X, names)
    return (data, strata) if return_strata else data


@dataclass(frozen=True)
class SweepPoint:
    shift: float
    rho: float
    w1: float
    w0: float


def shift_intercept_sweep(cfg: DgpConfig, shifts):
    """OLS weights in the population as the propensity intercept moves.

    Evaluated directly from the stratum distribution: no sampling, no
    regression. Only the saturated layout is supported.
    """
    if cfg.layout != "saturated":
        raise BadConfigError("the intercept sweep needs a saturated layout")
    out = []
    for s in shifts:
        c = cfg.shifted(s)  # re-validates: propensities must stay in (0, 1)
        pi, p = np.asarray(c.stratum_shares, dtype=float), c.propensities()
        f1, f0 = pi * p, pi * (1 - p)  # joint masses of (stratum, d=1) and (stratum, d=0)
        rho = f1.sum()
        m1, m0 = np.sum(f1 * p) / rho, np.sum(f0 * p) / (1 - rho)
        v1 = np.sum(f1 * (p - m1) ** 2) / rho
        v0 = np.sum(f0 * (p - m0) ** 2) / (1 - rho)
        w1 = (1 - rho) * v0 / (rho * v1 + (1 - rho) * v0)
        out.append(SweepPoint(float(s), float(rho), float(w1), float(1 - w1)))
    return out


def random_saturated_config(rng, n=None, max_strata=6, noise=None) -> DgpConfig:
    """A random heterogeneous saturated configuration (for property tests)."""
    S = int(rng.integers(2, max_strata + 1))
    shares = rng.dirichlet(np.full(S, 2.0))
    shares = shares / shares.sum()
    props = rng.uniform(0.1, 0.9, S)
    return DgpConfig(
        n=int(n if n is not None else rng.integers(200, 3000)),
        stratum_shares=tuple(shares), stratum_propensities=tuple(props),
        alpha1=float(rng.normal(0, 2)), gamma1=float(rng.normal(0, 5)),
        alpha0=float(rng.normal(0, 2)), gamma0=float(rng.normal(0, 5)),
        noise=float(rng.uniform(0.1, 3) if noise is None else noise),
        seed=int(rng.integers(2 ** 32)),
    )


def random_dataset(rng, n, rho, k=3, heterogeneous=True, min_group=3) -> Dataset:
    """Arbitrary data with heterogeneous, heteroskedastic outcomes.

    ``E(d|X)`` is deliberately nonlinear: treatment goes to the
    ``round(rho*n)`` units with the highest logistic latent index (at least
    ``min_group`` per arm). None of the in-sample identities depend on a
    correctly specified model, so this is a harder test than a tidy design.
    """
    X = rng.standard_normal((n, k)) * rng.uniform(0.5, 3, k) + rng.normal(0, 2, k)
    X[:, 0] = np.abs(X[:, 0]) ** 1.5  # skewed column
    if k > 1:
        X[:, -1] = (X[:, -1] > np.median(X[:, -1])).astype(float)  # a dummy
    latent = X @ rng.normal(0, 1, k) / X.std(axis=0).clip(1e-9).mean() + rng.logistic(size=n)
    m = int(np.clip(round(rho * n), min_group, n - min_group))
    d = np.zeros(n)
    d[np.argsort(latent)[-m:]] = 1.0
    beta = rng.normal(0, 1, k)
    y = rng.normal(0, 5) + X @ beta
    if heterogeneous:
        y = y + d * (rng.normal(0, 3) + X @ rng.normal(0, 1, k)) + 0.3 * X[:, 0] ** 2
    else:
        y = y + d * 2.0
    y = y + rng.standard_normal(n) * (1 + np.abs(X[:, 0]))
    return Dataset(y, d, X)
