"""Least-squares engine: OLS, WLS and HC1 sandwich covariance.

All solves go through a column-pivoted QR factorization; the normal
equations are never formed for the coefficients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as scl

from .errors import NonpositiveWeightError, RankDeficientError

RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectionFit:
    coef: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray
    design: np.ndarray
    weights: np.ndarray | None = None
    dropped: tuple = ()

    @property
    def n(self):
        return self.design.shape[0]

    @property
    def k(self):
        return self.design.shape[1] - len(self.dropped)

    @property
    def vcov_robust(self):
        return hc1_vcov(self)

    @property
    def se_robust(self):
        return np.sqrt(np.diag(self.vcov_robust))

    def ssr(self):
        w = 1.0 if self.weights is None else self.weights
        return float(np.sum(w * self.residuals ** 2))


def _as_design(Z, n):
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    if Z.shape[0] != n:
        raise ValueError(f"design has {Z.shape[0]} rows but y has {n}")
    return Z


def _pivoted_qr(A):
    Q, R, piv = scl.qr(A, mode="economic", pivoting=True)
    col_norm = np.linalg.norm(A, axis=0).max() if A.size else 0.0
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > RANK_TOL * col_norm)) if col_norm > 0 else 0
    return Q, R, piv, rank


def collinear_columns(Z):
    """Indices of columns that are (numerically) linear combinations of others.

    Which member of a collinear set gets reported depends on the pivoting
    order; the remaining columns always have full rank.
    """
    Z = np.asarray(Z, dtype=float)
    _, _, piv, rank = _pivoted_qr(Z)
    return tuple(sorted(int(j) for j in piv[rank:]))


def _solve(ys, Z, drop_collinear):
    Q, R, piv, rank = _pivoted_qr(Z)
    p = Z.shape[1]
    dropped = tuple(sorted(int(j) for j in piv[rank:]))
    if dropped and not drop_collinear:
        raise RankDeficientError(
            f"design matrix is rank deficient ({rank} of {p}); "
            f"collinear column(s) {list(dropped)}; the covariance matrix of the "
            "regressors is singular", dropped)
    if dropped:
        warnings.warn(f"dropping collinear column(s) {list(dropped)}", stacklevel=3)
    coef = np.full(p, np.nan)
    coef[piv[:rank]] = scl.solve_triangular(R[:rank, :rank], Q[:, :rank].T @ ys)
    return coef, dropped


def fit_ols(y, Z, drop_collinear=False) -> ProjectionFit:
    """Least-squares projection of ``y`` on the columns of ``Z``.

    ``Z`` must already contain the intercept column. A rank-deficient design
    raises :class:`RankDeficientError` unless ``drop_collinear`` is set, in
    which case the offending coefficients are NaN and a warning is issued.
    """
    y = np.asarray(y, dtype=float)
    Z = _as_design(Z, len(y))
    coef, dropped = _solve(y, Z, drop_collinear)
    fitted = Z @ np.nan_to_num(coef)
    return ProjectionFit(coef, fitted, y - fitted, Z, None, dropped)


def fit_wls(y, Z, w, drop_collinear=False) -> ProjectionFit:
    """Weighted least squares: minimizes ``sum(w * (y - Z b)**2)``."""
    y = np.asarray(y, dtype=float)
    Z = _as_design(Z, len(y))
    w = np.asarray(w, dtype=float)
    if w.shape != y.shape:
        raise ValueError("weights must have one entry per observation")
    if not (np.all(np.isfinite(w)) and np.all(w > 0)):
        raise NonpositiveWeightError("all regression weights must be strictly positive")
    sw = np.sqrt(w)
    coef, dropped = _solve(sw * y, Z * sw[:, None], drop_collinear)
    fitted = Z @ np.nan_to_num(coef)
    return ProjectionFit(coef, fitted, y - fitted, Z, w, dropped)


def hc1_vcov(fit: ProjectionFit) -> np.ndarray:
    """Heteroskedasticity-robust covariance with the n/(n-k) correction.

    Computed from the R factor of the (weighted) design, which keeps the
    bread as well conditioned as the coefficient solve.
    """
    Z = fit.design
    keep = [j for j in range(Z.shape[1]) if j not in fit.dropped]
    Zk = Z[:, keep]
    w = np.ones(fit.n) if fit.weights is None else fit.weights
    sw = np.sqrt(w)
    Q, R, piv, rank = _pivoted_qr(Zk * sw[:, None])
    if rank < Zk.shape[1]:
        raise RankDeficientError("cannot form robust covariance of a rank-deficient fit",
                                 [keep[j] for j in piv[rank:]])
    n, k = fit.n, len(keep)
    # meat = sum_i w_i^2 r_i^2 z_i z_i' ; with A = sqrt(w) Z = Q R, bread = (R'R)^-1
    scores = Q * (sw * fit.residuals)[:, None]
    Rinv = scl.solve_triangular(R, np.eye(k))
    half = Rinv @ scores.T
    v_piv = (n / (n - k)) * (half @ half.T)
    inv = np.argsort(piv)
    vk = v_piv[np.ix_(inv, inv)]
    vk = 0.5 * (vk + vk.T)
    out = np.full((Z.shape[1], Z.shape[1]), np.nan)
    out[np.ix_(keep, keep)] = vk
    return out


def add_intercept(*columns):
    """Stack an intercept with the given vectors/matrices, column-wise."""
    cols = [np.asarray(c, dtype=float) for c in columns]
    n = len(cols[0])
    return np.column_stack([np.ones(n)] + [c.reshape(n, -1) for c in cols])
