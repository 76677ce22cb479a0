"""Loading and validating treatment/outcome/covariate tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from os import PathLike
from typing import Sequence

import numpy as np
import pandas as pd

from .errors import DegenerateGroupError, SchemaError, TreatmentNotBinaryError

MISSING_TOKENS = [".", ""]


def _frozen(a, ndim):
    a = np.array(a, dtype=float, copy=True)
    if ndim == 2 and a.ndim == 1:
        a = a[:, None]
    if a.ndim != ndim:
        raise SchemaError(f"expected a {ndim}-dimensional array, got shape {a.shape}")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Outcome ``y``, binary treatment ``d`` and covariates ``X``.

    Arrays are copied on construction and marked read-only, so a Dataset can
    be shared freely between threads.
    """

    y: np.ndarray
    d: np.ndarray
    X: np.ndarray
    names: tuple = ()
    n_dropped: int = 0
    outcome_name: str = "y"
    treatment_name: str = "d"

    def __post_init__(self):
        y = _frozen(self.y, 1)
        d = _frozen(self.d, 1)
        X = _frozen(self.X, 2)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "X", X)
        names = tuple(self.names) or tuple(f"x{j + 1}" for j in range(X.shape[1]))
        object.__setattr__(self, "names", names)

        n, k = X.shape
        if len(y) != n or len(d) != n:
            raise SchemaError(f"row counts differ: y={len(y)}, d={len(d)}, X={n}")
        if len(names) != k:
            raise SchemaError(f"{len(names)} names for {k} covariate columns")
        if not (np.isfinite(y).all() and np.isfinite(d).all() and np.isfinite(X).all()):
            raise SchemaError("missing or non-finite values remain")
        if not np.isin(d, (0.0, 1.0)).all():
            bad = sorted(set(np.unique(d)) - {0.0, 1.0})
            raise TreatmentNotBinaryError(f"treatment takes values other than 0/1: {bad[:5]}")
        n1 = int(d.sum())
        if n1 == 0 or n1 == n:
            raise DegenerateGroupError(
                f"all units are {'treated' if n1 else 'untreated'}; both groups must be non-empty"
            )
        if n < k + 2:
            raise SchemaError(f"n = {n} rows is too few for {k} covariates (need n >= K + 2)")

    @property
    def n(self):
        return len(self.y)

    @property
    def k(self):
        return self.X.shape[1]

    @property
    def n_treated(self):
        return int(self.d.sum())

    def take(self, rows):
        """Row subset (or resample, rows may repeat) as a new validated Dataset."""
        rows = np.asarray(rows)
        return Dataset(self.y[rows], self.d[rows], self.X[rows], self.names,
                       outcome_name=self.outcome_name, treatment_name=self.treatment_name)

    def select(self, columns):
        """Keep only the covariates named (or indexed) in ``columns``."""
        idx = [self.names.index(c) if isinstance(c, str) else int(c) for c in columns]
        return Dataset(self.y, self.d, self.X[:, idx], [self.names[i] for i in idx],
                       self.n_dropped, self.outcome_name, self.treatment_name)


@dataclass(frozen=True)
class ValidationReport:
    n_raw: int
    n_kept: int
    n_dropped: int
    missing: dict = field(default_factory=dict)
    treatment_levels: tuple = ()


def from_frame(frame: pd.DataFrame, outcome: str, treatment: str,
               covariates: Sequence[str]) -> tuple[Dataset, ValidationReport]:
    """Validate a DataFrame and build a Dataset with listwise deletion."""
    covariates = list(covariates)
    if not covariates:
        raise SchemaError("at least one covariate is required")
    wanted = [outcome, treatment] + covariates
    absent = [c for c in wanted if c not in frame.columns]
    if absent:
        raise SchemaError(f"column(s) not found: {', '.join(absent)}")
    if len(set(wanted)) != len(wanted):
        raise SchemaError("outcome, treatment and covariates must be distinct columns")

    sub = frame[wanted].copy()
    for col in wanted:
        if sub[col].dtype == object:
            stripped = sub[col].astype(str).str.strip()
            sub[col] = stripped.where(~stripped.isin(MISSING_TOKENS + ["nan"]))
        coerced = pd.to_numeric(sub[col], errors="coerce")
        bad = coerced.isna() & sub[col].notna()
        if bad.any():
            example = sub[col][bad].iloc[0]
            raise SchemaError(f"column {col!r} has non-numeric value {example!r}")
        sub[col] = coerced

    missing = {c: int(sub[c].isna().sum()) for c in wanted}
    levels = tuple(sorted(float(v) for v in pd.unique(sub[treatment].dropna())))
    if not set(levels) <= {0.0, 1.0}:
        raise TreatmentNotBinaryError(
            f"treatment {treatment!r} must be coded 0/1, found values {levels[:5]}")

    kept = sub.dropna()
    report = ValidationReport(len(sub), len(kept), len(sub) - len(kept), missing, levels)
    data = Dataset(kept[outcome].to_numpy(float), kept[treatment].to_numpy(float),
                   kept[covariates].to_numpy(float), covariates, report.n_dropped,
                   outcome, treatment)
    return data, report


def load_csv(path: str | PathLike, outcome: str, treatment: str,
             covariates: Sequence[str]) -> tuple[Dataset, ValidationReport]:
    """Read a comma-separated file with a header row.

    ``"."`` and empty cells count as missing; rows missing any selected
    column are dropped and counted in the report.
    """
    try:
        frame = pd.read_csv(path, na_values=MISSING_TOKENS, keep_default_na=False,
                            encoding="utf-8", skipinitialspace=True)
    except FileNotFoundError:
        raise
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise SchemaError(f"cannot parse {path}: {exc}") from exc
    return from_frame(frame, outcome, treatment, covariates)
