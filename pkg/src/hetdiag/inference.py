"""Pairs bootstrap with per-replicate random streams."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diagnostics import diagnose
from .errors import AssumptionError, DataError, TooManyFailuresError
from .ingest import Dataset

DEFAULT_REPS = 1000


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    estimate: np.ndarray
    se: np.ndarray
    replicates: np.ndarray
    reps: int
    seed: int
    n_failed: int

    def interval(self, z=1.96):
        """Normal-approximation interval ``estimate +/- z*se``."""
        return self.estimate - z * self.se, self.estimate + z * self.se


def _replicate(statistic, data, seq):
    rng = np.random.default_rng(seq)
    rows = rng.integers(0, data.n, size=data.n)
    try:
        return np.atleast_1d(np.asarray(statistic(data.take(rows)), dtype=float))
    except (AssumptionError, DataError):
        return None


def pairs_bootstrap(statistic: Callable[[Dataset], np.ndarray], data: Dataset,
                    reps: int = DEFAULT_REPS, seed: int = 0,
                    n_jobs: int = 1) -> BootstrapResult:
    """Resample whole rows with replacement and recompute ``statistic``.

    Replicate ``b`` draws from its own stream, spawned from ``seed`` by index,
    so running with several threads gives the same numbers as running with
    one. Resamples on which the statistic fails (a group vanishes, the
    propensity has no within-group spread, a design loses rank) are skipped
    and counted.
    """
    if reps < 2:
        raise ValueError("reps must be at least 2")
    estimate = np.atleast_1d(np.asarray(statistic(data), dtype=float))
    seqs = np.random.SeedSequence(seed).spawn(reps)

    if n_jobs == 1:
        draws = [_replicate(statistic, data, s) for s in seqs]
    else:
        with ThreadPoolExecutor(max_workers=None if n_jobs < 1 else n_jobs) as pool:
            draws = list(pool.map(lambda s: _replicate(statistic, data, s), seqs))

    ok = [r for r in draws if r is not None]
    n_failed = reps - len(ok)
    if n_failed > reps / 2:
        raise TooManyFailuresError(
            f"{n_failed} of {reps} bootstrap resamples were degenerate; "
            "the treated or untreated group is probably too small")
    replicates = np.vstack(ok) if ok else np.empty((0, estimate.size))
    se = replicates.std(axis=0, ddof=1) if len(ok) > 1 else np.zeros(estimate.size)
    # identical draws: report exactly zero rather than rounding noise
    if len(ok):
        se[np.ptp(replicates, axis=0) == 0] = 0.0
    return BootstrapResult(estimate, se, replicates, reps, seed, n_failed)


def aple_statistic(data: Dataset):
    """(ATE, ATT, ATU) analogues from :func:`diagnose`."""
    r = diagnose(data)
    return np.array([r.aple, r.aple1, r.aple0])


def report_statistic(data: Dataset):
    """Every bootstrapped quantity of a diagnostics report, in the order of
    :data:`REPORT_STAT_NAMES`."""
    r = diagnose(data)
    return np.array([r.tau_ols, r.aple, r.aple1, r.aple0, r.weights.w1, r.weights.w0,
                     r.weights.delta])


REPORT_STAT_NAMES = ("tau_ols", "ate", "att", "atu", "w1", "w0", "delta")
