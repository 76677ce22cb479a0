"""Command line front end.

    hetdiag diagnose --input nswcps.csv --outcome re78 --treatment treated \\
        --covariates age:re75

Exit status: 0 success, 2 usage error, 3 data/schema error, 4 assumption
failure (rank deficiency, no within-group variation in the propensity).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np
import pandas as pd

from . import __version__
from .diagnostics import CAVEAT, diagnose
from .errors import AssumptionError, DataError, HetDiagError, SchemaError
from .estimators import downweight_untreated, regression_adjustment, wls_correction
from .inference import pairs_bootstrap, report_statistic, REPORT_STAT_NAMES
from .ingest import MISSING_TOKENS, from_frame
from .linproj import add_intercept

MODES = ("diagnose", "regression-adjustment", "wls-correction", "downweight")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_DATA, EXIT_ASSUMPTION = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting


def fmt4(x):
    """Four significant digits without a leading zero: 793.6, .983, -.971."""
    if x is None or not math.isfinite(x):
        return "."
    if x == 0:
        return "0"
    s = f"{x:.4g}"
    if "e" in s:
        if abs(x) >= 1:
            s = f"{x:.0f}"
        else:
            return s
    if s.startswith("0."):
        s = s[1:]
    elif s.startswith("-0."):
        s = "-" + s[2:]
    return s


def fmt3(x):
    """Shares and weights: three decimals, no leading zero (.011, -.971)."""
    if x is None or not math.isfinite(x):
        return "."
    s = f"{x:.3f}"
    if s in ("0.000", "-0.000"):
        return "0"
    return s.replace("0.", ".", 1) if s.startswith(("0.", "-0.")) else s


def _line(label, value, width=6):
    return f"{label:>{width}} = {value}"


def render_report(report, treatment_name=None):
    """Plain-text summary: OLS, group shares, weights, effects and the identity line."""
    name = treatment_name or report.treatment_name
    w, m = report.weights, report.moments
    lines = [
        f'"OLS" is the estimated regression coefficient on {name}.',
        "",
        _line("OLS", fmt4(report.tau_ols)),
        "",
        _line("P(d=1)", fmt3(m.rho)),
        _line("P(d=0)", fmt3(1 - m.rho)),
        "",
        _line("w1", fmt3(w.w1)),
        _line("w0", fmt3(w.w0)),
        _line("delta", fmt3(w.delta)),
        "",
        _line("ATE", fmt4(report.aple)),
        _line("ATT", fmt4(report.aple1)),
        _line("ATU", fmt4(report.aple0)),
        "",
        f"OLS = w1*ATT + w0*ATU = {fmt4(w.w1 * report.aple1 + w.w0 * report.aple0)}",
    ]
    return "\n".join(lines)


def render_ols_table(report, names, outcome):
    fit = report.ols_fit
    se = fit.se_robust
    labels = [report.treatment_name] + list(names) + ["_cons"]
    order = list(range(1, len(labels))) + [0]
    n, k = fit.n, fit.k
    df = n - k
    from scipy import stats

    crit = stats.t.ppf(0.975, df)
    rule = "-" * 78
    out = [f"Linear regression{'Number of obs':>46} = {n:>10,}", "",
           rule,
           f"{'':>13}|{'Robust':>24}",
           f"{outcome[:12]:>12} |      Coef.   Std. Err.      t    P>|t|     [95% Conf. Interval]",
           "-" * 13 + "+" + "-" * 64]
    for label, j in zip(labels, order):
        b, s = fit.coef[j], se[j]
        t = b / s if s > 0 else float("nan")
        p = 2 * stats.t.sf(abs(t), df) if s > 0 else float("nan")
        out.append(f"{label[:12]:>12} | {b:>10.7g} {s:>10.7g} {t:>8.2f} {p:>8.3f} "
                   f"{b - crit * s:>11.7g} {b + crit * s:>11.7g}")
    out.append(rule)
    return "\n".join(out)


def render_bootstrap(boot, names):
    lines = [f"Bootstrap standard errors ({boot.reps - boot.n_failed} of {boot.reps} "
             f"replications, seed {boot.seed}):"]
    for name, se in zip(names, boot.se):
        f = fmt3 if name in ("w1", "w0", "delta") else fmt4
        lines.append(_line(name, f(float(se))))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument handling


def expand_covariates(spec, header):
    """Resolve ``a,b,c`` lists and ``first:last`` positional ranges."""
    out = []
    for part in (p.strip() for p in spec.split(",")):
        if not part:
            continue
        if ":" in part:
            lo, hi = (s.strip() for s in part.split(":", 1))
            for c in (lo, hi):
                if c not in header:
                    raise SchemaError(f"column not found: {c}")
            i, j = header.index(lo), header.index(hi)
            if i > j:
                raise UsageError(f"range {part!r} runs backwards")
            out.extend(header[i:j + 1])
        else:
            out.append(part)
    if not out:
        raise UsageError("no covariates given")
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="CSV file with a header row")
    common.add_argument("--outcome", "-o", required=True)
    common.add_argument("--treatment", "-t", required=True)
    common.add_argument("--covariates", "-c", required=True,
                        help="comma-separated names; 'age:re75' selects a column range")
    common.add_argument("--reps", type=int, default=0,
                        help="bootstrap replications (0 = none)")
    common.add_argument("--seed", type=int, default=None,
                        help="bootstrap seed (default: $HETDIAG_SEED or 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--drop-collinear", action="store_true",
                        help="drop collinear covariates with a warning instead of failing")
    common.add_argument("--jobs", type=int, default=1, help="bootstrap threads")

    parser = argparse.ArgumentParser(
        prog="hetdiag",
        description="Diagnose what OLS estimates under heterogeneous treatment effects.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)
    p = sub.add_parser("diagnose", parents=[common], help="OLS weights and APLE decomposition")
    p.add_argument("--noisily", action="store_true", help="also print the OLS table")
    sub.add_parser("regression-adjustment", parents=[common],
                   help="Oaxaca-Blinder ATE/ATT/ATU")
    sub.add_parser("wls-correction", parents=[common],
                   help="WLS on [1, d, p(X)] that recovers the overall APLE")
    p = sub.add_parser("downweight", parents=[common],
                       help="WLS with weight 1/k on untreated units")
    p.add_argument("--k", default="1,2,5,10,50",
                   help="comma-separated values of k >= 1")
    return parser


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HETDIAG_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HETDIAG_SEED must be an integer, got {env!r}")


def _drop_collinear(data, err):
    """Greedily keep covariates that add rank to ``[1, d, X_kept]``."""
    keep = []
    base = add_intercept(data.d)
    rank = np.linalg.matrix_rank(base)
    for j, name in enumerate(data.names):
        trial = np.column_stack([base] + [data.X[:, i] for i in keep + [j]])
        r = np.linalg.matrix_rank(trial)
        if r > rank:
            keep.append(j)
            rank = r
        else:
            print(f"hetdiag: warning: dropping collinear covariate {name}", file=err)
    return data.select(keep) if len(keep) < data.k else data


def _load(args, err):
    try:
        frame = pd.read_csv(args.input, na_values=MISSING_TOKENS, keep_default_na=False,
                            encoding="utf-8", skipinitialspace=True)
    except FileNotFoundError:
        raise SchemaError(f"input file not found: {args.input}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise SchemaError(f"cannot parse {args.input}: {exc}")
    covs = expand_covariates(args.covariates, list(frame.columns))
    data, report = from_frame(frame, args.outcome, args.treatment, covs)
    if report.n_dropped:
        print(f"hetdiag: dropped {report.n_dropped} row(s) with missing values", file=err)
    if args.drop_collinear:
        data = _drop_collinear(data, err)
    return data, report


def _run(args, out, err):
    if args.reps < 0:
        raise UsageError("--reps must be >= 0")
    if args.reps == 1:
        raise UsageError("--reps must be 0 or at least 2")
    seed = _seed(args)
    data, vreport = _load(args, err)
    payload = {"mode": args.mode, "n": data.n, "n_dropped": vreport.n_dropped,
               "outcome": args.outcome, "treatment": args.treatment,
               "covariates": list(data.names)}
    text = []

    def boot(stat, names):
        if not args.reps:
            return None
        b = pairs_bootstrap(stat, data, reps=args.reps, seed=seed, n_jobs=args.jobs)
        payload["bootstrap"] = {"reps": b.reps, "seed": b.seed, "n_failed": b.n_failed,
                                "se": {k: float(v) for k, v in zip(names, b.se)}}
        return b

    if args.mode == "diagnose":
        rep = diagnose(data)
        payload.update(rep.as_dict())
        payload["caveat"] = CAVEAT
        if getattr(args, "noisily", False):
            text += [render_ols_table(rep, data.names, args.outcome), ""]
        text.append(render_report(rep, args.treatment))
        b = boot(report_statistic, REPORT_STAT_NAMES)
        if b is not None:
            labels = ("OLS", "ATE", "ATT", "ATU", "w1", "w0", "delta")
            text += ["", render_bootstrap(b, labels)]
        text += ["", CAVEAT]

    elif args.mode == "regression-adjustment":
        ra = regression_adjustment(data)
        payload.update({"ate": ra.ate, "att": ra.att, "atu": ra.atu})
        text += ["Regression adjustment (separate outcome regressions by group)", "",
                 _line("ATE", fmt4(ra.ate)), _line("ATT", fmt4(ra.att)),
                 _line("ATU", fmt4(ra.atu))]

        def stat(ds):
            r = regression_adjustment(ds)
            return [r.ate, r.att, r.atu]

        b = boot(stat, ("ate", "att", "atu"))
        if b is not None:
            text += ["", render_bootstrap(b, ("ATE", "ATT", "ATU"))]

    elif args.mode == "wls-correction":
        rep = diagnose(data)
        p = rep.propensity.p
        tau_w = wls_correction(data.y, p, data.d, rep.moments, rep.weights)
        m, w = rep.moments, rep.weights
        payload.update({"tau_wls": tau_w, "aple": rep.aple, "tau_ols": rep.tau_ols,
                        "weight_treated": (1 - m.rho) / w.w0,
                        "weight_untreated": m.rho / w.w1})
        text += ["WLS of the outcome on [1, d, p(X)] with corrective weights", "",
                 _line("weight d=1", fmt4((1 - m.rho) / w.w0), 10),
                 _line("weight d=0", fmt4(m.rho / w.w1), 10), "",
                 _line("WLS", fmt4(tau_w), 10), _line("ATE", fmt4(rep.aple), 10),
                 _line("OLS", fmt4(rep.tau_ols), 10)]

        def stat(ds):
            r = diagnose(ds)
            return [wls_correction(ds.y, r.propensity.p, ds.d, r.moments, r.weights)]

        b = boot(stat, ("tau_wls",))
        if b is not None:
            text += ["", render_bootstrap(b, ("WLS",))]

    elif args.mode == "downweight":
        try:
            ks = [float(v) for v in args.k.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--k must be a comma-separated list of numbers: {args.k!r}")
        if not ks or min(ks) < 1:
            raise UsageError("--k values must be >= 1")
        est = [downweight_untreated(data, k) for k in ks]
        payload["downweight"] = [{"k": k, "estimate": e} for k, e in zip(ks, est)]
        text += ["WLS with weight 1 for treated and 1/k for untreated units", ""]
        text += [f"k = {fmt4(k):>6}   estimate = {fmt4(e)}" for k, e in zip(ks, est)]

        def stat(ds):
            return [downweight_untreated(ds, k) for k in ks]

        b = boot(stat, [f"k={k:g}" for k in ks])
        if b is not None:
            text += ["", render_bootstrap(b, [f"k={k:g}" for k in ks])]

    if args.format == "json":
        out.write(json.dumps(payload, indent=2, default=float) + "\n")
    else:
        out.write("\n".join(text) + "\n")


def run(argv=None, out=None, err=None):
    """Entry point; returns the process exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _run(args, out, err)
    except UsageError as exc:
        print(f"hetdiag: usage error: {exc}", file=err)
        return EXIT_USAGE
    except DataError as exc:
        print(f"hetdiag: data error [{exc.code}]: {exc}", file=err)
        return EXIT_DATA
    except AssumptionError as exc:
        print(f"hetdiag: assumption failure [{exc.code}]: {exc}", file=err)
        return EXIT_ASSUMPTION
    except HetDiagError as exc:
        print(f"hetdiag: error [{exc.code}]: {exc}", file=err)
        return EXIT_ASSUMPTION if exc.code == "E_TOO_MANY_FAILURES" else EXIT_INTERNAL
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
