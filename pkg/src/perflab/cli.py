"""Command-line front end. Every command writes CSVs plus ``manifest.json``.

Exit codes: 0 success, 1 input or configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import json
import math
import os
import sys
import warnings
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, CovarianceUnavailableError, CSVFormatError, DomainError, PerflabWarning

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


# -- output helpers ----------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return repr(v)
    if v is None:
        return ""
    return str(v)


class Output:
    """Collects written files for the manifest."""

    def __init__(self, out_dir, quiet=False):
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.files = []
        self.quiet = quiet

    def csv(self, name, header, rows):
        path = self.dir / name
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
        self.files.append(name)
        return path

    def say(self, msg):
        if not self.quiet:
            print(msg)


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out: Output, command, inputs, seed, config_hash):
    m = {
        "command": command,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in inputs if Path(p).is_file()],
        "config_hash": config_hash,
        "seed": seed,
        "version": __version__,
        "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "outputs": sorted(out.files),
    }
    with (out.dir / "manifest.json").open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(m, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _args_hash(args, keys):
    d = {k: getattr(args, k) for k in keys}
    return hashlib.sha256(json.dumps(d, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _seed(args, default=0):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PERFLAB_SEED")
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"PERFLAB_SEED must be an integer, got {env!r}", "PERFLAB_SEED") from None
    return default


# -- data loading --------------------------------------------------------------------

def _header(path):
    with open(path, newline="", encoding="utf-8") as fh:
        row = next(csv.reader(fh), None)
    if row is None:
        raise CSVFormatError("empty file", 1)
    return [h.strip() for h in row]


def _read_xy(path):
    xs, ys = [], []
    head = _header(path)
    ix, iy = head.index("x"), head.index("y")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(head):
                raise CSVFormatError(f"expected {len(head)} fields, got {len(raw)}", lineno)
            try:
                x, y = float(raw[ix]), float(raw[iy])
            except ValueError:
                raise CSVFormatError(f"non-numeric x or y {raw[ix]!r}, {raw[iy]!r}", lineno) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise CSVFormatError("non-finite value", lineno)
            xs.append(x)
            ys.append(y)
    return np.array(xs), np.array(ys)


def load_groups(path):
    """Fit data as {group: (x, y)}.

    Accepts an ``x,y`` table, a career CSV (x = exact age) or a record CSV
    (x = normalised time within each event).
    """
    from .series import CAREER_HEADER, RECORD_HEADER, read_career, read_records

    head = set(_header(path))
    if {"x", "y"} <= head:
        return {"all": _read_xy(path)}
    if set(CAREER_HEADER) <= head:
        out = {}
        for aid, marks in read_career(path).items():
            marks = sorted(marks, key=lambda m: m.age)
            out[aid] = (np.array([m.age for m in marks]), np.array([m.value for m in marks]))
        return out
    if set(RECORD_HEADER) <= head:
        out = {}
        for eid, s in read_records(path).items():
            yrs = s.years
            if yrs.size < 2 or yrs[-1] <= yrs[0]:
                raise DomainError(f"{eid}: need marks spanning more than one date")
            out[eid] = ((yrs - yrs[0]) / (yrs[-1] - yrs[0]), s.values)
        return out
    raise CSVFormatError("unrecognised header; expected x,y or a career or record table", 1)


# -- commands ---------------------------------------------------------------------------

def cmd_ingest(args, out):
    from .series import kappa_series, lambda_by_year, read_records, smooth_lowpass

    series = read_records(args.input, record=not args.listing)
    if not series:
        raise DomainError("no marks in input")
    rows = []
    krows = []
    for eid in sorted(series):
        s = series[eid]
        m0, m1 = s.marks[0], s.marks[-1]
        rows.append((eid, s.meta.discipline, s.meta.chronometric, s.meta.unit, len(s.marks),
                     m0.date.isoformat(), m1.date.isoformat(), m0.value, m1.value))
        if not args.listing:
            for m, k in zip(s.marks[1:], kappa_series(s)):
                krows.append((eid, m.date.isoformat(), m.value, float(k)))
    out.csv("events.csv", ("event_id", "discipline", "chronometric", "unit", "n_marks", "first_date",
                           "last_date", "first_value", "last_value"), rows)
    if not args.listing:
        lam = lambda_by_year(series.values())
        vals = np.array([r[3] for r in lam])
        smooth = smooth_lowpass(vals, args.cutoff) if vals.size >= 5 else np.full(vals.size, np.nan)
        out.csv("lambda.csv", ("year", "new_records", "events", "lambda", "lambda_smooth"),
                [(*r, float(v)) for r, v in zip(lam, smooth)])
        out.csv("kappa.csv", ("event_id", "date", "value", "kappa"), krows)
    out.say(f"{len(series)} event(s), {sum(r[4] for r in rows)} mark(s)")
    return EXIT_OK


def _fit_one(spec, x, y):
    from .fitting import lm_fit

    return lm_fit(spec, x, y)


def _criteria(f):
    """(AICc, SBIC) with rss floored at the smallest normal float; AICc NaN when n <= k + 1."""
    from .fitting import aicc, sbic

    rss = max(f.rss, np.finfo(float).tiny)
    a = aicc(rss, f.n_obs, f.k) if f.n_obs > f.k + 1 else float("nan")
    return a, sbic(rss, f.n_obs, f.k)


def cmd_fit(args, out):
    from .models import get_model

    spec = get_model(args.model)
    groups = load_groups(args.input)
    if not groups:
        raise DomainError("no data in input")
    stats, params, resid = [], [], []
    all_conv = True
    for g in sorted(groups):
        x, y = groups[g]
        f = _fit_one(spec, x, y)
        all_conv &= f.converged
        ic_a, ic_s = _criteria(f)
        stats.append((g, f.model_id, f.n_obs, f.k, f.converged, f.n_iter, f.rss, f.adj_r2, f.rmse, ic_a, ic_s))
        se = f.stderr
        for i, name in enumerate(f.param_names):
            params.append((g, name, float(f.params[i]), float(se[i]) if se is not None else float("nan")))
        fitted = spec(f.params, x)
        for xi, yi, fi in zip(x, y, fitted):
            resid.append((g, float(xi), float(yi), float(fi), float(yi - fi)))
    out.csv("fit.csv", ("group", "model_id", "n_obs", "k", "converged", "n_iter", "rss", "adj_r2", "rmse",
                        "aicc", "sbic"), stats)
    out.csv("params.csv", ("group", "param", "value", "stderr"), params)
    out.csv("residuals.csv", ("group", "x", "y", "fitted", "residual"), resid)
    out.say(f"{len(stats)} fit(s), converged: {all_conv}")
    return EXIT_OK if all_conv else EXIT_NUMERIC


def cmd_compare(args, out):
    from .fitting import criterion_table
    from .models import get_model

    ids = [m.strip() for m in args.models.split(",") if m.strip()]
    if len(ids) < 2:
        raise DomainError("compare needs at least two models")
    specs = [get_model(m) for m in ids]
    groups = load_groups(args.input)
    rows = []
    all_conv = True
    for g in sorted(groups):
        x, y = groups[g]
        fits = [_fit_one(s, x, y) for s in specs]
        all_conv &= all(f.converged for f in fits)
        table = criterion_table(fits).sorted()
        for r in table.rows:
            rows.append((g, r.model_id, r.k, r.rss, r.aicc, r.sbic, r.delta_aicc, r.delta_sbic))
    out.csv("compare.csv", ("group", "model_id", "k", "rss", "aicc", "sbic", "delta_aicc", "delta_sbic"), rows)
    out.say(f"best: {rows[0][1]}" if rows else "no rows")
    return EXIT_OK if all_conv else EXIT_NUMERIC


def cmd_segment(args, out):
    from .segmentation import split_periods
    from .series import read_records

    series = read_records(args.input)
    if not series:
        raise DomainError("no marks in input")
    rows = []
    for eid in sorted(series):
        seg = split_periods(series[eid])
        for k, p in enumerate(seg.periods):
            if p.fit is None:
                rows.append((eid, k, *p.years, p.n_marks, float("nan"), float("nan"), float("nan"), float("nan")))
            else:
                rows.append((eid, k, *p.years, p.n_marks, p.a, p.b, p.delta, p.fit.adj_r2))
    out.csv("segment.csv", ("event_id", "period_idx", "t_i", "t_f", "n_marks", "a", "b", "delta", "adj_r2"), rows)
    out.say(f"{len(rows)} period(s) over {len(series)} event(s)")
    return EXIT_OK


PREDICT_HEADER = ("event_id", "b", "year_9995", "ci_low", "ci_high", "median_year", "beta", "beta_prime")


def _forecast_all(series, draws, seed):
    from .forecast import forecast_event

    ok, failed = [], []
    for eid in sorted(series):
        try:
            ok.append(forecast_event(series[eid], draws=draws, seed=seed))
        except (DomainError, CovarianceUnavailableError, ArithmeticError) as exc:
            failed.append((eid, type(exc).__name__, str(exc)))
    return ok, failed


def cmd_predict(args, out):
    from .series import read_records

    series = read_records(args.input)
    if not series:
        raise DomainError("no marks in input")
    ok, failed = _forecast_all(series, args.draws, _seed(args))
    out.csv("predict.csv", PREDICT_HEADER,
            [(f.event_id, f.asymptote_b, f.year_9995, f.ci_low, f.ci_high, f.median_year, f.beta, f.beta_prime)
             for f in ok])
    out.csv("exceptions.csv", ("event_id", "error", "message"), failed)
    out.say(f"{len(ok)} forecast(s), {len(failed)} failure(s)")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_report(args, out):
    """Segment and forecast every event, one joined row per event."""
    from .segmentation import split_periods
    from .forecast import forecast_event
    from .series import read_records

    series = read_records(args.input)
    if not series:
        raise DomainError("no marks in input")
    seed = _seed(args)
    rows, failed = [], []
    for eid in sorted(series):
        s = series[eid]
        try:
            seg = split_periods(s)
            f = forecast_event(s, draws=args.draws, seed=seed, segmentation=seg)
        except (DomainError, CovarianceUnavailableError, ArithmeticError) as exc:
            failed.append((eid, type(exc).__name__, str(exc)))
            continue
        last = seg.last
        bounds = ";".join(f"{p.years[0]:.4f}-{p.years[1]:.4f}" for p in seg.periods)
        rows.append((eid, s.meta.chronometric, len(seg.periods), bounds, last.years[0], last.years[1],
                     last.delta, last.a, last.b, last.fit.adj_r2, f.year_9995, f.ci_low, f.ci_high,
                     f.median_year, f.asymptote_ci[0], f.asymptote_ci[1], f.beta, f.beta_prime))
    out.csv("report.csv", ("event_id", "chronometric", "n_periods", "periods", "last_t_i", "last_t_f", "delta",
                           "a", "b", "adj_r2", "year_9995", "ci_low", "ci_high", "median_year", "b_ci_low",
                           "b_ci_high", "beta", "beta_prime"), rows)
    decades = Counter(int(math.floor(r[10] / 10.0) * 10) for r in rows if math.isfinite(r[10]))
    out.csv("limit_decades.csv", ("decade", "count"), sorted(decades.items()))
    out.csv("exceptions.csv", ("event_id", "error", "message"), failed)
    out.say(f"{len(rows)} event(s) reported, {len(failed)} exception(s)")
    if not rows:
        raise DomainError("no event could be segmented and forecast")
    return EXIT_OK


def cmd_atypicity(args, out):
    from .atypicity import atypicity_A, event_descriptors, top10_from_series
    from .series import read_records

    series = read_records(args.input, record=False)
    by_disc = {}
    for eid in sorted(series):
        s = series[eid]
        by_disc.setdefault(s.meta.discipline, []).extend(event_descriptors(top10_from_series(s)))
    rows, yearly = [], []
    for disc in sorted(by_disc):
        recs, ym = atypicity_A(by_disc[disc])
        for r in recs:
            rows.append((r.event_id, r.year, r.d1, r.d2, r.d2_censored, r.d3, r.u1, r.u2, r.u3, r.A,
                         r.top5_d1, r.top5_d2, r.top5_d3))
        yearly.extend((disc, y, a) for y, a in ym.items())
    out.csv("atypicity.csv", ("event_id", "year", "d1", "d2", "d2_censored", "d3", "u1", "u2", "u3", "A",
                              "top5_d1", "top5_d2", "top5_d3"), rows)
    out.csv("atypicity_yearly.csv", ("discipline", "year", "mean_A"), yearly)
    out.say(f"{len(rows)} yearly best(s) scored")
    return EXIT_OK


def cmd_density(args, out):
    from .density import build_mesh, mesh_entropy, select_resolution, smooth_counts
    from .series import read_lifespans

    pts = read_lifespans(args.input)
    choice = select_resolution(pts, step=args.step)
    a = args.spacing if args.spacing is not None else choice.best_a
    mesh = build_mesh(pts, a)
    sm = smooth_counts(mesh)
    xc, yc = mesh.spec.x_centers(), mesh.spec.y_centers()
    rows = [(float(xc[i]), float(yc[j]), int(mesh.counts[i, j]), float(sm[i, j]))
            for i in range(xc.size) for j in range(yc.size)]
    out.csv("density_counts.csv", ("birth_year", "lifespan", "count", "smoothed"), rows)
    out.csv("entropy_curve.csv", ("a", "entropy", "valid"), choice.curve)
    out.say(f"spacing {a}: {mesh.spec.n_nodes} nodes, entropy {mesh_entropy(mesh):.4f} bits")
    return EXIT_OK


def _load_sim_config(args):
    from .sim.config import SimConfig, load_config

    cfg = load_config(args.config, require_all=not args.partial) if args.config else SimConfig()
    seed = _seed(args, default=cfg.seed)
    return cfg.replace(seed=seed)


def cmd_simulate(args, out):
    from .sim import BACKEND
    from .sim.world import RunSummary, run_simulation

    cfg = _load_sim_config(args)
    res = run_simulation(cfg)
    summary = [("t_e", res.t_e), ("reached_t_max", res.reached_t_max), ("fossil_initial", res.fossil_initial),
               ("fossil_consumed", res.fossil_consumed), ("final_population", int(res.population[-1])),
               ("config_hash", res.config_hash), ("seed", cfg.seed)]
    out.csv("summary.csv", ("key", "value"), summary)
    out.csv("turns.csv", RunSummary.COLUMNS, res.rows())
    out.say(f"t_e={res.t_e} reached_t_max={res.reached_t_max} (kernel: {BACKEND})")
    return EXIT_OK, cfg


def cmd_sweep(args, out):
    from .sim.sweep import NODE_HEADER, SWEEP_HEADER, mesh_sweep, node_summary

    cfg = _load_sim_config(args)
    rows = mesh_sweep(cfg, args.m, args.n, jobs=args.jobs)
    out.csv("sweep.csv", SWEEP_HEADER, (r.as_tuple() for r in rows))
    if args.per_node:
        out.csv("sweep_nodes.csv", NODE_HEADER, node_summary(rows))
    reached = sum(r.reached_tmax for r in rows)
    out.say(f"{len(rows)} run(s), {reached} reached t_max")
    return EXIT_OK, cfg


# -- parser ----------------------------------------------------------------------------------

def build_parser():
    def flags(parser, suppress):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--seed", type=int, default=d(None), help="master seed (fallback: PERFLAB_SEED)")
        parser.add_argument("--out", default=d("."), help="output directory")
        parser.add_argument("--jobs", type=int, default=d(1), help="worker processes (sweep)")
        parser.add_argument("--quiet", action="store_true", default=d(False))

    # flags are accepted before or after the subcommand; subparser copies must
    # not reset values given before it
    common = argparse.ArgumentParser(add_help=False)
    flags(common, suppress=True)

    p = argparse.ArgumentParser(prog="perflab", description=__doc__.splitlines()[0])
    flags(p, suppress=False)
    p.add_argument("--version", action="version", version=f"perflab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="validate a record CSV; lambda and kappa tables")
    s.add_argument("input")
    s.add_argument("--listing", action="store_true", help="top-10 listing, no record polarity check")
    s.add_argument("--cutoff", type=float, default=0.1, help="normalised low-pass cutoff for lambda")

    s = sub.add_parser("fit", parents=[common], help="fit one registered model")
    s.add_argument("input")
    s.add_argument("--model", required=True)

    s = sub.add_parser("compare", parents=[common], help="AICc/SBIC table over several models")
    s.add_argument("input")
    s.add_argument("--models", required=True, help="comma separated model ids")

    s = sub.add_parser("segment", parents=[common], help="split record series into periods")
    s.add_argument("input")

    for name, hlp in (("predict", "limit year and credibility interval per event"),
                      ("report", "segmentation and forecast joined per event")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("input")
        s.add_argument("--draws", type=int, default=10000)

    s = sub.add_parser("atypicity", parents=[common], help="atypicity of yearly bests from a top-10 listing")
    s.add_argument("input")

    s = sub.add_parser("density", parents=[common], help="birth-date by lifespan density mesh")
    s.add_argument("input")
    s.add_argument("--spacing", type=float, default=None, help="mesh spacing (default: entropy maximiser)")
    s.add_argument("--step", type=float, default=0.1, help="spacing scan step")

    for name, hlp in (("simulate", "one simulator run"), ("sweep", "mesh sweep over alpha3, alpha5, beta_alpha")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("config", nargs="?", default=None, help="key = value config file (default: built-in)")
        s.add_argument("--partial", action="store_true", help="allow missing keys (defaults fill in)")
        if name == "sweep":
            s.add_argument("--m", type=int, default=10, help="nodes per dimension")
            s.add_argument("--n", type=int, default=10, help="runs per node")
            s.add_argument("--per-node", action="store_true", help="also write per-node aggregates")
    return p


COMMANDS = dict(ingest=cmd_ingest, fit=cmd_fit, compare=cmd_compare, segment=cmd_segment, predict=cmd_predict,
                report=cmd_report, atypicity=cmd_atypicity, density=cmd_density, simulate=cmd_simulate,
                sweep=cmd_sweep)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.out, args.quiet)
    inputs = [getattr(args, k) for k in ("input", "config") if getattr(args, k, None)]
    try:
        with warnings.catch_warnings():
            if args.quiet:
                warnings.simplefilter("ignore", PerflabWarning)
            res = COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"perflab: config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CSVFormatError as exc:
        print(f"perflab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"perflab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CovarianceUnavailableError, np.linalg.LinAlgError) as exc:
        print(f"perflab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if isinstance(res, tuple):
        code, cfg = res
        chash, seed = cfg.config_hash(), cfg.seed
    else:
        code = res
        keys = [k for k in vars(args) if k not in ("out", "quiet", "jobs")]
        chash, seed = _args_hash(args, keys), _seed(args)
    _write_manifest(out, args.command, inputs, seed, chash)
    return code


if __name__ == "__main__":
    sys.exit(main())
