"""Command-line front end: decluster, score-pair, network, simulate."""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import graph as graphmod
from .decluster import DailyPanel, decluster
from .errors import CausevError, ParseError, RefusedSelfPair, SchemaError
from .pipeline import RunConfig, score_pair_values
from .resampling import bootstrap_causal_score
from .simulate import SCENARIOS, repetition_scores, sample_gaussian_copula, \
    sample_logistic


# --- file formats -----------------------------------------------------------

def read_panel_csv(path):
    """Parse a daily panel CSV: header `date,<station>...`, ISO dates,
    empty cells for missing values."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if not header or header[0] != "date" or len(header) < 2:
            raise SchemaError(f"{path}: header must be 'date,<station>,...'")
        stations = header[1:]
        dates = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"{path}:{lineno}: expected {len(header)} "
                                 f"columns, got {len(row)}")
            try:
                dates.append(np.datetime64(row[0], "D"))
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: malformed date {row[0]!r}") from None
            try:
                rows.append([float(v) if v != "" else np.nan for v in row[1:]])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed value") from None
        if not rows:
            raise SchemaError(f"{path}: no data rows")
    return DailyPanel(np.array(dates), np.array(rows), stations)


def write_events_csv(events, stations, out):
    """One row per event: start date, end date, per-station maxima."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["start", "end"] + list(stations))
    for ev in events:
        cells = ["" if np.isnan(v) else format(v, ".17g") for v in ev.maxima]
        writer.writerow([str(ev.start), str(ev.end)] + cells)
    out.write(buf.getvalue())


def read_events_csv(path):
    """Parse an events CSV back into (start_dates, values, stations)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if len(header) < 3 or header[:2] != ["start", "end"]:
            raise SchemaError(f"{path}: header must be 'start,end,<station>,...'")
        stations = header[2:]
        starts = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"{path}:{lineno}: expected {len(header)} "
                                 f"columns, got {len(row)}")
            try:
                starts.append(np.datetime64(row[0], "D"))
                rows.append([float(v) if v != "" else np.nan for v in row[2:]])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed row") from None
        if not rows:
            raise SchemaError(f"{path}: no events")
    return np.array(starts), np.array(rows), stations


# --- pair scoring over declustered events -----------------------------------

def _event_years(starts):
    return starts.astype("datetime64[Y]").astype(int) + 1970


def score_pair_events(x, y, years, config, seed_key):
    """Score one station pair over events and bootstrap its interval.

    Rows with a missing value in either station are dropped pairwise.
    """
    keep = ~(np.isnan(x) | np.isnan(y))
    x, y, years = x[keep], y[keep], years[keep]

    def pipeline(idx):
        return score_pair_values(x[idx], y[idx], config).score

    interval = bootstrap_causal_score(pipeline, years, config.boot_reps,
                                      config.level, config.seed, seed_key)
    result = score_pair_values(x, y, config)
    return result, interval


def _pair_record(a, b, result, interval, config):
    q = result.quadruple
    return {
        "station_a": a,
        "station_b": b,
        "n_u": result.n_u,
        "threshold_a": result.threshold_x,
        "threshold_b": result.threshold_y,
        "scores": {"s_a": q.s_x, "s_b": q.s_y,
                   "s_a_given_b": q.s_x_given_y, "s_b_given_a": q.s_y_given_x},
        "score": result.score,
        "direction": {"X_causes_Y": f"{a}->{b}",
                      "Y_causes_X": f"{b}->{a}",
                      "undecided": "undecided"}[result.direction],
        "lower": interval.lower,
        "upper": interval.upper,
        "significant": interval.significant,
        "bootstrap_replicates": interval.replicates,
        "bootstrap_failed": interval.failed,
        "seed": config.seed,
        "config": {
            "threshold_prob": config.threshold_prob,
            "quad_order": config.quad_order,
            "boot_reps": config.boot_reps,
            "level": config.level,
            "check_loss": config.check_loss,
            "paper_weights": config.paper_weights,
        },
    }


def _network_worker(args):
    pair_idx, a, b, x, y, years, config = args
    try:
        result, interval = score_pair_events(x, y, years, config, (pair_idx,))
        return pair_idx, _pair_record(a, b, result, interval, config), None
    except CausevError as exc:
        return pair_idx, None, f"{a}/{b}: {type(exc).__name__}: {exc}"


# --- commands ---------------------------------------------------------------

def _config_from_args(args):
    return RunConfig(
        threshold_prob=args.threshold,
        window_days=args.window_days,
        quad_order=args.quad_order,
        boot_reps=args.boot_reps,
        level=args.level,
        seed=args.seed,
        jobs=args.jobs,
        summer_only=args.summer_only,
        paper_weights=args.paper_weights,
        check_loss="standard" if args.standard_check_loss else "printed",
    )


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def cmd_decluster(args):
    config = _config_from_args(args)
    panel = read_panel_csv(args.panel)
    if config.summer_only:
        panel = panel.summer_only()
    events = decluster(panel, config.threshold_prob, config.window_days)
    out, close = _open_out(args.out)
    try:
        write_events_csv(events, panel.stations, out)
    finally:
        if close:
            out.close()
    return 0


def cmd_score_pair(args):
    config = _config_from_args(args)
    if args.station_i == args.station_j:
        raise RefusedSelfPair("cannot score a station against itself")
    starts, values, stations = read_events_csv(args.events)
    for name in (args.station_i, args.station_j):
        if name not in stations:
            raise SchemaError(f"unknown station {name!r}")
    i = stations.index(args.station_i)
    j = stations.index(args.station_j)
    years = _event_years(starts)
    # compute in canonical column order so that the two askable orders of
    # the same pair yield exactly complementary reports
    lo, hi = min(i, j), max(i, j)
    result, interval = score_pair_events(values[:, lo], values[:, hi], years,
                                         config, (lo, hi))
    if i > j:
        result = _swap_result(result)
        interval = _swap_interval(interval)
    record = _pair_record(args.station_i, args.station_j, result, interval,
                          config)
    out, close = _open_out(args.out)
    try:
        json.dump(record, out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def _swap_result(result):
    from dataclasses import replace
    q = result.quadruple
    direction = {"X_causes_Y": "Y_causes_X", "Y_causes_X": "X_causes_Y",
                 "undecided": "undecided"}[result.direction]
    return replace(result, quadruple=q.swapped(), score=1.0 - result.score,
                   direction=direction, threshold_x=result.threshold_y,
                   threshold_y=result.threshold_x)


def _swap_interval(interval):
    from dataclasses import replace
    return replace(interval, point=1.0 - interval.point,
                   lower=1.0 - interval.upper, upper=1.0 - interval.lower)


def cmd_network(args):
    config = _config_from_args(args)
    starts, values, stations = read_events_csv(args.events)
    if len(stations) < 2:
        raise SchemaError("need at least two stations")
    years = _event_years(starts)
    order = sorted(range(len(stations)), key=lambda k: stations[k])
    tasks = []
    pair_idx = 0
    for ai in range(len(order)):
        for bi in range(ai + 1, len(order)):
            i, j = order[ai], order[bi]
            tasks.append((pair_idx, stations[i], stations[j],
                          values[:, i], values[:, j], years, config))
            pair_idx += 1
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_network_worker, tasks))
    else:
        outcomes = [_network_worker(t) for t in tasks]
    outcomes.sort(key=lambda o: o[0])
    records = [rec for _, rec, err in outcomes if rec is not None]
    failures = [err for _, rec, err in outcomes if err is not None]
    net = graphmod.assemble(sorted(stations), records)
    payload = {
        "stations": sorted(stations),
        "pairs_attempted": len(tasks),
        "pairs": records,
        "failures": failures,
        "edges": graphmod.edges_json(net),
        "cycles": graphmod.detect_cycles(net),
        "seed": config.seed,
    }
    out, close = _open_out(args.out)
    try:
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if close:
            out.close()
    if args.dot:
        with open(args.dot, "w", encoding="utf-8", newline="") as fh:
            fh.write(graphmod.export_dot(net))
    return 0


def _simulation_sampler(name, param):
    if name in SCENARIOS:
        return None  # repetition_scores uses the scenario sampler
    if name == "logistic":
        return lambda n, rng: sample_logistic(param, n, rng)
    if name == "alogistic":
        # asymmetry sweep at fixed overall dependence 0.2, theta1 = 1
        return lambda n, rng: sample_logistic(0.2, n, rng, 1.0, param)
    if name == "gaussian":
        return lambda n, rng: sample_gaussian_copula(param, n, rng)
    raise SchemaError(f"unknown scenario {name!r}")


def cmd_simulate(args):
    config = _config_from_args(args)
    grid = [float(v) for v in args.grid.split(",")]
    out, close = _open_out(args.out)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["scenario", "parameter", "threshold", "repetition",
                         "score", "decision"])
        for param in grid:
            sampler = _simulation_sampler(args.scenario, param)
            scores = repetition_scores(
                args.scenario if sampler is None else None, param,
                u=args.threshold, target_n_u=args.target_nu,
                repetitions=args.reps, seed=config.seed, config=config,
                sampler=sampler)
            for rep, s in enumerate(scores):
                decision = ("X_causes_Y" if s > 0.5 else
                            "Y_causes_X" if s < 0.5 else "undecided")
                writer.writerow([args.scenario, format(param, "g"),
                                 format(args.threshold, "g"), rep,
                                 format(s, ".17g"), decision])
            writer.writerow([args.scenario, format(param, "g"),
                             format(args.threshold, "g"), "summary",
                             format(float(np.mean(scores > 0.5)), ".17g"),
                             "success_rate"])
    finally:
        if close:
            out.close()
    return 0


# --- argument parsing -------------------------------------------------------

def _add_common(p):
    p.add_argument("--threshold", type=float, default=0.90,
                   help="marginal threshold probability")
    p.add_argument("--window-days", type=int, default=9)
    p.add_argument("--quad-order", type=int, default=3)
    p.add_argument("--boot-reps", type=int, default=300)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--summer-only", action="store_true")
    p.add_argument("--paper-weights", action="store_true",
                   help="use the published order-3 weight pairing")
    p.add_argument("--standard-check-loss", action="store_true",
                   help="use the standard Koenker check-loss convention")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="causev",
        description="Causal direction between joint upper tails of paired "
                    "extremes, and causal networks over gauged panels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decluster", help="daily panel CSV -> events CSV")
    p.add_argument("panel")
    _add_common(p)
    p.set_defaults(func=cmd_decluster)

    p = sub.add_parser("score-pair", help="events CSV + two stations -> JSON")
    p.add_argument("events")
    p.add_argument("station_i")
    p.add_argument("station_j")
    _add_common(p)
    p.set_defaults(func=cmd_score_pair)

    p = sub.add_parser("network", help="events CSV -> edges JSON (+ DOT)")
    p.add_argument("events")
    p.add_argument("--dot", default=None, help="also write DOT to this file")
    _add_common(p)
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("simulate", help="synthetic scenario sweep -> CSV")
    p.add_argument("scenario",
                   help="1a|1b|2c|2d|3e|logistic|alogistic|gaussian")
    p.add_argument("--grid", required=True,
                   help="comma-separated noise/dependence parameter values")
    p.add_argument("--reps", type=int, default=300)
    p.add_argument("--target-nu", type=int, default=55)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SchemaError, RefusedSelfPair, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CausevError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
