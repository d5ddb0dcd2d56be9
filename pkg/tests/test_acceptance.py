"""Acceptance checks for the full CausEV stack.

Each test prints a single verdict line (bypassing pytest capture) so the
overall run reports one pass/fail line per criterion.  The tests are
ordered from cheap invariants to long-running synthetic experiments.
"""

import sys
import time

import numpy as np
import pytest

from causev.cli import main, score_pair_events, write_events_csv
from causev.copula import EvCopula
from causev.decluster import decluster, event_years, events_matrix
from causev.graph import assemble, detect_cycles
from causev.margins import ExceedanceSample, fit_gpd_mle, uniform_to_frechet
from causev.pickands import (
    LogisticPickands,
    direction_grid,
    estimate_pickands_raw,
    fit_pickands,
)
from causev.pipeline import RunConfig, fit_pair_model, score_pair_values
from causev.resampling import bootstrap_causal_score
from causev.scoring import causal_score, integrated_scores, legendre_grid
from causev.simulate import (
    repetition_scores,
    sample_anm,
    sample_fixed_joint_tail,
    sample_gaussian_copula,
    sample_logistic,
)
from conftest import river_panel


def _report(capsys, num, name, ok, detail):
    line = "[acceptance %d] %-28s %s  (%s)\n" % (
        num, name + ":", "PASS" if ok else "FAIL", detail)
    with capsys.disabled():
        sys.stdout.write(line)
        sys.stdout.flush()


# ---------------------------------------------------------------- criterion 1


def test_1_score_antisymmetry(capsys):
    """Forward and reverse scores of any fitted pair sum to one exactly."""
    grid = legendre_grid(3)
    worst = 0.0
    for k in range(200):
        rng = np.random.default_rng(np.random.SeedSequence(2024, spawn_key=(1, k)))
        kind = k % 4
        if kind == 0:
            def sampler(n, r):
                return sample_anm("1a", 4.0, n, r)
        elif kind == 1:
            def sampler(n, r):
                return sample_anm("1b", 0.3, n, r)
        elif kind == 2:
            alpha = 0.3 + 0.5 * rng.uniform()

            def sampler(n, r, alpha=alpha):
                u1, u2 = sample_logistic(alpha, n, r)
                return -np.log1p(-u1), -np.log1p(-u2)
        else:
            def sampler(n, r):
                u1, u2 = sample_gaussian_copula(0.8, n, r)
                return -np.log1p(-u1), -np.log1p(-u2)
        x, y = sample_fixed_joint_tail(sampler, 0.90, 30, rng)
        m = fit_pair_model(x, y, RunConfig(threshold_prob=0.90))
        s_fwd = causal_score(integrated_scores(m, grid)).score
        s_rev = causal_score(integrated_scores(m.swapped(), grid)).score
        worst = max(worst, abs(s_fwd + s_rev - 1.0))
    ok = worst <= 1e-12
    _report(capsys, 1, "score antisymmetry", ok,
            "200 pairs, max |S_fwd + S_rev - 1| = %.2e" % worst)
    assert ok


# ---------------------------------------------------------------- criterion 2


def test_2_pickands_recovery(capsys):
    """Min-projection + constrained spline recovers logistic dependence."""
    w = np.linspace(0.0, 1.0, 1001)
    details = []
    ok = True
    for alpha in (0.3, 0.5, 0.7):
        rng = np.random.default_rng(
            np.random.SeedSequence(2024, spawn_key=(2, int(10 * alpha), 1)))
        u1, u2 = sample_logistic(alpha, 5000, rng)
        raw = estimate_pickands_raw(uniform_to_frechet(u1),
                                    uniform_to_frechet(u2),
                                    direction_grid(500))
        spline = fit_pickands(raw)
        err = float(np.max(np.abs(spline.value(w) -
                                  LogisticPickands(alpha).value(w))))
        valid = spline.validate()
        ok = ok and err <= 0.05 and valid
        details.append("alpha=%.1f err=%.4f%s" %
                       (alpha, err, "" if valid else " INVALID"))
    _report(capsys, 2, "Pickands recovery", ok, ", ".join(details))
    assert ok


# ---------------------------------------------------------------- criterion 3


def test_3_copula_calculus(capsys):
    """Partials match finite differences; inversion and max-stability hold."""
    rng = np.random.default_rng(np.random.SeedSequence(2024, spawn_key=(3,)))
    u1, u2 = sample_logistic(0.5, 5000, rng)
    raw = estimate_pickands_raw(uniform_to_frechet(u1),
                                uniform_to_frechet(u2),
                                direction_grid(500))
    copulas = {
        "logistic": EvCopula(LogisticPickands(0.5)),
        "spline": EvCopula(fit_pickands(raw)),
    }
    grid = np.linspace(0.1, 0.9, 9)
    v1g, v2g = np.meshgrid(grid, grid)
    h = 1e-6
    err_fd = err_inv = err_ms = 0.0
    for cop in copulas.values():
        fd1 = (cop.cdf(v1g + h, v2g) - cop.cdf(v1g - h, v2g)) / (2 * h)
        fd2 = (cop.cdf(v1g, v2g + h) - cop.cdf(v1g, v2g - h)) / (2 * h)
        err_fd = max(err_fd,
                     float(np.max(np.abs(cop.partial_v1(v1g, v2g) - fd1))),
                     float(np.max(np.abs(cop.partial_v2(v1g, v2g) - fd2))))
        taus = np.linspace(0.05, 0.95, 7)[:, None]
        g = np.linspace(0.1, 0.9, 9)[None, :]
        v2 = cop.inverse_partial_v1(taus, g)
        err_inv = max(err_inv, float(np.max(np.abs(
            cop.partial_v1(np.broadcast_to(g, v2.shape), v2) - taus))))
        v1 = cop.inverse_partial_v2(taus, g)
        err_inv = max(err_inv, float(np.max(np.abs(
            cop.partial_v2(v1, np.broadcast_to(g, v1.shape)) - taus))))
        for k in (2, 3, 5):
            err_ms = max(err_ms, float(np.max(np.abs(
                cop.cdf(v1g, v2g) -
                cop.cdf(v1g ** (1.0 / k), v2g ** (1.0 / k)) ** k))))
    ok = err_fd <= 1e-5 and err_inv <= 1e-8 and err_ms <= 1e-8
    _report(capsys, 3, "copula calculus", ok,
            "FD %.1e, inversion %.1e, max-stability %.1e"
            % (err_fd, err_inv, err_ms))
    assert ok


# ---------------------------------------------------------------- criterion 4


def test_4_quadrature(capsys):
    """Order-3 nodes/weights and degree-5 exactness."""
    grid = legendre_grid(3)
    node_err = float(np.max(np.abs(
        grid.nodes - np.array([0.1127017, 0.5, 0.8872983]))))
    weight_sum = float(np.sum(grid.weights))
    coef = np.array([3.0, -2.0, 5.0, 1.0, -4.0, 2.0])  # c0 + c1 x + ... + c5 x^5
    exact = float(np.sum(coef / np.arange(1.0, 7.0)))
    approx = float(np.sum(grid.weights * np.polyval(coef[::-1], grid.nodes)))
    poly_err = abs(approx - exact)
    ok = node_err <= 1e-7 and weight_sum == 1.0 and poly_err <= 1e-10
    _report(capsys, 4, "quadrature", ok,
            "nodes %.1e, weight sum %r, degree-5 error %.1e"
            % (node_err, weight_sum, poly_err))
    assert ok


# ---------------------------------------------------------------- criterion 7


def test_7_gpd_mle(capsys):
    """Parameter recovery and scale equivariance of the tail fit."""
    sigma, xi = 1.0, 0.2
    hits = 0
    for rep in range(100):
        rng = np.random.default_rng(np.random.SeedSequence(2024, spawn_key=(7, rep)))
        u = rng.uniform(size=5000)
        excess = sigma * (u ** (-xi) - 1.0) / xi
        fit = fit_gpd_mle(ExceedanceSample(excess, 0.0))
        if abs(fit.sigma - sigma) <= 0.1 and abs(fit.xi - xi) <= 0.1:
            hits += 1
    rng = np.random.default_rng(np.random.SeedSequence(2024, spawn_key=(7, 999)))
    u = rng.uniform(size=5000)
    excess = sigma * (u ** (-xi) - 1.0) / xi
    base = fit_gpd_mle(ExceedanceSample(excess, 0.0))
    scaled = fit_gpd_mle(ExceedanceSample(7.5 * excess, 0.0))
    equiv = max(abs(scaled.sigma / 7.5 - base.sigma), abs(scaled.xi - base.xi))
    ok = hits >= 90 and equiv <= 1e-6
    _report(capsys, 7, "GPD maximum likelihood", ok,
            "%d/100 within +-0.1, equivariance %.1e" % (hits, equiv))
    assert ok


# ---------------------------------------------------------------- criterion 5


def test_5_causal_detection(capsys):
    """Additive-noise scenario 1b is oriented correctly at n_u = 55."""
    t0 = time.time()
    config = RunConfig(threshold_prob=0.95)
    scores = repetition_scores("1b", 0.1, u=0.95, target_n_u=55,
                               repetitions=100, seed=505, config=config)
    rate = float(np.mean(scores > 0.5))
    med = float(np.median(scores))
    ok = rate >= 0.90 and med > 0.55
    _report(capsys, 5, "causal detection", ok,
            "success rate %.2f, median score %.3f, %.0fs"
            % (rate, med, time.time() - t0))
    assert ok


# ---------------------------------------------------------------- criterion 6


def test_6_false_positives(capsys):
    """Symmetric copula pairs score near 0.5 and are rarely significant."""
    t0 = time.time()
    config = RunConfig(threshold_prob=0.95)
    settings = [("logistic", a, lambda n, r, a=a: sample_logistic(a, n, r))
                for a in (0.2, 0.5, 0.8)]
    settings += [("gaussian", r_, lambda n, r, r_=r_: sample_gaussian_copula(r_, n, r))
                 for r_ in (0.6, 0.9)]
    details = []
    ok = True
    for si, (name, param, sampler) in enumerate(settings):
        points = np.empty(100)
        sig = 0
        for rep in range(100):
            rng = np.random.default_rng(
                np.random.SeedSequence(606, spawn_key=(si, rep)))
            x, y = sample_fixed_joint_tail(sampler, 0.95, 55, rng)

            def pipe(idx):
                return score_pair_values(x[idx], y[idx], config).score

            interval = bootstrap_causal_score(pipe, np.arange(x.size),
                                              replicates=20, level=0.95,
                                              seed=606, seed_key=(si, rep))
            points[rep] = interval.point
            sig += int(interval.significant)
        mean = float(np.mean(points))
        ok = ok and abs(mean - 0.5) <= 0.05 and sig <= 10
        details.append("%s(%.1f): mean %.3f, sig %d%%" % (name, param, mean, sig))
    _report(capsys, 6, "false-positive control", ok,
            "; ".join(details) + ", %.0fs" % (time.time() - t0))
    assert ok


# ---------------------------------------------------------------- criterion 8


def test_8_synthetic_river(capsys):
    """Recovered networks follow the generative cascade and stay acyclic."""
    t0 = time.time()
    good = 0
    for seed in range(20):
        panel = river_panel(n_stations=5, n_years=40, seed=seed)
        events = decluster(panel, 0.90, 9)
        values = events_matrix(events)
        years = event_years(events)
        config = RunConfig(threshold_prob=0.90, boot_reps=30, seed=seed)
        records = []
        failed = False
        for i in range(len(panel.stations)):
            for j in range(i + 1, len(panel.stations)):
                try:
                    result, interval = score_pair_events(
                        values[:, i], values[:, j], years, config, (i, j))
                except Exception:
                    failed = True
                    continue
                records.append({
                    "station_a": panel.stations[i],
                    "station_b": panel.stations[j],
                    "score": result.score,
                    "lower": interval.lower,
                    "upper": interval.upper,
                    "significant": interval.significant,
                })
        net = assemble(list(panel.stations), records)
        order = {name: k for k, name in enumerate(panel.stations)}
        flows_ok = all(order[e.source] < order[e.target] for e in net.edges)
        if not failed and flows_ok and not detect_cycles(net):
            good += 1
    ok = good >= 18
    _report(capsys, 8, "synthetic river network", ok,
            "%d/20 runs correct and acyclic, %.0fs" % (good, time.time() - t0))
    assert ok


# ---------------------------------------------------------------- criterion 9


def test_9_cli_determinism(tmp_path, capsys):
    """Every command is byte-identical across reruns and job counts."""
    panel = river_panel(n_stations=3, n_years=30, seed=4)
    panel_csv = tmp_path / "panel.csv"
    with open(panel_csv, "w", encoding="utf-8", newline="") as fh:
        fh.write("date," + ",".join(panel.stations) + "\n")
        for k, day in enumerate(panel.dates):
            fh.write(str(day) + "," +
                     ",".join(format(v, ".17g") for v in panel.values[k]) + "\n")
    events_csv = tmp_path / "events.csv"
    assert main(["decluster", str(panel_csv), "--out", str(events_csv)]) == 0

    def run(args, name):
        out = tmp_path / name
        assert main(args + ["--out", str(out)]) == 0
        return out.read_bytes()

    checks = []
    checks.append(run(["decluster", str(panel_csv)], "d2.csv") ==
                  events_csv.read_bytes())
    checks.append(
        run(["score-pair", str(events_csv), "s0", "s1", "--boot-reps", "12",
             "--seed", "3"], "p1.json") ==
        run(["score-pair", str(events_csv), "s0", "s1", "--boot-reps", "12",
             "--seed", "3"], "p2.json"))
    checks.append(
        run(["simulate", "1b", "--grid", "0.1", "--reps", "2",
             "--target-nu", "40", "--threshold", "0.95", "--seed", "5"],
            "s1.csv") ==
        run(["simulate", "1b", "--grid", "0.1", "--reps", "2",
             "--target-nu", "40", "--threshold", "0.95", "--seed", "5"],
            "s2.csv"))
    net1 = run(["network", str(events_csv), "--boot-reps", "10",
                "--jobs", "1"], "n1.json")
    net8 = run(["network", str(events_csv), "--boot-reps", "10",
                "--jobs", "8"], "n8.json")
    checks.append(net1 == net8)
    ok = all(checks)
    _report(capsys, 9, "CLI determinism", ok,
            "decluster %s, score-pair %s, simulate %s, network jobs 1 vs 8 %s"
            % tuple("ok" if c else "DIFF" for c in checks))
    assert ok
