"""The eight acceptance criteria, each at its stated tolerance and time limit.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from conftest import record_acceptance
from oracles import MODEL_KINDS, quad_compensator, random_history, random_model, renewal_window_for_count
from pointproc import (
    FitConfig,
    HawkesExp,
    HistoryView,
    HomPoisson,
    PiecewisePoisson,
    RenewalGamma,
    SimConfig,
    evaluate_compensator,
    fit_mle,
    invert_compensator,
    poisson_mle,
    residual_report,
    simulate,
    simulate_batch,
    thinning_envelope,
)
from pointproc.cli import main

HAWKES = HawkesExp(0.5, 0.9, 1.0)


class Criterion:
    def __init__(self, number, limit_s):
        self.number, self.limit = number, limit_s
        self.checks = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def check(self, ok, label):
        self.checks.append((bool(ok), label))

    def note(self, label):
        self.checks.append((True, f"[info] {label}"))

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if self.limit is not None:
            self.check(elapsed < self.limit, f"runtime {elapsed:.1f}s < {self.limit}s")
        if exc_type is not None:
            self.checks.append((False, f"raised {exc_type.__name__}: {exc}"))
        passed = all(ok for ok, _ in self.checks)
        record_acceptance(self.number, passed, "; ".join(label for _, label in self.checks))
        print(f"criterion {self.number}: {'PASS' if passed else 'FAIL'}")
        if exc_type is None:
            failed = [label for ok, label in self.checks if not ok]
            assert not failed, failed
        return False


def replicate_permutation_ks(group_a, group_b, permutations=2000, bins=4000, seed=0):
    """Two-sample KS distance with a null built by shuffling whole replicates.

    The distance is taken at the pooled-sample quantiles (``bins`` edges), so
    each permutation is a sum over per-replicate histograms.
    """
    reps = list(group_a) + list(group_b)
    edges = np.quantile(np.concatenate(reps), np.linspace(0, 1, bins + 1)[1:-1])
    hist = np.array([np.bincount(np.searchsorted(edges, r, side="right"), minlength=bins) for r in reps], float)
    labels = np.r_[np.ones(len(group_a), bool), np.zeros(len(group_b), bool)]

    def distance(mask):
        ca, cb = np.cumsum(hist[mask].sum(0)), np.cumsum(hist[~mask].sum(0))
        return np.max(np.abs(ca / ca[-1] - cb / cb[-1]))

    observed = distance(labels)
    rng = np.random.default_rng(seed)
    null = np.array([distance(rng.permutation(labels)) for _ in range(permutations)])
    return (1 + np.sum(null >= observed)) / (1 + permutations)


def test_criterion_1_poisson_mle():
    with Criterion(1, 1.0) as c:
        for seed in (1, 2, 3):
            p = simulate(HomPoisson(2.0), SimConfig(50.0, seed=seed))
            n_over_t = len(p) / p.t_end
            fitted = fit_mle("hom_poisson", p, FitConfig([1.0])).params["lambda"]
            c.check(abs(fitted - n_over_t) <= 1e-6 * n_over_t, f"seed {seed}: fit {fitted:.9f} vs n/T {n_over_t}")
            c.check(poisson_mle(p) == n_over_t, "poisson_mle == n/T exactly")


def test_criterion_2_terminating_probability():
    model = PiecewisePoisson([1.0], [1.0, 0.0])
    with Criterion(2, 30.0) as c:
        for algorithm, seed in (("inverse", 101), ("thinning", 202)):
            patterns = simulate_batch(model, SimConfig(2.0, algorithm, seed, 10_000))
            frac = np.mean([len(p) == 0 for p in patterns])
            c.check(0.348 <= frac <= 0.388, f"{algorithm} empty fraction {frac:.4f}")


def test_criterion_3_gamma_renewal():
    cases = [(0.02, 0.2), (0.1, 1.0), (2.0, 20.0)]
    with Criterion(3, 60.0) as c:
        cvs = []
        for k, (shape, rate) in enumerate(cases):
            T = renewal_window_for_count(shape, rate, 100.0)
            patterns = simulate_batch(RenewalGamma(shape, rate), SimConfig(T, "inverse", 300 + k, 200))
            mean = np.mean([len(p) for p in patterns])
            gaps = np.concatenate([np.diff(np.concatenate(([0.0], p.times))) for p in patterns])
            cv = gaps.std(ddof=1) / gaps.mean()
            cvs.append(cv)
            c.check(abs(mean - 100) <= 15, f"shape {shape}: T={T:.4f} mean count {mean:.1f}, CV {cv:.3f}")
        c.check(cvs[0] > cvs[1] > cvs[2], "CV strictly decreasing")
        c.check(cvs[0] > 1.5 and cvs[2] < 0.9, "CV(0.02) > 1.5 and CV(2) < 0.9")


def test_criterion_4_hawkes_rate_balance():
    with Criterion(4, 120.0) as c:
        counts, gaps = {}, {}
        for algorithm, seed in (("inverse", 41), ("thinning", 42)):
            patterns = simulate_batch(HAWKES, SimConfig(1000.0, algorithm, seed, 200))
            counts[algorithm] = np.array([len(p) for p in patterns], float)
            gaps[algorithm] = [np.diff(np.concatenate(([0.0], p.times))) for p in patterns]
            rate = counts[algorithm].mean() / 1000.0
            c.check(4.0 <= rate <= 6.0, f"{algorithm} rate {rate:.3f}")
        a, b = counts["inverse"], counts["thinning"]
        se = math.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b))
        c.check(abs(a.mean() - b.mean()) < 3 * se, f"count gap {abs(a.mean() - b.mean()):.1f} < 3 SE {3 * se:.1f}")
        p = stats.ks_2samp(np.concatenate(gaps["inverse"]), np.concatenate(gaps["thinning"])).pvalue
        c.check(p > 0.01, f"pooled two-sample KS p {p:.2g}")
        # Supporting evidence only: the pooled test treats ~10^6 gaps as iid, but
        # gaps within one near-critical Hawkes replicate are strongly dependent.
        # Permuting whole replicates between the groups calibrates the statistic.
        perm_p = replicate_permutation_ks(gaps["inverse"], gaps["thinning"])
        c.note(f"replicate-permutation KS p {perm_p:.3f}")


def test_criterion_5_residual_size_and_power():
    with Criterion(5, 120.0) as c:
        patterns = simulate_batch(HAWKES, SimConfig(500.0, "thinning", 55, 100))
        true_rej = sum(residual_report(HAWKES, p).ks_p_value < 0.05 for p in patterns)
        wrong_rej = sum(residual_report(HomPoisson(5.0), p).ks_p_value < 0.05 for p in patterns)
        c.check(true_rej <= 12, f"true model rejects {true_rej}/100")
        c.check(wrong_rej >= 50, f"HomPoisson(5) rejects {wrong_rej}/100")


def test_criterion_6_parameter_recovery():
    with Criterion(6, 300.0) as c:
        hits = []
        for seed in range(10):
            p = simulate(HAWKES, SimConfig(2000.0, "thinning", 600 + seed))
            fit = fit_mle("hawkes_exp", p, FitConfig([1.0, 0.5, 2.0])).params
            hits.append(abs(fit["mu"] - 0.5) <= 0.1 and abs(fit["alpha"] - 0.9) <= 0.1)
        c.check(sum(hits) >= 9, f"{sum(hits)}/10 seeds within 0.1")


def test_criterion_7_oracle_suites():
    with Criterion(7, 60.0) as c:
        rng = np.random.default_rng(77)
        worst_quad = worst_trip = 0.0
        for kind in MODEL_KINDS:
            for _ in range(100):
                m = random_model(kind, rng)
                times, marks = random_history(m, rng)
                t = float(rng.uniform(times[-1] if len(times) else 0.0, 10.0))
                closed = evaluate_compensator(m, t, HistoryView(times, marks))
                worst_quad = max(worst_quad, abs(closed - quad_compensator(m, t, times, marks)) / (1 + closed))
                for closed_form in (True, False):
                    s = closed + float(rng.exponential(1.0)) + 1e-9
                    t_inv = invert_compensator(m, HistoryView(times, marks), s, t, closed_form=closed_form)
                    if math.isfinite(t_inv):
                        got = m.tracker(HistoryView(times, marks)).compensator(t_inv)
                        worst_trip = max(worst_trip, abs(got - s) / (1 + s))
        c.check(worst_quad <= 1e-6, f"closed form vs quadrature {worst_quad:.1e}")
        c.check(worst_trip <= 1e-8, f"inversion round trip {worst_trip:.1e}")
        violations = 0
        for case in range(1000):
            m = random_model(MODEL_KINDS[case % len(MODEL_KINDS)], rng)
            times, marks = random_history(m, rng)
            t = float(rng.uniform(times[-1] if len(times) else 0.0, 10.0))
            hist = HistoryView(times, marks)
            env = thinning_envelope(m, t, hist)
            tr = m.tracker(hist)
            grid = np.linspace(t, min(t + env.horizon_l, t + 10.0), 100)
            violations += any(tr.intensity(float(s)) > env.bound_m * (1 + 1e-12) for s in grid)
        c.check(violations == 0, f"envelope violations {violations}/1000")


def test_criterion_8_cli_determinism(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    Path("hawkes.json").write_text(json.dumps(
        {"model": "hawkes_exp", "params": {"mu": 0.5, "alpha": 0.9, "gamma_rate": 1.0}}))
    Path("etas.json").write_text(json.dumps(
        {"model": "etas_exp", "params": {"mu": 0.5, "alpha": 0.2, "beta": 1.0, "gamma": 1.0, "delta": 2.0}}))

    def run_all(tag):
        outputs = []
        for model, algorithm in (("hawkes", "inverse"), ("hawkes", "thinning"), ("etas", "inverse")):
            main(["simulate", "--model", f"{model}.json", "--t-end", "300", "--seed", "9", "--replicates", "2",
                  "--algorithm", algorithm, "--out", f"{tag}_{model}_{algorithm}"])
            outputs += [Path(f"{tag}_{model}_{algorithm}_{k}.csv").read_bytes() for k in range(2)]
        main(["loglik", "--model", "hawkes.json", "--events", "base_0.csv", "--t-end", "300"])
        main(["fit", "--family", "hawkes_exp", "--events", "base_0.csv", "--t-end", "300", "--init", "1,0.5,2"])
        main(["residuals", "--model", "hawkes.json", "--events", "base_0.csv", "--t-end", "300",
              "--out", f"{tag}_res.json"])
        outputs.append(Path(f"{tag}_res.json").read_bytes())
        out, err = capsys.readouterr()
        return outputs, out, err

    main(["simulate", "--model", "hawkes.json", "--t-end", "300", "--seed", "1", "--out", "base"])
    with Criterion(8, None) as c:
        first, second = run_all("a"), run_all("b")
        c.check(first[0] == second[0], f"{len(first[0])} output files byte-identical")
        c.check(first[1] == second[1] and first[1].count("\n") >= 3, "stdout identical")
        c.check(first[2] == second[2] == "", "no diagnostics")
