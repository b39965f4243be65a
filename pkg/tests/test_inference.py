import math
import zlib

import numpy as np
import pytest

from pointproc import (
    EtasExp,
    FitConfig,
    HawkesExp,
    HomPoisson,
    PiecewisePoisson,
    RenewalGamma,
    SelfCorrecting,
    SimConfig,
    StopAfterN,
    fit_mle,
    log_likelihood,
    log_likelihood_numeric,
    poisson_mle,
    simulate,
    validate_pattern,
)
from pointproc.errors import MarkMismatch, ModelSpecError, NonFiniteObjectiveAtStart
from pointproc.inference import free_parameter_names
from oracles import MODEL_KINDS, random_history, random_model

HAWKES = HawkesExp(0.5, 0.9, 1.0)


def pat(times, T, marks=None):
    raw = list(zip(times, marks)) if marks is not None else list(times)
    return validate_pattern(raw, T, marked=marks is not None)


class TestLogLikelihood:
    def test_poisson(self):
        assert log_likelihood(HomPoisson(2.0), pat([0.3, 0.7], 1.0)) == pytest.approx(2 * math.log(2) - 2, rel=1e-15)

    def test_empty(self):
        assert log_likelihood(HomPoisson(1.0), pat([], 1.0)) == -1.0

    def test_hawkes(self):
        assert log_likelihood(HAWKES, pat([1.0], 2.0)) == pytest.approx(-2.26205568350565, rel=1e-13)

    def test_etas(self):
        m = EtasExp(0.5, 0.2, 1.0, 1.0, 1.0)
        assert log_likelihood(m, pat([1.0], 2.0, [2.0])) == pytest.approx(-4.62730203465427, rel=1e-13)

    def test_self_correcting(self):
        value = log_likelihood(SelfCorrecting(1.0, 0.2), pat([1.0], 2.0))
        assert value == pytest.approx(1.0 - 5.54238836437952, abs=1e-8)

    def test_zero_intensity_at_event(self):
        assert log_likelihood(StopAfterN(1.0, 1), pat([0.2, 0.5], 1.0)) == -math.inf

    def test_mark_mismatch(self):
        with pytest.raises(MarkMismatch):
            log_likelihood(HomPoisson(1.0), pat([0.5], 1.0, [1.0]))
        with pytest.raises(MarkMismatch):
            log_likelihood(EtasExp(0.5, 0.2, 1, 1, 1), pat([0.5], 1.0))


class TestNumeric:
    def test_poisson(self):
        v = log_likelihood_numeric(HomPoisson(2.0), pat([0.3, 0.7], 1.0), 1e-8)
        assert abs(v - (2 * math.log(2) - 2)) <= 1e-8

    def test_self_correcting(self):
        m, p = SelfCorrecting(1.0, 0.2), pat([1.0], 2.0)
        assert abs(log_likelihood_numeric(m, p) - log_likelihood(m, p)) <= 1e-8

    def test_hawkes_randomized(self):
        rng = np.random.default_rng(31)
        worst = 0.0
        for _ in range(100):
            m = random_model("hawkes_exp", rng)
            times, _ = random_history(m, rng)
            p = pat(times, 10.0)
            a, b = log_likelihood(m, p), log_likelihood_numeric(m, p)
            worst = max(worst, abs(a - b) / (1 + abs(a)))
        assert worst <= 1e-6

    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_zoo_agreement(self, kind):
        rng = np.random.default_rng(zlib.crc32(kind.encode()) + 7)
        for _ in range(30):
            m = random_model(kind, rng)
            times, marks = random_history(m, rng)
            p = pat(times, 10.0, marks)
            a, b = log_likelihood(m, p), log_likelihood_numeric(m, p)
            if a == -math.inf:
                assert b == -math.inf
            else:
                assert abs(a - b) <= 1e-6 * (1 + abs(a))


def _sequential(model, times, marks, T, start=0, stop=None, tracker=None):
    """Sum of log conditional densities f(t_i | H) for i in [start, stop), then survival if stop is None."""
    tr = tracker if tracker is not None else model.tracker()
    stop_i = len(times) if stop is None else stop
    prev = times[start - 1] if start > 0 else 0.0
    total = 0.0
    for i in range(start, stop_i):
        t = times[i]
        lam = tr.intensity(t)
        total += (math.log(lam) if lam > 0 else -math.inf) - (tr.compensator(t) - tr.compensator(prev))
        if marks is not None:
            total += model.mark_log_density(marks[i])
        tr.push(t, None if marks is None else marks[i])
        prev = t
    if stop is None:
        total -= tr.compensator(T) - tr.compensator(prev)
    return total, tr


@pytest.mark.parametrize("kind", MODEL_KINDS)
def test_factorization_identity(kind):
    rng = np.random.default_rng(zlib.crc32(kind.encode()) + 11)
    checked = 0
    while checked < 50:
        m = random_model(kind, rng)
        times, marks = random_history(m, rng)
        full = log_likelihood(m, pat(times, 10.0, marks))
        if not math.isfinite(full):
            continue
        k = int(rng.integers(0, len(times) + 1))
        head, tr = _sequential(m, times, marks, 10.0, 0, k)
        tail, _ = _sequential(m, times, marks, 10.0, k, None, tr)
        assert head + tail == pytest.approx(full, rel=1e-10, abs=1e-10)
        checked += 1


class TestPoissonMLE:
    def test_count_over_window(self):
        assert poisson_mle(pat(np.linspace(0.1, 49.9, 100), 50.0)) == 2.0
        assert poisson_mle(pat([], 5.0)) == 0.0

    def test_marked_rejected(self):
        with pytest.raises(MarkMismatch):
            poisson_mle(pat([0.1], 1.0, [1.0]))

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_grid_argmax(self, seed):
        p = simulate(HomPoisson(3.0), SimConfig(20.0, seed=seed))
        best = log_likelihood(HomPoisson(poisson_mle(p)), p)
        for lam in np.arange(0.1, 10.0001, 0.1):
            assert best >= log_likelihood(HomPoisson(float(lam)), p)


def _perturbation_check(family, result, pattern, fixed=None):
    assert result.converged and result.termination_reason == "tolerance_met"
    assert result.log_likelihood == log_likelihood(result.model, pattern)
    params = result.params
    for name in free_parameter_names(family, fixed):
        values = np.atleast_1d(np.asarray(params[name], dtype=float))
        for j in range(len(values)):
            for factor in (0.99, 1.01):
                changed = values.copy()
                changed[j] *= factor
                doc = dict(params)
                doc[name] = list(changed) if isinstance(params[name], list) else float(changed[0])
                model = type(result.model).from_params(doc)
                assert log_likelihood(model, pattern) <= result.log_likelihood + 1e-9, (name, factor)


class TestFit:
    def test_poisson(self):
        p = pat(np.linspace(0.25, 49.75, 100), 50.0)
        r = fit_mle("hom_poisson", p, FitConfig([0.7]))
        assert r.params["lambda"] == pytest.approx(2.0, rel=1e-6)
        assert r.params["lambda"] == pytest.approx(poisson_mle(p), rel=1e-6)

    def test_hawkes_recovery(self):
        p = simulate(HAWKES, SimConfig(2000.0, "thinning", seed=3))
        r = fit_mle("hawkes_exp", p, FitConfig([1.0, 0.5, 2.0]))
        assert abs(r.params["mu"] - 0.5) <= 0.1 and abs(r.params["alpha"] - 0.9) <= 0.1
        _perturbation_check("hawkes_exp", r, p)

    def test_boundary_start(self):
        p = pat([0.5, 1.0], 2.0)
        with pytest.raises(NonFiniteObjectiveAtStart):
            fit_mle("hawkes_exp", p, FitConfig([0.5, 0.0, 1.0]))
        with pytest.raises(NonFiniteObjectiveAtStart):
            fit_mle("hawkes_exp", p, FitConfig([0.0, 1.0]))

    def test_bad_configs(self):
        p = pat([0.5], 1.0)
        with pytest.raises(ModelSpecError):
            fit_mle("hawkes_exp", p, FitConfig([0.5, 0.5]))
        with pytest.raises(ModelSpecError):
            fit_mle("nope", p, FitConfig([1.0]))
        with pytest.raises(ModelSpecError):
            fit_mle("piecewise_poisson", p, FitConfig([1.0, 1.0]))
        with pytest.raises(ValueError):
            FitConfig([1.0], param_tolerance=0.0)

    def test_max_iterations(self):
        p = simulate(HAWKES, SimConfig(200.0, seed=4))
        r = fit_mle("hawkes_exp", p, FitConfig([1.0, 0.5, 2.0], max_iterations=5))
        assert not r.converged and r.termination_reason == "max_iterations"
        start = log_likelihood(HawkesExp(1.0, 0.5, 2.0), p)
        assert r.log_likelihood >= start

    @pytest.mark.parametrize("family,truth,init,fixed,T", [
        ("renewal_gamma", RenewalGamma(2.0, 4.0), [1.0, 1.0], {}, 200.0),
        ("self_correcting", SelfCorrecting(1.0, 0.2), [0.5, 0.5], {}, 60.0),
        ("etas_exp", EtasExp(0.5, 0.2, 1.0, 1.0, 2.0), [0.3, 0.3, 0.5, 2.0, 1.0], {}, 1000.0),
        ("piecewise_poisson", PiecewisePoisson([10.0, 30.0], [1.0, 3.0, 0.5]), [1.0, 1.0, 1.0],
         {"breakpoints": [10.0, 30.0]}, 60.0),
        ("stop_after_n", StopAfterN(2.0, 40), [1.0], {"n_max": 40}, 50.0),
    ])
    def test_families_local_optimum(self, family, truth, init, fixed, T):
        p = simulate(truth, SimConfig(T, seed=21))
        r = fit_mle(family, p, FitConfig(init, fixed=fixed))
        assert r.log_likelihood >= log_likelihood(type(truth).from_params({**truth.params, **dict(
            zip(free_parameter_names(family, fixed), init))}) if family != "piecewise_poisson"
            else PiecewisePoisson([10.0, 30.0], init), p)
        _perturbation_check(family, r, p, fixed)

    def test_piecewise_rates_closed_form(self):
        p = simulate(PiecewisePoisson([10.0, 30.0], [1.0, 3.0, 0.5]), SimConfig(60.0, seed=5))
        r = fit_mle("piecewise_poisson", p, FitConfig([1.0, 1.0, 1.0], fixed={"breakpoints": [10.0, 30.0]}))
        counts = np.histogram(p.times, [0, 10, 30, 60])[0]
        np.testing.assert_allclose(r.params["rates"], counts / np.array([10, 20, 30]), rtol=1e-6)
