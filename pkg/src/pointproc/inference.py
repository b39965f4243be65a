"""Exact log-likelihoods and maximum-likelihood fitting."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np
from scipy import integrate, optimize

from .errors import (
    MarkMismatch,
    ModelSpecError,
    NonFiniteObjectiveAtStart,
    NonFiniteResult,
    NumericalError,
    QuadratureFailure,
)
from .models import FAMILIES, ModelSpec
from .pattern import PointPattern

TERMINATION_REASONS = ("tolerance_met", "max_iterations", "numerical_failure")


def _check_marks(model: ModelSpec, pattern: PointPattern) -> None:
    if model.marked != pattern.marked:
        kind = "marked" if model.marked else "unmarked"
        raise MarkMismatch(f"{model.family} is {kind} but the pattern is {'marked' if pattern.marked else 'unmarked'}")


def _total(log_terms: np.ndarray, compensator_T: float) -> float:
    if np.isnan(log_terms).any() or np.isposinf(log_terms).any() or not math.isfinite(compensator_T):
        raise NonFiniteResult("log-likelihood is not finite")
    if np.isneginf(log_terms).any():
        return -math.inf
    return float(log_terms.sum() - compensator_T)


def log_likelihood(model: ModelSpec, pattern: PointPattern) -> float:
    """sum_i log lambda*(t_i) [+ sum_i log f*(k_i | t_i)] - Lambda*(T).

    Returns ``-inf`` when the intensity vanishes at an observed event.
    """
    _check_marks(model, pattern)
    times, marks = pattern.times, pattern.marks
    terms = model.log_intensities(times, marks)
    if model.marked:
        terms = terms + model.mark_log_density(marks)
    _, comp_T = model.compensators(times, marks, pattern.t_end)
    return _total(np.asarray(terms, dtype=float), comp_T)


def log_likelihood_numeric(model: ModelSpec, pattern: PointPattern, quad_tolerance: float = 1e-8) -> float:
    """Same value as :func:`log_likelihood`, with Lambda*(T) from quadrature.

    Walks the pattern event by event; each intensity term uses the history
    before the event, and the intensity is integrated adaptively between
    consecutive events and fixed breakpoints, where it is smooth.
    """
    _check_marks(model, pattern)
    tr = model.tracker()
    log_terms = []
    integral = 0.0
    edges = list(pattern.times) + [pattern.t_end]
    start = 0.0
    for i, stop in enumerate(edges):
        if stop > start:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                tol = dict(epsabs=quad_tolerance * 1e-3, epsrel=quad_tolerance * 1e-3, limit=500)
                power = tr.singular_exponent()
                try:
                    if power is None:
                        cuts = [start] + model.discontinuities(start, stop) + [stop]
                        piece = sum(integrate.quad(tr.intensity, a, b, **tol)[0] for a, b in zip(cuts, cuts[1:]))
                    else:
                        # u = v**q with q = 1 / (power + 1) removes the u**power singularity
                        q = 1.0 / (power + 1.0)
                        piece, _ = integrate.quad(lambda v: q * tr.regular_part(v ** q),
                                                  0.0, (stop - start) ** (power + 1.0), **tol)
                except integrate.IntegrationWarning as exc:
                    raise QuadratureFailure(f"on [{start!r}, {stop!r}]: {exc}") from None
            integral += piece
        if i == len(pattern.times):
            break
        mark = None if pattern.marks is None else float(pattern.marks[i])
        lam = tr.intensity(stop)
        log_terms.append(math.log(lam) if lam > 0 else -math.inf)
        if mark is not None:
            log_terms[-1] += model.mark_log_density(mark)
        tr.push(float(stop), mark)
        start = stop
    return _total(np.asarray(log_terms, dtype=float), integral)


def poisson_mle(pattern: PointPattern) -> float:
    """n / T. The empty pattern gives 0, the limit of the maximiser."""
    if pattern.marked:
        raise MarkMismatch("poisson_mle takes an unmarked pattern")
    return len(pattern) / pattern.t_end


@dataclass(frozen=True)
class FitConfig:
    """Nelder-Mead settings; tolerances act on log-parameters and -log L.

    ``fixed`` holds parameters that are not optimised, e.g. the breakpoints
    of ``piecewise_poisson`` or ``n_max`` of ``stop_after_n``.
    """

    initial_params: Union[Sequence[float], Mapping[str, float]]
    max_iterations: int = 2000
    param_tolerance: float = 1e-8
    objective_tolerance: float = 1e-10
    fixed: Mapping[str, object] = field(default_factory=dict)
    initial_step: float = 0.25

    def __post_init__(self):
        if not self.param_tolerance > 0 or not self.objective_tolerance > 0:
            raise ValueError("tolerances must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class FitResult:
    model: ModelSpec
    log_likelihood: float
    iterations: int
    converged: bool
    termination_reason: str
    evaluations: int = 0

    @property
    def params(self) -> dict:
        return self.model.params


# (name, size) of every optimised parameter; size None means a scalar
def _free_layout(cls: type[ModelSpec], fixed: Mapping) -> list[tuple[str, Optional[int]]]:
    unknown = set(fixed) - set(cls.param_names)
    if unknown:
        raise ModelSpecError(f"unknown fixed parameter(s) for {cls.family}: {sorted(unknown)}")
    if cls.family == "piecewise_poisson":
        if "breakpoints" not in fixed:
            raise ModelSpecError("piecewise_poisson fits need fixed breakpoints")
        return [] if "rates" in fixed else [("rates", len(fixed["breakpoints"]) + 1)]
    if cls.family == "stop_after_n" and "n_max" not in fixed:
        raise ModelSpecError("stop_after_n fits need a fixed n_max")
    return [(name, None) for name in cls.param_names if name not in fixed]


def free_parameter_names(family: str, fixed: Optional[Mapping] = None) -> list[str]:
    cls = _family_class(family)
    return [name for name, _ in _free_layout(cls, fixed or {})]


def _family_class(family) -> type[ModelSpec]:
    if isinstance(family, type) and issubclass(family, ModelSpec):
        return family
    if family not in FAMILIES:
        raise ModelSpecError(f"unknown model family {family!r}")
    return FAMILIES[family]


def _initial_vector(layout, initial) -> np.ndarray:
    if isinstance(initial, Mapping):
        flat = []
        for name, size in layout:
            if name not in initial:
                raise ModelSpecError(f"missing initial value for {name}")
            v = initial[name]
            flat.extend(v if size is not None else [v])
    else:
        flat = list(initial)
    try:
        x = np.array(flat, dtype=float)
    except (TypeError, ValueError):
        raise ModelSpecError("initial parameters must be numbers") from None
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise NonFiniteObjectiveAtStart(f"initial parameters {flat} are not all finite and > 0")
    expected = sum(1 if size is None else size for _, size in layout)
    if len(x) != expected:
        raise ModelSpecError(f"expected {expected} initial value(s), got {len(x)}")
    return x


def _build(cls, layout, fixed, x) -> ModelSpec:
    params = dict(fixed)
    i = 0
    for name, size in layout:
        if size is None:
            params[name] = float(x[i])
            i += 1
        else:
            params[name] = [float(v) for v in x[i:i + size]]
            i += size
    return cls.from_params(params)


def fit_mle(family, pattern: PointPattern, config: FitConfig) -> FitResult:
    """Maximise the log-likelihood with Nelder-Mead on log-parameters.

    Converged means the simplex diameter is below ``param_tolerance`` and the
    objective spread below ``objective_tolerance``. A run that stops short
    is restarted once from its best vertex with a fresh simplex.
    """
    cls = _family_class(family)
    fixed = dict(config.fixed)
    layout = _free_layout(cls, fixed)
    x0 = _initial_vector(layout, config.initial_params)
    evaluations = 0

    def objective(z):
        nonlocal evaluations
        evaluations += 1
        try:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                val = -log_likelihood(_build(cls, layout, fixed, np.exp(z)), pattern)
        except (NumericalError, ModelSpecError, OverflowError):
            return math.inf
        return val if not math.isnan(val) else math.inf

    z0 = np.log(x0)
    start_value = objective(z0)
    if not math.isfinite(start_value):
        raise NonFiniteObjectiveAtStart(f"log-likelihood at the initial parameters is {-start_value!r}")

    iterations = 0
    z_best, f_best = z0, start_value
    status = None
    if len(z0):
        for attempt in range(2):
            simplex = np.vstack([z_best] + [z_best + config.initial_step * e for e in np.eye(len(z0))])
            res = optimize.minimize(
                objective, z_best, method="Nelder-Mead",
                options={
                    "maxiter": config.max_iterations,
                    "maxfev": 50 * config.max_iterations,
                    "xatol": config.param_tolerance,
                    "fatol": config.objective_tolerance,
                    "initial_simplex": simplex,
                    "adaptive": len(z0) > 3,
                },
            )
            iterations += int(res.nit)
            if res.fun <= f_best:
                z_best, f_best = res.x, float(res.fun)
            status = res.status
            if res.success:
                break
    else:
        status = 0

    model = _build(cls, layout, fixed, np.exp(z_best))
    ll = log_likelihood(model, pattern)
    if not math.isfinite(ll):
        reason = "numerical_failure"
    elif status == 0:
        reason = "tolerance_met"
    else:
        reason = "max_iterations"
    return FitResult(model, ll, iterations, reason == "tolerance_met", reason, evaluations)
