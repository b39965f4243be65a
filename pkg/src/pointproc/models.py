"""Built-in model catalogue.

Every model is an immutable dataclass holding its parameters. Models
provide two evaluation paths:

* a vectorised pass over a whole pattern (``log_intensities`` and
  ``compensators``) used by the likelihood and residual code, and
* an incremental :class:`Tracker` holding the sufficient statistics of a
  growing history, used by the simulators and by the pointwise queries.

Gamma renewal intervals use the (shape, rate) parameterisation, so the
mean interevent time is shape / rate and the coefficient of variation is
1 / sqrt(shape).
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import MISSING, dataclass, fields
from typing import ClassVar, Optional

import numpy as np

from .errors import ModelSpecError, NonFiniteResult, UnmarkedModel
from .pattern import EMPTY_HISTORY, HistoryView
from .special import gamma_hazard_scalar, gamma_log_pdf, log_gamma_sf, log_gamma_sf_scalar

MAX_LOG = 700.0
DEFAULT_LOOKAHEAD = 1.0


def _check_exponent(x: float) -> float:
    if x > MAX_LOG:
        raise NonFiniteResult(f"log-intensity {x:.6g} exceeds {MAX_LOG}")
    return x


def decayed_sums(times: np.ndarray, weights: Optional[np.ndarray], rate: float) -> np.ndarray:
    """A_i = sum_{j<i} w_j exp(-rate (t_i - t_j)) for sorted ``times``.

    Works in blocks short enough that the rebased exponentials stay finite.
    """
    n = len(times)
    out = np.zeros(n)
    if n == 0:
        return out
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    span = 500.0 / rate
    carry = 0.0
    prev_t = None
    start = 0
    while start < n:
        c = times[start]
        end = int(np.searchsorted(times, c + span, side="right"))
        end = max(end, start + 1)
        t = times[start:end]
        if prev_t is not None:
            carry *= math.exp(-rate * (c - prev_t))
        grow = w[start:end] * np.exp(rate * (t - c))
        csum = np.cumsum(grow)
        excl = np.concatenate(([0.0], csum[:-1]))
        out[start:end] = np.exp(-rate * (t - c)) * (carry + excl)
        # state at the block's last event, including that event
        carry = (carry + csum[-1]) * math.exp(-rate * (t[-1] - c))
        prev_t = t[-1]
        start = end
    return out


class Tracker:
    """Sufficient statistics of a history; queries are for t >= last event.

    At ``t`` equal to the last event time the right limit is returned.
    """

    def __init__(self):
        self.n = 0
        self.last = 0.0

    def push(self, t: float, mark: Optional[float] = None) -> None:
        raise NotImplementedError

    def intensity(self, t: float) -> float:
        raise NotImplementedError

    def compensator(self, t: float) -> float:
        raise NotImplementedError

    def envelope(self, t: float, lookahead: float = DEFAULT_LOOKAHEAD) -> tuple[float, float]:
        """(m, l) with m >= sup of the intensity on [t, t + l] absent new events."""
        return self.intensity(t), math.inf

    def zero_forever(self, t: float) -> bool:
        """True when the intensity is exactly 0 on [t, inf) absent new events."""
        return False

    def singular_exponent(self) -> Optional[float]:
        """p in (-1, 0) when the intensity behaves like (t - last)**p just after the last event."""
        return None

    def regular_part(self, u: float) -> float:
        """intensity(last + u) / u**p for the exponent p above, with its limit at u = 0."""
        return self.intensity(self.last + u)

    def inverse(self, target: float) -> Optional[float]:
        """Closed-form inverse of the compensator past the last event, if any.

        Returns None when no closed form is available, ``math.inf`` when the
        target is never reached.
        """
        return None


@dataclass(frozen=True)
class ModelSpec:
    """Base class of the model variants."""

    family: ClassVar[str] = ""
    marked: ClassVar[bool] = False
    param_names: ClassVar[tuple[str, ...]] = ()

    @property
    def params(self) -> dict:
        out = {}
        for name, f in zip(self.param_names, fields(self)):
            v = getattr(self, f.name)
            out[name] = list(v) if isinstance(v, tuple) else v
        return out

    @classmethod
    def from_params(cls, params: dict) -> "ModelSpec":
        unknown = set(params) - set(cls.param_names)
        if unknown:
            raise ModelSpecError(f"unknown parameter(s) for {cls.family}: {sorted(unknown)}")
        kwargs = {}
        missing = []
        for name, f in zip(cls.param_names, fields(cls)):
            if name in params:
                kwargs[f.name] = params[name]
            elif f.default is MISSING:
                missing.append(name)
        if missing:
            raise ModelSpecError(f"missing parameter(s) for {cls.family}: {missing}")
        return cls(**kwargs)

    def tracker(self, history: HistoryView = EMPTY_HISTORY) -> Tracker:
        tr = self._new_tracker()
        marks = history.marks
        if self.marked and marks is None and len(history):
            raise UnmarkedModel(f"{self.family} needs marked history")
        for i, t in enumerate(history.times):
            tr.push(float(t), None if marks is None else float(marks[i]))
        return tr

    def _new_tracker(self) -> Tracker:
        raise NotImplementedError

    def log_intensities(self, times: np.ndarray, marks: Optional[np.ndarray] = None) -> np.ndarray:
        """log lambda*(t_i) given the events strictly before each t_i."""
        raise NotImplementedError

    def compensators(self, times: np.ndarray, marks: Optional[np.ndarray], t_end: float) -> tuple[np.ndarray, float]:
        """(Lambda*(t_i) for every event, Lambda*(t_end))."""
        raise NotImplementedError

    def discontinuities(self, a: float, b: float) -> list:
        """Times in (a, b) where the intensity jumps for reasons other than events."""
        return []

    def mark_log_density(self, kappa, t=None, history=None):
        raise UnmarkedModel(f"{self.family} has no marks")

    def sample_mark(self, rng, t=None, history=None) -> float:
        raise UnmarkedModel(f"{self.family} has no marks")


def _positive(name: str, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ModelSpecError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(v) or v <= 0:
        raise ModelSpecError(f"{name} must be finite and > 0, got {value!r}")
    return v


# --------------------------------------------------------------------------
# Homogeneous Poisson


class _HomPoissonTracker(Tracker):
    def __init__(self, lam):
        super().__init__()
        self.lam = lam

    def push(self, t, mark=None):
        self.n += 1
        self.last = t

    def intensity(self, t):
        return self.lam

    def compensator(self, t):
        return self.lam * t

    def inverse(self, target):
        return target / self.lam


@dataclass(frozen=True)
class HomPoisson(ModelSpec):
    lam: float
    family: ClassVar[str] = "hom_poisson"
    param_names: ClassVar[tuple[str, ...]] = ("lambda",)

    def __post_init__(self):
        object.__setattr__(self, "lam", _positive("lambda", self.lam))

    def _new_tracker(self):
        return _HomPoissonTracker(self.lam)

    def log_intensities(self, times, marks=None):
        return np.full(len(times), math.log(self.lam))

    def compensators(self, times, marks, t_end):
        return self.lam * np.asarray(times, dtype=float), self.lam * t_end


# --------------------------------------------------------------------------
# Piecewise-constant Poisson


class _PiecewiseTracker(Tracker):
    def __init__(self, model: "PiecewisePoisson"):
        super().__init__()
        self.edges = model._edges
        self.rates = model.rates
        self.cum = model._cum
        self.tail_max = model._tail_max

    def _segment(self, t):
        return max(bisect_right(self.edges, t) - 1, 0)

    def push(self, t, mark=None):
        self.n += 1
        self.last = t

    def intensity(self, t):
        return self.rates[self._segment(t)]

    def compensator(self, t):
        j = self._segment(t)
        return self.cum[j] + self.rates[j] * (t - self.edges[j])

    def envelope(self, t, lookahead=DEFAULT_LOOKAHEAD):
        j = self._segment(t)
        r = self.rates[j]
        if self.tail_max[j] <= r:
            return r, math.inf
        # the closed interval [t, t + l] reaches into the next segment
        return max(r, self.rates[j + 1]), self.edges[j + 1] - t

    def zero_forever(self, t):
        return self.tail_max[self._segment(t)] == 0.0

    def inverse(self, target):
        last = len(self.rates) - 1
        for j, r in enumerate(self.rates):
            if r > 0.0 and (j == last or self.cum[j + 1] >= target):
                return self.edges[j] + (target - self.cum[j]) / r
        return math.inf


@dataclass(frozen=True)
class PiecewisePoisson(ModelSpec):
    """Poisson process with rate ``rates[j]`` on [edge_j, edge_{j+1}).

    ``breakpoints`` are the interior cut points (strictly increasing,
    > 0), so ``len(rates) == len(breakpoints) + 1`` and the last rate
    applies on [breakpoints[-1], inf). Segments are closed on the left.
    """

    breakpoints: tuple
    rates: tuple
    family: ClassVar[str] = "piecewise_poisson"
    param_names: ClassVar[tuple[str, ...]] = ("breakpoints", "rates")

    def __post_init__(self):
        try:
            bps = tuple(float(b) for b in self.breakpoints)
            rates = tuple(float(r) for r in self.rates)
        except (TypeError, ValueError):
            raise ModelSpecError("breakpoints and rates must be lists of numbers") from None
        if len(rates) != len(bps) + 1:
            raise ModelSpecError(f"need len(rates) == len(breakpoints) + 1, got {len(rates)} and {len(bps)}")
        if any(not math.isfinite(b) or b <= 0 for b in bps) or any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ModelSpecError("breakpoints must be finite, positive and strictly increasing")
        if any(not math.isfinite(r) or r < 0 for r in rates):
            raise ModelSpecError("rates must be finite and >= 0")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "rates", rates)
        edges = (0.0,) + bps
        cum = [0.0]
        for j, b in enumerate(bps):
            cum.append(cum[-1] + rates[j] * (b - edges[j]))
        tail = list(rates)
        for j in range(len(tail) - 2, -1, -1):
            tail[j] = max(tail[j], tail[j + 1])
        object.__setattr__(self, "_edges", edges)
        object.__setattr__(self, "_cum", tuple(cum))
        object.__setattr__(self, "_tail_max", tuple(tail))

    def _new_tracker(self):
        return _PiecewiseTracker(self)

    def discontinuities(self, a, b):
        return [x for x in self.breakpoints if a < x < b]

    def _seg(self, t):
        return np.maximum(np.searchsorted(self._edges, t, side="right") - 1, 0)

    def log_intensities(self, times, marks=None):
        rates = np.asarray(self.rates)[self._seg(np.asarray(times, dtype=float))]
        with np.errstate(divide="ignore"):
            return np.log(rates)

    def _cumulative(self, t):
        j = self._seg(t)
        return np.asarray(self._cum)[j] + np.asarray(self.rates)[j] * (t - np.asarray(self._edges)[j])

    def compensators(self, times, marks, t_end):
        times = np.asarray(times, dtype=float)
        return self._cumulative(times), float(self._cumulative(np.array([t_end]))[0])


# --------------------------------------------------------------------------
# Gamma renewal


class _RenewalTracker(Tracker):
    def __init__(self, shape, rate):
        super().__init__()
        self.shape = shape
        self.rate = rate
        self.base = 0.0

    def push(self, t, mark=None):
        self.base = self.compensator(t)
        self.n += 1
        self.last = t

    def intensity(self, t):
        return gamma_hazard_scalar(t - self.last, self.shape, self.rate)

    def compensator(self, t):
        return self.base - log_gamma_sf_scalar(self.shape, self.rate * (t - self.last))

    def envelope(self, t, lookahead=DEFAULT_LOOKAHEAD):
        u = t - self.last
        if self.shape <= 1.0:
            # non-increasing hazard; infinite right at a renewal when shape < 1
            return gamma_hazard_scalar(u, self.shape, self.rate), math.inf
        return gamma_hazard_scalar(u + lookahead, self.shape, self.rate), lookahead

    def singular_exponent(self):
        return self.shape - 1.0 if self.shape < 1.0 else None

    def regular_part(self, u):
        log_scale = self.shape * math.log(self.rate) - math.lgamma(self.shape)
        if u <= 0.0:
            return math.exp(log_scale)
        return math.exp(log_scale - self.rate * u - log_gamma_sf_scalar(self.shape, self.rate * u))


@dataclass(frozen=True)
class RenewalGamma(ModelSpec):
    """Renewal process with Gamma(shape, rate) interevent times.

    The process renews at time 0, so the first gap is measured from 0.
    """

    shape: float
    rate: float
    family: ClassVar[str] = "renewal_gamma"
    param_names: ClassVar[tuple[str, ...]] = ("shape", "rate")

    def __post_init__(self):
        object.__setattr__(self, "shape", _positive("shape", self.shape))
        object.__setattr__(self, "rate", _positive("rate", self.rate))

    def _new_tracker(self):
        return _RenewalTracker(self.shape, self.rate)

    def _gaps(self, times):
        times = np.asarray(times, dtype=float)
        return np.diff(np.concatenate(([0.0], times)))

    def log_intensities(self, times, marks=None):
        gaps = self._gaps(times)
        if self.shape == 1.0:
            return np.full(len(gaps), math.log(self.rate))
        with np.errstate(invalid="ignore"):
            out = gamma_log_pdf(gaps, self.shape, self.rate) - log_gamma_sf(self.shape, self.rate * gaps)
        # zero gap (event at t=0): hazard limit at u = 0
        out = np.where(gaps > 0, out, np.inf if self.shape < 1.0 else -np.inf)
        return np.asarray(out, dtype=float)

    def compensators(self, times, marks, t_end):
        times = np.asarray(times, dtype=float)
        gaps = self._gaps(times)
        lam = np.cumsum(-log_gamma_sf(self.shape, self.rate * gaps))
        last_t = times[-1] if len(times) else 0.0
        last_lam = lam[-1] if len(lam) else 0.0
        return lam, float(last_lam - log_gamma_sf_scalar(self.shape, self.rate * (t_end - last_t)))


# --------------------------------------------------------------------------
# Hawkes with exponential kernel


class _HawkesTracker(Tracker):
    def __init__(self, mu, alpha, gamma_rate):
        super().__init__()
        self.mu, self.alpha, self.g = mu, alpha, gamma_rate
        self.excite = 0.0

    def push(self, t, mark=None):
        self.excite = self.excite * math.exp(-self.g * (t - self.last)) + self.alpha * self.g
        self.n += 1
        self.last = t

    def intensity(self, t):
        return self.mu + self.excite * math.exp(-self.g * (t - self.last))

    def compensator(self, t):
        decayed = self.excite * math.exp(-self.g * (t - self.last))
        return self.mu * t + self.alpha * self.n - decayed / self.g


@dataclass(frozen=True)
class HawkesExp(ModelSpec):
    """lambda*(t) = mu + alpha * sum_{t_i < t} g exp(-g (t - t_i)), g = gamma_rate.

    The kernel is a probability density, so alpha is the branching ratio
    and each event raises the intensity by alpha * gamma_rate.
    """

    mu: float
    alpha: float
    gamma_rate: float = 1.0
    family: ClassVar[str] = "hawkes_exp"
    param_names: ClassVar[tuple[str, ...]] = ("mu", "alpha", "gamma_rate")

    def __post_init__(self):
        for name in ("mu", "alpha", "gamma_rate"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    def _new_tracker(self):
        return _HawkesTracker(self.mu, self.alpha, self.gamma_rate)

    def log_intensities(self, times, marks=None):
        times = np.asarray(times, dtype=float)
        a = decayed_sums(times, None, self.gamma_rate)
        return np.log(self.mu + self.alpha * self.gamma_rate * a)

    def compensators(self, times, marks, t_end):
        times = np.asarray(times, dtype=float)
        a = decayed_sums(times, None, self.gamma_rate)
        at_events = self.mu * times + self.alpha * (np.arange(len(times)) - a)
        tail = -np.expm1(-self.gamma_rate * (t_end - times))
        return at_events, float(self.mu * t_end + self.alpha * tail.sum())


# --------------------------------------------------------------------------
# Self-correcting


class _SelfCorrectingTracker(Tracker):
    def __init__(self, mu, alpha):
        super().__init__()
        self.mu, self.alpha = mu, alpha
        self.base = 0.0

    def push(self, t, mark=None):
        self.base = self.compensator(t)
        self.n += 1
        self.last = t

    def _log_intensity(self, t):
        return _check_exponent(self.mu * t - self.alpha * self.n)

    def intensity(self, t):
        return math.exp(self._log_intensity(t))

    def compensator(self, t):
        seg = math.exp(self._log_intensity(t)) * -math.expm1(-self.mu * (t - self.last)) / self.mu
        return self.base + seg

    def envelope(self, t, lookahead=DEFAULT_LOOKAHEAD):
        return math.exp(self._log_intensity(t + lookahead)), lookahead

    def inverse(self, target):
        # base + exp(mu*last - alpha*n) * expm1(mu*(t - last)) / mu = target
        rel = self.mu * (target - self.base) * math.exp(-(self.mu * self.last - self.alpha * self.n))
        return self.last + math.log1p(rel) / self.mu


@dataclass(frozen=True)
class SelfCorrecting(ModelSpec):
    """lambda*(t) = exp(mu t - alpha N(t-)). Evaluated in log space."""

    mu: float
    alpha: float
    family: ClassVar[str] = "self_correcting"
    param_names: ClassVar[tuple[str, ...]] = ("mu", "alpha")

    def __post_init__(self):
        object.__setattr__(self, "mu", _positive("mu", self.mu))
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))

    def _new_tracker(self):
        return _SelfCorrectingTracker(self.mu, self.alpha)

    def log_intensities(self, times, marks=None):
        times = np.asarray(times, dtype=float)
        out = self.mu * times - self.alpha * np.arange(len(times))
        if len(out) and out.max() > MAX_LOG:
            raise NonFiniteResult(f"log-intensity {out.max():.6g} exceeds {MAX_LOG}")
        return out

    def compensators(self, times, marks, t_end):
        times = np.asarray(times, dtype=float)
        n = len(times)
        ends = np.append(times, t_end)
        starts = np.concatenate(([0.0], times))
        counts = np.arange(n + 1)
        log_top = self.mu * ends - self.alpha * counts
        if log_top.max() > MAX_LOG:
            raise NonFiniteResult(f"log-intensity {log_top.max():.6g} exceeds {MAX_LOG}")
        pieces = np.exp(log_top) * -np.expm1(-self.mu * (ends - starts)) / self.mu
        cum = np.cumsum(pieces)
        return cum[:n], float(cum[-1])


# --------------------------------------------------------------------------
# ETAS with exponential time kernel and exponential magnitudes


class _EtasTracker(Tracker):
    def __init__(self, m: "EtasExp"):
        super().__init__()
        self.mu, self.alpha, self.beta, self.gamma = m.mu, m.alpha, m.beta, m.gamma
        self.excite = 0.0
        self.weight = 0.0

    def push(self, t, mark=None):
        if mark is None:
            raise UnmarkedModel("etas_exp events need marks")
        w = math.exp(_check_exponent(self.beta * mark))
        self.excite = self.excite * math.exp(-self.gamma * (t - self.last)) + w
        self.weight += w
        self.n += 1
        self.last = t

    def intensity(self, t):
        return self.mu + self.alpha * self.excite * math.exp(-self.gamma * (t - self.last))

    def compensator(self, t):
        decayed = self.excite * math.exp(-self.gamma * (t - self.last))
        return self.mu * t + self.alpha / self.gamma * (self.weight - decayed)


@dataclass(frozen=True)
class EtasExp(ModelSpec):
    """Marked Hawkes model for earthquake catalogues.

    Ground intensity mu + alpha * sum exp(beta k_i) exp(-gamma (t - t_i));
    magnitudes are Exp(delta) independently of the past.
    """

    mu: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    family: ClassVar[str] = "etas_exp"
    marked: ClassVar[bool] = True
    param_names: ClassVar[tuple[str, ...]] = ("mu", "alpha", "beta", "gamma", "delta")

    def __post_init__(self):
        for name in self.param_names:
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    def _new_tracker(self):
        return _EtasTracker(self)

    def _weights(self, marks):
        if marks is None:
            raise UnmarkedModel("etas_exp needs marked events")
        expo = self.beta * np.asarray(marks, dtype=float)
        if len(expo) and expo.max() > MAX_LOG:
            raise NonFiniteResult("mark productivity overflows")
        return np.exp(expo)

    def log_intensities(self, times, marks=None):
        times = np.asarray(times, dtype=float)
        a = decayed_sums(times, self._weights(marks), self.gamma)
        return np.log(self.mu + self.alpha * a)

    def compensators(self, times, marks, t_end):
        times = np.asarray(times, dtype=float)
        w = self._weights(marks)
        a = decayed_sums(times, w, self.gamma)
        before = np.concatenate(([0.0], np.cumsum(w)[:-1])) if len(w) else np.zeros(0)
        at_events = self.mu * times + self.alpha / self.gamma * (before - a)
        tail = w * -np.expm1(-self.gamma * (t_end - times))
        return at_events, float(self.mu * t_end + self.alpha / self.gamma * tail.sum())

    def mark_log_density(self, kappa, t=None, history=None):
        kappa = np.asarray(kappa, dtype=float)
        out = math.log(self.delta) - self.delta * kappa
        out = np.where(kappa >= 0, out, -np.inf)
        return out if out.ndim else float(out)

    def sample_mark(self, rng, t=None, history=None) -> float:
        return rng.exponential(self.delta)


# --------------------------------------------------------------------------
# Poisson stopped after n events


class _StopTracker(Tracker):
    def __init__(self, lam, n_max):
        super().__init__()
        self.lam, self.n_max = lam, n_max
        self.stop_time = 0.0 if n_max == 0 else None

    def push(self, t, mark=None):
        self.n += 1
        self.last = t
        if self.n == self.n_max:
            self.stop_time = t

    def _alive(self):
        return self.n < self.n_max

    def intensity(self, t):
        return self.lam if self._alive() else 0.0

    def compensator(self, t):
        if self._alive():
            return self.lam * t
        return self.lam * self.stop_time

    def envelope(self, t, lookahead=DEFAULT_LOOKAHEAD):
        return self.intensity(t), math.inf

    def zero_forever(self, t):
        return not self._alive()

    def inverse(self, target):
        return target / self.lam if self._alive() else math.inf


@dataclass(frozen=True)
class StopAfterN(ModelSpec):
    """Rate-lambda Poisson process that stops after ``n_max`` events."""

    lam: float
    n_max: int
    family: ClassVar[str] = "stop_after_n"
    param_names: ClassVar[tuple[str, ...]] = ("lambda", "n_max")

    def __post_init__(self):
        object.__setattr__(self, "lam", _positive("lambda", self.lam))
        n = self.n_max
        if isinstance(n, bool) or not float(n).is_integer() or n < 0:
            raise ModelSpecError(f"n_max must be a non-negative integer, got {n!r}")
        object.__setattr__(self, "n_max", int(n))

    def _new_tracker(self):
        return _StopTracker(self.lam, self.n_max)

    def log_intensities(self, times, marks=None):
        idx = np.arange(len(times))
        return np.where(idx < self.n_max, math.log(self.lam), -np.inf)

    def compensators(self, times, marks, t_end):
        times = np.asarray(times, dtype=float)
        if self.n_max == 0:
            stop = 0.0
        elif len(times) >= self.n_max:
            stop = times[self.n_max - 1]
        else:
            stop = math.inf
        return self.lam * np.minimum(times, stop), float(self.lam * min(t_end, stop))


FAMILIES: dict[str, type[ModelSpec]] = {
    cls.family: cls
    for cls in (HomPoisson, PiecewisePoisson, RenewalGamma, HawkesExp, SelfCorrecting, EtasExp, StopAfterN)
}


def model_from_dict(doc: dict) -> ModelSpec:
    """Build a model from ``{"model": <family>, "params": {...}}``."""
    if not isinstance(doc, dict):
        raise ModelSpecError("model document must be an object")
    unknown = set(doc) - {"model", "params"}
    if unknown:
        raise ModelSpecError(f"unknown key(s) in model document: {sorted(unknown)}")
    if "model" not in doc or "params" not in doc:
        raise ModelSpecError("model document needs 'model' and 'params'")
    family = doc["model"]
    if family not in FAMILIES:
        raise ModelSpecError(f"unknown model family {family!r}; expected one of {sorted(FAMILIES)}")
    if not isinstance(doc["params"], dict):
        raise ModelSpecError("'params' must be an object")
    return FAMILIES[family].from_params(doc["params"])


def model_to_dict(model: ModelSpec) -> dict:
    return {"model": model.family, "params": model.params}
