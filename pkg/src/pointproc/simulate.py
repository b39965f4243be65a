"""Simulation by compensator inversion and by Ogata's modified thinning."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import EventCapExceeded, InvalidEnvelope, NoConvergence, NonFiniteResult, PointProcessError, ReplicateError
from .models import DEFAULT_LOOKAHEAD, ModelSpec, Tracker
from .pattern import ObservationWindow, PointPattern, as_history
from .rng import RngStream, derive_seed

ALGORITHMS = ("inverse", "thinning")
MAX_BRACKET = 2.0 ** 60
MAX_REFINE = 300
_ENVELOPE_SLACK = 1e-9


@dataclass(frozen=True)
class SimConfig:
    t_end: float
    algorithm: str = "inverse"
    seed: int = 0
    replicates: int = 1
    inversion_tolerance: float = 1e-9
    max_events: int = 10_000_000
    lookahead: float = DEFAULT_LOOKAHEAD

    def __post_init__(self):
        ObservationWindow(self.t_end)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not self.inversion_tolerance > 0:
            raise ValueError("inversion_tolerance must be > 0")
        if not self.lookahead > 0:
            raise ValueError("lookahead must be > 0")
        if self.max_events < 0:
            raise ValueError("max_events must be >= 0")

    @property
    def window(self) -> ObservationWindow:
        return ObservationWindow(self.t_end)


def _overflow_safe(fn, t: float) -> float:
    # an overflowing compensator or intensity lies beyond any finite target
    try:
        return fn(t)
    except NonFiniteResult:
        return math.inf


def _invert(tr: Tracker, target: float, lower: float, tol: float, closed_form: bool = True) -> float:
    """Smallest t >= lower with Lambda*(t) >= target; ``inf`` if never reached."""
    base = tr.compensator(lower)
    if target <= base:
        return lower
    if closed_form:
        t = tr.inverse(target)
        if t is not None:
            return max(t, lower)
    if tr.zero_forever(lower):
        return math.inf

    comp = lambda t: _overflow_safe(tr.compensator, t)
    lam = _overflow_safe(tr.intensity, lower)
    step = (target - base) / lam if 0.0 < lam < math.inf else 1.0
    lo, f_lo = lower, base - target
    while True:
        hi = lower + step
        f_hi = comp(hi) - target
        if f_hi >= 0.0:
            break
        if tr.zero_forever(hi):
            return math.inf
        if tr.intensity(hi) == 0.0 and f_hi - f_lo < 1e-15 * target:
            return math.inf
        if step > MAX_BRACKET:
            raise NoConvergence(f"compensator did not reach {target!r} within {MAX_BRACKET:g} time units")
        lo, f_lo = hi, f_hi
        step *= 2.0

    # safeguarded Newton on the bracket [lo, hi]; the intensity is the derivative
    ftol = 1e-12 * (1.0 + abs(target))
    x, fx = hi, f_hi
    dx = dx_old = hi - lo
    for _ in range(MAX_REFINE):
        lam = _overflow_safe(tr.intensity, x)
        if abs(fx) <= ftol and (hi - lo <= tol or abs(fx) <= tol * lam):
            return x
        use_newton = 0.0 < lam < math.inf
        if use_newton:
            xn = x - fx / lam
            use_newton = lo < xn < hi and abs(2.0 * fx) <= abs(dx_old * lam)
        dx_old = dx
        if use_newton:
            dx = abs(xn - x)
        else:
            # bisect on the offset from `lower`, geometrically when the
            # bracket spans orders of magnitude (steep hazards near a renewal)
            d_lo, d_hi = lo - lower, hi - lower
            if d_lo == 0.0 or d_hi > 8.0 * d_lo:
                xn = lower + math.sqrt(max(d_lo, d_hi * 2.0 ** -64)) * math.sqrt(d_hi)
            else:
                xn = lo + 0.5 * (hi - lo)
            dx = abs(xn - x)
        if not lo < xn < hi:
            return hi
        x = xn
        fx = comp(x) - target
        if fx >= 0.0:
            hi = x
        else:
            lo = x
    raise NoConvergence(f"inversion of the compensator at {target!r} did not converge")


def invert_compensator(model: ModelSpec, history, target_s: float, t_lower: float,
                       tolerance: float = 1e-9, closed_form: bool = True) -> float:
    """Infimum of {t >= t_lower : Lambda*(t) >= target_s}.

    ``history`` holds every event up to and including ``t_lower``. Returns
    ``math.inf`` when the process terminates before the compensator reaches
    ``target_s``. ``closed_form=False`` forces the numerical root finder.
    """
    h = as_history(history).before(math.nextafter(float(t_lower), math.inf))
    return _invert(model.tracker(h), float(target_s), float(t_lower), tolerance, closed_form)


def _finish(model, times, marks, T):
    return PointPattern(times, T, marks if model.marked else None)


def simulate_inverse(model: ModelSpec, config: SimConfig, rng: Optional[RngStream] = None) -> PointPattern:
    """Transform unit-rate exponential increments through the inverse compensator.

    Each target is the compensator at the last accepted event plus a fresh
    Exp(1) draw. A time that collapses onto its predecessor in floating point
    is moved to the next representable number.
    """
    rng = rng if rng is not None else RngStream(derive_seed(config.seed, 0))
    T = config.t_end
    tr = model.tracker()
    times: list[float] = []
    marks: list[float] = []
    anchor = 0.0
    while True:
        target = tr.compensator(anchor) + rng.exponential(1.0)
        t = _invert(tr, target, anchor, config.inversion_tolerance)
        if times and t <= times[-1]:
            t = math.nextafter(times[-1], math.inf)
        if t >= T:
            break
        if len(times) >= config.max_events:
            raise EventCapExceeded(f"more than {config.max_events} events before t={t:.6g}")
        mark = model.sample_mark(rng, t) if model.marked else None
        tr.push(t, mark)
        times.append(t)
        if model.marked:
            marks.append(mark)
        anchor = t
    return _finish(model, times, marks, T)


def simulate_thinning(model: ModelSpec, config: SimConfig, rng: Optional[RngStream] = None) -> PointPattern:
    """Ogata's modified thinning with model-supplied envelopes.

    A point proposed at t + s is accepted when U <= lambda*(t + s) / m.
    """
    rng = rng if rng is not None else RngStream(derive_seed(config.seed, 0))
    T = config.t_end
    tr = model.tracker()
    times: list[float] = []
    marks: list[float] = []
    t = 0.0
    while t < T:
        m, l = tr.envelope(t, config.lookahead)
        if m == 0.0:
            if math.isinf(l) or tr.zero_forever(t):
                break
            t += l
            continue
        if not math.isfinite(m):
            raise InvalidEnvelope(f"unbounded intensity at t={t!r}; thinning needs a finite bound")
        s = rng.exponential(m)
        u = rng.uniform()
        if s > l:
            t += l
            continue
        cand = t + s
        if cand <= t:
            cand = math.nextafter(t, math.inf)
        if cand >= T:
            t = cand
            continue
        lam = tr.intensity(cand)
        if lam > m * (1.0 + _ENVELOPE_SLACK):
            raise InvalidEnvelope(f"intensity {lam!r} exceeds bound {m!r} at t={cand!r}")
        if u <= lam / m:
            if len(times) >= config.max_events:
                raise EventCapExceeded(f"more than {config.max_events} events before t={cand:.6g}")
            mark = model.sample_mark(rng, cand) if model.marked else None
            tr.push(cand, mark)
            times.append(cand)
            if model.marked:
                marks.append(mark)
        t = cand
    return _finish(model, times, marks, T)


def simulate(model: ModelSpec, config: SimConfig, rng: Optional[RngStream] = None) -> PointPattern:
    if config.algorithm == "inverse":
        return simulate_inverse(model, config, rng)
    return simulate_thinning(model, config, rng)


def _replicate(args):
    model, config, index = args
    try:
        return simulate(model, config, RngStream(derive_seed(config.seed, index)))
    except PointProcessError as exc:
        raise ReplicateError(index, exc) from exc


def simulate_batch(model: ModelSpec, config: SimConfig, workers: int = 1) -> list[PointPattern]:
    """``config.replicates`` independent realisations, in replicate order.

    Replicate k draws from the stream ``derive_seed(config.seed, k)``, so the
    output does not depend on ``workers``.
    """
    jobs = [(model, config, k) for k in range(config.replicates)]
    if workers <= 1 or config.replicates == 1:
        return [_replicate(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_replicate, jobs))
