"""Pointwise queries: intensity, compensator, thinning envelope and marks."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonFiniteResult, UnmarkedModel
from .models import DEFAULT_LOOKAHEAD, ModelSpec
from .pattern import as_history


@dataclass(frozen=True)
class ThinningEnvelope:
    bound_m: float
    horizon_l: float


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise NonFiniteResult(f"{what} is not finite ({value!r})")
    return value


def evaluate_intensity(model: ModelSpec, t: float, history=None) -> float:
    """lambda*(t) given the events strictly before ``t``.

    For marked models this is the ground intensity.
    """
    h = as_history(history).before(t)
    return _finite(model.tracker(h).intensity(float(t)), "intensity")


def evaluate_compensator(model: ModelSpec, t: float, history=None) -> float:
    """Lambda*(t), the integral of the intensity over [0, t]."""
    h = as_history(history).before(t)
    return _finite(model.tracker(h).compensator(float(t)), "compensator")


def thinning_envelope(model: ModelSpec, t: float, history=None,
                      lookahead: float = DEFAULT_LOOKAHEAD) -> ThinningEnvelope:
    """Dominating rate and horizon at cursor ``t``.

    Events of ``history`` at exactly ``t`` count as already arrived, so the
    envelope is taken at t+.
    """
    h = as_history(history)
    h = h.before(math.nextafter(float(t), math.inf))
    m, l = model.tracker(h).envelope(float(t), lookahead)
    return ThinningEnvelope(m, l)


def mark_log_density(model: ModelSpec, kappa: float, t: float = 0.0, history=None) -> float:
    if not model.marked:
        raise UnmarkedModel(f"{model.family} is not a marked model")
    return model.mark_log_density(kappa, t, history)


def sample_mark(model: ModelSpec, t: float, history, rng) -> float:
    if not model.marked:
        raise UnmarkedModel(f"{model.family} is not a marked model")
    return model.sample_mark(rng, t, history)
