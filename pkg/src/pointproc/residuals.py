"""Time-rescaling residuals and the Exp(1) Kolmogorov-Smirnov check."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptySample, NonFiniteResult
from .inference import _check_marks
from .models import ModelSpec
from .pattern import PointPattern

SMALL_SAMPLE = 35
_SERIES_TERMS = 100
_SERIES_EPS = 1e-12


def kolmogorov_sf(x: float) -> float:
    """P(K > x) for the limiting Kolmogorov distribution.

    Alternating series 2 sum (-1)^(k-1) exp(-2 k^2 x^2) for x >= 1; below
    that the Jacobi-transformed series for the CDF, which converges fast
    where the alternating one does not.
    """
    if x < 0.05:
        return 1.0  # the CDF is below exp(-490) here
    if x < 1.0:
        w = math.pi ** 2 / (8.0 * x * x)
        cdf = 0.0
        for k in range(1, _SERIES_TERMS + 1):
            term = math.exp(-(2 * k - 1) ** 2 * w)
            cdf += term
            if term < _SERIES_EPS:
                break
        cdf *= math.sqrt(2.0 * math.pi) / x
        return min(max(1.0 - cdf, 0.0), 1.0)
    total = 0.0
    for k in range(1, _SERIES_TERMS + 1):
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < _SERIES_EPS:
            break
    return min(max(2.0 * total, 0.0), 1.0)


def exp1_ks_test(gaps) -> tuple[float, float]:
    """(D, asymptotic p-value) of the sample against Exp(1)."""
    x = np.sort(np.asarray(gaps, dtype=float))
    n = len(x)
    if n == 0:
        raise EmptySample("KS test needs at least one value")
    cdf = -np.expm1(-np.maximum(x, 0.0))
    i = np.arange(1, n + 1)
    d = float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))
    return d, kolmogorov_sf(math.sqrt(n) * d)


def rescale(model: ModelSpec, pattern: PointPattern) -> np.ndarray:
    """s_i = Lambda*(t_i), each with the history before t_i."""
    _check_marks(model, pattern)
    s, _ = model.compensators(pattern.times, pattern.marks, pattern.t_end)
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise NonFiniteResult("rescaled times are not finite")
    return s


@dataclass(frozen=True)
class ResidualReport:
    """Rescaled times and gap diagnostics.

    Gaps include s_1 - 0. The censored remainder Lambda*(T) - s_n is
    reported but kept out of the KS sample. Test fields are None when the
    pattern has no events; ``small_sample`` flags n < 35, where the
    asymptotic p-value is only approximate.
    """

    rescaled_times: list
    interevent_mean: Optional[float]
    interevent_cv: Optional[float]
    ks_statistic: Optional[float]
    ks_p_value: Optional[float]
    max_gap: Optional[tuple]
    n: int
    censored_remainder: float
    lag1_autocorrelation: Optional[float]
    small_sample: bool
    tests_defined: bool

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(np.concatenate(([0.0], self.rescaled_times)))

    def to_dict(self) -> dict:
        return {
            "rescaled_times": [float(v) for v in self.rescaled_times],
            "interevent_mean": self.interevent_mean,
            "interevent_cv": self.interevent_cv,
            "ks_statistic": self.ks_statistic,
            "ks_p_value": self.ks_p_value,
            "max_gap": None if self.max_gap is None else [self.max_gap[0], self.max_gap[1]],
            "n": self.n,
            "censored_remainder": self.censored_remainder,
            "lag1_autocorrelation": self.lag1_autocorrelation,
            "small_sample": self.small_sample,
            "tests_defined": self.tests_defined,
        }


def _or_none(v: float) -> Optional[float]:
    return float(v) if math.isfinite(v) else None


def residual_report(model: ModelSpec, pattern: PointPattern) -> ResidualReport:
    _check_marks(model, pattern)
    s, comp_T = model.compensators(pattern.times, pattern.marks, pattern.t_end)
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)) or not math.isfinite(comp_T):
        raise NonFiniteResult("rescaled times are not finite")
    n = len(s)
    remainder = float(comp_T - (s[-1] if n else 0.0))
    if n == 0:
        return ResidualReport([], None, None, None, None, None, 0, remainder, None, True, False)

    gaps = np.diff(np.concatenate(([0.0], s)))
    mean = float(gaps.mean())
    cv = float(gaps.std(ddof=1) / mean) if n > 1 and mean > 0 else math.nan
    if n > 2 and gaps[:-1].std() > 0 and gaps[1:].std() > 0:
        lag1 = float(np.corrcoef(gaps[:-1], gaps[1:])[0, 1])
    else:
        lag1 = math.nan
    d, p = exp1_ks_test(gaps)
    k = int(np.argmax(gaps))
    return ResidualReport(
        rescaled_times=[float(v) for v in s],
        interevent_mean=mean,
        interevent_cv=_or_none(cv),
        ks_statistic=d,
        ks_p_value=p,
        max_gap=(k + 1, float(gaps[k])),
        n=n,
        censored_remainder=remainder,
        lag1_autocorrelation=_or_none(lag1),
        small_sample=n < SMALL_SAMPLE,
        tests_defined=True,
    )
