"""Log-space regularized upper incomplete gamma function and gamma hazards.

The survival function of a Gamma(shape, rate) interevent time is
Q(shape, rate * u). It is evaluated as log Q so that long gaps do not
underflow: the power series for P = 1 - Q when x < a + 1, the Lentz
continued fraction for Q otherwise.
"""
from __future__ import annotations

import math

import numpy as np

EPS = 1e-15
MAX_ITER = 10_000
_TINY = 1e-300


def _log_prefactor(a: float, x: float) -> float:
    return -x + a * math.log(x) - math.lgamma(a)


def log_gamma_sf_scalar(a: float, x: float) -> float:
    """log Q(a, x) for scalar a > 0, x >= 0."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    if x < a + 1.0:
        term = total = 1.0 / a
        ap = a
        for _ in range(MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if term < total * EPS:
                break
        p = total * math.exp(_log_prefactor(a, x))
        if p >= 1.0:
            return -math.inf
        return math.log1p(-p)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return _log_prefactor(a, x) + math.log(h)


def log_gamma_sf(a: float, x):
    """Vectorised log Q(a, x) over an array of x (scalar a)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    flat_x = x.reshape(-1)
    flat = out.reshape(-1)

    pos = flat_x > 0
    flat[np.isinf(flat_x)] = -np.inf
    series = pos & (flat_x < a + 1.0) & np.isfinite(flat_x)
    frac = pos & ~series & np.isfinite(flat_x)

    if series.any():
        xs = flat_x[series]
        term = np.full_like(xs, 1.0 / a)
        total = term.copy()
        ap = a
        for _ in range(MAX_ITER):
            ap += 1.0
            term = term * xs / ap
            total += term
            if np.all(term < total * EPS):
                break
        logp = np.log(total) - xs + a * np.log(xs) - math.lgamma(a)
        with np.errstate(divide="ignore"):
            flat[series] = np.where(logp >= 0.0, -np.inf, np.log1p(-np.exp(np.minimum(logp, 0.0))))

    if frac.any():
        xs = flat_x[frac]
        b = xs + 1.0 - a
        c = np.full_like(xs, 1.0 / _TINY)
        d = 1.0 / b
        h = d.copy()
        for i in range(1, MAX_ITER):
            an = -i * (i - a)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _TINY, _TINY, d)
            c = b + an / c
            c = np.where(np.abs(c) < _TINY, _TINY, c)
            d = 1.0 / d
            delta = d * c
            h = h * delta
            if np.all(np.abs(delta - 1.0) < EPS):
                break
        flat[frac] = -xs + a * np.log(xs) - math.lgamma(a) + np.log(h)

    return out if out.ndim else float(out)


def gamma_log_pdf(u, shape: float, rate: float):
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        val = shape * math.log(rate) + (shape - 1.0) * np.log(u) - rate * u - math.lgamma(shape)
    return val if val.ndim else float(val)


def gamma_hazard_scalar(u: float, shape: float, rate: float) -> float:
    """Hazard g(u) / (1 - G(u)) of a Gamma(shape, rate) lifetime."""
    if u <= 0.0:
        if shape < 1.0:
            return math.inf
        return rate if shape == 1.0 else 0.0
    if shape == 1.0:
        return rate
    log_pdf = shape * math.log(rate) + (shape - 1.0) * math.log(u) - rate * u - math.lgamma(shape)
    return math.exp(log_pdf - log_gamma_sf_scalar(shape, rate * u))
