"""Temporal point processes specified by conditional intensity functions."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .inference import FitConfig, FitResult, fit_mle, log_likelihood, log_likelihood_numeric, poisson_mle
from .intensity import (
    ThinningEnvelope,
    evaluate_compensator,
    evaluate_intensity,
    mark_log_density,
    sample_mark,
    thinning_envelope,
)
from .models import (
    FAMILIES,
    EtasExp,
    HawkesExp,
    HomPoisson,
    ModelSpec,
    PiecewisePoisson,
    RenewalGamma,
    SelfCorrecting,
    StopAfterN,
    model_from_dict,
    model_to_dict,
)
from .pattern import Event, HistoryView, ObservationWindow, PointPattern, UnsortedTimes, validate_pattern
from .residuals import ResidualReport, exp1_ks_test, kolmogorov_sf, rescale, residual_report
from .rng import RngStream, derive_seed
from .simulate import SimConfig, invert_compensator, simulate, simulate_batch, simulate_inverse, simulate_thinning
