"""Continued fractions of square roots of power sums."""

from .approx import construct_eta, inverse_expansion, sqrt_expansion, verify_eta
from .cf import (
    CFExpansion,
    QuadSurd,
    complete_quotient,
    convergents,
    quality_bound_check,
    reciprocal_distance,
    sqrt_cf,
    surd_cf,
    surd_reciprocal_tail,
    tail_quadratic,
    trace_identity_check,
)
from .errors import PscfError
from .hypothesis_check import candidate_xi, check_hypothesis, forecast_period
from .lab import (
    detect_stabilization,
    fit_functional_cf,
    floor_eta_membership,
    period_scan,
    run_experiment,
    sign_window_check,
    symbolic_tail,
    tail_surd,
)
from .powersum import PowerSum, format_power_sum, parse, symbolic_sqrt
from .recurrence import SequenceSample, fit_power_sum, min_recurrence, roots_integer

__version__ = "0.1.0"
