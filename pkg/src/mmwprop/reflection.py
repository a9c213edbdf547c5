"""Perpendicular-polarization Fresnel reflection off a lossless dielectric.

The reflection coefficient for the E-field normal to the incidence plane is

    gamma_perp = (cos(theta) - sqrt(eps_r - sin^2(theta)))
                 / (cos(theta) + sqrt(eps_r - sin^2(theta)))

with theta measured from the surface normal. For eps_r >= 1 the radicand is
never negative and |gamma_perp| <= 1. Measured losses in dB map to magnitude
via |gamma|^2 = 10^(-loss_db / 10) (power ratio).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .datasets import ReflectionSample
from .errors import (
    DegenerateAnglesError,
    InvariantViolationError,
    MixedFrequenciesError,
    PerfectTransmissionError,
    TooFewSamplesError,
)

EPS_SEARCH_RANGE = (1.0, 30.0)
_SEARCH_GRID_POINTS = 300
_EPS_TOLERANCE = 1e-4


def _check_geometry(incident_angle_deg: float, eps_r: float) -> None:
    if not 0 <= incident_angle_deg < 90:
        raise InvariantViolationError("incident_angle_deg must lie in [0, 90)")
    if not eps_r >= 1:
        raise InvariantViolationError("eps_r must be >= 1")


def fresnel_gamma_perp(incident_angle_deg: float, eps_r: float) -> float:
    """Signed reflection coefficient; non-positive for eps_r >= 1."""
    _check_geometry(incident_angle_deg, eps_r)
    theta = math.radians(incident_angle_deg)
    root = math.sqrt(eps_r - math.sin(theta) ** 2)
    return (math.cos(theta) - root) / (math.cos(theta) + root)


def fresnel_gamma_perp_magnitude(incident_angle_deg: float, eps_r: float) -> float:
    return abs(fresnel_gamma_perp(incident_angle_deg, eps_r))


def reflection_loss_db(incident_angle_deg: float, eps_r: float) -> float:
    """Reflection loss -20*log10(|gamma_perp|), a non-negative dB number."""
    magnitude = fresnel_gamma_perp_magnitude(incident_angle_deg, eps_r)
    if magnitude == 0.0:
        raise PerfectTransmissionError(
            f"|gamma_perp| = 0 at {incident_angle_deg} deg, eps_r = {eps_r}; "
            "loss in dB is unbounded")
    return -20.0 * math.log10(magnitude)


def measured_magnitude(sample: ReflectionSample) -> float:
    """|gamma_perp| implied by a stored positive dB power loss."""
    return 10.0 ** (-sample.reflection_loss_db / 20.0)


def _single_frequency(samples: Sequence[ReflectionSample]) -> float:
    freq = samples[0].freq_hz
    if any(not math.isclose(s.freq_hz, freq, rel_tol=1e-9) for s in samples):
        raise MixedFrequenciesError("samples span more than one frequency")
    return freq


def mmse_objective(eps_r: float, samples: Sequence[ReflectionSample]) -> float:
    """Mean squared error between measured and modeled |gamma_perp|^2."""
    total = 0.0
    for s in samples:
        measured = 10.0 ** (-s.reflection_loss_db / 10.0)
        modeled = fresnel_gamma_perp(s.incident_angle_deg, eps_r) ** 2
        total += (measured - modeled) ** 2
    return total / len(samples)


@dataclass(frozen=True)
class PermittivityEstimate:
    eps_r: float
    mse: float
    samples_used: int


def _golden_section(func, lo: float, hi: float, tol: float) -> float:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - ratio * (hi - lo)
    d = lo + ratio * (hi - lo)
    fc, fd = func(c), func(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - ratio * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + ratio * (hi - lo)
            fd = func(d)
    return (lo + hi) / 2.0


def estimate_permittivity_mmse(samples: Sequence[ReflectionSample]) -> PermittivityEstimate:
    """MMSE estimate of eps_r from measured reflection losses at one frequency.

    Minimizes the squared error over |gamma_perp|^2. The search brackets the
    minimum on a 300-point grid over eps_r in [1, 30], then refines it by
    golden-section search to a 1e-4 tolerance.
    """
    if len(samples) < 2:
        raise TooFewSamplesError("need at least 2 reflection samples")
    _single_frequency(samples)

    lo, hi = EPS_SEARCH_RANGE
    step = (hi - lo) / (_SEARCH_GRID_POINTS - 1)
    grid = [lo + i * step for i in range(_SEARCH_GRID_POINTS)]
    values = [mmse_objective(e, samples) for e in grid]
    best = values.index(min(values))
    bracket_lo = grid[max(best - 1, 0)]
    bracket_hi = grid[min(best + 1, _SEARCH_GRID_POINTS - 1)]
    eps_r = _golden_section(lambda e: mmse_objective(e, samples),
                            bracket_lo, bracket_hi, _EPS_TOLERANCE)
    return PermittivityEstimate(eps_r=eps_r, mse=mmse_objective(eps_r, samples),
                                samples_used=len(samples))


@dataclass(frozen=True)
class LinearReflectionFit:
    """|gamma_perp| modeled as slope * theta_deg + intercept, clamped to [0, 1]."""

    slope: float
    intercept: float

    def magnitude_at(self, incident_angle_deg: float) -> float:
        return min(1.0, max(0.0, self.slope * incident_angle_deg + self.intercept))


def fit_linear_reflection(
    samples: Sequence[ReflectionSample],
) -> tuple[LinearReflectionFit, float]:
    """Ordinary least squares of |gamma_perp| against incidence angle in degrees.

    Returns the fit and its RMSE over the input samples.
    """
    if len(samples) < 2:
        raise TooFewSamplesError("need at least 2 reflection samples")
    angles = [s.incident_angle_deg for s in samples]
    mags = [measured_magnitude(s) for s in samples]
    mean_x = sum(angles) / len(angles)
    mean_y = sum(mags) / len(mags)
    var_x = sum((x - mean_x) ** 2 for x in angles)
    if var_x == 0.0:
        raise DegenerateAnglesError("all samples share one incidence angle")
    cov_xy = sum((x - mean_x) * (y - mean_y) for x, y in zip(angles, mags))
    slope = cov_xy / var_x
    intercept = mean_y - slope * mean_x
    residual_sq = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(angles, mags))
    rmse = math.sqrt(residual_sq / len(samples))
    return LinearReflectionFit(slope=slope, intercept=intercept), rmse
