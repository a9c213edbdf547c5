"""Friis free-space path loss and the close-in (1 m) path-loss model.

The CI model anchors at FSPL(f, 1 m) and has a single slope parameter, the
path-loss exponent n:

    PL(d) = FSPL(f, 1 m) + 10 * n * log10(d / 1 m)

Fitting is the anchored least squares n = sum(A*B) / sum(B^2) with
A = PL_i - FSPL(f, 1 m) and B = 10*log10(d_i). The shadow-fading sigma is the
RMS residual with 1/N normalization (sample count is exposed so callers can
recompute an unbiased variant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .datasets import Environment, PathLossSample
from .errors import (
    AllAtReferenceDistanceError,
    BelowReferenceDistanceError,
    InvariantViolationError,
    MixedFrequenciesError,
    TooFewSamplesError,
)

SPEED_OF_LIGHT_M_S = 299_792_458.0
REFERENCE_DISTANCE_M = 1.0


def fspl_db(freq_hz: float, distance_m: float) -> float:
    """Free-space path loss 20*log10(4*pi*d*f/c) between isotropic antennas."""
    if not freq_hz > 0:
        raise InvariantViolationError("freq_hz must be > 0")
    if not distance_m > 0:
        raise InvariantViolationError("distance_m must be > 0")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * freq_hz / SPEED_OF_LIGHT_M_S)


@dataclass(frozen=True)
class CiModel:
    freq_hz: float
    ple: float
    sigma_db: float
    reference_distance_m: float = REFERENCE_DISTANCE_M

    def __post_init__(self):
        if not self.ple > 0:
            raise InvariantViolationError("ple must be > 0")
        if not self.sigma_db >= 0:
            raise InvariantViolationError("sigma_db must be >= 0")


def ci_path_loss_db(model: CiModel, distance_m: float) -> float:
    """Mean CI path loss at distance_m; sigma is metadata, not added here."""
    if distance_m < model.reference_distance_m:
        raise BelowReferenceDistanceError(
            f"distance {distance_m} m is below the {model.reference_distance_m} m reference")
    return (fspl_db(model.freq_hz, model.reference_distance_m)
            + 10.0 * model.ple * math.log10(distance_m / model.reference_distance_m))


def fit_ci(samples: Sequence[PathLossSample], freq_hz: float) -> CiModel:
    """Fit the single-parameter CI model through the 1 m anchor."""
    if len(samples) < 2:
        raise TooFewSamplesError("need at least 2 path-loss samples")
    if any(not math.isclose(s.freq_hz, freq_hz, rel_tol=1e-9) for s in samples):
        raise MixedFrequenciesError(f"samples do not all sit at {freq_hz} Hz")
    if any(s.distance_m < REFERENCE_DISTANCE_M for s in samples):
        raise BelowReferenceDistanceError(
            "all fit distances must be >= the 1 m reference distance")

    anchor = fspl_db(freq_hz, REFERENCE_DISTANCE_M)
    a = [s.path_loss_db - anchor for s in samples]
    b = [10.0 * math.log10(s.distance_m / REFERENCE_DISTANCE_M) for s in samples]
    denom = sum(x * x for x in b)
    if denom == 0.0:
        raise AllAtReferenceDistanceError(
            "every sample is at the reference distance; slope is undefined")
    ple = sum(x * y for x, y in zip(a, b)) / denom
    residual_sq = sum((y - ple * x) ** 2 for x, y in zip(b, a))
    sigma = math.sqrt(residual_sq / len(samples))
    return CiModel(freq_hz=freq_hz, ple=ple, sigma_db=sigma)


@dataclass(frozen=True)
class DirectionalReduction:
    """LOS / NLOS split plus the best pointing per NLOS TX-RX location."""

    los: tuple[PathLossSample, ...]
    nlos_all: tuple[PathLossSample, ...]
    nlos_best: tuple[PathLossSample, ...]


def reduce_directional(samples: Sequence[PathLossSample]) -> DirectionalReduction:
    """Partition by environment and pick the lowest-loss NLOS pointing per link.

    Ties on path loss break toward the lowest (tx_az_deg, rx_az_deg) pair.
    The nlos_best entries are ordered by (tx_id, rx_id).
    """
    los = tuple(s for s in samples if s.environment is Environment.LOS)
    nlos = tuple(s for s in samples if s.environment is Environment.NLOS)

    best: dict[tuple[str, str], PathLossSample] = {}
    for s in nlos:
        key = (s.tx_id, s.rx_id)
        current = best.get(key)
        if current is None or (
            (s.path_loss_db, s.tx_az_deg, s.rx_az_deg)
            < (current.path_loss_db, current.tx_az_deg, current.rx_az_deg)
        ):
            best[key] = s
    nlos_best = tuple(best[k] for k in sorted(best))
    return DirectionalReduction(los=los, nlos_all=nlos, nlos_best=nlos_best)
