"""Closed-form comparison curves for antipodal Gaussian signals with equal priors.

Rate-one tandem schemes share one recursion: DM ``i`` compares its observation
with ``+/- tau_i`` (sign chosen by the incoming bit), giving

    P_E(i) = Q((a + tau_i)/sigma) + P_E(i-1) [Q((a - tau_i)/sigma) - Q((a + tau_i)/sigma)]

with ``P_E(0) = 1/2``. The optimum rate-one thresholds come from the
likelihood-ratio test on the previous error; the two-state scheme grows its
thresholds as ``sqrt(2 sigma^2 log10 i)``.
"""

import logging
import math
from typing import Callable

import numpy as np
from scipy.stats import norm

from .errors import InvalidInputError
from .model import FloatArray, Priors

logger = logging.getLogger(__name__)


def q_tail(x: float) -> float:
    """Standard normal tail probability ``Q(x) = 1 - Phi(x)``."""
    return float(norm.sf(x))


def _check_symmetric(n_dms: int, amplitude: float, sigma: float, priors: Priors | None) -> None:
    if n_dms < 1:
        raise InvalidInputError(f"Need at least one DM, got N={n_dms}.")
    if not amplitude > 0 or not sigma > 0:
        raise InvalidInputError(
            f"Amplitude and noise deviation must be positive, got a={amplitude}, sigma={sigma}."
        )
    if priors is not None and (
        priors.hypotheses != 2 or not np.allclose(priors.weights, 0.5, atol=0, rtol=1e-12)
    ):
        raise InvalidInputError(
            "Rate-one baselines hold for two equally likely hypotheses only, "
            f"got priors {priors.weights.tolist()}."
        )


def _rate_one_curve(
    n_dms: int, amplitude: float, sigma: float, threshold: Callable[[int, float], float]
) -> FloatArray:
    curve = np.empty(n_dms)
    previous = 0.5
    for i in range(1, n_dms + 1):
        tau = threshold(i, previous)
        upper = q_tail((amplitude + tau) / sigma)
        lower = q_tail((amplitude - tau) / sigma)
        previous = upper + previous * (lower - upper)
        curve[i - 1] = previous
    return curve


def swaszek_curve(
    n_dms: int, amplitude: float, sigma: float = 1.0, priors: Priors | None = None
) -> FloatArray:
    """Optimum rate-one error ``P_E(1..N)``."""
    _check_symmetric(n_dms, amplitude, sigma, priors)

    def threshold(_: int, previous: float) -> float:
        return sigma**2 / (2 * amplitude) * math.log((1 - previous) / previous)

    return _rate_one_curve(n_dms, amplitude, sigma, threshold)


def cover_curve(
    n_dms: int, amplitude: float, sigma: float = 1.0, priors: Priors | None = None
) -> FloatArray:
    """Two-state (unbounded likelihood ratio) rate-one error ``P_E(1..N)``."""
    _check_symmetric(n_dms, amplitude, sigma, priors)

    def threshold(i: int, _: float) -> float:
        return math.sqrt(2 * sigma**2 * math.log10(i))

    return _rate_one_curve(n_dms, amplitude, sigma, threshold)


def linear_detector_error(
    n_dms: int, hypotheses: int, amplitude: float, sigma: float = 1.0
) -> float:
    """Error of the unconstrained detector thresholding the sum of all observations.

    Equally spaced signals on ``[-a, a]`` and equal priors: the ``M - 2`` inner
    decision regions err on both sides, the two outer ones on a single side.
    """
    if n_dms < 1 or hypotheses < 2:
        raise InvalidInputError(f"Need N >= 1 and M >= 2, got N={n_dms}, M={hypotheses}.")
    if not amplitude > 0 or not sigma > 0:
        raise InvalidInputError(
            f"Amplitude and noise deviation must be positive, got a={amplitude}, sigma={sigma}."
        )
    half_gap = amplitude * math.sqrt(n_dms) / (sigma * (hypotheses - 1))
    return 2 * (hypotheses - 1) / hypotheses * q_tail(half_gap)
