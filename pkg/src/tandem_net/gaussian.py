"""Discretized Gaussian observation models: known signal in white Gaussian noise."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .config import DEFAULT_BINS, DEFAULT_INTERVAL_PAD
from .errors import InvalidInputError
from .model import DiscreteObservationModel, FloatArray

logger = logging.getLogger(__name__)


def signal_set(hypotheses: int, amplitude: float) -> FloatArray:
    """Equally spaced signal means spanning ``[-a, a]``."""
    if hypotheses < 2 or not amplitude > 0:
        raise InvalidInputError(
            f"Need M >= 2 and a > 0, got M={hypotheses}, a={amplitude}."
        )
    return np.linspace(-amplitude, amplitude, hypotheses)


def snr_to_amplitude(snr_db: float) -> float:
    """Amplitude ``a`` with ``|a|^2`` equal to the SNR (unit noise variance)."""
    return float(10.0 ** (snr_db / 20.0))


@dataclass(frozen=True)
class GaussianSpec:
    hypotheses: int
    amplitude: float
    sigma: float = 1.0
    bins: int = DEFAULT_BINS
    interval: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.bins < 2:
            raise InvalidInputError(f"Need at least two bins, got {self.bins}.")
        if not self.sigma > 0:
            raise InvalidInputError(f"Noise deviation must be positive: {self.sigma}.")
        if self.hypotheses < 2 or not self.amplitude > 0:
            raise InvalidInputError(
                f"Need M >= 2 and a > 0, got M={self.hypotheses}, a={self.amplitude}."
            )
        if self.interval is None:
            pad = DEFAULT_INTERVAL_PAD * self.sigma
            object.__setattr__(
                self, "interval", (-self.amplitude - pad, self.amplitude + pad)
            )
        lo, hi = self.bounds
        if not lo < hi:
            raise InvalidInputError(f"Interval [{lo}, {hi}] is empty.")

    @classmethod
    def from_snr(
        cls,
        hypotheses: int,
        snr_db: float,
        bins: int = DEFAULT_BINS,
        interval_pad: float = DEFAULT_INTERVAL_PAD,
        sigma: float = 1.0,
    ) -> "GaussianSpec":
        amplitude = snr_to_amplitude(snr_db)
        pad = interval_pad * sigma
        return cls(
            hypotheses,
            amplitude,
            sigma=sigma,
            bins=bins,
            interval=(-amplitude - pad, amplitude + pad),
        )

    @property
    def bounds(self) -> tuple[float, float]:
        assert self.interval is not None
        return self.interval

    @property
    def means(self) -> FloatArray:
        return signal_set(self.hypotheses, self.amplitude)

    @property
    def edges(self) -> FloatArray:
        lo, hi = self.bounds
        return np.linspace(lo, hi, self.bins + 1)


def _raw_masses(spec: GaussianSpec) -> FloatArray:
    cdf = norm.cdf(spec.edges[None, :], loc=spec.means[:, None], scale=spec.sigma)
    return np.diff(cdf, axis=1)


def captured_mass(spec: GaussianSpec) -> FloatArray:
    """Probability inside the interval for each hypothesis, before renormalization."""
    return _raw_masses(spec).sum(axis=1)


def discretize(spec: GaussianSpec) -> DiscreteObservationModel:
    """Bin the observation density of every hypothesis and renormalize each PMF.

    On an interval centred at zero the antipodal hypotheses are built as exact
    bin-reversals of each other.
    """
    lo, hi = spec.bounds
    means = spec.means
    clipped = (means - 3 * spec.sigma < lo) | (means + 3 * spec.sigma > hi)
    if np.any(clipped):
        logger.warning(
            f"Interval [{lo:.4g}, {hi:.4g}] clips mean +/- 3 sigma for hypotheses "
            f"{np.flatnonzero(clipped).tolist()}."
        )

    raw = _raw_masses(spec)
    pmfs = raw / raw.sum(axis=1, keepdims=True)
    if lo == -hi:
        count = spec.hypotheses
        for j in range(count // 2):
            pmfs[count - 1 - j] = pmfs[j][::-1]
        if count % 2:
            middle = pmfs[count // 2]
            pmfs[count // 2] = (middle + middle[::-1]) / 2
    logger.debug(
        f"Discretized M={spec.hypotheses}, a={spec.amplitude:.5g} into {spec.bins} bins "
        f"on [{lo:.4g}, {hi:.4g}]; captured mass {captured_mass(spec).min():.6f}."
    )
    return DiscreteObservationModel(pmfs)
