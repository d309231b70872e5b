import logging
import math

import numpy as np
import pytest

from tandem_net.errors import InvalidInputError
from tandem_net.gaussian import (
    GaussianSpec,
    captured_mass,
    discretize,
    signal_set,
    snr_to_amplitude,
)
from tandem_net.model import Priors, bayes_error


def test_amplitude_and_signal_set():
    assert snr_to_amplitude(-10.0) == pytest.approx(10**-0.5)
    assert snr_to_amplitude(0.0) == 1.0
    np.testing.assert_allclose(signal_set(3, 2.0), [-2.0, 0.0, 2.0])
    np.testing.assert_allclose(signal_set(4, 3.0), [-3.0, -1.0, 1.0, 3.0])


def test_default_interval_and_edges():
    spec = GaussianSpec.from_snr(2, -10.0)
    lo, hi = spec.bounds
    assert lo == pytest.approx(-(10**-0.5) - 4)
    assert hi == -lo
    assert spec.edges.size == 129


def test_single_sensor_anchor(binary_model):
    error = bayes_error(binary_model.pmfs, Priors.uniform(2))
    assert math.log10(error) == pytest.approx(-0.4249, abs=1e-3)


@pytest.mark.parametrize("hypotheses", [2, 3, 4])
def test_antipodal_pmfs_mirror_each_other(hypotheses):
    model = discretize(GaussianSpec.from_snr(hypotheses, -10.0))
    pmfs = model.pmfs
    for j in range(hypotheses):
        np.testing.assert_array_equal(pmfs[j], pmfs[hypotheses - 1 - j][::-1])
    np.testing.assert_allclose(pmfs.sum(axis=1), 1.0, atol=1e-12)


def test_captured_mass_of_default_interval():
    mass = captured_mass(GaussianSpec.from_snr(2, -10.0))
    assert np.all(mass >= 0.9997)
    assert np.all(mass <= 1.0)


def test_narrow_interval_warns(caplog):
    spec = GaussianSpec(2, 1.0, interval=(-2.0, 2.0), bins=16)
    with caplog.at_level(logging.WARNING, logger="tandem_net.gaussian"):
        model = discretize(spec)
    assert "clips" in caplog.text
    np.testing.assert_allclose(model.pmfs.sum(axis=1), 1.0)


def test_invalid_specs():
    with pytest.raises(InvalidInputError):
        GaussianSpec(2, 1.0, bins=1)
    with pytest.raises(InvalidInputError):
        GaussianSpec(1, 1.0)
    with pytest.raises(InvalidInputError):
        GaussianSpec(2, 1.0, interval=(1.0, -1.0))
    with pytest.raises(InvalidInputError):
        GaussianSpec(2, 1.0, sigma=0.0)


@pytest.mark.parametrize("snr_db", [-10.0, 0.0])
def test_finer_bins_barely_move_single_sensor_error(snr_db):
    coarse = discretize(GaussianSpec.from_snr(2, snr_db, bins=128))
    fine = discretize(GaussianSpec.from_snr(2, snr_db, bins=512))
    priors = Priors.uniform(2)
    assert bayes_error(fine.pmfs, priors) == pytest.approx(
        bayes_error(coarse.pmfs, priors), abs=1e-4
    )
