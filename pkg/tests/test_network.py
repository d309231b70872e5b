import math

import numpy as np
import pytest

from tandem_net.baselines import linear_detector_error, swaszek_curve
from tandem_net.design import (
    DesignConfig,
    DesignState,
    build_restricted_model,
    candidate_scores,
    design_network,
    initialize_network,
    multiplication_count,
)
from tandem_net.errors import InvalidInputError
from tandem_net.gaussian import GaussianSpec, discretize, snr_to_amplitude
from tandem_net.markov import network_error
from tandem_net.model import DiscreteObservationModel, Priors, bayes_error

ANCHOR_LOG10 = -0.4249


def test_config_validation():
    with pytest.raises(InvalidInputError):
        DesignConfig(3, 2, (1,))
    with pytest.raises(InvalidInputError):
        DesignConfig.equal_rates(3, 2, 0)
    with pytest.raises(InvalidInputError):
        DesignConfig.equal_rates(3, 2, 1, iterations=0)
    with pytest.raises(InvalidInputError):
        DesignConfig.equal_rates(3, 2, 1, eta=0.0)
    assert DesignConfig.equal_rates(4, 2, 3).alphabet_sizes == (8, 8, 8)


def test_initialized_network_is_passthrough(binary_model):
    network = initialize_network(DesignConfig.equal_rates(3, 2, 3), [binary_model])
    first = network.decisions[0].table
    assert np.all(first == first[0, 0])
    second = network.decisions[1].table
    assert np.array_equal(second, np.tile(np.arange(8), (128, 1)))


@pytest.mark.parametrize("n_dms", [1, 2, 5, 20])
def test_initialized_error_is_flat(binary_model, n_dms):
    for seed in (0, 7):
        config = DesignConfig.equal_rates(n_dms, 2, 3, rng_seed=seed)
        error = network_error(initialize_network(config, [binary_model]))
        assert math.log10(error) == pytest.approx(ANCHOR_LOG10, abs=1e-3)


def test_single_dm_design_is_map(make_model):
    model = make_model(3, 5)
    priors = Priors(np.array([0.5, 0.3, 0.2]))
    design = design_network(DesignConfig(1, 3, ()), [model], priors)
    assert design.iterations_used == 0
    assert design.error == bayes_error(model.pmfs, priors)


def test_random_instances_descend(rng):
    for _ in range(100):
        n_dms = int(rng.integers(2, 7))
        hypotheses = int(rng.integers(2, 4))
        obs_size = int(rng.integers(2, 5))
        rates = tuple(int(rng.integers(1, 3)) for _ in range(n_dms - 1))
        models = [
            DiscreteObservationModel(rng.dirichlet(np.ones(obs_size), size=hypotheses))
            for _ in range(n_dms)
        ]
        config = DesignConfig(
            n_dms, hypotheses, rates, iterations=3, eta=1e-9, rng_seed=int(rng.integers(1000))
        )
        design = design_network(config, models)
        trace = design.trace
        assert all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
        assert design.error == pytest.approx(network_error(design.network), abs=1e-10)
        for row in design.dm_errors:
            assert all(b <= a + 1e-12 for a, b in zip(row, row[1:]))


def test_early_stop_ends_on_stall(make_model):
    model = make_model(2, 3)
    config = DesignConfig.equal_rates(3, 2, 1, iterations=50, early_stop=True)
    design = design_network(config, [model])
    assert design.iterations_used < 50
    assert len(design.sweeps) == design.iterations_used
    assert len(design.elapsed) == design.iterations_used


def test_stalled_design_is_person_by_person_fixed_point(make_model):
    models = [make_model(3, 4) for _ in range(4)]
    config = DesignConfig(4, 3, (2, 1, 2), iterations=100, eta=1e-12, early_stop=True)
    design = design_network(config, models)
    assert design.iterations_used < 100
    network = design.network
    for dm in range(1, 4):
        model = build_restricted_model(network, dm)
        state = DesignState.start(model, network.decisions[dm - 1])
        for y in range(model.inputs):
            scores = candidate_scores(state, model, y)
            assert scores.max() <= scores[state.assignment[y]] + 1e-9


@pytest.mark.parametrize("rate", [1, 2, 3])
def test_first_iteration_sweeps_stay_small(binary_model, rate):
    design = design_network(DesignConfig.equal_rates(3, 2, rate), [binary_model])
    assert design.max_sweeps <= 8


def test_model_count_must_match(make_model):
    with pytest.raises(InvalidInputError):
        design_network(DesignConfig.equal_rates(3, 2, 1), [make_model(2, 3)] * 2)
    with pytest.raises(InvalidInputError):
        design_network(DesignConfig.equal_rates(2, 3, 1), [make_model(2, 3)])


@pytest.mark.parametrize("n_dms", [2, 3, 5])
def test_rate_one_design_matches_optimum(binary_model, n_dms):
    config = DesignConfig.equal_rates(n_dms, 2, 1, iterations=3, eta=1e-6)
    design = design_network(config, [binary_model])
    optimum = swaszek_curve(n_dms, snr_to_amplitude(-10.0))[-1]
    assert math.log10(design.error) == pytest.approx(math.log10(optimum), abs=0.01)


def test_multiplication_count_terms():
    two = multiplication_count(DesignConfig.equal_rates(2, 2, 3), 128, 8, 4)
    assert two.backward_loop == 0
    count = multiplication_count(DesignConfig.equal_rates(20, 2, 3), 128, 8, 4)
    assert count.dominant == 20 * 2 * 4 * 128**2 * 8**4
    assert count.dominant == pytest.approx(1.07e10, rel=5e-3)
    assert count.exact >= count.dominant
    assert count.exact == count.backward_loop + count.forward_loop
    doubled = multiplication_count(DesignConfig.equal_rates(40, 2, 3), 128, 8, 4)
    assert doubled.dominant == 2 * count.dominant


@pytest.mark.slow
@pytest.mark.parametrize("snr_db, longest", [(-10.0, 20), (0.0, 14)])
def test_rate_one_curve_matches_optimum(snr_db, longest):
    model = discretize(GaussianSpec.from_snr(2, snr_db))
    optimum = swaszek_curve(longest, snr_to_amplitude(snr_db))
    for n_dms in range(1, longest + 1):
        design = design_network(DesignConfig.equal_rates(n_dms, 2, 1), [model])
        assert math.log10(design.error) == pytest.approx(
            math.log10(optimum[n_dms - 1]), abs=0.01
        )


@pytest.mark.slow
def test_rate_four_reaches_near_linear_detector(binary_model):
    design = design_network(DesignConfig.equal_rates(20, 2, 4), [binary_model])
    assert math.log10(design.error) <= -1.03
    bound = linear_detector_error(20, 2, snr_to_amplitude(-10.0))
    assert design.error >= bound


@pytest.mark.slow
def test_iteration_time_is_linear_in_n(binary_model):
    sizes = np.array([4, 8, 16, 32])
    seconds = []
    for n_dms in sizes:
        config = DesignConfig.equal_rates(int(n_dms), 2, 3, iterations=1)
        design = design_network(config, [binary_model])
        seconds.append(design.elapsed[0])
    slope, intercept = np.polyfit(sizes, seconds, 1)
    fitted = slope * sizes + intercept
    residual = np.sum((np.array(seconds) - fitted) ** 2)
    total = np.sum((np.array(seconds) - np.mean(seconds)) ** 2)
    assert 1 - residual / total >= 0.98


@pytest.mark.slow
@pytest.mark.parametrize("hypotheses", [3, 4])
def test_more_rate_helps_m_ary(hypotheses):
    model = discretize(GaussianSpec.from_snr(hypotheses, -10.0))
    for n_dms in (5, 10, 20):
        errors = {
            rate: design_network(
                DesignConfig.equal_rates(n_dms, hypotheses, rate), [model]
            ).error
            for rate in (1, 2, 3, 4)
        }
        bound = linear_detector_error(n_dms, hypotheses, snr_to_amplitude(-10.0))
        assert errors[2] < errors[1]
        for rate in (3, 4):
            assert bound <= errors[rate] <= errors[2] + 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("rate", [1, 2, 3, 4])
def test_sweep_count_is_bounded(binary_model, rate):
    for n_dms in (2, 5, 10):
        design = design_network(DesignConfig.equal_rates(n_dms, 2, rate), [binary_model])
        assert design.max_sweeps <= 8


@pytest.mark.slow
def test_rate_three_curve_after_three_iterations(binary_model):
    config = DesignConfig.equal_rates(20, 2, 3, iterations=3, eta=1e-6)
    design = design_network(config, [binary_model])
    assert math.log10(design.error) == pytest.approx(-1.030, abs=0.01)
