import numpy as np
import pytest

from tandem_net.design import DesignConfig, design_network, initialize_network
from tandem_net.errors import InfeasibleRequestError, InvalidInputError
from tandem_net.markov import network_error
from tandem_net.model import DiscreteObservationModel, Priors
from tandem_net.oracle import brute_force_design, monte_carlo_error, search_space


def test_search_space_size(make_model):
    models = [make_model(2, 3), make_model(2, 3)]
    # DM 1: 2^(3*1), DM 2: 2^(3*2)
    assert search_space(models, [2, 2]) == 2**3 * 2**6


def test_budget_is_enforced(binary_model):
    with pytest.raises(InfeasibleRequestError) as excinfo:
        brute_force_design([binary_model], Priors.uniform(2), [1], 2, budget=10**6)
    assert excinfo.value.cardinality == 2**128


def test_brute_force_argument_checks(make_model):
    with pytest.raises(InvalidInputError):
        brute_force_design([make_model(2, 3)], Priors.uniform(2), [1, 1], 2)


def test_brute_force_finds_exact_optimum():
    # Two observation symbols per DM: forwarding x_1 itself is optimal.
    model = DiscreteObservationModel(np.array([[0.9, 0.1], [0.2, 0.8]]))
    result = brute_force_design([model], Priors.uniform(2), [1], 2)
    assert result.combinations == 4
    joint = np.einsum("jx,jy->jxy", model.pmfs, model.pmfs)
    expected = 0.5 * np.minimum(joint[0], joint[1]).sum()
    assert result.error == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("seed", range(20))
def test_design_never_beats_brute_force(seed):
    rng = np.random.default_rng(seed)
    n_dms = 2 + seed % 2
    obs_size = 2 + seed % 2
    models = [
        DiscreteObservationModel(rng.dirichlet(np.ones(obs_size), size=2))
        for _ in range(n_dms)
    ]
    priors = Priors.uniform(2)
    config = DesignConfig.equal_rates(n_dms, 2, 1, eta=1e-9, rng_seed=seed)
    exhaustive = brute_force_design(models, priors, config.rates, n_dms)
    design = design_network(config, models, priors)
    initial = network_error(initialize_network(config, models, priors))
    assert exhaustive.error <= design.error + 1e-12
    assert design.error <= initial + 1e-12


def test_monte_carlo_is_reproducible_and_close(make_network):
    network = make_network(3, hypotheses=2, obs_size=3)
    analytic = network_error(network)
    first = monte_carlo_error(network, 200_000, seed=11)
    second = monte_carlo_error(network, 200_000, seed=11)
    assert first == second
    standard_error = np.sqrt(analytic * (1 - analytic) / first.trials)
    assert abs(first.estimate - analytic) <= 5 * standard_error
    assert first.ci_low <= first.estimate <= first.ci_high


def test_monte_carlo_single_dm(make_model):
    model = make_model(3, 4)
    design = design_network(DesignConfig(1, 3, ()), [model])
    result = monte_carlo_error(design.network, 100_000, seed=3, shards=3)
    standard_error = np.sqrt(design.error * (1 - design.error) / result.trials)
    assert abs(result.estimate - design.error) <= 5 * standard_error


def test_monte_carlo_rejects_tiny_runs(make_network):
    with pytest.raises(InvalidInputError):
        monte_carlo_error(make_network(2), 100, seed=0)


@pytest.mark.slow
def test_analytic_error_inside_interval_for_designed_networks():
    hits = 0
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        n_dms = int(rng.integers(2, 5))
        models = [
            DiscreteObservationModel(rng.dirichlet(np.ones(4), size=2)) for _ in range(n_dms)
        ]
        config = DesignConfig.equal_rates(n_dms, 2, int(rng.integers(1, 3)), rng_seed=seed)
        design = design_network(config, models)
        result = monte_carlo_error(design.network, 1_000_000, seed=seed)
        hits += result.contains(design.error)
    assert hits >= 19
