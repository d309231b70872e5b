from typing import Callable

import numpy as np
import pytest

from tandem_net.gaussian import GaussianSpec, discretize
from tandem_net.model import (
    DecisionFunction,
    DiscreteObservationModel,
    Priors,
    TandemNetwork,
)

ModelFactory = Callable[[int, int], DiscreteObservationModel]
NetworkFactory = Callable[..., TandemNetwork]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def binary_model() -> DiscreteObservationModel:
    """Antipodal signals at -10 dB, 128 bins on [-a-4, a+4]."""
    return discretize(GaussianSpec.from_snr(2, -10.0))


@pytest.fixture
def make_model(rng: np.random.Generator) -> ModelFactory:
    def factory(hypotheses: int, size: int) -> DiscreteObservationModel:
        return DiscreteObservationModel(rng.dirichlet(np.ones(size), size=hypotheses))

    return factory


@pytest.fixture
def make_network(rng: np.random.Generator, make_model: ModelFactory) -> NetworkFactory:
    """Random network with random tables and per-DM models."""

    def factory(
        n_dms: int, hypotheses: int = 2, obs_size: int = 3, sizes: tuple[int, ...] = ()
    ) -> TandemNetwork:
        sizes = sizes or tuple(int(rng.integers(2, 5)) for _ in range(n_dms - 1))
        models = tuple(make_model(hypotheses, obs_size) for _ in range(n_dms))
        decisions = []
        incoming = 1
        for size in sizes:
            table = rng.integers(0, size, size=(obs_size, incoming))
            decisions.append(DecisionFunction(table, size))
            incoming = size
        weights = rng.dirichlet(np.ones(hypotheses))
        return TandemNetwork(Priors(weights / weights.sum()), models, tuple(decisions))

    return factory
