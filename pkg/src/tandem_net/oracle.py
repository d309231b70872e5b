"""Ground truth for small instances: exhaustive design and Monte Carlo evaluation."""

import itertools
import logging
import math
from dataclasses import dataclass
from time import time
from typing import Sequence

import numpy as np
from scipy.stats import binomtest

from .config import MONTE_CARLO_SHARDS, ORACLE_MAX_COMBINATIONS
from .errors import InfeasibleRequestError, InvalidInputError
from .markov import forward_q, network_error
from .model import DecisionFunction, DiscreteObservationModel, Priors, TandemNetwork

logger = logging.getLogger(__name__)

MIN_TRIALS = 10_000
CONFIDENCE = 0.99


@dataclass(frozen=True)
class BruteForceResult:
    error: float
    decisions: tuple[DecisionFunction, ...]
    combinations: int


@dataclass(frozen=True)
class MonteCarloResult:
    errors: int
    trials: int
    ci_low: float
    ci_high: float

    @property
    def estimate(self) -> float:
        return self.errors / self.trials

    def contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def search_space(
    observation_models: Sequence[DiscreteObservationModel], alphabet_sizes: Sequence[int]
) -> int:
    """Number of decision-function tuples for DM 1 .. N-1."""
    total = 1
    incoming = 1
    for model, size in zip(observation_models, alphabet_sizes):
        total *= size ** (model.alphabet_size * incoming)
        incoming = size
    return total


def brute_force_design(
    observation_models: Sequence[DiscreteObservationModel],
    priors: Priors,
    rates: Sequence[int],
    n_dms: int,
    budget: int = ORACLE_MAX_COMBINATIONS,
) -> BruteForceResult:
    """Globally optimal tables by enumerating every tuple of decision functions."""
    models = tuple(observation_models)
    if len(models) == 1 and n_dms > 1:
        models = models * n_dms
    if len(models) != n_dms or len(rates) != n_dms - 1:
        raise InvalidInputError(
            f"N={n_dms} needs {n_dms} models and {n_dms - 1} rates, got "
            f"{len(models)} and {len(rates)}."
        )
    sizes = [2 ** int(rate) for rate in rates]
    cardinality = search_space(models[:-1], sizes)
    if cardinality > budget:
        raise InfeasibleRequestError(
            f"Exhaustive design needs {cardinality} combinations, budget is {budget}.",
            cardinality,
        )

    start_time = time()
    shapes: list[tuple[int, int, int]] = []
    incoming = 1
    for model, size in zip(models, sizes):
        shapes.append((model.alphabet_size, incoming, size))
        incoming = size
    per_dm = [
        itertools.product(range(size), repeat=in_obs * in_msg)
        for in_obs, in_msg, size in shapes
    ]

    best_error = math.inf
    best: tuple[DecisionFunction, ...] = ()
    for tables in itertools.product(*(list(options) for options in per_dm)):
        decisions = tuple(
            DecisionFunction.from_assignment(table, in_obs, in_msg, size)
            for table, (in_obs, in_msg, size) in zip(tables, shapes)
        )
        error = network_error(TandemNetwork(priors, models, decisions))
        if error < best_error:
            best_error, best = error, decisions
    logger.info(
        f"Exhaustive search over {cardinality} combinations: P_E={best_error:.6g} "
        f"in {time() - start_time:.4f} seconds."
    )
    return BruteForceResult(error=best_error, decisions=best, combinations=cardinality)


def _simulate_shard(network: TandemNetwork, trials: int, rng: np.random.Generator) -> int:
    hypotheses = network.hypotheses
    truth = rng.choice(hypotheses, size=trials, p=network.priors.weights)

    def observe(model: DiscreteObservationModel) -> np.ndarray:
        cdf = np.cumsum(model.pmfs, axis=1)
        draws = rng.random(trials)
        samples = np.empty(trials, dtype=np.int64)
        for j in range(hypotheses):
            rows = truth == j
            samples[rows] = np.searchsorted(cdf[j], draws[rows], side="right")
        return np.minimum(samples, model.alphabet_size - 1)

    message = np.zeros(trials, dtype=np.int64)
    for dm, decision in enumerate(network.decisions, start=1):
        x = observe(network.observation_models[dm - 1])
        message = decision.table[x, message]

    fc_model = network.observation_models[-1]
    x_fc = observe(fc_model)
    if network.size == 1:
        likelihoods = fc_model.pmfs[:, x_fc]
    else:
        incoming = forward_q(network, network.size - 1).vectors
        likelihoods = fc_model.pmfs[:, x_fc] * incoming[:, message]
    decided = np.argmax(network.priors.weights[:, None] * likelihoods, axis=0)
    return int(np.count_nonzero(decided != truth))


def monte_carlo_error(
    network: TandemNetwork, trials: int, seed: int, shards: int = MONTE_CARLO_SHARDS
) -> MonteCarloResult:
    """Empirical FC error with an exact (Clopper-Pearson) 99% interval.

    Observations are drawn from the discretized PMFs, so the estimate targets
    exactly the quantity ``network_error`` computes.
    """
    if trials < MIN_TRIALS:
        raise InvalidInputError(f"Need at least {MIN_TRIALS} trials, got {trials}.")
    if shards < 1:
        raise InvalidInputError(f"Need at least one shard, got {shards}.")
    start_time = time()
    sizes = [trials // shards + (1 if k < trials % shards else 0) for k in range(shards)]
    children = np.random.SeedSequence(seed).spawn(shards)
    errors = sum(
        _simulate_shard(network, size, np.random.default_rng(child))
        for size, child in zip(sizes, children)
        if size
    )
    interval = binomtest(errors, trials).proportion_ci(
        confidence_level=CONFIDENCE, method="exact"
    )
    logger.info(
        f"Monte Carlo over {trials} trials ({shards} shards): {errors} errors "
        f"in {time() - start_time:.4f} seconds."
    )
    return MonteCarloResult(
        errors=errors,
        trials=trials,
        ci_low=float(interval.low),
        ci_high=float(interval.high),
    )
