"""Cyclic person-by-person design of a whole tandem network."""

import logging
from dataclasses import dataclass, field
from time import time
from typing import NamedTuple, Sequence

import numpy as np

from ..config import DEFAULT_ETA, DEFAULT_ITERATIONS
from ..errors import InvalidInputError
from ..markov import backward_products, dm_transition_matrix, network_error
from ..model import (
    DecisionFunction,
    DiscreteObservationModel,
    MessageDistribution,
    Priors,
    TandemNetwork,
)
from .restricted import build_restricted_model, informative_start, run_design_sweeps

logger = logging.getLogger(__name__)

# An outer iteration improving less than this counts as stalled.
STALL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DesignConfig:
    """Inputs of the outer design loop. ``rates[l - 1]`` is R_l in bits."""

    n_dms: int
    hypotheses: int
    rates: tuple[int, ...]
    iterations: int = DEFAULT_ITERATIONS
    eta: float = DEFAULT_ETA
    rng_seed: int = 0
    early_stop: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "rates", tuple(int(rate) for rate in self.rates))
        if self.n_dms < 1:
            raise InvalidInputError(f"Need at least one DM, got N={self.n_dms}.")
        if self.hypotheses < 2:
            raise InvalidInputError(f"Need M >= 2 hypotheses, got {self.hypotheses}.")
        if len(self.rates) != self.n_dms - 1:
            raise InvalidInputError(
                f"N={self.n_dms} needs {self.n_dms - 1} rates, got {len(self.rates)}."
            )
        if any(rate < 1 for rate in self.rates):
            raise InvalidInputError(f"Every rate must be at least 1 bit: {self.rates}.")
        if self.iterations < 1:
            raise InvalidInputError(f"K must be at least 1, got {self.iterations}.")
        if not self.eta > 0:
            raise InvalidInputError(f"eta must be positive, got {self.eta}.")

    @classmethod
    def equal_rates(
        cls,
        n_dms: int,
        hypotheses: int,
        rate: int,
        iterations: int = DEFAULT_ITERATIONS,
        eta: float = DEFAULT_ETA,
        rng_seed: int = 0,
        early_stop: bool = False,
    ) -> "DesignConfig":
        return cls(
            n_dms,
            hypotheses,
            (rate,) * max(n_dms - 1, 0),
            iterations=iterations,
            eta=eta,
            rng_seed=rng_seed,
            early_stop=early_stop,
        )

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return tuple(2**rate for rate in self.rates)


@dataclass
class NetworkDesign:
    """Designed network plus the bookkeeping of how it got there.

    ``trace[0]`` is the error of the initialized network and ``trace[k]`` the
    error after outer iteration ``k``. ``dm_errors[k - 1][l - 1]`` and
    ``sweeps[k - 1][l - 1]`` describe DM ``l`` during iteration ``k``.
    """

    network: TandemNetwork
    trace: list[float] = field(default_factory=list)
    dm_errors: list[list[float]] = field(default_factory=list)
    sweeps: list[list[int]] = field(default_factory=list)
    elapsed: list[float] = field(default_factory=list)

    @property
    def error(self) -> float:
        return self.trace[-1]

    @property
    def iterations_used(self) -> int:
        return len(self.trace) - 1

    @property
    def max_sweeps(self) -> int:
        return max((max(row) for row in self.sweeps if row), default=0)


class MultiplicationCount(NamedTuple):
    backward_loop: int
    forward_loop: int
    per_dm: int
    exact: int
    dominant: int


def _resolve_models(
    config: DesignConfig, observation_models: Sequence[DiscreteObservationModel]
) -> tuple[DiscreteObservationModel, ...]:
    models = tuple(observation_models)
    if len(models) == 1 and config.n_dms > 1:
        models = models * config.n_dms
    if len(models) != config.n_dms:
        raise InvalidInputError(
            f"Expected {config.n_dms} observation models (or one shared), got {len(models)}."
        )
    for model in models:
        if model.hypotheses != config.hypotheses:
            raise InvalidInputError(
                f"Observation model has {model.hypotheses} hypotheses, config says "
                f"{config.hypotheses}."
            )
    return models


def initialize_network(
    config: DesignConfig,
    observation_models: Sequence[DiscreteObservationModel],
    priors: Priors | None = None,
) -> TandemNetwork:
    """DM 1 emits one seeded random index whatever it observes; later DMs pass
    their input on, so the initialized error equals the FC's own MAP error.

    When a DM has fewer messages than its predecessor, incoming message ``u``
    is forwarded as ``min(u, |M_l| - 1)``.
    """
    models = _resolve_models(config, observation_models)
    priors = priors if priors is not None else Priors.uniform(config.hypotheses)
    decisions: list[DecisionFunction] = []
    rng = np.random.default_rng(config.rng_seed)  # PCG64
    incoming = 1
    for dm, size in enumerate(config.alphabet_sizes, start=1):
        in_obs = models[dm - 1].alphabet_size
        if dm == 1:
            index = int(rng.integers(0, size))
            decisions.append(DecisionFunction(np.full((in_obs, 1), index), size))
        else:
            decisions.append(DecisionFunction.passthrough(in_obs, incoming, size))
        incoming = size
    return TandemNetwork(priors, models, tuple(decisions))


def design_network(
    config: DesignConfig,
    observation_models: Sequence[DiscreteObservationModel],
    priors: Priors | None = None,
    initial: TandemNetwork | None = None,
) -> NetworkDesign:
    """Run K cycles of restricted-model design over DM 1 .. N-1.

    Each cycle refreshes the backward products once, then designs the DMs in
    increasing order, propagating ``q^l`` forward as it goes. Without an
    ``initial`` network, the first cycle starts every DM from the better of its
    initialized table and an equal-mass threshold table.
    """
    fresh = initial is None
    network = initial if initial is not None else initialize_network(
        config, observation_models, priors
    )
    design = NetworkDesign(network=network, trace=[network_error(network)])
    logger.info(
        f"Designing N={config.n_dms}, M={config.hypotheses}, rates={set(config.rates) or '-'}: "
        f"initial P_E={design.trace[0]:.6g}."
    )
    if config.n_dms == 1:
        return design

    for iteration in range(1, config.iterations + 1):
        start_time = time()
        products = backward_products(network)
        incoming: MessageDistribution | None = None
        dm_errors: list[float] = []
        sweeps: list[int] = []
        for dm in range(1, config.n_dms):
            model = build_restricted_model(network, dm, products, incoming)
            start = network.decisions[dm - 1]
            if fresh and iteration == 1:
                start = informative_start(model, start)
            report = run_design_sweeps(model, start, config.eta)
            network = network.with_decision(dm, report.decision)
            step = dm_transition_matrix(report.decision, network.observation_models[dm - 1])
            incoming = step.apply(
                incoming
                if incoming is not None
                else MessageDistribution(np.ones((config.hypotheses, 1)))
            )
            dm_errors.append(report.error)
            sweeps.append(report.sweeps)
            logger.debug(
                f"Iteration {iteration}, DM {dm}: P_E={report.error:.6g} after "
                f"{report.sweeps} sweeps."
            )
        elapsed = time() - start_time
        design.network = network
        design.trace.append(dm_errors[-1])
        design.dm_errors.append(dm_errors)
        design.sweeps.append(sweeps)
        design.elapsed.append(elapsed)
        logger.info(
            f"Iteration {iteration}/{config.iterations} for N={config.n_dms}: "
            f"P_E={dm_errors[-1]:.6g} in {elapsed:.4f} seconds."
        )
        if config.early_stop and design.trace[-2] - design.trace[-1] < STALL_TOLERANCE:
            logger.info(f"Stopping early after iteration {iteration}: no improvement.")
            break
    return design


def multiplication_count(
    config: DesignConfig, obs_size: int, msg_size: int, sweeps: int
) -> MultiplicationCount:
    """Multiplications in one outer iteration, assuming equal rates and alphabets."""
    if sweeps < 0 or obs_size < 1 or msg_size < 1:
        raise InvalidInputError("Alphabet sizes must be positive and sweeps nonnegative.")
    n, m, x, v, t = config.n_dms, config.hypotheses, obs_size, msg_size, sweeps
    backward_runs = max(n - 2, 0)
    per_dm = 2 * (1 + t) * m * x * v + 3 * m * t * x**2 * v**3 + m * t * x**2 * v**4
    backward_loop = backward_runs * m * v**3
    forward_loop = backward_runs * m * v**2 + max(n - 1, 0) * per_dm
    return MultiplicationCount(
        backward_loop=backward_loop,
        forward_loop=forward_loop,
        per_dm=per_dm,
        exact=backward_loop + forward_loop,
        dominant=n * m * t * x**2 * v**4,
    )
