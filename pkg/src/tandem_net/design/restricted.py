"""Design of a single DM inside its restricted model.

DM ``l`` sees the composite input ``y = (x_l, u_{l-1})``, the FC sees ``x_N``,
and everything between them collapses into the per-hypothesis channel
``P^{l -> N-1}_j``. The DM table is improved one input at a time; after every
reassignment only two masses of ``q_j`` move (rank-1 update).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from time import time

import numpy as np

from ..errors import InvalidInputError
from ..markov import backward_products, forward_q
from ..model import (
    INGEST_TOL,
    DecisionFunction,
    FloatArray,
    HypothesisMatrix,
    IntArray,
    MessageDistribution,
    Priors,
    TandemNetwork,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RestrictedModel:
    """Two-node equivalent of the tandem network for designing one DM."""

    obs_pmf: FloatArray  # (M, |Y_l|), inputs in lexicographic (x, u) order
    fc_pmf: FloatArray  # (M, |X_N|)
    channel: HypothesisMatrix  # (M, |M_{N-1}|, |M_l|)
    priors: Priors
    out_alphabet: int
    in_obs: int
    in_msg: int

    def __post_init__(self) -> None:
        hypotheses = self.priors.hypotheses
        if self.obs_pmf.shape != (hypotheses, self.in_obs * self.in_msg):
            raise InvalidInputError(
                f"Composite input PMF shape {self.obs_pmf.shape} does not match "
                f"{hypotheses} x ({self.in_obs} * {self.in_msg})."
            )
        if self.fc_pmf.ndim != 2 or self.fc_pmf.shape[0] != hypotheses:
            raise InvalidInputError(f"FC PMF shape {self.fc_pmf.shape} is invalid.")
        if self.channel.hypotheses != hypotheses or self.channel.cols != (
            self.out_alphabet
        ):
            raise InvalidInputError(
                f"Channel of shape {self.channel.entries.shape} cannot carry "
                f"{self.out_alphabet} messages."
            )
        for name, pmf in (("composite input", self.obs_pmf), ("FC", self.fc_pmf)):
            if np.any(np.abs(pmf.sum(axis=1) - 1.0) > INGEST_TOL):
                raise InvalidInputError(f"The {name} PMF is not normalized.")

    @property
    def inputs(self) -> int:
        return int(self.obs_pmf.shape[1])

    @cached_property
    def weighted_fc(self) -> FloatArray:
        return self.priors.weights[:, None] * self.fc_pmf


@dataclass
class DesignState:
    """Mutable working copy of one DM's table while it is being optimized."""

    assignment: IntArray
    q: FloatArray
    error: float

    @classmethod
    def start(cls, model: RestrictedModel, decision: DecisionFunction) -> "DesignState":
        if (decision.in_obs, decision.in_msg, decision.out_msg) != (
            model.in_obs,
            model.in_msg,
            model.out_alphabet,
        ):
            raise InvalidInputError(
                "Initial decision function does not match the restricted model: "
                f"{decision.table.shape} -> {decision.out_msg} vs "
                f"({model.in_obs}, {model.in_msg}) -> {model.out_alphabet}."
            )
        assignment = decision.assignment.copy()
        q = message_masses(model, assignment)
        return cls(assignment, q, restricted_error(model, q))

    def rebuilt_q(self, model: RestrictedModel) -> FloatArray:
        return message_masses(model, self.assignment)

    def distribution(self) -> MessageDistribution:
        return MessageDistribution(np.clip(self.q, 0.0, None))

    def decision(self, model: RestrictedModel) -> DecisionFunction:
        return DecisionFunction.from_assignment(
            self.assignment, model.in_obs, model.in_msg, model.out_alphabet
        )


@dataclass(frozen=True)
class SweepReport:
    decision: DecisionFunction
    sweeps: int
    initial_error: float
    error: float
    trace: list[float] = field(default_factory=list)


def build_restricted_model(
    network: TandemNetwork,
    dm: int,
    products: list[HypothesisMatrix] | None = None,
    incoming: MessageDistribution | None = None,
) -> RestrictedModel:
    """Restricted model of DM ``dm`` (1-based).

    ``products`` and ``incoming`` may be supplied by a caller that already holds
    the backward products and ``q^{dm-1}``; otherwise they are computed.
    """
    if not 1 <= dm <= network.size - 1:
        raise InvalidInputError(
            f"DM {dm} has no restricted model in a network of {network.size} DMs; "
            "the FC always applies the MAP rule."
        )
    channels = products if products is not None else backward_products(network)
    hypotheses = network.hypotheses
    if dm == 1:
        q_in = np.ones((hypotheses, 1))
    else:
        q_in = (incoming if incoming is not None else forward_q(network, dm - 1)).vectors
    observation = network.observation_models[dm - 1]
    obs_pmf = np.einsum("jx,ju->jxu", observation.pmfs, q_in).reshape(hypotheses, -1)
    return RestrictedModel(
        obs_pmf=obs_pmf,
        fc_pmf=network.observation_models[-1].pmfs,
        channel=channels[dm - 1],
        priors=network.priors,
        out_alphabet=network.alphabet_sizes[dm - 1],
        in_obs=observation.alphabet_size,
        in_msg=int(q_in.shape[1]),
    )


def message_masses(model: RestrictedModel, assignment: IntArray) -> FloatArray:
    """``q_j(m)``: total mass of the inputs assigned to message ``m``."""
    return np.stack(
        [
            np.bincount(assignment, weights=pmf, minlength=model.out_alphabet)
            for pmf in model.obs_pmf
        ]
    )


def _success_probabilities(model: RestrictedModel, received: FloatArray) -> FloatArray:
    """``sum_{y_N, u_{N-1}} max_j pi_j P_j(y_N) P_j(u_{N-1})`` for each column set.

    ``received`` has shape (M, |M_{N-1}|, K) and holds K candidate PMFs of
    ``u_{N-1}``; the result has length K.
    """
    joint = model.weighted_fc[:, :, None, None] * received[:, None, :, :]
    return joint.max(axis=0).sum(axis=(0, 1))


def _received(model: RestrictedModel, q: FloatArray) -> FloatArray:
    # <q_j, r_{j,m}> for every hypothesis j and FC input message m
    return np.einsum("jmv,jv->jm", model.channel.entries, q)


def restricted_error(model: RestrictedModel, q: FloatArray) -> float:
    """Error probability of the restricted model when DM l emits ``q``."""
    return float(1.0 - _success_probabilities(model, _received(model, q)[:, :, None])[0])


def candidate_scores(state: DesignState, model: RestrictedModel, y: int) -> FloatArray:
    """``1 - P_E`` for every index input ``y`` could be reassigned to."""
    rows = model.channel.entries
    incumbent = int(state.assignment[y])
    mass = model.obs_pmf[:, y]
    delta = mass[:, None, None] * (rows - rows[:, :, incumbent : incumbent + 1])
    received = _received(model, state.q)[:, :, None] + delta
    return _success_probabilities(model, received)


def candidate_score(
    state: DesignState, model: RestrictedModel, y: int, candidate: int
) -> float:
    return float(candidate_scores(state, model, y)[candidate])


def spread_decision(model: RestrictedModel, incumbent: DecisionFunction) -> DecisionFunction:
    """Equal-mass table over the inputs ranked by their posterior mean hypothesis index.

    For M = 2 the ranking is the likelihood ratio, so the result is a threshold
    quantizer with cells of equal probability. Zero-mass inputs keep their
    incumbent index.
    """
    joint = model.priors.weights[:, None] * model.obs_pmf
    mass = joint.sum(axis=0)
    statistic = np.arange(model.priors.hypotheses) @ joint / np.where(mass > 0, mass, 1.0)
    order = np.argsort(statistic, kind="stable")
    centre = np.cumsum(mass[order]) - mass[order] / 2
    cells = np.minimum((centre * model.out_alphabet).astype(np.int64), model.out_alphabet - 1)
    assignment = np.empty(model.inputs, dtype=np.int64)
    assignment[order] = cells
    assignment = np.where(mass > 0, assignment, incumbent.assignment)
    return DecisionFunction.from_assignment(
        assignment, model.in_obs, model.in_msg, model.out_alphabet
    )


def informative_start(model: RestrictedModel, incumbent: DecisionFunction) -> DecisionFunction:
    """The better of ``incumbent`` and its equal-mass spread, by restricted error."""
    spread = spread_decision(model, incumbent)
    if DesignState.start(model, spread).error < DesignState.start(model, incumbent).error:
        return spread
    return incumbent


def reassign_input(state: DesignState, model: RestrictedModel, y: int) -> DesignState:
    """Move input ``y`` to its best index; the incumbent wins every tie."""
    mass = model.obs_pmf[:, y]
    if not np.any(mass > 0):
        return state
    scores = candidate_scores(state, model, y)
    incumbent = int(state.assignment[y])
    best = int(np.argmax(scores))
    if scores[best] > scores[incumbent]:
        state.q[:, incumbent] -= mass
        state.q[:, best] += mass
        state.assignment[y] = best
        state.error = float(1.0 - scores[best])
    return state


def run_design_sweeps(
    model: RestrictedModel, initial: DecisionFunction, eta: float
) -> SweepReport:
    """Sweep all inputs until one full sweep improves the error by at most ``eta``.

    After each sweep the error is re-read as the incumbent's candidate score,
    which equals ``restricted_error`` of the current ``q``.
    """
    if not eta > 0:
        raise InvalidInputError(f"Improvement threshold must be positive, got {eta}.")
    start_time = time()
    state = DesignState.start(model, initial)
    initial_error = state.error
    active = np.flatnonzero(np.any(model.obs_pmf > 0, axis=0))
    trace: list[float] = []
    improvement = np.inf
    while improvement > eta:
        previous = state.error
        for y in active:
            reassign_input(state, model, int(y))
        anchor = int(active[0])
        state.error = 1.0 - candidate_score(state, model, anchor, int(state.assignment[anchor]))
        improvement = previous - state.error
        trace.append(state.error)
    elapsed = time() - start_time
    logger.debug(
        f"Restricted design converged after {len(trace)} sweeps over "
        f"{active.size}/{model.inputs} inputs: P_E {initial_error:.6g} -> "
        f"{state.error:.6g} in {elapsed:.4f} seconds."
    )
    return SweepReport(
        decision=state.decision(model),
        sweeps=len(trace),
        initial_error=initial_error,
        error=state.error,
        trace=trace,
    )


def design_dm(model: RestrictedModel, initial: DecisionFunction, eta: float) -> DecisionFunction:
    return run_design_sweeps(model, initial, eta).decision
