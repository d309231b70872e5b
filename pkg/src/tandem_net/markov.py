"""Transition matrices of the DM chain and propagation of message distributions."""

import logging

import numpy as np

from .errors import InvalidInputError, InvalidNetworkError
from .model import (
    DecisionFunction,
    DiscreteObservationModel,
    FloatArray,
    HypothesisMatrix,
    MessageDistribution,
    TandemNetwork,
    bayes_error,
)

logger = logging.getLogger(__name__)

_BACKWARD_CACHE_KEY = "backward_products"
_FORWARD_CACHE_KEY = "forward_chain"


def dm_transition_matrix(
    decision: DecisionFunction, observation_model: DiscreteObservationModel
) -> HypothesisMatrix:
    """``P_j(u_k = m | u_{k-1} = n)``: mass of the observations that ``decision`` maps n -> m."""
    if decision.in_obs != observation_model.alphabet_size:
        raise InvalidNetworkError(
            f"Decision table covers {decision.in_obs} observations, model has "
            f"{observation_model.alphabet_size}."
        )
    one_hot = (decision.table[:, :, None] == np.arange(decision.out_msg)).astype(
        np.float64
    )
    entries = np.einsum("jx,xnm->jmn", observation_model.pmfs, one_hot)
    return HypothesisMatrix(entries)


def backward_products(network: TandemNetwork) -> list[HypothesisMatrix]:
    """Channels ``P^{l -> N-1}_j`` for every designable DM.

    Element ``l - 1`` holds the product for DM ``l``; the list is built by the
    descending recursion ``P^{l -> N-1} = P^{l+1 -> N-1} x P^{l+1}`` starting from
    the identity at ``l = N - 1``, and cached on the network.
    """
    cached = network.cache.get(_BACKWARD_CACHE_KEY)
    if cached is not None:
        return list(cached)

    n_designable = network.size - 1
    if n_designable == 0:
        return []

    products: list[HypothesisMatrix] = [
        HypothesisMatrix.identity(network.hypotheses, network.alphabet_sizes[-1])
    ]
    for dm in range(n_designable - 1, 0, -1):
        successor = dm + 1
        step = dm_transition_matrix(
            network.decisions[successor - 1], network.observation_models[successor - 1]
        )
        if step.rows != network.alphabet_sizes[successor - 1] or step.cols != (
            network.alphabet_sizes[dm - 1]
        ):
            raise InvalidNetworkError(
                f"DM {successor} transition shape {step.rows}x{step.cols} breaks the chain."
            )
        products.append(products[-1] @ step)
    products.reverse()
    network.cache[_BACKWARD_CACHE_KEY] = tuple(products)
    logger.debug(f"Computed {len(products)} backward products for N={network.size}.")
    return products


def forward_chain(network: TandemNetwork) -> list[MessageDistribution]:
    """Message distributions ``q^1 .. q^{N-1}`` in one forward pass (cached)."""
    cached = network.cache.get(_FORWARD_CACHE_KEY)
    if cached is not None:
        return list(cached)

    chain: list[MessageDistribution] = []
    incoming = MessageDistribution(np.ones((network.hypotheses, 1)))
    for dm, decision in enumerate(network.decisions, start=1):
        step = dm_transition_matrix(decision, network.observation_models[dm - 1])
        incoming = step.apply(incoming)
        chain.append(incoming)
    network.cache[_FORWARD_CACHE_KEY] = tuple(chain)
    return chain


def forward_q(network: TandemNetwork, up_to: int) -> MessageDistribution:
    """Distribution ``q^{up_to}`` of the messages leaving DM ``up_to`` (1-based)."""
    if not 1 <= up_to <= network.size - 1:
        raise InvalidInputError(
            f"DM index {up_to} out of range 1..{network.size - 1} for N={network.size}."
        )
    return forward_chain(network)[up_to - 1]


def fc_joint_pmf(
    incoming: MessageDistribution, observation_model: DiscreteObservationModel
) -> FloatArray:
    """FC input PMFs ``P_j(x_N) P_j(u_{N-1})``, shape (M, |X_N|, |M_{N-1}|)."""
    if incoming.vectors.shape[0] != observation_model.hypotheses:
        raise InvalidInputError(
            f"Message distribution has {incoming.vectors.shape[0]} hypotheses, FC "
            f"model has {observation_model.hypotheses}."
        )
    return np.einsum("jx,ju->jxu", observation_model.pmfs, incoming.vectors)


def network_error(network: TandemNetwork) -> float:
    """Bayes error of the FC decision for the network as currently designed."""
    fc_model = network.observation_models[-1]
    if network.size == 1:
        return bayes_error(fc_model.pmfs, network.priors)
    incoming = forward_q(network, network.size - 1)
    return bayes_error(fc_joint_pmf(incoming, fc_model), network.priors)
