"""Domain types of a tandem network and the Bayes error functional.

Message and observation indices are 0-based throughout: message ``m`` of the
text corresponds to array index ``m - 1``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import numpy.typing as npt

from .errors import InvalidInputError, InvalidNetworkError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

PRIOR_TOL = 1e-12
# Discretized inputs carry truncation error; internally produced vectors do not.
INGEST_TOL = 1e-9
INTERNAL_TOL = 1e-10


def _frozen(values: Any, dtype: type = np.float64) -> Any:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Priors:
    """A-priori hypothesis probabilities."""

    weights: FloatArray

    def __post_init__(self) -> None:
        weights = _frozen(self.weights)
        if weights.ndim != 1 or weights.size < 2:
            raise InvalidInputError(
                f"Priors need at least two hypotheses, got shape {weights.shape}."
            )
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > PRIOR_TOL:
            raise InvalidInputError(
                f"Priors must be nonnegative and sum to 1, got {weights.tolist()}."
            )
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, hypotheses: int) -> "Priors":
        return cls(np.full(hypotheses, 1.0 / hypotheses))

    @property
    def hypotheses(self) -> int:
        return int(self.weights.size)


@dataclass(frozen=True, eq=False)
class DiscreteObservationModel:
    """Per-hypothesis PMFs over a finite observation alphabet, shape (M, |X|)."""

    pmfs: FloatArray

    def __post_init__(self) -> None:
        pmfs = _frozen(self.pmfs)
        if pmfs.ndim != 2 or pmfs.shape[0] < 2 or pmfs.shape[1] < 1:
            raise InvalidInputError(
                f"Observation PMFs must have shape (M >= 2, |X| >= 1), got {pmfs.shape}."
            )
        _check_pmfs(pmfs, INGEST_TOL, "observation PMF")
        object.__setattr__(self, "pmfs", pmfs)

    @property
    def hypotheses(self) -> int:
        return int(self.pmfs.shape[0])

    @property
    def alphabet_size(self) -> int:
        return int(self.pmfs.shape[1])


@dataclass(frozen=True, eq=False)
class DecisionFunction:
    """Index assignment ``table[x, u] -> outgoing message`` of one DM.

    DM 1 has no incoming message, so its table has a single column.
    """

    table: IntArray
    out_msg: int

    def __post_init__(self) -> None:
        table = _frozen(self.table, np.int64)
        if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
            raise InvalidInputError(
                f"Decision table must be 2-D and non-empty, got shape {table.shape}."
            )
        if self.out_msg < 1:
            raise InvalidInputError(f"Output alphabet must be non-empty: {self.out_msg}")
        if np.any(table < 0) or np.any(table >= self.out_msg):
            raise InvalidInputError(
                f"Decision table entries must lie in [0, {self.out_msg})."
            )
        object.__setattr__(self, "table", table)

    @property
    def in_obs(self) -> int:
        return int(self.table.shape[0])

    @property
    def in_msg(self) -> int:
        return int(self.table.shape[1])

    @property
    def assignment(self) -> IntArray:
        """Flattened table in lexicographic (x, then u) input order."""
        return self.table.reshape(-1)

    @classmethod
    def from_assignment(
        cls, assignment: Sequence[int] | IntArray, in_obs: int, in_msg: int, out_msg: int
    ) -> "DecisionFunction":
        table = np.asarray(assignment, dtype=np.int64).reshape(in_obs, in_msg)
        return cls(table, out_msg)

    @classmethod
    def passthrough(cls, in_obs: int, in_msg: int, out_msg: int) -> "DecisionFunction":
        """Forward the incoming message, clamped into the output alphabet."""
        row = np.minimum(np.arange(in_msg), out_msg - 1)
        return cls(np.tile(row, (in_obs, 1)), out_msg)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecisionFunction):
            return NotImplemented
        return self.out_msg == other.out_msg and np.array_equal(self.table, other.table)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class HypothesisMatrix:
    """Column-stochastic transition matrices, shape (M, rows, cols).

    Entry ``[j, m, n]`` is ``P_j(u_k = m | u_{k-1} = n)``.
    """

    entries: FloatArray

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        if entries.ndim != 3:
            raise InvalidInputError(
                f"Transition matrices must have shape (M, rows, cols), got {entries.shape}."
            )
        if np.any(entries < -INTERNAL_TOL) or np.any(entries > 1 + INTERNAL_TOL):
            raise InvalidInputError("Transition probabilities must lie in [0, 1].")
        if np.any(np.abs(entries.sum(axis=1) - 1.0) > INTERNAL_TOL):
            raise InvalidInputError("Transition matrices must be column-stochastic.")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, hypotheses: int, size: int) -> "HypothesisMatrix":
        return cls(np.broadcast_to(np.eye(size), (hypotheses, size, size)))

    @property
    def hypotheses(self) -> int:
        return int(self.entries.shape[0])

    @property
    def rows(self) -> int:
        return int(self.entries.shape[1])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[2])

    def __matmul__(self, other: "HypothesisMatrix") -> "HypothesisMatrix":
        if self.cols != other.rows or self.hypotheses != other.hypotheses:
            raise InvalidNetworkError(
                f"Cannot chain {self.rows}x{self.cols} after {other.rows}x{other.cols}."
            )
        return HypothesisMatrix(self.entries @ other.entries)

    def apply(self, distribution: "MessageDistribution") -> "MessageDistribution":
        """Propagate ``q_j`` through the matrix of hypothesis ``j``."""
        if distribution.size != self.cols:
            raise InvalidNetworkError(
                f"Distribution over {distribution.size} messages cannot enter a "
                f"channel with {self.cols} inputs."
            )
        return MessageDistribution(
            np.einsum("jmn,jn->jm", self.entries, distribution.vectors)
        )


@dataclass(frozen=True, eq=False)
class MessageDistribution:
    """Per-hypothesis probability-mass vectors over a message alphabet."""

    vectors: FloatArray

    def __post_init__(self) -> None:
        vectors = _frozen(self.vectors)
        if vectors.ndim != 2:
            raise InvalidInputError(
                f"Message distribution must have shape (M, |M|), got {vectors.shape}."
            )
        _check_pmfs(vectors, INTERNAL_TOL, "message distribution")
        object.__setattr__(self, "vectors", vectors)

    @property
    def size(self) -> int:
        return int(self.vectors.shape[1])


@dataclass(frozen=True, eq=False)
class TandemNetwork:
    """An ordered chain of N DMs; the last one applies the MAP rule.

    ``decisions[l - 1]`` is the table of DM ``l`` for ``l = 1 .. N-1`` and
    ``alphabet_sizes[l - 1]`` its output alphabet size.
    """

    priors: Priors
    observation_models: tuple[DiscreteObservationModel, ...]
    decisions: tuple[DecisionFunction, ...]
    cache: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        models = tuple(self.observation_models)
        decisions = tuple(self.decisions)
        object.__setattr__(self, "observation_models", models)
        object.__setattr__(self, "decisions", decisions)
        if not models:
            raise InvalidNetworkError("A tandem network needs at least one DM.")
        if len(decisions) != len(models) - 1:
            raise InvalidNetworkError(
                f"{len(models)} DMs need {len(models) - 1} decision functions, "
                f"got {len(decisions)}."
            )
        for index, model in enumerate(models, start=1):
            if model.hypotheses != self.priors.hypotheses:
                raise InvalidNetworkError(
                    f"DM {index} models {model.hypotheses} hypotheses, priors have "
                    f"{self.priors.hypotheses}."
                )
        incoming = 1
        for index, decision in enumerate(decisions, start=1):
            if decision.in_obs != models[index - 1].alphabet_size:
                raise InvalidNetworkError(
                    f"DM {index} table covers {decision.in_obs} observations, its "
                    f"model has {models[index - 1].alphabet_size}."
                )
            if decision.in_msg != incoming:
                raise InvalidNetworkError(
                    f"DM {index} expects {decision.in_msg} incoming messages, its "
                    f"predecessor sends {incoming}."
                )
            incoming = decision.out_msg

    @property
    def size(self) -> int:
        return len(self.observation_models)

    @property
    def hypotheses(self) -> int:
        return self.priors.hypotheses

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return tuple(decision.out_msg for decision in self.decisions)

    def with_decision(self, dm: int, decision: DecisionFunction) -> "TandemNetwork":
        """Copy of the network with DM ``dm`` (1-based) replaced; cache is dropped."""
        if not 1 <= dm <= len(self.decisions):
            raise InvalidInputError(f"DM index {dm} out of range 1..{len(self.decisions)}.")
        decisions = list(self.decisions)
        decisions[dm - 1] = decision
        return TandemNetwork(self.priors, self.observation_models, tuple(decisions))


def _check_pmfs(pmfs: FloatArray, tol: float, what: str) -> None:
    if not np.all(np.isfinite(pmfs)):
        raise InvalidInputError(f"Every {what} must be finite.")
    if np.any(pmfs < -tol):
        raise InvalidInputError(f"Every {what} must be nonnegative.")
    sums = pmfs.sum(axis=tuple(range(1, pmfs.ndim)))
    if np.any(np.abs(sums - 1.0) > tol):
        raise InvalidInputError(
            f"Every {what} must sum to 1 within {tol:g}, got sums {sums.tolist()}."
        )


def bayes_error(joint_pmfs: npt.ArrayLike, priors: Priors) -> float:
    """Minimal error probability ``1 - sum_z max_j pi_j P(z | H_j)``.

    ``joint_pmfs`` holds one PMF per hypothesis along axis 0; any trailing
    shape is treated as the flattened alphabet Z.
    """
    pmfs = np.asarray(joint_pmfs, dtype=np.float64)
    if pmfs.ndim < 2 or pmfs.shape[0] != priors.hypotheses:
        raise InvalidInputError(
            f"Expected {priors.hypotheses} joint PMFs, got array of shape {pmfs.shape}."
        )
    flat = pmfs.reshape(priors.hypotheses, -1)
    _check_pmfs(flat, INGEST_TOL, "joint PMF")
    success = float(np.max(priors.weights[:, None] * flat, axis=0).sum())
    return min(max(1.0 - success, 0.0), 1.0)


def map_decision(scores: npt.ArrayLike, priors: Priors) -> int:
    """MAP hypothesis for one outcome; ties (and all-zero scores) go to the lowest index."""
    likelihoods = np.asarray(scores, dtype=np.float64)
    if likelihoods.shape != (priors.hypotheses,):
        raise InvalidInputError(
            f"Expected {priors.hypotheses} likelihoods, got shape {likelihoods.shape}."
        )
    if np.any(likelihoods < 0):
        raise InvalidInputError("Likelihoods must be nonnegative.")
    return int(np.argmax(priors.weights * likelihoods))
