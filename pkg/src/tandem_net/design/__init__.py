from . import network, restricted
from .network import (
    DesignConfig,
    MultiplicationCount,
    NetworkDesign,
    design_network,
    initialize_network,
    multiplication_count,
)
from .restricted import (
    DesignState,
    RestrictedModel,
    SweepReport,
    build_restricted_model,
    candidate_score,
    candidate_scores,
    design_dm,
    informative_start,
    reassign_input,
    restricted_error,
    run_design_sweeps,
    spread_decision,
)

__all__ = [
    "DesignConfig",
    "DesignState",
    "MultiplicationCount",
    "NetworkDesign",
    "RestrictedModel",
    "SweepReport",
    "build_restricted_model",
    "candidate_score",
    "candidate_scores",
    "design_dm",
    "design_network",
    "informative_start",
    "initialize_network",
    "multiplication_count",
    "network",
    "reassign_input",
    "restricted",
    "restricted_error",
    "run_design_sweeps",
    "spread_decision",
]
