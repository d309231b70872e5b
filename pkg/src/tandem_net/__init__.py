__version__ = "0.1.0"

from . import (
    baselines,
    cli,
    config,
    design,
    errors,
    gaussian,
    markov,
    model,
    oracle,
    runner,
)
from .custom_types import (
    CellRecord,
    CurveRow,
    ExperimentFile,
    ExperimentKind,
    ManifestDocument,
)
from .errors import (
    ConfigError,
    InfeasibleRequestError,
    InvalidInputError,
    InvalidNetworkError,
    InvariantViolationError,
    TandemNetError,
)
from .model import (
    DecisionFunction,
    DiscreteObservationModel,
    HypothesisMatrix,
    MessageDistribution,
    Priors,
    TandemNetwork,
    bayes_error,
    map_decision,
)

__all__ = [
    "__version__",
    # Custom types
    "CellRecord",
    "CurveRow",
    "ExperimentFile",
    "ExperimentKind",
    "ManifestDocument",
    # Errors
    "ConfigError",
    "InfeasibleRequestError",
    "InvalidInputError",
    "InvalidNetworkError",
    "InvariantViolationError",
    "TandemNetError",
    # Core model
    "DecisionFunction",
    "DiscreteObservationModel",
    "HypothesisMatrix",
    "MessageDistribution",
    "Priors",
    "TandemNetwork",
    "bayes_error",
    "map_decision",
    # Modules & Sub-packages
    "baselines",
    "cli",
    "config",
    "design",
    "errors",
    "gaussian",
    "markov",
    "model",
    "oracle",
    "runner",
]
