from . import artifacts, experiments, settings
from .artifacts import sanitize_filename, write_artifacts, write_curve
from .experiments import ExperimentResult, run_experiment
from .settings import ExperimentSettings, load_settings, parse_settings

__all__ = [
    "ExperimentResult",
    "ExperimentSettings",
    "artifacts",
    "experiments",
    "load_settings",
    "parse_settings",
    "run_experiment",
    "sanitize_filename",
    "settings",
    "write_artifacts",
    "write_curve",
]
