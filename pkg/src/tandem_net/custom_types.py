from typing import Any, Literal, Optional, TypedDict

ExperimentKind = Literal["design", "baseline", "oracle", "montecarlo"]
BaselineName = Literal["swaszek", "cover", "linear"]


class ExperimentSection(TypedDict, total=False):
    kind: ExperimentKind
    series: list[BaselineName]  # closed-form curves written next to designed ones
    traces: bool  # one series per outer iteration instead of the final curve


class ModelSection(TypedDict, total=False):
    M: int
    snr_db: float | list[float]
    bins: int
    interval_pad: float


class NetworkSection(TypedDict, total=False):
    N_list: list[int] | str  # explicit list or an inclusive range "1-20"
    rates: list[int]
    K: int
    eta: float
    seed: int
    early_stop: bool


class MonteCarloSection(TypedDict, total=False):
    trials: int
    shards: int


class OutputSection(TypedDict, total=False):
    dir: str
    prefix: str
    record_timings: bool


class ExperimentFile(TypedDict, total=False):
    experiment: ExperimentSection
    model: ModelSection
    network: NetworkSection
    montecarlo: MonteCarloSection
    output: OutputSection


class CurveRow(TypedDict):
    N: int
    series: str
    log10_pe: float
    pe: float
    iterations_used: int
    wall_ms: int


class MultiplicationRecord(TypedDict):
    exact: int
    dominant: int
    sweeps: int


class CellRecord(TypedDict, total=False):
    series: str
    snr_db: float
    N: int
    rate: Optional[int]
    error: float
    trace: list[float]
    dm_errors: list[list[float]]
    sweeps: list[list[int]]
    multiplications: MultiplicationRecord
    seconds_per_iteration: list[float]
    oracle_error: float
    monte_carlo: dict[str, Any]
    wall_ms: float


class ManifestDocument(TypedDict):
    library_version: str
    kind: ExperimentKind
    seed: int
    config_path: str
    config_sha256: str
    config: dict[str, Any]
    series: dict[str, str]  # series name -> CSV file name
    cells: list[CellRecord]
    summary: dict[str, Any]
