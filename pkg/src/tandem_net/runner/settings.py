"""Loading and validation of the YAML experiment file."""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, get_args, get_type_hints

import yaml

from ..config import (
    DEFAULT_BINS,
    DEFAULT_ETA,
    DEFAULT_INTERVAL_PAD,
    DEFAULT_ITERATIONS,
    MONTE_CARLO_SHARDS,
)
from ..custom_types import BaselineName, ExperimentFile, ExperimentKind
from ..errors import ConfigError

logger = logging.getLogger(__name__)

KINDS: tuple[str, ...] = get_args(ExperimentKind)
BASELINES: tuple[str, ...] = get_args(BaselineName)
SECTION_KEYS: dict[str, frozenset[str]] = {
    name: frozenset(get_type_hints(section))
    for name, section in get_type_hints(ExperimentFile).items()
}


@dataclass(frozen=True)
class ExperimentSettings:
    kind: str
    series: tuple[str, ...] = ()
    traces: bool = False
    hypotheses: int = 2
    snr_db: tuple[float, ...] = (-10.0,)
    bins: int = DEFAULT_BINS
    interval_pad: float = DEFAULT_INTERVAL_PAD
    n_list: tuple[int, ...] = (1,)
    rates: tuple[int, ...] = ()
    iterations: int = DEFAULT_ITERATIONS
    eta: float = DEFAULT_ETA
    seed: int = 0
    early_stop: bool = False
    trials: int = 1_000_000
    shards: int = MONTE_CARLO_SHARDS
    out_dir: Path = Path("results")
    prefix: str = "run"
    record_timings: bool = False
    source: str = "<memory>"
    text: str = ""
    echo: dict[str, Any] = field(default_factory=dict)

    @property
    def config_sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()

    def overridden(
        self, kind: str | None = None, out_dir: Path | None = None, seed: int | None = None
    ) -> "ExperimentSettings":
        changes: dict[str, Any] = {}
        if kind is not None:
            changes["kind"] = kind
        if out_dir is not None:
            changes["out_dir"] = out_dir
        if seed is not None:
            changes["seed"] = seed
        return replace(self, **changes)


def _line_index(node: yaml.Node, prefix: tuple[str, ...] = ()) -> dict[tuple[str, ...], int]:
    """1-based line of every mapping key, keyed by its dotted path."""
    lines: dict[tuple[str, ...], int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + (str(key_node.value),)
            lines[path] = key_node.start_mark.line + 1
            lines.update(_line_index(value_node, path))
    return lines


class _Reader:
    def __init__(self, data: dict[str, Any], lines: dict[tuple[str, ...], int], source: str):
        self.data = data
        self.lines = lines
        self.source = source

    def error(self, path: tuple[str, ...], message: str) -> ConfigError:
        line = None
        for depth in range(len(path), 0, -1):
            line = self.lines.get(path[:depth])
            if line is not None:
                break
        return ConfigError(f"{'.'.join(path)}: {message}", self.source, line)

    def section(self, name: str) -> dict[str, Any]:
        value = self.data.get(name, {})
        if value is None:
            return {}
        if not isinstance(value, dict):
            raise self.error((name,), "must be a mapping")
        unknown = sorted(str(key) for key in value if key not in SECTION_KEYS[name])
        if unknown:
            expected = ", ".join(sorted(SECTION_KEYS[name]))
            raise self.error((name, unknown[0]), f"unknown key; expected one of {expected}")
        return value

    def get(self, section: str, key: str, default: Any) -> Any:
        return self.section(section).get(key, default)

    def integer(self, section: str, key: str, default: int, minimum: int | None = None) -> int:
        value = self.get(section, key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error((section, key), f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            raise self.error((section, key), f"must be >= {minimum}, got {value}")
        return value

    def number(self, section: str, key: str, default: float) -> float:
        value = self.get(section, key, default)
        # PyYAML reads exponent literals without a dot (1e-6) as strings.
        try:
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        except (TypeError, ValueError):
            raise self.error((section, key), f"expected a number, got {value!r}") from None

    def flag(self, section: str, key: str, default: bool) -> bool:
        value = self.get(section, key, default)
        if not isinstance(value, bool):
            raise self.error((section, key), f"expected true or false, got {value!r}")
        return value

    def int_list(
        self, section: str, key: str, default: list[int], minimum: int, allow_empty: bool = False
    ) -> tuple[int, ...]:
        value = self.get(section, key, default)
        if isinstance(value, str) and "-" in value:
            first, _, last = value.partition("-")
            try:
                low, high = int(first), int(last)
            except ValueError:
                raise self.error((section, key), f"bad range {value!r}") from None
            if low > high:
                raise self.error((section, key), f"range {value!r} runs backwards")
            value = list(range(low, high + 1))
        if isinstance(value, int) and not isinstance(value, bool):
            value = [value]
        if not isinstance(value, list) or not all(
            isinstance(item, int) and not isinstance(item, bool) for item in value
        ):
            raise self.error((section, key), f"expected a list of integers, got {value!r}")
        if not value and not allow_empty:
            raise self.error((section, key), "needs at least one entry")
        if any(item < minimum for item in value):
            raise self.error((section, key), f"every entry must be >= {minimum}")
        return tuple(value)


def parse_settings(text: str, source: str = "<memory>") -> ExperimentSettings:
    """Validate the experiment file text; errors name ``source:line``."""
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"invalid YAML: {getattr(e, 'problem', e)}", source, line) from e
    if data is None:
        data, root = {}, None
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping", source, 1)

    reader = _Reader(data, _line_index(root) if root is not None else {}, source)
    unknown = set(data) - {"experiment", "model", "network", "montecarlo", "output"}
    if unknown:
        name = sorted(unknown)[0]
        raise reader.error((name,), "unknown section")

    kind = reader.get("experiment", "kind", "design")
    if kind not in KINDS:
        raise reader.error(("experiment", "kind"), f"must be one of {', '.join(KINDS)}")
    series = reader.get("experiment", "series", [])
    if series is None:
        series = []
    if not isinstance(series, list) or any(item not in BASELINES for item in series):
        raise reader.error(
            ("experiment", "series"), f"expected a list drawn from {', '.join(BASELINES)}"
        )

    hypotheses = reader.integer("model", "M", 2, minimum=2)
    if hypotheses != 2 and {"swaszek", "cover"} & set(series):
        raise reader.error(
            ("experiment", "series"), "rate-one baselines are defined for M = 2 only"
        )
    raw_snr = reader.get("model", "snr_db", -10.0)
    snr_values = raw_snr if isinstance(raw_snr, list) else [raw_snr]
    try:
        snr_db = tuple(float(value) for value in snr_values)
    except (TypeError, ValueError):
        raise reader.error(("model", "snr_db"), f"expected numbers, got {raw_snr!r}") from None
    if not snr_db:
        raise reader.error(("model", "snr_db"), "needs at least one value")
    if len(set(snr_db)) != len(snr_db):
        raise reader.error(("model", "snr_db"), f"repeated values in {list(snr_db)}")

    interval_pad = reader.number("model", "interval_pad", DEFAULT_INTERVAL_PAD)
    if not interval_pad > 0:
        raise reader.error(("model", "interval_pad"), "must be positive")
    eta = reader.number("network", "eta", DEFAULT_ETA)
    if not eta > 0:
        raise reader.error(("network", "eta"), "must be positive")
    rates = reader.int_list("network", "rates", [], minimum=1, allow_empty=True)
    if kind != "baseline" and not rates and not series:
        logger.warning(f"{source}: no rates and no series requested; manifest only.")

    prefix = reader.get("output", "prefix", "run")
    if not isinstance(prefix, str) or not prefix:
        raise reader.error(("output", "prefix"), "must be a non-empty string")
    out_dir = reader.get("output", "dir", "results")
    if not isinstance(out_dir, str):
        raise reader.error(("output", "dir"), "must be a path string")

    return ExperimentSettings(
        kind=kind,
        series=tuple(series),
        traces=reader.flag("experiment", "traces", False),
        hypotheses=hypotheses,
        snr_db=snr_db,
        bins=reader.integer("model", "bins", DEFAULT_BINS, minimum=2),
        interval_pad=interval_pad,
        n_list=reader.int_list("network", "N_list", [1], minimum=1),
        rates=rates,
        iterations=reader.integer("network", "K", DEFAULT_ITERATIONS, minimum=1),
        eta=eta,
        seed=reader.integer("network", "seed", 0, minimum=0),
        early_stop=reader.flag("network", "early_stop", False),
        trials=reader.integer("montecarlo", "trials", 1_000_000, minimum=10_000),
        shards=reader.integer("montecarlo", "shards", MONTE_CARLO_SHARDS, minimum=1),
        out_dir=Path(out_dir),
        prefix=prefix,
        record_timings=reader.flag("output", "record_timings", False),
        source=source,
        text=text,
        echo=data,
    )


def load_settings(path: Path) -> ExperimentSettings:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}", str(path)) from e
    settings = parse_settings(text, str(path))
    logger.info(f"Loaded {settings.kind} experiment from {path} ({settings.config_sha256[:12]}).")
    return settings
