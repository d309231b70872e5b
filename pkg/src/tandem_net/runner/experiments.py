"""Execution of design / baseline / oracle / Monte Carlo experiment grids."""

import asyncio
import logging
import math
from dataclasses import dataclass, field
from functools import partial
from time import time
from typing import Any, Callable

from ..baselines import cover_curve, linear_detector_error, swaszek_curve
from ..config import MAX_PARALLEL_CELLS
from ..custom_types import CellRecord, CurveRow
from ..design import DesignConfig, NetworkDesign, design_network, multiplication_count
from ..errors import InvariantViolationError
from ..gaussian import GaussianSpec, discretize, snr_to_amplitude
from ..model import DiscreteObservationModel, Priors
from ..oracle import brute_force_design, monte_carlo_error
from .settings import ExperimentSettings

logger = logging.getLogger(__name__)

TRACE_SLACK = 1e-12


@dataclass
class CellOutcome:
    rows: list[CurveRow]
    record: CellRecord


@dataclass
class ExperimentResult:
    rows: list[CurveRow] = field(default_factory=list)
    cells: list[CellRecord] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def series(self) -> list[str]:
        return sorted({row["series"] for row in self.rows})


def _row(n_dms: int, series: str, pe: float, iterations: int, wall_ms: float) -> CurveRow:
    return {
        "N": n_dms,
        "series": series,
        "log10_pe": math.log10(pe) if pe > 0 else -math.inf,
        "pe": pe,
        "iterations_used": iterations,
        "wall_ms": int(round(wall_ms)),
    }


def _label(settings: ExperimentSettings, base: str, snr_db: float) -> str:
    if len(settings.snr_db) > 1:
        return f"{base}@{snr_db:g}dB"
    return base


def _design_config(settings: ExperimentSettings, n_dms: int, rate: int) -> DesignConfig:
    return DesignConfig.equal_rates(
        n_dms,
        settings.hypotheses,
        rate,
        iterations=settings.iterations,
        eta=settings.eta,
        rng_seed=settings.seed,
        early_stop=settings.early_stop,
    )


def _design_record(
    settings: ExperimentSettings,
    series: str,
    snr_db: float,
    rate: int,
    config: DesignConfig,
    design: NetworkDesign,
    model: DiscreteObservationModel,
    wall_ms: float,
) -> CellRecord:
    count = multiplication_count(config, model.alphabet_size, 2**rate, design.max_sweeps)
    return {
        "series": series,
        "snr_db": snr_db,
        "N": config.n_dms,
        "rate": rate,
        "error": design.error,
        "trace": list(design.trace),
        "dm_errors": [list(row) for row in design.dm_errors],
        "sweeps": [list(row) for row in design.sweeps],
        "multiplications": {
            "exact": count.exact,
            "dominant": count.dominant,
            "sweeps": design.max_sweeps,
        },
        "seconds_per_iteration": list(design.elapsed),
        "wall_ms": wall_ms,
    }


def _design_cell(
    settings: ExperimentSettings,
    snr_db: float,
    rate: int,
    n_dms: int,
    model: DiscreteObservationModel,
) -> CellOutcome:
    config = _design_config(settings, n_dms, rate)
    start_time = time()
    design = design_network(config, [model])
    wall_ms = (time() - start_time) * 1000
    base = f"rate{rate}"
    if settings.traces:
        rows = [_row(n_dms, _label(settings, f"{base}-init", snr_db), design.trace[0], 0, wall_ms)]
        rows += [
            _row(n_dms, _label(settings, f"{base}-iter{k}", snr_db), error, k, wall_ms)
            for k, error in enumerate(design.trace[1:], start=1)
        ]
    else:
        rows = [
            _row(
                n_dms,
                _label(settings, base, snr_db),
                design.error,
                design.iterations_used,
                wall_ms,
            )
        ]
    record = _design_record(
        settings, _label(settings, base, snr_db), snr_db, rate, config, design, model, wall_ms
    )
    return CellOutcome(rows, record)


def _oracle_cell(
    settings: ExperimentSettings,
    snr_db: float,
    rate: int,
    n_dms: int,
    model: DiscreteObservationModel,
) -> CellOutcome:
    config = _design_config(settings, n_dms, rate)
    start_time = time()
    exhaustive = brute_force_design(
        [model], Priors.uniform(settings.hypotheses), config.rates, n_dms
    )
    design = design_network(config, [model])
    wall_ms = (time() - start_time) * 1000
    if design.error < exhaustive.error - TRACE_SLACK:
        raise InvariantViolationError(
            f"Designed P_E {design.error:.12g} beats the exhaustive optimum "
            f"{exhaustive.error:.12g} at N={n_dms}, rate {rate}."
        )
    record = _design_record(
        settings, _label(settings, f"designed-rate{rate}", snr_db), snr_db, rate, config,
        design, model, wall_ms,
    )
    record["oracle_error"] = exhaustive.error
    rows = [
        _row(n_dms, _label(settings, f"oracle-rate{rate}", snr_db), exhaustive.error, 0, wall_ms),
        _row(
            n_dms,
            _label(settings, f"designed-rate{rate}", snr_db),
            design.error,
            design.iterations_used,
            wall_ms,
        ),
    ]
    return CellOutcome(rows, record)


def _monte_carlo_cell(
    settings: ExperimentSettings,
    snr_db: float,
    rate: int,
    n_dms: int,
    model: DiscreteObservationModel,
) -> CellOutcome:
    config = _design_config(settings, n_dms, rate)
    start_time = time()
    design = design_network(config, [model])
    empirical = monte_carlo_error(design.network, settings.trials, settings.seed, settings.shards)
    wall_ms = (time() - start_time) * 1000
    record = _design_record(
        settings, _label(settings, f"analytic-rate{rate}", snr_db), snr_db, rate, config,
        design, model, wall_ms,
    )
    record["monte_carlo"] = {
        "errors": empirical.errors,
        "trials": empirical.trials,
        "estimate": empirical.estimate,
        "ci_low": empirical.ci_low,
        "ci_high": empirical.ci_high,
        "contains_analytic": empirical.contains(design.error),
    }
    rows = [
        _row(
            n_dms,
            _label(settings, f"analytic-rate{rate}", snr_db),
            design.error,
            design.iterations_used,
            wall_ms,
        ),
        _row(
            n_dms,
            _label(settings, f"montecarlo-rate{rate}", snr_db),
            empirical.estimate,
            design.iterations_used,
            wall_ms,
        ),
    ]
    return CellOutcome(rows, record)


def _baseline_rows(settings: ExperimentSettings, snr_db: float) -> list[CurveRow]:
    amplitude = snr_to_amplitude(snr_db)
    longest = max(settings.n_list)
    rows: list[CurveRow] = []
    for name in settings.series:
        start_time = time()
        if name == "swaszek":
            values = list(swaszek_curve(longest, amplitude))
        elif name == "cover":
            values = list(cover_curve(longest, amplitude))
        else:
            values = [
                linear_detector_error(n, settings.hypotheses, amplitude)
                for n in range(1, longest + 1)
            ]
        wall_ms = (time() - start_time) * 1000
        rows += [
            _row(n, _label(settings, name, snr_db), float(values[n - 1]), 0, wall_ms)
            for n in settings.n_list
        ]
    return rows


def _check_invariants(result: ExperimentResult) -> None:
    for row in result.rows:
        if not 0.0 <= row["pe"] <= 1.0:
            raise InvariantViolationError(
                f"Series {row['series']} at N={row['N']} has P_E={row['pe']} outside [0, 1]."
            )
    for cell in result.cells:
        trace = cell.get("trace", [])
        for before, after in zip(trace, trace[1:]):
            if after > before + TRACE_SLACK:
                raise InvariantViolationError(
                    f"Error trace of {cell.get('series')} at N={cell.get('N')} increased "
                    f"from {before:.15g} to {after:.15g}."
                )


def _summarize(settings: ExperimentSettings, result: ExperimentResult) -> dict[str, Any]:
    summary: dict[str, Any] = {"cells": len(result.cells), "series": result.series}
    sweeps = [cell["multiplications"]["sweeps"] for cell in result.cells if "multiplications" in cell]
    if sweeps:
        summary["max_sweeps"] = max(sweeps)
    if settings.kind == "design" and settings.rates:
        gaps: dict[str, float] = {}
        longest = max(settings.n_list)
        for cell in result.cells:
            if cell.get("N") != longest or cell.get("error", 0.0) <= 0:
                continue
            bound = linear_detector_error(
                longest, settings.hypotheses, snr_to_amplitude(cell["snr_db"])
            )
            gaps[cell["series"]] = math.log10(cell["error"]) - math.log10(bound)
        summary["log10_gap_to_linear_detector"] = gaps
    checks = [cell["monte_carlo"]["contains_analytic"] for cell in result.cells if "monte_carlo" in cell]
    if checks:
        summary["monte_carlo_coverage"] = f"{sum(checks)}/{len(checks)}"
    return summary


async def _gather(tasks: list[Callable[[], CellOutcome]]) -> list[CellOutcome]:
    semaphore = asyncio.Semaphore(max(MAX_PARALLEL_CELLS, 1))

    async def guarded(task: Callable[[], CellOutcome]) -> CellOutcome:
        async with semaphore:
            return await asyncio.to_thread(task)

    return await asyncio.gather(*(guarded(task) for task in tasks))


async def run_experiment(settings: ExperimentSettings) -> ExperimentResult:
    """Run every grid cell of ``settings`` and collect rows sorted by (series, N)."""
    logger.info(
        f"Running {settings.kind} experiment: M={settings.hypotheses}, "
        f"SNR={list(settings.snr_db)} dB, N={list(settings.n_list)}, rates={list(settings.rates)}."
    )
    start_time = time()
    result = ExperimentResult()
    cell_builders = {
        "design": _design_cell,
        "oracle": _oracle_cell,
        "montecarlo": _monte_carlo_cell,
    }
    tasks: list[Callable[[], CellOutcome]] = []
    for snr_db in settings.snr_db:
        if settings.series:
            result.rows += _baseline_rows(settings, snr_db)
        if settings.kind == "baseline":
            continue
        model = discretize(
            GaussianSpec.from_snr(
                settings.hypotheses, snr_db, settings.bins, settings.interval_pad
            )
        )
        builder = cell_builders[settings.kind]
        for rate in settings.rates:
            for n_dms in settings.n_list:
                tasks.append(partial(builder, settings, snr_db, rate, n_dms, model))

    for outcome in await _gather(tasks):
        result.rows += outcome.rows
        result.cells.append(outcome.record)
    result.rows.sort(key=lambda row: (row["series"], row["N"]))
    result.cells.sort(key=lambda cell: (cell.get("series", ""), cell.get("N", 0)))
    _check_invariants(result)
    result.summary = _summarize(settings, result)
    logger.info(
        f"Experiment finished: {len(result.rows)} rows in {len(result.series)} series "
        f"in {time() - start_time:.4f} seconds."
    )
    return result
