import csv
import logging
import math
import re
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import cast

import yaml

from ..custom_types import CurveRow, ExperimentKind, ManifestDocument
from ..errors import InvariantViolationError
from .experiments import ExperimentResult
from .settings import ExperimentSettings

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("N", "series", "log10_pe", "pe", "iterations_used", "wall_ms")


def library_version() -> str:
    try:
        return version("tandem-net")
    except PackageNotFoundError:
        from .. import __version__

        return __version__


def sanitize_filename(text: str, max_length: int = 60) -> str:
    """Cleans and truncates a series name to be used as part of a filename."""
    if not text:
        return "series"
    text = text.replace("@", "_at_").replace(".", "p")
    text = re.sub(r"[^\w\s-]", "", text).strip()
    text = re.sub(r"[\s]+", "_", text)
    if len(text) > max_length:
        text = text[:max_length]
        if "_" in text:
            last_underscore_pos = text.rfind("_")
            if last_underscore_pos > 0:
                text = text[:last_underscore_pos]
    if not text:
        return "series"
    return text


def format_row(row: CurveRow, record_timings: bool) -> list[str]:
    log10_pe = row["log10_pe"]
    return [
        str(row["N"]),
        row["series"],
        "-inf" if math.isinf(log10_pe) else f"{log10_pe:.6f}",
        f"{row['pe']:.12g}",
        str(row["iterations_used"]),
        str(row["wall_ms"] if record_timings else 0),
    ]


def write_curve(path: Path, rows: list[CurveRow], record_timings: bool = False) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in sorted(rows, key=lambda item: item["N"]):
            writer.writerow(format_row(row, record_timings))


def build_manifest(
    settings: ExperimentSettings, result: ExperimentResult, files: dict[str, str]
) -> ManifestDocument:
    return {
        "library_version": library_version(),
        "kind": cast(ExperimentKind, settings.kind),
        "seed": settings.seed,
        "config_path": settings.source,
        "config_sha256": settings.config_sha256,
        "config": settings.echo,
        "series": files,
        "cells": result.cells,
        "summary": result.summary,
    }


def write_artifacts(settings: ExperimentSettings, result: ExperimentResult) -> Path:
    """Write one CSV per series plus ``<prefix>_manifest.yaml``; returns the manifest path."""
    out_dir = settings.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    files: dict[str, str] = {}
    for series in result.series:
        name = f"{settings.prefix}_{sanitize_filename(series)}.csv"
        if name in files.values():
            raise InvariantViolationError(
                f"Series {series!r} collides with another file name: {name}."
            )
        rows = [row for row in result.rows if row["series"] == series]
        write_curve(out_dir / name, rows, settings.record_timings)
        files[series] = name
        logger.debug(f"Wrote {len(rows)} rows of {series} to {name}.")

    manifest_path = out_dir / f"{settings.prefix}_manifest.yaml"
    manifest = build_manifest(settings, result, files)
    with manifest_path.open("w", encoding="utf-8", newline="\n") as handle:
        yaml.safe_dump(dict(manifest), handle, sort_keys=False, allow_unicode=True)
    logger.info(f"Wrote {len(files)} curve files and {manifest_path.name} to {out_dir}.")
    return manifest_path
