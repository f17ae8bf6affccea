"""Declarative figure recipes over dcesim CSV tables.

A recipe is a small TOML file describing either an ``overlay`` (several
series on one panel, the multi-detector comparison layout) or ``panels``
(one run split into stacked observable panels plus an optional
photon-distribution bar chart).  CSV paths are resolved relative to the
recipe file.  Every referenced column must exist in its CSV header; the
renderer never recomputes physics, it only displays columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
import tomli


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesSpec:
    csv: Path
    label: str
    column: Optional[str] = None


@dataclass(frozen=True)
class FigureRecipe:
    kind: str                       # overlay | panels
    out: Path
    x: str = "eps_t"
    # overlay fields
    y: str = "n_mean"
    series: Tuple[SeriesSpec, ...] = ()
    yscale: str = "linear"
    # panels fields
    csv: Optional[Path] = None
    panels: Tuple[str, ...] = ()
    distribution: Optional[Path] = None
    title: str = ""
    xlabel: Optional[str] = None
    ylabel: Optional[str] = None


_TOP_KEYS = {"kind", "out", "x", "y", "series", "yscale", "csv", "panels",
             "distribution", "title", "xlabel", "ylabel"}
_SERIES_KEYS = {"csv", "label", "column"}


def parse_recipe(text: str, base_dir: Path) -> FigureRecipe:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise RecipeError(f"recipe TOML syntax: {exc}")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise RecipeError(f"unknown recipe keys: {sorted(unknown)}")
    kind = raw.get("kind")
    if kind not in ("overlay", "panels"):
        raise RecipeError(f"recipe kind must be overlay or panels, got {kind!r}")
    if "out" not in raw:
        raise RecipeError("recipe needs an output image path (out)")

    series = []
    for i, entry in enumerate(raw.get("series", [])):
        extra = set(entry) - _SERIES_KEYS
        if extra:
            raise RecipeError(f"series[{i}]: unknown keys {sorted(extra)}")
        if "csv" not in entry:
            raise RecipeError(f"series[{i}]: csv path required")
        series.append(SeriesSpec(
            csv=(base_dir / entry["csv"]).resolve(),
            label=entry.get("label", Path(entry["csv"]).stem),
            column=entry.get("column"),
        ))
    if kind == "overlay" and not series:
        raise RecipeError("overlay recipe needs at least one [[series]]")
    if kind == "panels":
        if "csv" not in raw:
            raise RecipeError("panels recipe needs a csv path")
        if not raw.get("panels"):
            raise RecipeError("panels recipe needs a non-empty panels list")

    return FigureRecipe(
        kind=kind,
        out=(base_dir / raw["out"]).resolve(),
        x=raw.get("x", "eps_t"),
        y=raw.get("y", "n_mean"),
        series=tuple(series),
        yscale=raw.get("yscale", "linear"),
        csv=(base_dir / raw["csv"]).resolve() if "csv" in raw else None,
        panels=tuple(raw.get("panels", [])),
        distribution=(base_dir / raw["distribution"]).resolve()
        if "distribution" in raw else None,
        title=raw.get("title", ""),
        xlabel=raw.get("xlabel"),
        ylabel=raw.get("ylabel"),
    )


def load_table(path: Path) -> Dict[str, np.ndarray]:
    """Read a dcesim CSV into named columns; empty cells become NaN."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if not header:
                raise RecipeError(f"{path}: empty CSV")
            names = header.split(",")
            rows = []
            for ln, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                cells = line.split(",")
                if len(cells) != len(names):
                    raise RecipeError(
                        f"{path}:{ln}: {len(cells)} cells for {len(names)} columns")
                rows.append([float(c) if c else float("nan") for c in cells])
    except OSError as exc:
        raise RecipeError(f"cannot read {path}: {exc}")
    except ValueError as exc:
        raise RecipeError(f"{path}: malformed CSV ({exc})")
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(names))
    return {name: data[:, i] for i, name in enumerate(names)}


def require_columns(table: Dict[str, np.ndarray], cols, path: Path) -> None:
    missing = [c for c in cols if c not in table]
    if missing:
        raise RecipeError(f"{path}: missing columns {missing} "
                          f"(header has {sorted(table)})")
