"""Render figure recipes to image files with matplotlib (Agg backend)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipe import FigureRecipe, load_table, require_columns

_AXIS_LABELS = {
    "eps_t": r"$\varepsilon t$",
    "t": r"$t$",
    "n_mean": r"$\langle \hat n \rangle$",
    "mandel_q": r"$Q$",
    "xvar_plus": r"$\langle(\Delta \hat x_+)^2\rangle$",
    "xvar_minus": r"$\langle(\Delta \hat x_-)^2\rangle$",
}


@dataclass(frozen=True)
class RenderReport:
    """What was drawn: lets callers assert on overlay presence."""

    out: Path
    curves: int
    oracle_curves: int
    panels: int


def _label(column: str) -> str:
    return _AXIS_LABELS.get(column, column)


def render(recipe: FigureRecipe) -> RenderReport:
    """Draw the recipe and write the image; returns a RenderReport.

    Columns named ``<y>_oracle`` are overlaid as dashed curves whenever the
    CSV carries them.  Pure function of the recipe and the CSV bytes.
    """
    if recipe.kind == "overlay":
        report = _render_overlay(recipe)
    else:
        report = _render_panels(recipe)
    return report


def _render_overlay(recipe: FigureRecipe) -> RenderReport:
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    curves = oracle_curves = 0
    for spec in recipe.series:
        table = load_table(spec.csv)
        column = spec.column or recipe.y
        require_columns(table, [recipe.x, column], spec.csv)
        ax.plot(table[recipe.x], table[column], label=spec.label, lw=1.4)
        curves += 1
        oracle_col = f"{column}_oracle"
        if oracle_col in table:
            ax.plot(table[recipe.x], table[oracle_col], ls="--", lw=1.0,
                    color=ax.lines[-1].get_color(), alpha=0.8,
                    label=f"{spec.label} (closed form)")
            oracle_curves += 1
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel(recipe.xlabel or _label(recipe.x))
    ax.set_ylabel(recipe.ylabel or _label(recipe.y))
    if recipe.title:
        ax.set_title(recipe.title)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    recipe.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(recipe.out, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return RenderReport(recipe.out, curves, oracle_curves, 1)


def _render_panels(recipe: FigureRecipe) -> RenderReport:
    table = load_table(recipe.csv)
    require_columns(table, [recipe.x, *recipe.panels], recipe.csv)
    extra = 1 if recipe.distribution is not None else 0
    n_panels = len(recipe.panels) + extra
    fig, axes = plt.subplots(n_panels, 1, figsize=(6.0, 2.1 * n_panels),
                             constrained_layout=True)
    axes = np.atleast_1d(axes)

    curves = oracle_curves = 0
    for ax, column in zip(axes, recipe.panels):
        ax.plot(table[recipe.x], table[column], lw=1.4)
        curves += 1
        oracle_col = f"{column}_oracle"
        if oracle_col in table:
            ax.plot(table[recipe.x], table[oracle_col], ls="--", lw=1.0,
                    alpha=0.8)
            oracle_curves += 1
        ax.set_ylabel(_label(column))
        ax.grid(True, alpha=0.3)
    axes[len(recipe.panels) - 1].set_xlabel(recipe.xlabel or _label(recipe.x))

    if extra:
        dist = load_table(recipe.distribution)
        require_columns(dist, ["n", "p"], recipe.distribution)
        ax = axes[-1]
        mask = dist["p"] > 1e-12
        upper = int(np.max(np.nonzero(mask)[0])) + 2 if mask.any() else 10
        ax.bar(dist["n"][:upper], dist["p"][:upper], width=0.8)
        ax.set_xlabel(r"$n$")
        ax.set_ylabel(r"$p(n)$")
        curves += 1
    if recipe.title:
        fig.suptitle(recipe.title)
    recipe.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(recipe.out, dpi=150)
    plt.close(fig)
    return RenderReport(recipe.out, curves, oracle_curves, n_panels)
