"""``render --recipe <file> --out <image>``: draw a recipe to an image.

The --out flag overrides the recipe's own output path.  Exit codes:
0 success, 1 recipe/column errors, 2 I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .recipe import RecipeError, parse_recipe
from .render import render


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a dcesim figure recipe.")
    parser.add_argument("--recipe", required=True, help="recipe TOML file")
    parser.add_argument("--out", default=None,
                        help="output image path (overrides the recipe)")
    args = parser.parse_args(argv)

    recipe_path = Path(args.recipe)
    try:
        text = recipe_path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error reading recipe: {exc}", file=sys.stderr)
        return 2
    try:
        recipe = parse_recipe(text, recipe_path.resolve().parent)
        if args.out:
            from dataclasses import replace
            recipe = replace(recipe, out=Path(args.out).resolve())
        report = render(recipe)
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {report.out} ({report.panels} panel(s), {report.curves} "
          f"curve(s), {report.oracle_curves} closed-form overlay(s))")
    return 0


if __name__ == "__main__":
    sys.exit(main())
