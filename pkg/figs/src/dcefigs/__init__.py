"""Figure rendering for dcesim CSV output: declarative recipes in, image
files out.  The renderer never recomputes physics."""

__version__ = "0.1.0"

from .recipe import FigureRecipe, RecipeError, SeriesSpec, load_table, parse_recipe
from .render import RenderReport, render
