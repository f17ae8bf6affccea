import numpy as np
import pytest

from dcefigs import RecipeError, load_table, parse_recipe, render
from dcefigs.cli import main


SERIES_CSV = """eps_t,n_mean,mandel_q,xvar_plus,xvar_minus,P_1,n_mean_oracle
0,0,,0.5,0.5,1,0
0.5,0.2,1.2,0.6,0.42,1,0.2001
1,0.8,2.1,0.9,0.28,1,0.8002
"""

DIST_CSV = "n,p\n0,0.7\n1,0\n2,0.25\n3,0\n4,0.05\n"


def _write_run(tmp_path):
    (tmp_path / "run").mkdir()
    (tmp_path / "run" / "timeseries.csv").write_text(SERIES_CSV)
    (tmp_path / "run" / "dist.csv").write_text(DIST_CSV)


def test_load_table_empty_cells_become_nan(tmp_path):
    _write_run(tmp_path)
    table = load_table(tmp_path / "run" / "timeseries.csv")
    assert np.isnan(table["mandel_q"][0])
    assert table["n_mean"][2] == pytest.approx(0.8)


def test_malformed_csv_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2,3\n")
    with pytest.raises(RecipeError, match="cells"):
        load_table(bad)
    bad.write_text("a,b\n1,zebra\n")
    with pytest.raises(RecipeError, match="malformed"):
        load_table(bad)


def test_recipe_validation(tmp_path):
    with pytest.raises(RecipeError, match="kind"):
        parse_recipe("kind = 'pie'\nout = 'x.png'", tmp_path)
    with pytest.raises(RecipeError, match="unknown recipe keys"):
        parse_recipe("kind = 'overlay'\nout = 'x.png'\nzoom = 2", tmp_path)
    with pytest.raises(RecipeError, match="at least one"):
        parse_recipe("kind = 'overlay'\nout = 'x.png'", tmp_path)
    with pytest.raises(RecipeError, match="panels"):
        parse_recipe("kind = 'panels'\nout = 'x.png'\ncsv = 'a.csv'", tmp_path)


def test_overlay_render_with_oracle(tmp_path):
    _write_run(tmp_path)
    recipe = parse_recipe(
        """
kind = "overlay"
out = "fig.png"
y = "n_mean"
yscale = "log"

[[series]]
csv = "run/timeseries.csv"
label = "demo"
""", tmp_path)
    report = render(recipe)
    assert report.out.exists() and report.out.stat().st_size > 0
    assert report.curves == 1
    assert report.oracle_curves == 1       # n_mean_oracle present -> dashed


def test_overlay_missing_column(tmp_path):
    _write_run(tmp_path)
    recipe = parse_recipe(
        """
kind = "overlay"
out = "fig.png"
y = "nonexistent"

[[series]]
csv = "run/timeseries.csv"
""", tmp_path)
    with pytest.raises(RecipeError, match="missing columns"):
        render(recipe)


def test_panels_render_with_distribution(tmp_path):
    _write_run(tmp_path)
    recipe = parse_recipe(
        """
kind = "panels"
out = "fig3.png"
csv = "run/timeseries.csv"
panels = ["n_mean", "mandel_q", "P_1"]
distribution = "run/dist.csv"
""", tmp_path)
    report = render(recipe)
    assert report.out.exists()
    assert report.panels == 4


def test_render_deterministic(tmp_path):
    _write_run(tmp_path)
    text = """
kind = "overlay"
out = "fig.png"

[[series]]
csv = "run/timeseries.csv"
"""
    recipe = parse_recipe(text, tmp_path)
    render(recipe)
    first = recipe.out.read_bytes()
    render(recipe)
    assert recipe.out.read_bytes() == first


def test_cli_roundtrip(tmp_path, capsys):
    _write_run(tmp_path)
    recipe_path = tmp_path / "r.toml"
    recipe_path.write_text(
        'kind = "overlay"\nout = "unused.png"\n\n'
        '[[series]]\ncsv = "run/timeseries.csv"\nlabel = "demo"\n')
    out = tmp_path / "custom.png"
    assert main(["--recipe", str(recipe_path), "--out", str(out)]) == 0
    assert out.exists()
    assert "closed-form overlay" in capsys.readouterr().out
    assert main(["--recipe", str(tmp_path / "no.toml")]) == 2
    bad = tmp_path / "bad.toml"
    bad.write_text('kind = "overlay"\nout = "x.png"\n')
    assert main(["--recipe", str(bad)]) == 1
