"""Secondary acceptance: render the comparison-figure layouts from real
simulator CSV output, produced through the dcesim CLI (the only interface
this package consumes).  Runs are shortened versions of the acceptance
parameter sets; the render must succeed and carry the closed-form overlays
wherever the CSV emits them."""

import subprocess
import sys
from pathlib import Path

import pytest

from dcefigs import parse_recipe, render


def _dcesim_run(config_text: str, workdir: Path, out: str) -> Path:
    cfg = workdir / f"{out}.toml"
    cfg.write_text(config_text)
    proc = subprocess.run(
        [sys.executable, "-m", "dcesim.cli", "run", "--config", str(cfg),
         "--out", str(workdir / out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return workdir / out


LADDER = """
[detector]
kind = "ladder"
levels = {n}
coupling = 1e-2
coupling_profile = "harmonic"

[modulation]
omega0 = 1.0
epsilon = 1e-3

[evolution]
t_end = 1.5
n_max = 48
truncation_tol = 1e-5

[output]
directory = "unused"
"""

HO = """
[detector]
kind = "harmonic_oscillator"
coupling = 1e-2

[modulation]
omega0 = 1.0
epsilon = 1e-3

[evolution]
t_end = 1.5
n_max = 48
dt = 0.2
truncation_tol = 1e-5

[output]
directory = "unused"
"""

TWO_LEVEL = """
[detector]
kind = "ladder"
energies = [0.0, 0.92]
couplings = [1e-2]

[modulation]
omega0 = 1.0
epsilon = 3e-4
r = "two_level+"
y = -6e-4

[evolution]
t_end = 1.0
n_max = 48
snapshots = [1.0]
truncation_tol = 1e-5

[output]
directory = "unused"
"""


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    work = tmp_path_factory.mktemp("runs")
    dirs = {}
    for n in (2, 3):
        dirs[f"n{n}"] = _dcesim_run(LADDER.format(n=n), work, f"n{n}")
    dirs["ho"] = _dcesim_run(HO, work, "ho")
    dirs["fig3"] = _dcesim_run(TWO_LEVEL, work, "fig3")
    return work, dirs


def test_multi_detector_overlay_renders(runs):
    work, dirs = runs
    recipe = parse_recipe(
        f"""
kind = "overlay"
out = "fig2_style.png"
y = "n_mean"
yscale = "log"

[[series]]
csv = "n2/timeseries.csv"
label = "N=2"

[[series]]
csv = "n3/timeseries.csv"
label = "N=3"

[[series]]
csv = "ho/timeseries.csv"
label = "H.O."
""", work)
    report = render(recipe)
    assert report.out.exists() and report.out.stat().st_size > 0
    assert report.curves == 3


def test_quadrature_overlay_carries_closed_form(runs):
    # the oscillator run emits xvar oracles; the dashed overlay must appear
    work, dirs = runs
    recipe = parse_recipe(
        """
kind = "overlay"
out = "ho_xvar.png"
y = "xvar_minus"

[[series]]
csv = "ho/timeseries.csv"
label = "H.O."
""", work)
    report = render(recipe)
    assert report.oracle_curves == 1


def test_two_level_panels_render(runs):
    work, dirs = runs
    recipe = parse_recipe(
        """
kind = "panels"
out = "fig3_style.png"
csv = "fig3/timeseries.csv"
panels = ["n_mean", "mandel_q", "P_2"]
distribution = "fig3/timeseries_distribution_eps_t_1.csv"
""", work)
    report = render(recipe)
    assert report.out.exists() and report.out.stat().st_size > 0
    assert report.panels == 4


def test_oracle_columns_coincide_with_simulation(runs):
    # overlay columns come from the same table: simulated empty-cavity-style
    # curves and their closed forms coincide to the emission tolerance
    import numpy as np
    from dcefigs import load_table
    work, dirs = runs
    table = load_table(dirs["ho"] / "timeseries.csv")
    rel = np.abs(table["xvar_plus"] - table["xvar_plus_oracle"]) \
        / table["xvar_plus_oracle"]
    assert np.nanmax(rel) < 1e-3
