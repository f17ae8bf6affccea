"""Declarative experiment runner.

``dcesim run|catalog|spectrum|trajectory --config experiment.toml`` parses a
TOML experiment description, dispatches to the library, and writes CSV
tables plus a line-oriented ``manifest.txt`` (config hash, seed, code
version, wall time) that suffices to reproduce the run.  Unknown
configuration keys are hard errors: silent typos in physics parameters are
the dominant user failure mode.

Outputs are byte-identical for identical (config, seed, thread count);
running the same ensemble under a different ``--threads`` keeps the random
streams and click logs identical but may perturb averaged columns at the
float-accumulation level.

CSV layout: one row per recorded time with columns
``eps_t`` (or ``t`` on the absolute axis), ``n_mean``, ``mandel_q`` (empty
where undefined), ``xvar_plus``, ``xvar_minus``, ``P_1..P_N``, and, when a
closed form applies, ``*_oracle`` companions.  Photon-number snapshot
distributions go to sibling ``distribution_*.csv`` files.  Floats carry 17
significant digits and lines end in LF, so equal configurations yield
byte-identical tables.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import tomli

from . import __version__, oracle
from .evolve import (
    EvolutionConfig,
    EvolutionError,
    InitialState,
    run_experiment,
)
from .fock import HilbertSpace, ObservableSeries
from .model import DetectorKind, DetectorSpec, FrameTag, ModulationSpec, dicke_to_ladder, rwa_hamiltonian
from .monitor import (EnsembleResult, default_jump_model, pool_ensembles,
                      trajectory_ensemble)
from .spectral import dressed_eigensystem, resonance_catalog


class ConfigError(ValueError):
    """Configuration problems with field-level locations."""

    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


@dataclass(frozen=True)
class MonitorSettings:
    enabled: bool = False
    rate: float = 0.0
    per_transition_rates: Optional[Tuple[float, ...]] = None
    trajectories: int = 1000
    seed: int = 0


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    precision: int = 17
    oracles: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    detector: DetectorSpec
    modulation: ModulationSpec
    evolution: EvolutionConfig
    n_max: int
    monitor: MonitorSettings
    output: OutputSettings
    sha256: str


_SECTIONS = {
    "detector": {"kind", "levels", "energies", "transition_frequency",
                 "couplings", "coupling", "coupling_profile", "atoms"},
    "modulation": {"omega0", "epsilon", "r", "y"},
    "evolution": {"frame", "t_end", "time_unit", "dt", "n_max", "snapshots",
                  "record_every", "renorm_tol", "truncation_tol",
                  "truncation_margin", "counter_rotating", "chi_form",
                  "initial_level", "initial_photons", "initial_amplitudes"},
    "monitor": {"enabled", "rate", "per_transition_rates", "trajectories", "seed"},
    "output": {"directory", "precision", "oracles"},
}

#: Named resonance shifts accepted by modulation.r; resolved from the
#: catalog formulas of the configured detector (y folded in where it applies).
_NAMED_SHIFTS = {
    "two_photon+", "two_photon-", "ho+", "ho-",
    "two_level+", "two_level-", "dispersive",
}


def _check_keys(raw: dict, problems: List[str]) -> None:
    for section in raw:
        if section not in _SECTIONS:
            problems.append(f"unknown section [{section}]")
            continue
        if not isinstance(raw[section], dict):
            problems.append(f"[{section}] must be a table")
            continue
        for key in raw[section]:
            if key not in _SECTIONS[section]:
                problems.append(f"unknown key {section}.{key}")


def _build_detector(sec: dict, omega0: float, problems: List[str]) -> Optional[DetectorSpec]:
    kind = sec.get("kind", "none")
    try:
        if kind == "none":
            return DetectorSpec.none()
        if kind == "harmonic_oscillator":
            if "coupling" not in sec:
                problems.append("detector.coupling required for harmonic_oscillator")
                return None
            return DetectorSpec.harmonic_oscillator(
                sec["coupling"], sec.get("transition_frequency", omega0))
        if kind == "dicke_network":
            if "atoms" not in sec or "coupling" not in sec:
                problems.append("detector.atoms and detector.coupling required "
                                "for dicke_network")
                return None
            return DetectorSpec.dicke_network(
                sec["atoms"], sec.get("transition_frequency", omega0), sec["coupling"])
        if kind == "ladder":
            if "energies" in sec:
                energies = [float(e) for e in sec["energies"]]
            elif "levels" in sec:
                omega = sec.get("transition_frequency", omega0)
                energies = [omega * j for j in range(int(sec["levels"]))]
            else:
                problems.append("detector needs energies or levels")
                return None
            if "couplings" in sec:
                couplings = [float(g) for g in sec["couplings"]]
            elif "coupling" in sec:
                g = float(sec["coupling"])
                profile = sec.get("coupling_profile", "uniform")
                n = len(energies)
                if profile == "uniform":
                    couplings = [g] * (n - 1)
                elif profile == "harmonic":
                    couplings = [g * math.sqrt(l) for l in range(1, n)]
                else:
                    problems.append(f"detector.coupling_profile {profile!r} unknown "
                                    "(uniform or harmonic)")
                    return None
            else:
                problems.append("detector needs couplings or coupling")
                return None
            return DetectorSpec.ladder(energies, couplings)
        problems.append(f"detector.kind {kind!r} unknown")
    except ValueError as exc:
        problems.append(f"detector: {exc}")
    return None


def _resolve_shift(name: str, det: DetectorSpec, omega0: float, epsilon: float,
                   y: float, problems: List[str]) -> Optional[float]:
    catalog = resonance_catalog(det, ModulationSpec(omega0, epsilon, 0.0, y))
    base = name.rstrip("+-")
    branch = None if base == name else (1 if name.endswith("+") else -1)
    formulas = {"two_photon": ("three_level_pair", "pair_channel"),
                "ho": ("ho_shifted",),
                "two_level": ("two_level_shifted",),
                "dispersive": ("two_level_dispersive",)}[base]
    matches = [e for e in catalog
               if e.formula in formulas and (branch is None or e.branch == branch)]
    if not matches:
        problems.append(f"modulation.r: named shift {name!r} has no entry for "
                        f"this detector")
        return None
    return matches[0].r


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a TOML experiment description.

    Unknown keys, missing required fields and physics-constraint violations
    are all reported together with their field locations.
    """
    problems: List[str] = []
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError([f"TOML syntax: {exc}"])
    _check_keys(raw, problems)

    mod_sec = raw.get("modulation", {})
    for req in ("omega0", "epsilon"):
        if req not in mod_sec:
            problems.append(f"modulation.{req} is required")
    if problems:
        raise ConfigError(problems)
    omega0 = float(mod_sec["omega0"])
    epsilon = float(mod_sec["epsilon"])
    y = float(mod_sec.get("y", 0.0))

    det = _build_detector(raw.get("detector", {}), omega0, problems)

    r_value = mod_sec.get("r", 0.0)
    r: Optional[float]
    if isinstance(r_value, str):
        if r_value not in _NAMED_SHIFTS:
            problems.append(f"modulation.r: unknown named shift {r_value!r} "
                            f"(choose from {sorted(_NAMED_SHIFTS)})")
            r = None
        elif det is not None:
            r = _resolve_shift(r_value, det, omega0, epsilon, y, problems)
        else:
            r = None
    else:
        r = float(r_value)

    modulation = None
    if r is not None:
        try:
            modulation = ModulationSpec(omega0, epsilon, r, y)
        except ValueError as exc:
            problems.append(f"modulation: {exc}")

    evo_sec = raw.get("evolution", {})
    for req in ("t_end", "n_max"):
        if req not in evo_sec:
            problems.append(f"evolution.{req} is required")
    evolution = None
    n_max = int(evo_sec.get("n_max", 2))
    if not problems:
        frame_name = evo_sec.get("frame", "rwa_interaction")
        try:
            frame = FrameTag(frame_name)
        except ValueError:
            problems.append(f"evolution.frame {frame_name!r} unknown")
            frame = FrameTag.RWA_INTERACTION
        initial = InitialState(
            level=int(evo_sec.get("initial_level", 1)),
            photons=int(evo_sec.get("initial_photons", 0)),
            amplitudes=tuple(
                (int(a[0]), int(a[1]), complex(float(a[2]), float(a[3])))
                for a in evo_sec["initial_amplitudes"]
            ) if "initial_amplitudes" in evo_sec else None,
        )
        try:
            evolution = EvolutionConfig(
                t_end=float(evo_sec["t_end"]),
                frame=frame,
                time_unit=evo_sec.get("time_unit", "eps_t"),
                dt=float(evo_sec["dt"]) if "dt" in evo_sec else None,
                snapshot_times=tuple(float(t) for t in evo_sec.get("snapshots", [])),
                record_every=int(evo_sec["record_every"])
                if "record_every" in evo_sec else None,
                renorm_tol=float(evo_sec.get("renorm_tol", 1e-9)),
                truncation_tol=float(evo_sec.get("truncation_tol", 1e-8)),
                truncation_margin=int(evo_sec.get("truncation_margin", 8)),
                initial_state=initial,
                counter_rotating=bool(evo_sec.get("counter_rotating", False)),
                chi_form=evo_sec.get("chi_form", "approximate"),
            )
        except ValueError as exc:
            problems.append(f"evolution: {exc}")

    mon_sec = raw.get("monitor", {})
    monitor = MonitorSettings(
        enabled=bool(mon_sec.get("enabled", False)),
        rate=float(mon_sec.get("rate", 0.0)),
        per_transition_rates=tuple(float(x) for x in mon_sec["per_transition_rates"])
        if "per_transition_rates" in mon_sec else None,
        trajectories=int(mon_sec.get("trajectories", 1000)),
        seed=int(mon_sec.get("seed", 0)),
    )
    out_sec = raw.get("output", {})
    output = OutputSettings(
        directory=out_sec.get("directory", "out"),
        precision=int(out_sec.get("precision", 17)),
        oracles=bool(out_sec.get("oracles", True)),
    )

    if problems or det is None or modulation is None or evolution is None:
        raise ConfigError(problems or ["incomplete configuration"])
    return ExperimentConfig(
        detector=det, modulation=modulation, evolution=evolution, n_max=n_max,
        monitor=monitor, output=output,
        sha256=hashlib.sha256(text.encode()).hexdigest(),
    )


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def _fmt(value: float, precision: int) -> str:
    if isinstance(value, float) and math.isnan(value):
        return ""
    return f"{value:.{precision}g}"


def emit_csv(series: ObservableSeries, path: Path, precision: int = 17,
             oracles: Optional[Dict[str, np.ndarray]] = None) -> List[Path]:
    """Write the observable series and its snapshot distributions.

    Returns the written paths (main table first).  ``oracles`` maps column
    names (written with an ``_oracle`` suffix) to arrays aligned with the
    series times; NaN entries become empty cells.
    """
    path = Path(path)
    time_col = "eps_t" if series.time_unit == "eps_t" else "t"
    cols = [time_col, "n_mean", "mandel_q", "xvar_plus", "xvar_minus"]
    cols += [f"P_{j}" for j in range(1, series.n_levels + 1)]
    oracles = oracles or {}
    cols += [f"{name}_oracle" for name in oracles]

    lines = [",".join(cols)]
    for i in range(len(series.times)):
        row = [
            _fmt(float(series.times[i]), precision),
            _fmt(float(series.n_mean[i]), precision),
            _fmt(float(series.mandel_q[i]), precision),
            _fmt(float(series.xvar_plus[i]), precision),
            _fmt(float(series.xvar_minus[i]), precision),
        ]
        row += [_fmt(float(p), precision) for p in series.populations[i]]
        row += [_fmt(float(arr[i]), precision) for arr in oracles.values()]
        lines.append(",".join(row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    written = [path]
    for snap in series.snapshots:
        snap_path = path.with_name(
            f"{path.stem}_distribution_{time_col}_{snap.time:.6g}.csv")
        rows = ["n,p"] + [
            f"{n},{_fmt(float(p), precision)}"
            for n, p in enumerate(snap.photon_distribution)
        ]
        with open(snap_path, "w", newline="\n") as fh:
            fh.write("\n".join(rows) + "\n")
        written.append(snap_path)
    return written


def applicable_oracles(cfg: ExperimentConfig, series: ObservableSeries
                       ) -> Dict[str, np.ndarray]:
    """Closed-form companion columns for runs the catalog covers."""
    det, mod = cfg.detector, cfg.modulation
    t_abs = series.times / abs(mod.epsilon) if series.time_unit == "eps_t" \
        else series.times
    out: Dict[str, np.ndarray] = {}
    if det.kind is DetectorKind.NONE and mod.r == 0.0:
        n_oracle = np.array([oracle.empty_cavity_mean_n(mod.beta0, t) for t in t_abs])
        var = np.array([oracle.empty_cavity_variances(mod.beta0, t) for t in t_abs])
        out["n_mean"] = n_oracle
        out["mandel_q"] = np.where(n_oracle > 0, 1.0 + 2.0 * n_oracle, np.nan)
        out["xvar_plus"] = var[:, 0]
        out["xvar_minus"] = var[:, 1]
    elif det.kind is DetectorKind.HARMONIC_OSCILLATOR:
        g = det.couplings[0]
        if mod.r == 0.0 and abs(g) > abs(mod.beta0):
            var = np.array([oracle.ho_variances(g, mod.beta0, t) for t in t_abs])
            out["xvar_plus"] = var[:, 0]
            out["xvar_minus"] = var[:, 1]
        elif abs(abs(mod.r) - abs(g)) <= 1e-12 * max(abs(g), 1.0):
            out["n_mean"] = np.array(
                [oracle.ho_shifted_resonance_mean_n(mod.beta0, t) for t in t_abs])
    return out


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

def _write_manifest(out_dir: Path, cfg: ExperimentConfig, command: str,
                    seed: Optional[int], wall: float, files: List[Path]) -> Path:
    lines = [
        f"command={command}",
        f"config_sha256={cfg.sha256}",
        f"seed={'' if seed is None else seed}",
        f"version={__version__}",
        f"wall_time_s={wall:.3f}",
        f"outputs={';'.join(p.name for p in files)}",
    ]
    path = out_dir / "manifest.txt"
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_run(cfg: ExperimentConfig, out_dir: Path) -> int:
    start = time.perf_counter()
    series = run_experiment(cfg.detector, cfg.modulation, cfg.evolution, cfg.n_max)
    oracles = applicable_oracles(cfg, series) if cfg.output.oracles else {}
    files = emit_csv(series, out_dir / "timeseries.csv", cfg.output.precision, oracles)
    _write_manifest(out_dir, cfg, "run", None, time.perf_counter() - start, files)
    print(f"wrote {files[0]} ({len(series.times)} rows, "
          f"{len(series.snapshots)} snapshots)")
    return 0


def _cmd_catalog(cfg: ExperimentConfig, out_dir: Path) -> int:
    start = time.perf_counter()
    entries = resonance_catalog(cfg.detector, cfg.modulation)
    header = f"{'r':>24} {'regime':>22} {'formula':>22} extra"
    print(header)
    print("-" * len(header))
    rows = ["r,regime,formula,max_photons,oscillation_frequency,mean_photon_law"]
    for e in entries:
        extra = []
        if e.max_photons is not None:
            extra.append(f"max_photons={e.max_photons}")
        if e.oscillation_frequency is not None:
            extra.append(f"oscillation_frequency={e.oscillation_frequency:.9g}")
        if e.mean_photon_law:
            extra.append(f"<n>={e.mean_photon_law}")
        print(f"{e.r:>24.12g} {e.regime:>22} {e.formula:>22} {' '.join(extra)}")
        rows.append(",".join([
            f"{e.r:.17g}", e.regime, e.formula,
            "" if e.max_photons is None else str(e.max_photons),
            "" if e.oscillation_frequency is None else f"{e.oscillation_frequency:.17g}",
            e.mean_photon_law or "",
        ]))
    path = out_dir / "catalog.csv"
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
    _write_manifest(out_dir, cfg, "catalog", None, time.perf_counter() - start, [path])
    return 0


def _cmd_spectrum(cfg: ExperimentConfig, out_dir: Path, m_cap: int) -> int:
    start = time.perf_counter()
    det = cfg.detector
    if det.kind is DetectorKind.HARMONIC_OSCILLATOR:
        det = DetectorSpec.equidistant_ladder(
            cfg.n_max + 1, det.omega,
            det.ladder_parameters(cfg.n_max + 1)[1])
    elif det.kind is DetectorKind.DICKE_NETWORK:
        det = dicke_to_ladder(det)
    rows = ["m,k,eigenvalue,components"]
    for m in range(m_cap + 1):
        for st in dressed_eigensystem(det, m, cfg.modulation.omega0, cfg.modulation.r):
            comps = ";".join(
                f"|{lvl},{n}>:{amp.real:.12g}{amp.imag:+.12g}j"
                for (lvl, n), amp in zip(st.basis, st.amplitudes))
            rows.append(f"{st.m},{st.k},{st.eigenvalue:.17g},{comps}")
    path = out_dir / "spectrum.csv"
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {path} ({len(rows) - 1} dressed states up to m = {m_cap})")
    _write_manifest(out_dir, cfg, "spectrum", None, time.perf_counter() - start, [path])
    return 0


def run_trajectory_ensemble(cfg: ExperimentConfig, seed: int, n_traj: int,
                            rate: float, threads: int = 1) -> EnsembleResult:
    det = cfg.detector
    if det.kind is DetectorKind.DICKE_NETWORK:
        det = dicke_to_ladder(det)
    if det.kind is DetectorKind.HARMONIC_OSCILLATOR:
        space = HilbertSpace(cfg.n_max, cfg.n_max + 1)
    else:
        space = HilbertSpace(cfg.n_max, det.n_levels)
    if cfg.evolution.frame is not FrameTag.RWA_INTERACTION:
        raise ConfigError(["trajectory runs monitor the RWA interaction picture; "
                           "set evolution.frame accordingly"])
    h = rwa_hamiltonian(det, cfg.modulation, space)
    jump = default_jump_model(det, space, rate,
                              cfg.monitor.per_transition_rates)
    psi0 = cfg.evolution.initial_state.build(space)
    t_end = cfg.evolution.absolute(cfg.evolution.t_end, cfg.modulation.epsilon)
    dt = cfg.evolution.dt
    if dt is None:
        dt = min(0.05 / max(h.norm_bound(), 1e-300), 0.05 / max(rate, 1e-300))

    bounds = np.linspace(0, n_traj, min(threads, n_traj) + 1).astype(int)
    chunks = [(int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]

    record_every = cfg.evolution.record_every

    def work(chunk):
        a, b = chunk
        return trajectory_ensemble(h, jump, psi0, t_end, dt, b - a, seed,
                                   record_every=record_every, index_offset=a)

    if len(chunks) == 1:
        parts = [work(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(work, chunks))
    return pool_ensembles(parts)


def _cmd_trajectory(cfg: ExperimentConfig, out_dir: Path, seed: Optional[int],
                    n_traj: Optional[int], rate: Optional[float],
                    threads: int, precision: int) -> int:
    start_t = time.perf_counter()
    use_seed = cfg.monitor.seed if seed is None else seed
    use_n = cfg.monitor.trajectories if n_traj is None else n_traj
    use_rate = cfg.monitor.rate if rate is None else rate
    if not cfg.monitor.enabled and rate is None and cfg.monitor.rate == 0.0:
        raise ConfigError(["monitor.enabled is false and no read-out rate given"])

    result = run_trajectory_ensemble(cfg, use_seed, use_n, use_rate, threads)

    eps = abs(cfg.modulation.epsilon)
    unit = cfg.evolution.time_unit
    scale = eps if unit == "eps_t" else 1.0
    tcol = "eps_t" if unit == "eps_t" else "t"

    n_levels = result.populations.shape[1]
    cols = [tcol, "n_mean", "n_mean_se"]
    cols += [f"P_{j}" for j in range(1, n_levels + 1)]
    cols += [f"P_{j}_se" for j in range(1, n_levels + 1)]
    lines = [",".join(cols)]
    for i in range(len(result.times)):
        row = [_fmt(result.times[i] * scale, precision),
               _fmt(float(result.n_mean[i]), precision),
               _fmt(float(result.n_mean_se[i]), precision)]
        row += [_fmt(float(p), precision) for p in result.populations[i]]
        row += [_fmt(float(p), precision) for p in result.populations_se[i]]
        lines.append(",".join(row))
    series_path = out_dir / "ensemble.csv"
    with open(series_path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    click_path = out_dir / "clicks.csv"
    click_lines = [f"trajectory,click_index,{tcol},channel"]
    for traj, (times, chans) in enumerate(zip(result.click_logs,
                                              result.click_channel_logs)):
        for k, (t, ch) in enumerate(zip(times, chans)):
            click_lines.append(f"{traj},{k},{_fmt(t * scale, precision)},{ch}")
    with open(click_path, "w", newline="\n") as fh:
        fh.write("\n".join(click_lines) + "\n")

    files = [series_path, click_path]
    _write_manifest(out_dir, cfg, "trajectory", use_seed,
                    time.perf_counter() - start_t, files)
    total_clicks = sum(len(c) for c in result.click_logs)
    print(f"wrote {series_path} and {click_path} "
          f"({result.n_trajectories} trajectories, {total_clicks} clicks)")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcesim",
        description="Photon generation from vacuum in a frequency-modulated "
                    "cavity with an intracavity quantum detector.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "catalog", "spectrum", "trajectory"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML experiment file")
        p.add_argument("--out", default=None, help="output directory")
        if name == "spectrum":
            p.add_argument("--m-cap", type=int, default=8,
                           help="largest excitation number to dump")
        if name == "trajectory":
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--trajectories", type=int, default=None)
            p.add_argument("--rate", type=float, default=None)
            p.add_argument("--threads", type=int, default=1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error reading config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
        out_dir = Path(args.out) if args.out else Path(cfg.output.directory)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "run":
            return _cmd_run(cfg, out_dir)
        if args.command == "catalog":
            return _cmd_catalog(cfg, out_dir)
        if args.command == "spectrum":
            return _cmd_spectrum(cfg, out_dir, args.m_cap)
        if args.command == "trajectory":
            return _cmd_trajectory(cfg, out_dir, args.seed, args.trajectories,
                                   args.rate, args.threads, cfg.output.precision)
        return 1
    except (ConfigError, ValueError, EvolutionError, oracle.ValidityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
