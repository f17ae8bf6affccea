"""Continuous photodetection: quantum jumps and conditioned evolution.

An external measurement device reading the detector is modeled by jump
operators L_i; a click applies L_i and renormalizes, while between clicks
the state evolves under the non-Hermitian H - i R/2 with R = sum L_i^dag L_i,
its squared norm carrying the no-click probability.  The default model
lowers adjacent detector levels at a uniform read-out rate:
L_j = sqrt(lambda_d) sigma_{j,j+1}.

Trajectory sampling uses the first-order scheme: at each step the click
probability is <R> dt (rejected when above CLICK_PROBABILITY_CAP), the
click channel is chosen proportionally to ||L_i psi||^2, and click times
are recorded at the step midpoint.  Randomness per trajectory comes from
two numpy PCG64 streams seeded by (seed..., 0) for the per-step click
tests and (seed..., 1) for channel choices, which makes records
bit-reproducible and lets ensembles run the same streams in batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .fock import (
    HilbertSpace,
    LinearOperator,
    StateVector,
    build_sigma,
)
from .model import DetectorSpec, TimeDependentOperator

#: First-order jump unraveling is rejected when <R> dt exceeds this.
CLICK_PROBABILITY_CAP = 0.1

#: No-count states below this norm are declared extinct.
NORM_FLOOR = 1e-15


class TrajectoryExtinctError(RuntimeError):
    pass


class JumpStepError(RuntimeError):
    """dt too large for the first-order click probability."""


@dataclass(frozen=True)
class JumpModel:
    """Jump operators with the total click-rate operator R cached."""

    ops: Tuple[LinearOperator, ...]
    rate_op: LinearOperator = field(init=False)

    def __post_init__(self):
        if not self.ops:
            raise ValueError("jump model needs at least one operator")
        space = self.ops[0].space
        r = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
        for op in self.ops:
            if op.space != space:
                raise ValueError("jump operators live on different spaces")
            r = r + op.matrix.getH() @ op.matrix
        object.__setattr__(self, "rate_op", LinearOperator(sp.csr_matrix(r), space))

    @property
    def space(self) -> HilbertSpace:
        return self.ops[0].space

    def expected_rate(self, psi: np.ndarray) -> float:
        """<R> of a normalized amplitude vector."""
        return float(np.real(np.vdot(psi, self.rate_op.matrix @ psi)))


def default_jump_model(det: DetectorSpec, space: HilbertSpace, rate: float,
                       per_transition: Optional[Sequence[float]] = None) -> JumpModel:
    """Adjacent-lowering read-out: L_j = sqrt(rate_j) sigma_{j,j+1}.

    A uniform rate is the default; ``per_transition`` overrides it with one
    rate per adjacent pair (the model underlying the read-out does not fix
    this choice, so it stays configurable).
    """
    if rate < 0:
        raise ValueError("read-out rate must be non-negative")
    n = space.n_levels
    if n < 2:
        raise ValueError("read-out needs at least two detector levels")
    rates = list(per_transition) if per_transition is not None else [rate] * (n - 1)
    if len(rates) != n - 1:
        raise ValueError(f"need {n - 1} transition rates, got {len(rates)}")
    if any(r < 0 for r in rates):
        raise ValueError("read-out rates must be non-negative")
    ops = tuple(
        LinearOperator(math.sqrt(r) * build_sigma(space, j, j + 1).matrix, space)
        for j, r in enumerate(rates, start=1)
    )
    return JumpModel(ops)


@dataclass(frozen=True)
class PostSelection:
    """Projector onto a subset of detector levels."""

    levels: Tuple[int, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("post-selection needs at least one level")
        if len(set(self.levels)) != len(self.levels):
            raise ValueError("duplicate levels in post-selection")


def postselect(state: StateVector, sel: PostSelection) -> Tuple[StateVector, float]:
    """Collapse onto the selected detector levels.

    Returns the normalized post-measurement state and the outcome
    probability; impossible outcomes (probability < 1e-15) raise.
    """
    space = state.space
    for level in sel.levels:
        if not 1 <= level <= space.n_levels:
            raise ValueError(f"level {level} outside 1..{space.n_levels}")
    psi = state.amplitudes / state.norm()
    mask = np.isin(space.level_array, sel.levels)
    prob = float(np.sum(np.abs(psi[mask]) ** 2))
    if prob < 1e-15:
        raise ValueError(f"post-selection outcome has probability {prob:.1e}")
    collapsed = np.where(mask, psi, 0.0) / math.sqrt(prob)
    return StateVector(collapsed, space), prob


# ---------------------------------------------------------------------------
# conditioned propagation
# ---------------------------------------------------------------------------

def _static_matrix(h: Union[TimeDependentOperator, LinearOperator]) -> sp.csr_matrix:
    if isinstance(h, TimeDependentOperator):
        if not h.is_static:
            raise ValueError("monitoring supports time-independent Hamiltonians; "
                             "run in the RWA interaction picture")
        return h.static
    return h.matrix


def _no_count_generator(h, jump: JumpModel) -> sp.csr_matrix:
    g = sp.csr_matrix(-1j * _static_matrix(h) - 0.5 * jump.rate_op.matrix)
    g.sort_indices()
    return g


def no_count_evolve(h, jump: JumpModel, state: StateVector,
                    t0: float, t1: float, dt: float) -> StateVector:
    """Propagate under H - i R/2 without renormalizing.

    The returned squared norm is the probability of observing no click
    during [t0, t1).  Raises :class:`TrajectoryExtinctError` if the norm
    falls below ``NORM_FLOOR``.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    if state.norm() > 1.0 + 1e-9:
        raise ValueError("initial norm must be <= 1")
    gen = _no_count_generator(h, jump)
    psi = state.amplitudes.astype(np.complex128).copy()
    span = t1 - t0
    if span > 0:
        nsteps = max(1, int(round(span / dt)))
        status, step, info = _kernels.rk4_static_steps(
            gen.data, gen.indices, gen.indptr, psi, span / nsteps, nsteps,
            False, 0.0, NORM_FLOOR**2)
        if status == _kernels.STATUS_UNDERFLOW:
            raise TrajectoryExtinctError(
                f"no-count norm fell below {NORM_FLOOR:.0e} at t = "
                f"{t0 + step * span / nsteps:.6g}")
    return StateVector(psi, state.space)


# ---------------------------------------------------------------------------
# trajectory sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrajectoryRecord:
    """One conditioned trajectory: click log and requested snapshots."""

    click_times: np.ndarray
    click_channels: np.ndarray
    seed: Tuple[int, ...]
    snapshots: Tuple[Tuple[float, StateVector], ...]
    final_state: StateVector
    n_steps: int


def _seed_tuple(seed) -> Tuple[int, ...]:
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def sample_trajectory(h, jump: JumpModel, state: StateVector, t_end: float,
                      dt: float, seed, snapshot_times: Sequence[float] = ()
                      ) -> TrajectoryRecord:
    """Sample one quantum trajectory with the standard jump unraveling.

    Per step: click with probability <R> dt (the step is rejected if that
    exceeds CLICK_PROBABILITY_CAP); on click apply the channel chosen
    proportionally to ||L_i psi||^2 and renormalize, otherwise advance one
    renormalized no-count step.  Deterministic given the seed.
    """
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValueError("initial state must be unit norm")
    seed_t = _seed_tuple(seed)
    rng_click = np.random.default_rng(seed_t + (0,))
    rng_channel = np.random.default_rng(seed_t + (1,))

    gen = _no_count_generator(h, jump)
    l_mats = [op.matrix for op in jump.ops]
    r_mat = jump.rate_op.matrix

    nsteps = max(1, int(round(t_end / dt))) if t_end > 0 else 0
    dt = t_end / nsteps if nsteps else dt
    snap_steps = {min(nsteps, int(round(t / dt))): t for t in snapshot_times} \
        if nsteps else ({0: 0.0} if len(snapshot_times) else {})

    psi = state.amplitudes.astype(np.complex128).copy()
    clicks: List[float] = []
    channels: List[int] = []
    snapshots: List[Tuple[float, StateVector]] = []
    if 0 in snap_steps:
        snapshots.append((0.0, StateVector(psi.copy(), state.space)))

    for step in range(nsteps):
        t = step * dt
        p_click = float(np.real(np.vdot(psi, r_mat @ psi))) * dt
        if p_click > CLICK_PROBABILITY_CAP:
            raise JumpStepError(
                f"<R> dt = {p_click:.3g} exceeds {CLICK_PROBABILITY_CAP} at "
                f"t = {t:.6g}; reduce dt")
        u = rng_click.random()
        if u < p_click:
            weights = np.array([np.linalg.norm(m @ psi) ** 2 for m in l_mats])
            v = rng_channel.random()
            channel = int(np.searchsorted(np.cumsum(weights / weights.sum()), v))
            channel = min(channel, len(l_mats) - 1)
            psi = l_mats[channel] @ psi
            psi /= np.linalg.norm(psi)
            clicks.append(t + dt / 2.0)
            channels.append(channel)
        else:
            status, done, info = _kernels.rk4_static_steps(
                gen.data, gen.indices, gen.indptr, psi, dt, 1,
                False, 0.0, NORM_FLOOR**2)
            if status == _kernels.STATUS_UNDERFLOW:
                raise TrajectoryExtinctError(f"state extinct at t = {t:.6g}")
            psi /= np.linalg.norm(psi)
        if (step + 1) in snap_steps:
            snapshots.append(((step + 1) * dt, StateVector(psi.copy(), state.space)))

    return TrajectoryRecord(
        click_times=np.asarray(clicks),
        click_channels=np.asarray(channels, dtype=int),
        seed=seed_t,
        snapshots=tuple(snapshots),
        final_state=StateVector(psi, state.space),
        n_steps=nsteps,
    )


# ---------------------------------------------------------------------------
# ensembles (vectorized over trajectories)
# ---------------------------------------------------------------------------

@dataclass
class EnsembleResult:
    """Trajectory-averaged observables with standard errors.

    Means are over trajectories at each recorded time; ``click_logs`` holds
    one click-time array per trajectory (same streams as
    :func:`sample_trajectory` with seed (master_seed, index)).  The raw
    per-trajectory records are kept so chunked runs can be pooled into
    exactly the statistics an unchunked run would produce.
    """

    times: np.ndarray
    n_mean: np.ndarray
    n_mean_se: np.ndarray
    populations: np.ndarray
    populations_se: np.ndarray
    click_logs: Tuple[np.ndarray, ...]
    click_channel_logs: Tuple[np.ndarray, ...]
    n_trajectories: int
    master_seed: int
    n_by_trajectory: np.ndarray = None           # (n_records, n_traj)
    populations_by_trajectory: np.ndarray = None  # (n_records, n_levels, n_traj)


def _finalize_ensemble(times, n_by_traj, pops_by_traj, clicks, channels,
                       master_seed) -> EnsembleResult:
    n_traj = n_by_traj.shape[1]
    se_scale = 1.0 / math.sqrt(n_traj) if n_traj > 1 else 0.0
    return EnsembleResult(
        times=np.asarray(times),
        n_mean=n_by_traj.mean(axis=1),
        n_mean_se=n_by_traj.std(axis=1, ddof=1) * se_scale
        if n_traj > 1 else np.zeros(n_by_traj.shape[0]),
        populations=pops_by_traj.mean(axis=2),
        populations_se=pops_by_traj.std(axis=2, ddof=1) * se_scale
        if n_traj > 1 else np.zeros(pops_by_traj.shape[:2]),
        click_logs=tuple(np.asarray(c) for c in clicks),
        click_channel_logs=tuple(np.asarray(c, dtype=int) for c in channels),
        n_trajectories=n_traj,
        master_seed=master_seed,
        n_by_trajectory=n_by_traj,
        populations_by_trajectory=pops_by_traj,
    )


def pool_ensembles(parts: Sequence[EnsembleResult]) -> EnsembleResult:
    """Combine chunked ensembles exactly as one unchunked run (chunks must
    hold consecutive trajectory indices in order)."""
    if len(parts) == 1:
        return parts[0]
    n_by = np.concatenate([p.n_by_trajectory for p in parts], axis=1)
    p_by = np.concatenate([p.populations_by_trajectory for p in parts], axis=2)
    clicks = [c for p in parts for c in p.click_logs]
    channels = [c for p in parts for c in p.click_channel_logs]
    return _finalize_ensemble(parts[0].times, n_by, p_by, clicks, channels,
                              parts[0].master_seed)


def trajectory_ensemble(h, jump: JumpModel, state: StateVector, t_end: float,
                        dt: float, n_trajectories: int, master_seed: int,
                        record_every: Optional[int] = None,
                        rng_block: int = 512,
                        index_offset: int = 0) -> EnsembleResult:
    """Run ``n_trajectories`` conditioned trajectories in one vectorized batch.

    Equivalent to calling :func:`sample_trajectory` with seeds
    (master_seed, index_offset..index_offset+n-1); the batch consumes
    identical random streams, so individual trajectories can be reproduced
    standalone and chunked runs (worker pools) reproduce unchunked ones.
    """
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValueError("initial state must be unit norm")
    if n_trajectories < 1:
        raise ValueError("need at least one trajectory")

    gen = _no_count_generator(h, jump)
    l_mats = [op.matrix for op in jump.ops]
    r_mat = jump.rate_op.matrix
    dim = state.space.dim

    nsteps = max(1, int(round(t_end / dt))) if t_end > 0 else 0
    dt = t_end / nsteps if nsteps else dt
    if record_every is None:
        record_every = max(1, nsteps // 400 or 1)
    record_steps = set(range(0, nsteps + 1, record_every)) | {nsteps}

    click_rngs = [np.random.default_rng((master_seed, index_offset + i, 0))
                  for i in range(n_trajectories)]
    channel_rngs = [np.random.default_rng((master_seed, index_offset + i, 1))
                    for i in range(n_trajectories)]

    psi = np.tile(state.amplitudes.astype(np.complex128)[:, None],
                  (1, n_trajectories))
    n_of = state.space.photon_number_array
    n_levels = state.space.n_levels
    nph = state.space.n_max + 1

    clicks: List[List[float]] = [[] for _ in range(n_trajectories)]
    channels: List[List[int]] = [[] for _ in range(n_trajectories)]
    times, n_rows, pop_rows = [], [], []

    def record(t: float) -> None:
        prob = np.abs(psi) ** 2
        prob /= prob.sum(axis=0)
        times.append(t)
        n_rows.append(prob.T @ n_of)
        pop_rows.append(prob.reshape(n_levels, nph, n_trajectories).sum(axis=1))

    record(0.0)
    u_block = np.empty((0, n_trajectories))
    block_offset = 0
    stage = np.empty_like(psi)

    for step in range(nsteps):
        local = step - block_offset
        if local >= u_block.shape[0]:
            block_offset = step
            length = min(rng_block, nsteps - step)
            u_block = np.stack([g.random(length) for g in click_rngs], axis=1)
            local = 0
        t = step * dt

        # no-count RK4 stages; since <psi|H|psi> is real for normalized
        # columns, Re<psi|k1> = -<R>/2 gives the click rate for free
        k1 = gen @ psi
        p_click = -2.0 * dt * np.einsum("ij,ij->j", np.conj(psi), k1).real
        if np.max(p_click) > CLICK_PROBABILITY_CAP:
            raise JumpStepError(
                f"<R> dt up to {np.max(p_click):.3g} exceeds "
                f"{CLICK_PROBABILITY_CAP} at t = {t:.6g}; reduce dt")
        clicked = np.nonzero(u_block[local] < p_click)[0]

        np.multiply(k1, dt / 2.0, out=stage)
        stage += psi
        k2 = gen @ stage
        np.multiply(k2, dt / 2.0, out=stage)
        stage += psi
        k3 = gen @ stage
        np.multiply(k3, dt, out=stage)
        stage += psi
        k4 = gen @ stage
        k2 += k3
        k1 += k4
        k1 += 2.0 * k2
        k1 *= dt / 6.0
        evolved = k1
        evolved += psi

        if clicked.size:
            pre = psi[:, clicked]
            jumped = np.empty_like(pre)
            w = np.stack([np.linalg.norm(m @ pre, axis=0) ** 2 for m in l_mats])
            w_cum = np.cumsum(w / w.sum(axis=0), axis=0)
            for col, traj in enumerate(clicked):
                v = channel_rngs[traj].random()
                ch = int(np.searchsorted(w_cum[:, col], v))
                ch = min(ch, len(l_mats) - 1)
                jumped[:, col] = l_mats[ch] @ pre[:, col]
                clicks[traj].append(t + dt / 2.0)
                channels[traj].append(ch)
            evolved[:, clicked] = jumped

        norms = np.linalg.norm(evolved, axis=0)
        if np.min(norms) < NORM_FLOOR:
            raise TrajectoryExtinctError(f"a trajectory went extinct at t = {t:.6g}")
        psi = evolved / norms

        if (step + 1) in record_steps:
            record((step + 1) * dt)

    return _finalize_ensemble(np.asarray(times), np.asarray(n_rows),
                              np.asarray(pop_rows), clicks, channels,
                              master_seed)
