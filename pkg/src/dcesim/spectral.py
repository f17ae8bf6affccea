"""Dressed-state analysis of the unmodulated (eps = 0) detector--field system.

With the modulation switched off the interaction-picture Hamiltonian
conserves the total excitation number m = n + (j - 1), so it splits into
blocks of size min(N, m + 1) that are diagonalized exactly.  The squeeze
term i*beta*(a^dag^2 - a^2) couples dressed states two excitations apart;
whenever a chain of such couplings is (quasi-)degenerate, photons flow
from the vacuum.  This module builds the dressed eigensystem, the
zero-eigenvalue states that carry the resonant pair cascade, and the
catalog of resonance shifts at which the modulation becomes effective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from . import oracle
from .fock import HilbertSpace, StateVector, build_annihilation
from .model import DetectorKind, DetectorSpec, ModulationSpec, dicke_to_ladder

#: Default window for flagging a dressed-state pair as resonantly coupled:
#: the eigenvalue gap must be below window * |beta0 * matrix element|.
RESONANCE_WINDOW = 0.2

_ZERO_EIGENVALUE_TOL = 1e-12


@dataclass(frozen=True)
class DressedState:
    """Eigenstate of the eps = 0 Hamiltonian within one excitation block.

    ``m`` is the total excitation number, ``k`` the branch index: 0 marks
    the zero-eigenvalue branch where one exists, negative/positive indices
    count below/above it in eigenvalue order.  ``basis`` lists the bare
    (level, photons) kets carrying ``amplitudes``.
    """

    m: int
    k: int
    eigenvalue: float
    basis: Tuple[Tuple[int, int], ...]
    amplitudes: np.ndarray

    def embed(self, space: HilbertSpace) -> StateVector:
        amps = np.zeros(space.dim, dtype=np.complex128)
        for (level, n), c in zip(self.basis, self.amplitudes):
            amps[space.index(level, n)] = c
        return StateVector(amps, space)


def excitation_block(det: DetectorSpec, m: int, omega0: Optional[float] = None,
                     r: float = 0.0) -> Tuple[Tuple[Tuple[int, int], ...], np.ndarray]:
    """Basis and dense Hamiltonian of the m-excitation block at eps = 0.

    The block spans |j, m - j + 1> for j = 1..min(N, m + 1); with the
    detunings Delta_j = omega0 - (E_{j+1} - E_j) its matrix is tridiagonal:
    diag(j) = -r*m - sum_{i<j} Delta_i, offdiag(j) = g_j*sqrt(m - j + 1).
    ``omega0 = None`` treats the ladder as exactly resonant (all Delta = 0).
    """
    if m < 0:
        raise ValueError("excitation number must be non-negative")
    n_levels = det.n_levels
    energies, couplings = det.ladder_parameters(n_levels)
    if omega0 is None:
        deltas = np.zeros(max(n_levels - 1, 0))
    else:
        deltas = omega0 - np.diff(energies)

    size = min(n_levels, m + 1)
    basis = tuple((j, m - (j - 1)) for j in range(1, size + 1))
    h = np.zeros((size, size))
    cum = 0.0
    for j in range(1, size + 1):
        h[j - 1, j - 1] = -r * m - cum
        if j <= len(deltas):
            cum += deltas[j - 1]
        if j < size:
            t = couplings[j - 1] * math.sqrt(m - (j - 1))
            h[j, j - 1] = t
            h[j - 1, j] = t
    return basis, h


def dressed_eigensystem(det: DetectorSpec, m: int, omega0: Optional[float] = None,
                        r: float = 0.0) -> Tuple[DressedState, ...]:
    """All dressed states of the m-excitation block, branch-labeled.

    Branch indices follow the sign of the eigenvalue at r = 0 (the uniform
    -r*m shift is removed before labeling).  The sign convention makes the
    first nonzero amplitude, in level order, positive real.
    """
    basis, h = excitation_block(det, m, omega0, r)
    vals, vecs = np.linalg.eigh(h)
    shifted = vals + r * m
    scale = max(1.0, float(np.max(np.abs(shifted))))
    zero_mask = np.abs(shifted) < _ZERO_EIGENVALUE_TOL * scale
    n_neg = int(np.sum(shifted < 0) - np.sum(zero_mask & (shifted < 0)))

    states = []
    pos_rank = 0
    neg_rank = -n_neg
    for i in range(len(vals)):
        if zero_mask[i]:
            k = 0
        elif shifted[i] < 0:
            k = neg_rank
            neg_rank += 1
        else:
            pos_rank += 1
            k = pos_rank
        vec = vecs[:, i].astype(np.complex128)
        lead = vec[np.argmax(np.abs(vec) > 1e-14)]
        if lead != 0:
            vec = vec * (abs(lead) / lead)
        states.append(DressedState(m, k, float(vals[i]), basis, vec))
    return tuple(states)


# ---------------------------------------------------------------------------
# closed-form eigensystems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JCDoublet:
    """Jaynes-Cummings doublet with n excitations.

    lambda_{n,+-} = -Delta_1/2 +- z_n,    z_n = sqrt((Delta_1/2)^2 + g1^2 n),
    theta_n = arctan sqrt((z_n + Delta_1/2)/(z_n - Delta_1/2)),
    |phi_{n,+}> = sin(theta_n)|1,n> + cos(theta_n)|2,n-1>,
    |phi_{n,-}> = cos(theta_n)|1,n> - sin(theta_n)|2,n-1>.
    """

    n: int
    z: float
    theta: float
    lam_plus: float
    lam_minus: float
    basis: Tuple[Tuple[int, int], Tuple[int, int]]
    state_plus: np.ndarray
    state_minus: np.ndarray


def jc_eigensystem(g1: float, delta1: float, n: int) -> JCDoublet:
    """Excited Jaynes-Cummings eigensystem; n = 0 is the |1,0> ground state
    with eigenvalue 0 and is handled separately by its callers."""
    if n < 1:
        raise ValueError("jc_eigensystem requires n >= 1 excitations")
    z = math.sqrt((delta1 / 2.0) ** 2 + g1**2 * n)
    if z == 0.0:
        raise ValueError("degenerate block: g1 = 0 and Delta_1 = 0")
    # theta branch fixed to (0, pi/2) to match the sin/cos eigenvector form
    theta = math.atan(math.sqrt((z + delta1 / 2.0) / (z - delta1 / 2.0))) \
        if z > delta1 / 2.0 else math.pi / 2.0
    plus = np.array([math.sin(theta), math.cos(theta)], dtype=np.complex128)
    minus = np.array([math.cos(theta), -math.sin(theta)], dtype=np.complex128)
    return JCDoublet(
        n=n,
        z=z,
        theta=theta,
        lam_plus=-delta1 / 2.0 + z,
        lam_minus=-delta1 / 2.0 - z,
        basis=((1, n), (2, n - 1)),
        state_plus=plus,
        state_minus=minus,
    )


@dataclass(frozen=True)
class ThreeLevelPair:
    """Nonzero eigenpair +-lambda_n of the resonant three-level block."""

    n: int
    lam: float
    basis: Tuple[Tuple[int, int], ...]
    state_plus: np.ndarray
    state_minus: np.ndarray


def three_level_eigensystem(g1: float, g2: float, n: int) -> ThreeLevelPair:
    """Resonant (Delta_1 = Delta_2 = 0) three-level nonzero eigenpairs.

    lambda_n = sqrt(n g1^2 + (n-1) g2^2) and
    |phi_{n,+-}> = (sqrt(n) g1 |1,n> +- lambda_n |2,n-1>
                    + g2 sqrt(n-1) |3,n-2>) / (sqrt(2) lambda_n);
    the zero branch is produced by :func:`null_eigenstate`.
    """
    if n < 1:
        raise ValueError("three_level_eigensystem requires n >= 1")
    lam = math.sqrt(n * g1**2 + (n - 1) * g2**2)
    if lam == 0.0:
        raise ValueError("degenerate block: both couplings vanish")
    if n == 1:
        basis: Tuple[Tuple[int, int], ...] = ((1, 1), (2, 0))
        top = np.array([math.sqrt(1) * g1, lam], dtype=np.complex128)
    else:
        basis = ((1, n), (2, n - 1), (3, n - 2))
        top = np.array(
            [math.sqrt(n) * g1, lam, g2 * math.sqrt(n - 1)], dtype=np.complex128
        )
    plus = top / (math.sqrt(2) * lam)
    minus = plus.copy()
    minus[1] = -minus[1]
    return ThreeLevelPair(n=n, lam=lam, basis=basis,
                          state_plus=plus, state_minus=minus)


def null_eigenstate(det: DetectorSpec, m: int,
                    omega0: Optional[float] = None) -> Optional[DressedState]:
    """Zero-eigenvalue dressed state of the resonant m-excitation block.

    Built from the recursion alpha_{k+1} = -alpha_k g_{2k+1} sqrt(m - 2k)
    / (g_{2k+2} sqrt(m - 2k - 1)) over the odd levels |2k+1, m-2k>, with
    alpha_0 = 1 and positive real normalization.

    A zero mode exists exactly when the block size min(N, m + 1) is odd:
    for even N that means even m <= N - 2, which bounds the photon cascade
    at N - 2; for odd N every even m (and m >= N - 1 of either parity)
    carries one, so the cascade from vacuum is unbounded.  Returns ``None``
    when the block has no zero mode; m = 0 returns |1, 0>.
    """
    n_levels = det.n_levels
    energies, couplings = det.ladder_parameters(n_levels)
    if omega0 is not None:
        deltas = omega0 - np.diff(energies)
        if len(deltas) and np.max(np.abs(deltas)) > 1e-12 * abs(omega0):
            raise ValueError("null eigenstate requires a resonant ladder (all Delta_j = 0)")
    if any(g == 0.0 for g in couplings):
        raise ValueError("null-state recursion requires nonzero couplings")

    if m == 0:
        return DressedState(0, 0, 0.0, ((1, 0),),
                            np.array([1.0], dtype=np.complex128))
    size = min(n_levels, m + 1)
    if size % 2 == 0:
        return None

    basis: List[Tuple[int, int]] = []
    amps: List[float] = []
    alpha = 1.0
    for k in range((size + 1) // 2):
        level = 2 * k + 1
        photons = m - 2 * k
        basis.append((level, photons))
        amps.append(alpha)
        if level + 2 <= size:
            alpha = -alpha * (couplings[level - 1] * math.sqrt(m - 2 * k)) / (
                couplings[level] * math.sqrt(m - 2 * k - 1)
            )
    vec = np.asarray(amps, dtype=np.complex128)
    vec /= np.linalg.norm(vec)
    return DressedState(m, 0, 0.0, tuple(basis), vec)


# ---------------------------------------------------------------------------
# dressed-state couplings induced by the modulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DressedCoupling:
    """One squeeze-operator matrix element between two dressed states."""

    bra: Tuple[int, int]       # (m, k)
    ket: Tuple[int, int]
    element: complex           # beta0 * <phi_bra| (a^dag^2 - a^2) |phi_ket>
    gap: float                 # |lambda_bra - lambda_ket|
    resonant: bool


@dataclass(frozen=True)
class DressedCouplingMatrix:
    states: Tuple[DressedState, ...]
    couplings: Tuple[DressedCoupling, ...]

    def resonant_chain(self) -> Tuple[Tuple[int, int], ...]:
        """Sorted labels of states touched by at least one resonant coupling."""
        labels = set()
        for c in self.couplings:
            if c.resonant:
                labels.add(c.bra)
                labels.add(c.ket)
        return tuple(sorted(labels))


def dressed_coupling_matrix(det: DetectorSpec, mod: ModulationSpec, m_cap: int,
                            space: Optional[HilbertSpace] = None,
                            resonance_window: float = RESONANCE_WINDOW
                            ) -> DressedCouplingMatrix:
    """Squeeze-term matrix elements between all dressed states with m <= m_cap.

    An element is flagged resonant when the eigenvalue gap is smaller than
    ``resonance_window`` times the coupling |beta0 * element|; the window
    default separates the weak-modulation regimes cleanly while remaining
    configurable.  Eigenvalues include the -r*m shift of the block.
    """
    if space is None:
        space = HilbertSpace(n_max=max(m_cap, 2), n_levels=det.n_levels)
    if m_cap > space.n_max:
        raise ValueError(f"m_cap = {m_cap} exceeds the field truncation {space.n_max}")

    blocks = [dressed_eigensystem(det, m, mod.omega0, mod.r) for m in range(m_cap + 1)]
    a = build_annihilation(space).matrix
    a2 = a @ a
    squeeze = (a2.getH() - a2).tocsr()

    embedded: Dict[Tuple[int, int], np.ndarray] = {}
    for block in blocks:
        for st in block:
            embedded[(st.m, st.k)] = st.embed(space).amplitudes

    all_states = tuple(st for block in blocks for st in block)
    couplings: List[DressedCoupling] = []
    beta0 = mod.beta0
    for m in range(m_cap - 1):
        for st_lo in blocks[m]:
            lo = embedded[(st_lo.m, st_lo.k)]
            for st_hi in blocks[m + 2]:
                hi = embedded[(st_hi.m, st_hi.k)]
                elem = beta0 * complex(np.vdot(hi, squeeze @ lo))
                if elem == 0.0:
                    continue
                gap = abs(st_hi.eigenvalue - st_lo.eigenvalue)
                couplings.append(DressedCoupling(
                    bra=(st_hi.m, st_hi.k),
                    ket=(st_lo.m, st_lo.k),
                    element=elem,
                    gap=gap,
                    resonant=bool(gap < resonance_window * abs(elem)),
                ))
    return DressedCouplingMatrix(all_states, tuple(couplings))


# ---------------------------------------------------------------------------
# resonance catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResonanceEntry:
    """One modulation resonance: shift r and the photon-generation regime."""

    r: float
    regime: str                       # unbounded | bounded | two_state_oscillation | dispersive
    formula: str                      # provenance id, reproducible from the specs
    branch: Optional[int] = None      # +-1 for signed entry pairs
    max_photons: Optional[int] = None
    oscillation_frequency: Optional[float] = None
    mean_photon_law: Optional[str] = None
    description: str = ""


def _beta_r(mod: ModulationSpec, r: float) -> float:
    return (1.0 + r / mod.omega0) * mod.epsilon / 4.0


def resonance_catalog(det: DetectorSpec, mod: ModulationSpec) -> Tuple[ResonanceEntry, ...]:
    """Resonance shifts at which vacuum photon generation is effective.

    Emits the r = 0 entry (regime decided by the detector kind and level
    parity), the pair-creation entries 2r = +-sqrt(2 g1^2 + g2^2) for
    ladders with N >= 3 (with the two-state oscillation frequency attached
    for N = 3), the harmonic-oscillator entries r = +-g, and for N = 2 the
    shifted entries 2r = S z_2 - Delta_1/2 + y plus the dispersive entry
    2r = 2 delta.  ``mod.y`` is folded into the two-level entries.
    """
    entries: List[ResonanceEntry] = []

    if det.kind is DetectorKind.NONE:
        entries.append(ResonanceEntry(
            r=0.0, regime="unbounded", formula="empty_cavity",
            mean_photon_law="sinh^2(2*beta0*t)",
            description="empty cavity; photon pairs at rate 4*beta0"))
        return tuple(entries)

    if det.kind is DetectorKind.HARMONIC_OSCILLATOR:
        g = det.couplings[0]
        entries.append(ResonanceEntry(
            r=0.0, regime="unbounded", formula="ho_central",
            mean_photon_law="~exp(2*beta0*t) with shelves of spacing pi/gamma",
            description="harmonic-oscillator detector at the central resonance"))
        for sign in (+1, -1):
            entries.append(ResonanceEntry(
                r=sign * g, regime="unbounded", formula="ho_shifted", branch=sign,
                mean_photon_law="sinh^2(beta0*t)/2",
                description="normal-mode resonance of the coupled oscillators"))
        return tuple(entries)

    ladder = dicke_to_ladder(det) if det.kind is DetectorKind.DICKE_NETWORK else det
    n_levels = ladder.n_levels
    energies, couplings = ladder.ladder_parameters()
    deltas = mod.omega0 - np.diff(energies)

    if n_levels % 2 == 1:
        entries.append(ResonanceEntry(
            r=0.0, regime="unbounded", formula="null_cascade_odd_n",
            description="odd level count: zero-mode cascade, unlimited photons"))
    else:
        entries.append(ResonanceEntry(
            r=0.0, regime="bounded", formula="null_cascade_even_n",
            max_photons=n_levels - 2,
            description="even level count: cascade stops at m = N - 2"))

    if n_levels >= 3:
        g1, g2 = couplings[0], couplings[1]
        lam2 = math.sqrt(2.0 * g1**2 + g2**2)
        for sign in (+1, -1):
            r = sign * lam2 / 2.0
            if n_levels == 3:
                freq = oracle.three_level_oscillation_frequency(
                    g1, g2, _beta_r(mod, r))
                entries.append(ResonanceEntry(
                    r=r, regime="two_state_oscillation", formula="three_level_pair",
                    branch=sign, oscillation_frequency=freq,
                    description="oscillation between |1,0> and the m = 2 dressed "
                                "doublet; population period pi/frequency"))
            else:
                entries.append(ResonanceEntry(
                    r=r, regime="bounded", formula="pair_channel", branch=sign,
                    max_photons=2,
                    description="pair-creation channel (at least two photons "
                                "reachable from vacuum)"))

    if n_levels == 2:
        g1 = couplings[0]
        delta1 = float(deltas[0])
        z2 = math.sqrt((delta1 / 2.0) ** 2 + 2.0 * g1**2)
        for s in (+1, -1):
            r = (s * z2 - delta1 / 2.0 + mod.y) / 2.0
            cascaded = delta1 != 0.0 and s == math.copysign(1.0, delta1)
            entries.append(ResonanceEntry(
                r=r,
                regime="unbounded" if cascaded else "bounded",
                formula="two_level_shifted",
                branch=s,
                max_photons=None if cascaded else 2,
                description=("quasi-resonant cascade through the S-branch "
                             "doublets" if cascaded else
                             "couples |1,0> to the m = 2 doublet only")))
        if delta1 != 0.0:
            delta_shift = oracle.dispersive_shift(g1, delta1)
            entries.append(ResonanceEntry(
                r=delta_shift, regime="dispersive", formula="two_level_dispersive",
                description="dispersive cascade, level spacing 2|delta| "
                            "(valid while (Delta_1/2)^2 >> g1^2 n)"))
    return tuple(entries)
