"""Hamiltonians of a frequency-modulated cavity with an intracavity detector.

The cavity frequency is modulated as w_t = w0 + eps*sin(eta*t) with
eta = 2*w0 + 2*r, where 2*r is the resonance shift from the standard
two-photon resonance.  The lab-frame Hamiltonian carries the induced
squeezing term i*chi_t*(a^dag^2 - a^2); in the interaction picture (and
after the rotating wave approximation) the dynamics is governed by the
time-independent operator

    H = i*beta_r*(a^dag^2 - a^2) - r*n
        - sum_l sum_{j<=l} (Delta_j + r) sigma_{l+1}
        + sum_l g_l (a sigma_{l+1,l} + h.c.),

with beta_r = (1 + r/w0)*eps/4 and Delta_j = w0 - (E_{j+1} - E_j).
The detector is an N-level ladder atom; harmonic-oscillator detectors and
networks of identical two-level atoms map onto equivalent ladder spectra.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .fock import (
    Hermiticity,
    HilbertSpace,
    LinearOperator,
    build_annihilation,
    build_sigma,
    number_operator,
)

#: Validity guard for the second-order strong-modulation expansion.
XI_CAP = 0.3

#: Hard cap on explicit multi-atom network sizes (dimension 2^atoms grows fast).
DICKE_ATOM_CAP = 4


class DetectorKind(enum.Enum):
    LADDER = "ladder"
    HARMONIC_OSCILLATOR = "harmonic_oscillator"
    DICKE_NETWORK = "dicke_network"
    NONE = "none"


class FrameTag(enum.Enum):
    """Reference frame of a Hamiltonian or an observable series."""

    LAB = "lab"
    RWA_INTERACTION = "rwa_interaction"
    TWO_LEVEL_ROTATED = "two_level_rotated"


@dataclass(frozen=True)
class DetectorSpec:
    """Detector parameters: level energies E_j and ladder couplings g_j.

    For ``harmonic_oscillator`` only the base coupling g is stored
    (g_l = g*sqrt(l) implied; the effective level count follows the field
    cutoff).  For ``dicke_network`` the fields describe ``atoms`` identical
    two-level atoms with common transition frequency ``omega`` and common
    coupling g.
    """

    kind: DetectorKind
    energies: Tuple[float, ...] = ()
    couplings: Tuple[float, ...] = ()
    omega: Optional[float] = None
    atoms: Optional[int] = None

    def __post_init__(self):
        if self.kind is DetectorKind.LADDER:
            if len(self.energies) < 1:
                raise ValueError("ladder detector needs at least one level")
            if len(self.couplings) != len(self.energies) - 1:
                raise ValueError(
                    f"{len(self.energies)} levels require "
                    f"{len(self.energies) - 1} couplings, got {len(self.couplings)}"
                )
            if any(e2 < e1 for e1, e2 in zip(self.energies, self.energies[1:])):
                raise ValueError("ladder energies must be monotone non-decreasing")
        elif self.kind is DetectorKind.HARMONIC_OSCILLATOR:
            if self.omega is None or len(self.couplings) != 1:
                raise ValueError("harmonic oscillator needs omega and a single g")
        elif self.kind is DetectorKind.DICKE_NETWORK:
            if self.atoms is None or self.atoms < 1:
                raise ValueError("dicke network needs atoms >= 1")
            if self.omega is None or len(self.couplings) != 1:
                raise ValueError("dicke network needs omega and a single g")

    # -- constructors ------------------------------------------------------

    @classmethod
    def ladder(cls, energies: Sequence[float], couplings: Sequence[float]) -> "DetectorSpec":
        return cls(DetectorKind.LADDER, tuple(float(e) for e in energies),
                   tuple(float(g) for g in couplings))

    @classmethod
    def equidistant_ladder(cls, n_levels: int, omega: float,
                           couplings: Sequence[float]) -> "DetectorSpec":
        """Ladder with E_j = omega*(j-1)."""
        return cls.ladder([omega * j for j in range(n_levels)], couplings)

    @classmethod
    def harmonic_oscillator(cls, g: float, omega: float) -> "DetectorSpec":
        return cls(DetectorKind.HARMONIC_OSCILLATOR, (), (float(g),), float(omega))

    @classmethod
    def dicke_network(cls, atoms: int, omega: float, g: float) -> "DetectorSpec":
        return cls(DetectorKind.DICKE_NETWORK, (), (float(g),), float(omega), int(atoms))

    @classmethod
    def none(cls) -> "DetectorSpec":
        """Empty cavity."""
        return cls(DetectorKind.NONE, (0.0,), ())

    # -- derived quantities ------------------------------------------------

    @property
    def n_levels(self) -> int:
        """Ladder level count N; None-kind counts as a single inert level."""
        if self.kind in (DetectorKind.LADDER, DetectorKind.NONE):
            return len(self.energies)
        if self.kind is DetectorKind.DICKE_NETWORK:
            return self.atoms + 1
        raise ValueError("harmonic oscillator level count follows the field cutoff")

    def ladder_parameters(self, n_levels: Optional[int] = None
                          ) -> Tuple[np.ndarray, np.ndarray]:
        """Concrete (energies, couplings) arrays for Hamiltonian assembly.

        ``n_levels`` is required for the harmonic oscillator, whose ladder
        is truncated by the caller's space.
        """
        if self.kind in (DetectorKind.LADDER, DetectorKind.NONE):
            return np.asarray(self.energies), np.asarray(self.couplings)
        if self.kind is DetectorKind.HARMONIC_OSCILLATOR:
            if n_levels is None:
                raise ValueError("harmonic oscillator needs an explicit level count")
            g = self.couplings[0]
            energies = self.omega * np.arange(n_levels, dtype=float)
            couplings = g * np.sqrt(np.arange(1, n_levels, dtype=float))
            return energies, couplings
        # Dicke network: equivalent equidistant ladder (see dicke_to_ladder).
        return dicke_to_ladder(self).ladder_parameters()

    def detunings(self, omega0: float, n_levels: Optional[int] = None) -> np.ndarray:
        """Delta_j = omega0 - (E_{j+1} - E_j) for each adjacent pair."""
        energies, _ = self.ladder_parameters(n_levels)
        return omega0 - np.diff(energies)


def dicke_to_ladder(network: DetectorSpec) -> DetectorSpec:
    """Map a network of identical two-level atoms to an N-level ladder.

    (N-1) atoms with transition frequency Omega and common coupling g are
    equivalent, within the symmetric Dicke sector, to an equidistant ladder
    with E_j = Omega*(j-1) and g_j = g*sqrt(j*(N-j)).  Non-identical atoms
    are not representable by this spec and therefore not supported.
    """
    if network.kind is not DetectorKind.DICKE_NETWORK:
        raise ValueError("dicke_to_ladder expects a dicke_network detector")
    n = network.atoms + 1
    g = network.couplings[0]
    couplings = [g * math.sqrt(j * (n - j)) for j in range(1, n)]
    return DetectorSpec.equidistant_ladder(n, network.omega, couplings)


@dataclass(frozen=True)
class ModulationSpec:
    """Harmonic frequency modulation w_t = w0 + eps*sin(eta*t).

    ``r`` is the resonance shift: eta = 2*w0 + 2*r.  ``y`` records the
    small correctional shift (order eps) already folded into ``r`` by the
    resonance formulas; it does not enter eta a second time.
    """

    omega0: float
    epsilon: float
    r: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        ratio = abs(self.epsilon) / self.omega0
        if ratio >= 0.1:
            raise ValueError(
                f"|epsilon|/omega0 = {ratio:.3g} outside the shallow-modulation "
                "regime (must be < 0.1)"
            )
        if ratio > 0.01:
            warnings.warn(
                f"|epsilon|/omega0 = {ratio:.3g} > 0.01: second-order modulation "
                "corrections may not be negligible",
                stacklevel=2,
            )

    @property
    def eta(self) -> float:
        return 2.0 * self.omega0 + 2.0 * self.r

    @property
    def beta0(self) -> float:
        return self.epsilon / 4.0

    @property
    def beta_r(self) -> float:
        return (1.0 + self.r / self.omega0) * self.epsilon / 4.0

    def omega_t(self, t: float) -> float:
        return self.omega0 + self.epsilon * math.sin(self.eta * t)

    def chi(self, t: float, form: str = "approximate") -> float:
        """Squeezing coefficient chi_t.

        ``approximate``: (eps*eta/4w0) cos(eta t), the form used throughout
        the shallow-modulation analysis.  ``exact``: (4 w_t)^-1 dw_t/dt.
        """
        if form == "approximate":
            return (self.epsilon * self.eta / (4.0 * self.omega0)) * math.cos(self.eta * t)
        if form == "exact":
            return (self.epsilon * self.eta * math.cos(self.eta * t)
                    / (4.0 * self.omega_t(t)))
        raise ValueError(f"unknown chi form {form!r}")

    def with_shift(self, r: float, y: float = 0.0) -> "ModulationSpec":
        return ModulationSpec(self.omega0, self.epsilon, r, y)


# ---------------------------------------------------------------------------
# time-dependent operator container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpEnvelope:
    """Scalar envelope f(t) = amplitude * exp(i frequency t).

    Real modulations enter as conjugate pairs; keeping envelopes in this
    parametric form lets the integrator evaluate them inside a compiled
    stepping kernel.
    """

    amplitude: complex
    frequency: float

    def __call__(self, t: float) -> complex:
        return self.amplitude * np.exp(1j * self.frequency * t)

    def bound(self) -> float:
        return abs(self.amplitude)


Envelope = Union["ExpEnvelope", Callable[[float], complex]]


@dataclass(frozen=True)
class TimeDependentOperator:
    """H(t) = static + sum_k f_k(t) * part_k with scalar envelopes f_k.

    The integrator re-evaluates the cheap scalar envelopes inside substeps
    instead of rebuilding matrices.  ``parts`` may be empty, in which case
    the operator is time-independent.  Envelopes are either
    :class:`ExpEnvelope` instances (compiled fast path) or arbitrary
    callables (generic path).
    """

    space: HilbertSpace
    frame: FrameTag
    static: sp.csr_matrix
    parts: Tuple[Tuple[sp.csr_matrix, Envelope], ...] = ()

    @property
    def is_static(self) -> bool:
        return len(self.parts) == 0

    @property
    def has_exp_envelopes(self) -> bool:
        return all(isinstance(env, ExpEnvelope) for _, env in self.parts)

    def materialize(self, t: float) -> sp.csr_matrix:
        m = self.static
        for mat, env in self.parts:
            m = m + complex(env(t)) * mat
        return sp.csr_matrix(m)

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        out = self.static @ psi
        for mat, env in self.parts:
            out = out + complex(env(t)) * (mat @ psi)
        return out

    def as_linear_operator(self, hermiticity: Hermiticity = Hermiticity.HERMITIAN
                           ) -> LinearOperator:
        if not self.is_static:
            raise ValueError("operator is time dependent")
        return LinearOperator(self.static, self.space, hermiticity)

    def norm_bound(self) -> float:
        """Upper bound on the spectral radius: max absolute row sum with
        every envelope at its magnitude bound."""
        total = abs(self.static)
        for mat, env in self.parts:
            amp = env.bound() if isinstance(env, ExpEnvelope) else 1.0
            total = total + amp * abs(mat)
        rows = np.asarray(total.sum(axis=1)).ravel()
        return float(rows.max()) if rows.size else 0.0


def _squeeze_generator(space: HilbertSpace) -> sp.csr_matrix:
    """i*(a^dag^2 - a^2); Hermitian."""
    a = build_annihilation(space).matrix
    a2 = a @ a
    return sp.csr_matrix(1j * (a2.getH() - a2))


def _coupling_terms(space: HilbertSpace, couplings: np.ndarray
                    ) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
    """(sum_l g_l a sigma_{l+1,l},  sum_l g_l a sigma_{l,l+1})."""
    a = build_annihilation(space).matrix
    rotating = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    counter = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for l, g in enumerate(couplings, start=1):
        if g == 0.0:
            continue
        up = build_sigma(space, l + 1, l).matrix
        rotating = rotating + g * (a @ up)
        counter = counter + g * (a @ up.getH())
    return rotating, counter


def _require_ladder_space(det: DetectorSpec, space: HilbertSpace) -> Tuple[np.ndarray, np.ndarray]:
    energies, couplings = det.ladder_parameters(space.n_levels)
    if len(energies) != space.n_levels:
        raise ValueError(
            f"detector has {len(energies)} levels but space has {space.n_levels}"
        )
    return energies, couplings


# ---------------------------------------------------------------------------
# Hamiltonian assembly
# ---------------------------------------------------------------------------

def lab_hamiltonian(det: DetectorSpec, mod: ModulationSpec, space: HilbertSpace,
                    chi_form: str = "approximate") -> TimeDependentOperator:
    """Lab-frame H'(t) = w_t n + i chi_t (a^dag^2 - a^2) + H_detector.

    H_detector = sum_j E_j sigma_j + sum_j g_j (a + a^dag)(sigma_{j+1,j} +
    sigma_{j,j+1}).  Returned as a static part plus two envelope parts for
    the modulated frequency and the squeezing coefficient.
    """
    energies, couplings = _require_ladder_space(det, space)
    n_mat = number_operator(space).matrix
    static = mod.omega0 * n_mat
    for j, e in enumerate(energies, start=1):
        if e != 0.0:
            static = static + e * build_sigma(space, j, j).matrix
    if len(couplings):
        a = build_annihilation(space).matrix
        x = a + a.getH()
        for l, g in enumerate(couplings, start=1):
            if g == 0.0:
                continue
            up = build_sigma(space, l + 1, l).matrix
            static = static + g * (x @ (up + up.getH()))

    eta = mod.eta
    eps = mod.epsilon
    n_csr = sp.csr_matrix(n_mat)
    squeeze = _squeeze_generator(space)
    parts: Tuple[Tuple[sp.csr_matrix, Envelope], ...] = (
        # eps*sin(eta t) = -i eps/2 e^{i eta t} + i eps/2 e^{-i eta t}
        (n_csr, ExpEnvelope(-0.5j * eps, eta)),
        (n_csr, ExpEnvelope(+0.5j * eps, -eta)),
    )
    if chi_form == "approximate":
        amp = eps * eta / (8.0 * mod.omega0)
        parts += ((squeeze, ExpEnvelope(amp, eta)),
                  (squeeze, ExpEnvelope(amp, -eta)))
    else:
        parts += ((squeeze, lambda t: mod.chi(t, chi_form)),)
    return TimeDependentOperator(space, FrameTag.LAB, sp.csr_matrix(static), parts)


def rwa_hamiltonian(det: DetectorSpec, mod: ModulationSpec, space: HilbertSpace,
                    counter_rotating: bool = False) -> TimeDependentOperator:
    """Interaction-picture Hamiltonian after dropping the e^{-i eta t} term.

    With ``counter_rotating=True`` the rapidly oscillating
    g_l (e^{-i eta t} a sigma_{l,l+1} + h.c.) term is retained, which lets
    convergence studies quantify the RWA error instead of assuming it.
    """
    energies, couplings = _require_ladder_space(det, space)
    deltas = mod.omega0 - np.diff(energies) if len(energies) > 1 else np.array([])
    # first-rung coupling gauges the low-excitation regime; upper rungs only
    # matter when populated, which the truncation guard already monitors
    first_g = abs(couplings[0]) if len(couplings) else 0.0
    scale = max([first_g] + [abs(d) for d in deltas])
    if scale > 0.1 * mod.omega0:
        warnings.warn(
            f"couplings/detunings up to {scale:.3g} are not small against "
            f"omega0 = {mod.omega0:.3g}; the rotating wave approximation "
            "may be inaccurate",
            stacklevel=2,
        )

    h = mod.beta_r * _squeeze_generator(space)
    if mod.r != 0.0:
        h = h - mod.r * number_operator(space).matrix
    for l in range(1, space.n_levels):
        # coefficient of sigma_{l+1}: -sum_{j<=l} (Delta_j + r)
        coeff = -(float(np.sum(deltas[:l])) + l * mod.r)
        if coeff != 0.0:
            h = h + coeff * build_sigma(space, l + 1, l + 1).matrix
    rotating, counter = _coupling_terms(space, couplings)
    h = h + rotating + rotating.getH()

    parts: Tuple[Tuple[sp.csr_matrix, Envelope], ...] = ()
    if counter_rotating and counter.nnz:
        counter_dag = sp.csr_matrix(counter.getH())
        parts = (
            (sp.csr_matrix(counter), ExpEnvelope(1.0, -mod.eta)),
            (counter_dag, ExpEnvelope(1.0, mod.eta)),
        )
    return TimeDependentOperator(space, FrameTag.RWA_INTERACTION, sp.csr_matrix(h), parts)


def effective_strong_modulation_hamiltonian(det: DetectorSpec, mod: ModulationSpec,
                                            space: HilbertSpace,
                                            xi_cap: float = XI_CAP
                                            ) -> TimeDependentOperator:
    """Second-order effective Hamiltonian of the strong-modulation regime.

    H_eff = i*beta0 [theta a^dag^2 + sum_{l<=N-2} xi_l xi_{l+1} sigma_{l,l+2}
    - h.c.] with theta = 1 + sum_l xi_l^2 (sigma_{l+1} - sigma_l) and
    xi_l = g_l / (2 beta_r).  Valid for |eps| >> |g_l| at zero resonance
    shift; refuses when any |xi_l| exceeds ``xi_cap`` since the expansion
    is only second order in xi.
    """
    if mod.r != 0.0:
        raise ValueError("effective Hamiltonian is derived for resonance shift r = 0")
    _, couplings = _require_ladder_space(det, space)
    beta = mod.beta_r
    if beta == 0.0:
        raise ValueError("effective Hamiltonian needs nonzero modulation")
    xi = np.asarray(couplings, dtype=float) / (2.0 * beta)
    if xi.size and np.max(np.abs(xi)) > xi_cap:
        raise ValueError(
            f"max |xi_l| = {np.max(np.abs(xi)):.3g} exceeds validity cap {xi_cap}"
        )

    a = build_annihilation(space).matrix
    adag2 = (a @ a).getH()
    theta = sp.identity(space.dim, dtype=np.complex128, format="csr")
    for l in range(1, space.n_levels):
        x2 = xi[l - 1] ** 2
        if x2 == 0.0:
            continue
        theta = theta + x2 * (build_sigma(space, l + 1, l + 1).matrix
                              - build_sigma(space, l, l).matrix)
    inner = theta @ adag2
    for l in range(1, space.n_levels - 1):
        c = xi[l - 1] * xi[l]
        if c != 0.0:
            inner = inner + c * build_sigma(space, l, l + 2).matrix
    h = 1j * mod.beta0 * (inner - inner.getH())
    return TimeDependentOperator(space, FrameTag.RWA_INTERACTION, sp.csr_matrix(h))


def two_level_rotated_hamiltonian(det: DetectorSpec, mod: ModulationSpec,
                                  space: HilbertSpace) -> TimeDependentOperator:
    """H2(t) = -Delta_1 sigma_2 + (i beta_r a^dag^2 e^{-2irt} + g_1 a sigma_{2,1} + h.c.).

    Obtained from the interaction-picture Hamiltonian by the extra rotation
    exp[i r t (n + sigma_2)]; only defined for a two-level detector.  At
    r = 0 the frames coincide and a static operator is returned.
    """
    energies, couplings = _require_ladder_space(det, space)
    if space.n_levels != 2 or len(energies) != 2:
        raise ValueError("two-level rotated frame requires N = 2")
    delta1 = mod.omega0 - (energies[1] - energies[0])
    g1 = couplings[0]

    a = build_annihilation(space).matrix
    adag2 = sp.csr_matrix((a @ a).getH())
    up = build_sigma(space, 2, 1).matrix
    static = -delta1 * build_sigma(space, 2, 2).matrix
    jc = g1 * (a @ up)
    static = static + jc + jc.getH()

    beta = mod.beta_r
    if mod.r == 0.0:
        static = static + beta * _squeeze_generator(space)
        return TimeDependentOperator(space, FrameTag.TWO_LEVEL_ROTATED,
                                     sp.csr_matrix(static))
    r2 = 2.0 * mod.r
    a2 = sp.csr_matrix(a @ a)
    parts = (
        (adag2, ExpEnvelope(1j * beta, -r2)),
        (a2, ExpEnvelope(-1j * beta, r2)),
    )
    return TimeDependentOperator(space, FrameTag.TWO_LEVEL_ROTATED,
                                 sp.csr_matrix(static), parts)


# ---------------------------------------------------------------------------
# explicit atomic networks (oracle for the Dicke-to-ladder mapping)
# ---------------------------------------------------------------------------

def network_space(atoms: int, n_max: int) -> HilbertSpace:
    """Explicit tensor-product space of ``atoms`` two-level atoms and the field.

    Detector 'levels' enumerate atomic configurations: level j corresponds
    to the bit pattern j-1, bit p set meaning atom p excited.
    """
    if atoms > DICKE_ATOM_CAP:
        raise ValueError(f"explicit network capped at {DICKE_ATOM_CAP} atoms")
    return HilbertSpace(n_max=n_max, n_levels=2**atoms)


def collective_spin_operators(space: HilbertSpace, atoms: int
                              ) -> Tuple[LinearOperator, LinearOperator, LinearOperator]:
    """(S_z, S_+, S_-) summed over the atoms of a network space."""
    if space.n_levels != 2**atoms:
        raise ValueError("space does not match the atom count")
    dim_at = 2**atoms
    sz = sp.lil_matrix((dim_at, dim_at))
    splus = sp.lil_matrix((dim_at, dim_at))
    for conf in range(dim_at):
        sz[conf, conf] = bin(conf).count("1")
        for p in range(atoms):
            if not conf & (1 << p):
                splus[conf | (1 << p), conf] += 1.0
    field_id = sp.identity(space.n_max + 1)
    sz_full = sp.kron(sz, field_id, format="csr").astype(np.complex128)
    sp_full = sp.kron(splus, field_id, format="csr").astype(np.complex128)
    return (
        LinearOperator(sz_full, space, Hermiticity.HERMITIAN),
        LinearOperator(sp_full, space),
        LinearOperator(sp_full.getH().tocsr(), space),
    )


def dicke_network_hamiltonian(network: DetectorSpec, mod: ModulationSpec,
                              space: HilbertSpace) -> TimeDependentOperator:
    """Interaction-picture network Hamiltonian on the explicit atom space.

    H = i beta_r (a^dag^2 - a^2) - r n - (Delta + r) S_z
        + g (a S_+ + a^dag S_-),   Delta = w0 - Omega.

    Used only as an oracle for the Dicke-to-ladder mapping, hence the hard
    cap on the atom count.
    """
    if network.kind is not DetectorKind.DICKE_NETWORK:
        raise ValueError("expected a dicke_network detector")
    atoms = network.atoms
    if space.n_levels != 2**atoms:
        raise ValueError(
            f"network of {atoms} atoms needs n_levels = {2**atoms}, "
            f"space has {space.n_levels}"
        )
    g = network.couplings[0]
    delta = mod.omega0 - network.omega

    s_z, s_plus, s_minus = collective_spin_operators(space, atoms)
    a = build_annihilation(space).matrix
    h = mod.beta_r * _squeeze_generator(space)
    if mod.r != 0.0:
        h = h - mod.r * number_operator(space).matrix
    if delta + mod.r != 0.0:
        h = h - (delta + mod.r) * s_z.matrix
    coupling = g * (a @ s_plus.matrix)
    h = h + coupling + coupling.getH()
    return TimeDependentOperator(space, FrameTag.RWA_INTERACTION, sp.csr_matrix(h))


def dicke_symmetric_embedding(atoms: int, ladder_space: HilbertSpace,
                              net_space: HilbertSpace) -> sp.csr_matrix:
    """Isometry from the equivalent-ladder space into the network space.

    Dicke level j maps to the normalized symmetric superposition of all
    configurations with j-1 excited atoms.  Columns are orthonormal.
    """
    if ladder_space.n_levels != atoms + 1 or net_space.n_levels != 2**atoms:
        raise ValueError("space shapes do not match the atom count")
    if ladder_space.n_max != net_space.n_max:
        raise ValueError("field cutoffs differ")
    nph = ladder_space.n_max + 1
    w = sp.lil_matrix((net_space.dim, ladder_space.dim))
    for j in range(atoms + 1):
        confs = [c for c in range(2**atoms) if bin(c).count("1") == j]
        amp = 1.0 / math.sqrt(len(confs))
        for c in confs:
            for n in range(nph):
                w[c * nph + n, j * nph + n] = amp
    return sp.csr_matrix(w)
