"""Truncated Fock space for a composite detector--field system.

The single cavity mode is truncated at ``n_max`` photons and the detector
contributes ``n_levels`` internal states, giving a composite space of
dimension ``n_levels * (n_max + 1)``.  Basis ordering is detector-major:
the index of |j, n> is ``(j - 1) * (n_max + 1) + n``, so the population of
each detector level is a contiguous slice of the amplitude vector.

Operators are stored as sparse CSR matrices (they have O(dim) nonzeros),
states as dense complex vectors.  Expectation values are normalized by
<psi|psi> so that they remain meaningful for the sub-unit-norm states
produced by no-count evolution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np
import scipy.sparse as sp

if TYPE_CHECKING:
    from .model import FrameTag

#: <n> below this floor makes the Mandel Q factor an undefined 0/0 ratio.
Q_FLOOR = 1e-12

#: Elementwise tolerance for the declared-Hermiticity check.
HERMITICITY_TOL = 1e-12


class Hermiticity(enum.Enum):
    """Declared symmetry of a :class:`LinearOperator` matrix."""

    HERMITIAN = "hermitian"
    ANTI_HERMITIAN = "anti_hermitian"
    GENERAL = "general"


@dataclass(frozen=True)
class HilbertSpace:
    """Composite truncated space: ``n_levels`` detector states x Fock space.

    ``n_levels = 1`` describes the empty cavity (no detector).
    """

    n_max: int
    n_levels: int = 1

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")
        if self.n_levels < 1:
            raise ValueError(f"n_levels must be >= 1, got {self.n_levels}")

    @property
    def dim(self) -> int:
        return self.n_levels * (self.n_max + 1)

    def index(self, level: int, n: int) -> int:
        """Basis index of |level, n>."""
        if not 1 <= level <= self.n_levels:
            raise ValueError(f"detector level {level} outside 1..{self.n_levels}")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside 0..{self.n_max}")
        return (level - 1) * (self.n_max + 1) + n

    @cached_property
    def photon_number_array(self) -> np.ndarray:
        """Photon number n at each basis index."""
        return np.tile(np.arange(self.n_max + 1, dtype=float), self.n_levels)

    @cached_property
    def level_array(self) -> np.ndarray:
        """Detector level j (1-based) at each basis index."""
        return np.repeat(np.arange(1, self.n_levels + 1), self.n_max + 1)

    def basis_state(self, level: int = 1, n: int = 0) -> "StateVector":
        amps = np.zeros(self.dim, dtype=np.complex128)
        amps[self.index(level, n)] = 1.0
        return StateVector(amps, self)

    def vacuum(self) -> "StateVector":
        """|1, 0>: detector in its lowest state, field in vacuum."""
        return self.basis_state(1, 0)


@dataclass
class StateVector:
    """Dense complex amplitudes over a :class:`HilbertSpace` basis.

    Unit norm everywhere except inside no-count evolution, where the squared
    norm carries the no-click probability.
    """

    amplitudes: np.ndarray
    space: HilbertSpace

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude vector of length {self.amplitudes.shape} does not "
                f"match space dimension {self.space.dim}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero state")
        return StateVector(self.amplitudes / n, self.space)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.space)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        _check_same_space(self.space, other.space)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class LinearOperator:
    """Sparse operator on a :class:`HilbertSpace` with a declared symmetry.

    A declared HERMITIAN / ANTI_HERMITIAN flag is verified at construction
    (max elementwise deviation below ``HERMITICITY_TOL``).
    """

    matrix: sp.csr_matrix
    space: HilbertSpace
    hermiticity: Hermiticity = Hermiticity.GENERAL

    def __post_init__(self):
        m = sp.csr_matrix(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match space dim {self.space.dim}"
            )
        if self.hermiticity is Hermiticity.HERMITIAN:
            dev = _max_abs(m - m.getH())
            if dev > HERMITICITY_TOL:
                raise ValueError(f"operator declared Hermitian deviates by {dev:.3e}")
        elif self.hermiticity is Hermiticity.ANTI_HERMITIAN:
            dev = _max_abs(m + m.getH())
            if dev > HERMITICITY_TOL:
                raise ValueError(
                    f"operator declared anti-Hermitian deviates by {dev:.3e}"
                )

    def apply(self, state: StateVector) -> StateVector:
        _check_same_space(self.space, state.space)
        return StateVector(self.matrix @ state.amplitudes, self.space)

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.matrix.getH().tocsr(), self.space, self.hermiticity)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        _check_same_space(self.space, other.space)
        return LinearOperator(self.matrix @ other.matrix, self.space)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        _check_same_space(self.space, other.space)
        return LinearOperator(self.matrix + other.matrix, self.space)

    def __mul__(self, scalar: complex) -> "LinearOperator":
        return LinearOperator(self.matrix * scalar, self.space)

    __rmul__ = __mul__


def _max_abs(m: sp.spmatrix) -> float:
    m = sp.coo_matrix(m)
    return float(np.max(np.abs(m.data))) if m.nnz else 0.0


def _check_same_space(a: HilbertSpace, b: HilbertSpace) -> None:
    if a != b:
        raise ValueError(f"space mismatch: {a} vs {b}")


# ---------------------------------------------------------------------------
# operator builders
# ---------------------------------------------------------------------------

def identity(space: HilbertSpace) -> LinearOperator:
    return LinearOperator(
        sp.identity(space.dim, dtype=np.complex128, format="csr"),
        space,
        Hermiticity.HERMITIAN,
    )


def build_annihilation(space: HilbertSpace) -> LinearOperator:
    """Cavity annihilation operator a (x) identity on the detector.

    <n-1| a |n> = sqrt(n).
    """
    nph = space.n_max + 1
    sub = sp.diags(np.sqrt(np.arange(1, nph)), 1, shape=(nph, nph))
    full = sp.kron(sp.identity(space.n_levels), sub, format="csr")
    return LinearOperator(full.astype(np.complex128), space)


def build_creation(space: HilbertSpace) -> LinearOperator:
    return build_annihilation(space).dagger()


def number_operator(space: HilbertSpace) -> LinearOperator:
    """n = a^dag a, diagonal in the Fock basis."""
    return LinearOperator(
        sp.diags(space.photon_number_array).tocsr().astype(np.complex128),
        space,
        Hermiticity.HERMITIAN,
    )


def build_sigma(space: HilbertSpace, k: int, j: int) -> LinearOperator:
    """Generalized Pauli operator |k><j| on the detector, identity on the field."""
    if not 1 <= k <= space.n_levels:
        raise ValueError(f"level index k={k} outside 1..{space.n_levels}")
    if not 1 <= j <= space.n_levels:
        raise ValueError(f"level index j={j} outside 1..{space.n_levels}")
    nl = space.n_levels
    det = sp.coo_matrix(([1.0], ([k - 1], [j - 1])), shape=(nl, nl))
    full = sp.kron(det, sp.identity(space.n_max + 1), format="csr")
    flag = Hermiticity.HERMITIAN if k == j else Hermiticity.GENERAL
    return LinearOperator(full.astype(np.complex128), space, flag)


def level_projector(space: HilbertSpace, level: int) -> LinearOperator:
    """sigma_j = |j><j| (x) identity."""
    return build_sigma(space, level, level)


def quadrature_plus(space: HilbertSpace) -> LinearOperator:
    """x_+ = (a + a^dag)/sqrt(2); vacuum variance 1/2."""
    a = build_annihilation(space).matrix
    return LinearOperator((a + a.getH()) / np.sqrt(2), space, Hermiticity.HERMITIAN)


def quadrature_minus(space: HilbertSpace) -> LinearOperator:
    """x_- = (a - a^dag)/sqrt(-2) = i (a^dag - a)/sqrt(2); vacuum variance 1/2."""
    a = build_annihilation(space).matrix
    return LinearOperator(1j * (a.getH() - a) / np.sqrt(2), space, Hermiticity.HERMITIAN)


def parity_operator(space: HilbertSpace) -> LinearOperator:
    """Total-excitation parity (-1)^(n + (j-1))."""
    m = space.photon_number_array + (space.level_array - 1)
    return LinearOperator(
        sp.diags(np.where(m.astype(int) % 2 == 0, 1.0, -1.0)).tocsr(),
        space,
        Hermiticity.HERMITIAN,
    )


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

def expectation(state: StateVector, op: LinearOperator) -> complex:
    """<psi|O|psi> / <psi|psi>.

    Normalizing by the squared norm keeps observables meaningful during
    norm-decaying no-count evolution.
    """
    _check_same_space(state.space, op.space)
    psi = state.amplitudes
    nrm2 = float(np.real(np.vdot(psi, psi)))
    if nrm2 == 0.0:
        raise ValueError("expectation of a zero state")
    return complex(np.vdot(psi, op.matrix @ psi) / nrm2)


def _prob(state: StateVector) -> np.ndarray:
    p = np.abs(state.amplitudes) ** 2
    return p / p.sum()


def mean_photon_number(state: StateVector) -> float:
    return float(_prob(state) @ state.space.photon_number_array)


def mandel_q(state: StateVector) -> float:
    """Q = [<(dn)^2> - <n>] / <n>; NaN when <n> < Q_FLOOR (undefined 0/0)."""
    p = _prob(state)
    narr = state.space.photon_number_array
    n_mean = float(p @ narr)
    if n_mean < Q_FLOOR:
        return float("nan")
    n2_mean = float(p @ narr**2)
    return (n2_mean - n_mean**2 - n_mean) / n_mean


def quadrature_variances(state: StateVector) -> Tuple[float, float]:
    """(<(dx_+)^2>, <(dx_-)^2>) with vacuum value (1/2, 1/2).

    Computed from <a>, <a^2> and <n> of the field factor, which only needs
    two short sparse products instead of squared quadrature operators.
    """
    space = state.space
    psi = state.amplitudes / np.linalg.norm(state.amplitudes)
    nph = space.n_max + 1
    blocks = psi.reshape(space.n_levels, nph)
    root_n = np.sqrt(np.arange(1, nph))
    a_mean = complex(np.sum(np.conj(blocks[:, :-1]) * blocks[:, 1:] * root_n))
    s2 = np.sqrt(np.arange(1, nph - 1) * np.arange(2, nph))
    a2_mean = complex(np.sum(np.conj(blocks[:, :-2]) * blocks[:, 2:] * s2))
    n_mean = float(np.sum(np.abs(psi) ** 2 * space.photon_number_array))

    x_plus = np.sqrt(2.0) * a_mean.real
    x_minus = np.sqrt(2.0) * a_mean.imag
    xvar_plus = (2.0 * a2_mean.real + 2.0 * n_mean + 1.0) / 2.0 - x_plus**2
    xvar_minus = (-2.0 * a2_mean.real + 2.0 * n_mean + 1.0) / 2.0 - x_minus**2
    return float(xvar_plus), float(xvar_minus)


def level_populations(state: StateVector) -> np.ndarray:
    """P_j for j = 1..n_levels; sums to one."""
    p = _prob(state)
    return p.reshape(state.space.n_levels, state.space.n_max + 1).sum(axis=1)


def photon_distribution(state: StateVector) -> np.ndarray:
    """Marginal p(n) over the field factor, n = 0..n_max; sums to one."""
    p = _prob(state)
    return p.reshape(state.space.n_levels, state.space.n_max + 1).sum(axis=0)


def truncation_check(state: StateVector, margin_layers: int) -> float:
    """Total population in the top ``margin_layers`` Fock layers.

    The caller compares the result against its truncation tolerance.
    """
    if margin_layers < 1:
        raise ValueError("margin_layers must be >= 1")
    pn = photon_distribution(state)
    return float(pn[max(0, len(pn) - margin_layers):].sum())


# ---------------------------------------------------------------------------
# recorded observable series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Snapshot:
    """Photon distribution recorded at one requested time."""

    time: float
    photon_distribution: np.ndarray
    truncation_tail: float


@dataclass
class ObservableSeries:
    """Time-indexed observables extracted from an evolution.

    ``times`` is in dimensionless eps*t units unless ``time_unit`` says
    otherwise.  ``mandel_q`` entries are NaN where <n> is below ``Q_FLOOR``.
    ``populations`` has one column per detector level.
    """

    times: np.ndarray
    n_mean: np.ndarray
    mandel_q: np.ndarray
    xvar_plus: np.ndarray
    xvar_minus: np.ndarray
    populations: np.ndarray
    snapshots: Tuple[Snapshot, ...] = ()
    time_unit: str = "eps_t"
    frame: Optional["FrameTag"] = None

    @property
    def n_levels(self) -> int:
        return self.populations.shape[1]

    def validate(self, tol: float = 1e-9) -> None:
        """Check the normalization and positivity invariants."""
        if np.any(self.n_mean < -tol):
            raise ValueError("negative mean photon number")
        if np.any(self.xvar_plus <= 0) or np.any(self.xvar_minus <= 0):
            raise ValueError("non-positive quadrature variance")
        pop_err = np.max(np.abs(self.populations.sum(axis=1) - 1.0))
        if pop_err > tol:
            raise ValueError(f"level populations deviate from unity by {pop_err:.3e}")
        for snap in self.snapshots:
            dist_err = abs(float(snap.photon_distribution.sum()) - 1.0)
            if dist_err > tol:
                raise ValueError(
                    f"photon distribution at t={snap.time} deviates by {dist_err:.3e}"
                )
