"""Photon generation from vacuum in a frequency-modulated cavity, monitored
by an intracavity quantum detector (N-level ladder atom, harmonic
oscillator, or network of identical two-level atoms)."""

__version__ = "0.1.0"

from .fock import (
    HilbertSpace,
    Hermiticity,
    LinearOperator,
    ObservableSeries,
    Snapshot,
    StateVector,
    build_annihilation,
    build_creation,
    build_sigma,
    expectation,
    level_populations,
    mandel_q,
    mean_photon_number,
    number_operator,
    parity_operator,
    photon_distribution,
    quadrature_minus,
    quadrature_plus,
    quadrature_variances,
    truncation_check,
)
from .model import (
    DetectorKind,
    DetectorSpec,
    FrameTag,
    ModulationSpec,
    TimeDependentOperator,
    dicke_network_hamiltonian,
    dicke_symmetric_embedding,
    dicke_to_ladder,
    effective_strong_modulation_hamiltonian,
    lab_hamiltonian,
    network_space,
    rwa_hamiltonian,
    two_level_rotated_hamiltonian,
)
from .spectral import (
    DressedState,
    ResonanceEntry,
    dressed_coupling_matrix,
    dressed_eigensystem,
    jc_eigensystem,
    null_eigenstate,
    resonance_catalog,
    three_level_eigensystem,
)
from .evolve import (
    EvolutionConfig,
    InitialState,
    NormDriftError,
    TruncationOverflowError,
    ho_closed_form_check,
    run_experiment,
    unitary_evolve,
)
from .monitor import (
    JumpModel,
    PostSelection,
    TrajectoryRecord,
    default_jump_model,
    no_count_evolve,
    postselect,
    sample_trajectory,
    trajectory_ensemble,
)
from . import oracle
