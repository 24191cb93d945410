"""Contextual-subspace eigensolver toolkit for qubit Hamiltonians."""

from .errors import (
    ContractViolation,
    ConvergenceError,
    DimensionError,
    FixtureError,
    QContextError,
    ResourceLimitError,
)
from .paulis import PauliString, PauliSum, commutes, multiply
from .fixture_io import MoleculeFixture, load_fixture, load_projected, save_fixture, save_projected
from .noncontextual import (
    NoncontextualPartition,
    NoncontextualState,
    eta,
    is_noncontextual,
    partition,
    solve_noncontextual,
)
from .subspace import (
    CliqueCombination,
    ProjectedHamiltonian,
    RotationSequence,
    SubspaceReduction,
    best_sector_taper,
    build_rotations,
    choose_stabilizers,
    find_z2_symmetries,
    project,
    reduce_reference_state,
    reduce_to_subspace,
    stabilizers_from_indices,
    taper,
    tapering_frame,
)
from .ansatz import Circuit, build_nblock, build_ryrz, build_uccsd
from .solver import (
    ExperimentConfig,
    ScanResult,
    SolverConfig,
    SweepRow,
    VQDResult,
    build_ansatz,
    pes_scan,
    qubit_sweep,
    reduce_fixture,
    reference_levels,
    vqd,
    vqe,
)

__version__ = "0.1.0"
