"""Adiabatically decoupled VQE with auxiliary subspace corrections.

Statevector toolkit for molecular VQE on classically simulable systems:
FCIDUMP ingestion, Jordan-Wigner mapping, disentangled-UCC simulation,
ADAPT / MP2-screened principal-subspace selection, one-step auxiliary
parameter reconstruction with second-order energy corrections, and an
exact-diagonalization oracle.
"""

from .pauli import PauliString, PauliSum, commutator, dense_matrix, double_commutator, multiply
from .hamio import (
    FermionExcitation,
    MolecularIntegrals,
    Mp2Amplitudes,
    SpinOrbitalIntegrals,
    build_hamiltonian,
    excitation_pool,
    fock_orbital_energies,
    jordan_wigner_generator,
    mp2_amplitudes,
    parse_fcidump,
    to_spin_orbitals,
)
from .simulator import (
    AnsatzFactor,
    AnsatzState,
    StateVector,
    apply_excitation_exponential,
    apply_pauli_sum,
    cnot_estimate,
    expectation,
    hf_reference,
    prepare_state,
)
from .vqe import CostFunction, OptimizationResult, minimize
from .subspace import (
    SelectionConfig,
    SelectionTrace,
    adapt_vqe,
    generator_informed_init,
    initialize_parameters,
    mp2s_ansatz,
    pool_gradients,
)
from .asc import (
    AuxiliaryMapping,
    AuxiliaryReport,
    asc_energy,
    build_auxiliary_pool,
    map_auxiliary_parameters,
    overhead_report,
)
from .oracle import SpectrumResult, determinant_ci_energy, ground_energy

__version__ = "0.1.0"
