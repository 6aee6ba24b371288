"""Statevector engine for disentangled-UCC ansatz states.

States are complex vectors over 2^n computational basis states with qubit 0
as the least significant bit; bit p set means spin orbital p occupied.
Ansatz factors e^{theta*kappa} are applied in closed form using the cubic
identity kappa^3 = -kappa obeyed by every hole-particle rotation generator,
so each factor is the exact exponential rather than a Trotterized circuit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple

import numpy as np

from .hamio import FermionExcitation, jordan_wigner_generator
from .pauli import PauliSum, _I_POW, _popcount


class NonHermitianObservableError(ValueError):
    """Expectation value retained an imaginary part above tolerance."""


class UnsupportedGeneratorError(ValueError):
    """Generator violates the kappa^3 = -kappa identity."""


@dataclass
class StateVector:
    """Normalized amplitude vector over the 2^n qubit basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class AnsatzFactor:
    excitation: FermionExcitation
    theta: float
    principal: bool = True


@dataclass
class AnsatzState:
    """Ordered product of excitation factors over a Hartree-Fock reference.

    factors[0] acts on the reference first.  Each factor is tagged principal
    or auxiliary; the tag does not change how the state is prepared.
    """

    n_qubits: int
    n_electrons: int
    factors: List[AnsatzFactor] = field(default_factory=list)

    @property
    def parameters(self) -> np.ndarray:
        return np.array([f.theta for f in self.factors])

    @property
    def excitations(self) -> List[FermionExcitation]:
        return [f.excitation for f in self.factors]

    def with_parameters(self, theta: Sequence[float]) -> "AnsatzState":
        if len(theta) != len(self.factors):
            raise ValueError(
                f"got {len(theta)} parameters for {len(self.factors)} factors"
            )
        factors = [replace(f, theta=float(t)) for f, t in zip(self.factors, theta)]
        return AnsatzState(self.n_qubits, self.n_electrons, factors)


def hf_reference(n_so: int, n_elec: int) -> StateVector:
    """Computational basis state with spin orbitals 0..n_elec-1 occupied."""
    if n_elec > n_so:
        raise ValueError("more electrons than spin orbitals")
    amplitudes = np.zeros(1 << n_so, dtype=complex)
    amplitudes[(1 << n_elec) - 1] = 1.0
    return StateVector(n_so, amplitudes)


_BASIS_INDEX: dict = {}


def _basis_index(dim: int) -> np.ndarray:
    if dim not in _BASIS_INDEX:
        _BASIS_INDEX[dim] = np.arange(dim, dtype=np.uint64)
    return _BASIS_INDEX[dim]


def _grouped_terms(a: PauliSum):
    """Terms folded by shared x-mask into diagonal factors.

    Every term S(x, z) maps |b> to a phase times |b ^ x>, so all terms with
    the same x collapse into one permutation with a precomputed diagonal:
    out[b ^ x] += d_x[b] * vec[b] with d_x[b] = sum_z c * i^{|x&z|} *
    (-1)^{|b&z|}.  Built once per PauliSum and cached on the object; sums
    must not be mutated after their first application to a state.
    """
    if a._apply_groups is None:
        idx = _basis_index(1 << a.n_qubits)
        diags: dict = {}
        for (x, z), coeff in a.terms.items():
            signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)) & 1)
            phase = _I_POW[_popcount(x & z) % 4]
            if x in diags:
                diags[x] += (coeff * phase) * signs
            else:
                diags[x] = (coeff * phase) * signs.astype(complex)
        a._apply_groups = [(np.uint64(x), d) for x, d in diags.items()]
    return a._apply_groups


def release_apply_cache(a: PauliSum) -> None:
    """Drop the cached grouped form (used by one-shot sweeps to bound memory)."""
    a._apply_groups = None


def apply_pauli_sum(state, a: PauliSum) -> np.ndarray:
    """Exact action of a Pauli sum on a state.

    Accepts a StateVector or a raw amplitude array; returns a raw array that
    is in general not normalized.
    """
    vec = state.amplitudes if isinstance(state, StateVector) else state
    if vec.shape[0] != (1 << a.n_qubits):
        raise ValueError(
            f"state dimension {vec.shape[0]} does not match {a.n_qubits} qubits"
        )
    idx = _basis_index(vec.shape[0])
    out = np.zeros(vec.shape[0], dtype=complex)
    for x, diag in _grouped_terms(a):
        # out[b ^ x] += d[b] * vec[b], rewritten as a single gather
        out += (diag * vec)[idx ^ x]
    return out


def apply_excitation_exponential(
    s: StateVector, g: PauliSum, theta: float, check: bool = True
) -> StateVector:
    """Apply e^{theta*kappa} exactly: s + sin(theta)*ks + (1-cos(theta))*k^2 s."""
    ks = apply_pauli_sum(s, g)
    kks = apply_pauli_sum(ks, g)
    if check:
        kkks = apply_pauli_sum(kks, g)
        if np.linalg.norm(kkks + ks) > 1e-8:
            raise UnsupportedGeneratorError(
                "generator does not satisfy kappa^3 = -kappa on this state"
            )
    out = s.amplitudes + np.sin(theta) * ks + (1.0 - np.cos(theta)) * kks
    return StateVector(s.n_qubits, out)


def prepare_state(a: AnsatzState) -> StateVector:
    """Apply the ansatz factors to the Hartree-Fock reference in list order."""
    state = hf_reference(a.n_qubits, a.n_electrons)
    for f in a.factors:
        g = jordan_wigner_generator(f.excitation, a.n_qubits)
        state = apply_excitation_exponential(state, g, f.theta)
    return state


def expectation(s: StateVector, b: PauliSum) -> float:
    """<s|b|s> for a Hermitian observable; returns the real part."""
    bs = apply_pauli_sum(s, b)
    value = complex(np.vdot(s.amplitudes, bs))
    if abs(value.imag) > 1e-8:
        raise NonHermitianObservableError(
            f"imaginary expectation residue {value.imag:.3e}"
        )
    return value.real


def cnot_estimate(a: AnsatzState) -> int:
    """CNOT count of the staircase exponentiation template.

    Each weight-w Pauli term of each factor generator costs 2*(w-1) CNOTs.
    An upper-bound proxy; no circuit-level optimization is attempted.
    """
    total = 0
    for f in a.factors:
        g = jordan_wigner_generator(f.excitation, a.n_qubits)
        for string, _ in g:
            w = string.weight
            if w > 1:
                total += 2 * (w - 1)
    return total
