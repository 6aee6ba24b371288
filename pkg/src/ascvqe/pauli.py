"""Sparse Pauli-string algebra.

A Pauli string on n qubits is stored as a pair of bitmasks (x, z): bit q of
``x`` flips qubit q (X component) and bit q of ``z`` applies a phase
(Z component).  The letter on qubit q is I (00), X (10), Z (01) or Y (11),
and the full operator is

    S(x, z) = i^{popcount(x & z)} * X^x Z^z

so that Y = i X Z on each qubit.  Qubit 0 is the least significant bit in
every index, mask and dense matrix produced here.

A PauliSum is a dict from (x, z) masks to complex coefficients.  Terms whose
coefficient falls below SIMPLIFY_TOL are dropped on every arithmetic
operation, so cancellations are exact at the stored-coefficient level.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

import numpy as np

# Coefficient magnitude below which a term is treated as exact zero.
# Shared with the Hamiltonian builder; well below chemical accuracy.
SIMPLIFY_TOL = 1e-12

# Largest qubit count for which dense matrices may be materialized.
DENSE_LIMIT = 14

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}

_I_POW = (1.0, 1j, -1.0, -1j)


class QubitCountMismatchError(ValueError):
    """Raised when two operands act on different numbers of qubits."""


class DenseLimitError(ValueError):
    """Raised when a dense expansion would exceed DENSE_LIMIT qubits."""


def _popcount(v: int) -> int:
    return v.bit_count()


def string_phase(x1: int, z1: int, x2: int, z2: int) -> complex:
    """Phase of S(x1,z1)·S(x2,z2) relative to S(x1^x2, z1^z2)."""
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    k = (
        _popcount(x1 & z1)
        + _popcount(x2 & z2)
        - _popcount(x3 & z3)
        + 2 * _popcount(z1 & x2)
    ) % 4
    return _I_POW[k]


def strings_commute(x1: int, z1: int, x2: int, z2: int) -> bool:
    """Two Pauli strings either commute or anticommute."""
    return (_popcount(x1 & z2) + _popcount(z1 & x2)) % 2 == 0


@dataclass(frozen=True)
class PauliString:
    """Immutable single Pauli string with its qubit count."""

    n_qubits: int
    x: int
    z: int

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        """Build from a letter sequence; letters[q] acts on qubit q."""
        x = z = 0
        for q, letter in enumerate(letters):
            xb, zb = _LETTER_TO_BITS[letter]
            x |= xb << q
            z |= zb << q
        return cls(len(letters), x, z)

    @property
    def letters(self) -> str:
        return "".join(
            _BITS_TO_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)]
            for q in range(self.n_qubits)
        )

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return _popcount(self.x | self.z)

    def __str__(self) -> str:
        return self.letters


class PauliSum:
    """Weighted sum of Pauli strings on a fixed qubit register."""

    __slots__ = ("n_qubits", "terms", "_apply_groups")

    def __init__(
        self,
        n_qubits: int,
        terms: Dict[Tuple[int, int], complex] | None = None,
    ):
        self.n_qubits = n_qubits
        # lazily built x-grouped form used by the statevector engine; sums
        # are treated as immutable once they leave an arithmetic operation
        self._apply_groups = None
        self.terms: Dict[Tuple[int, int], complex] = {}
        if terms:
            for key, coeff in terms.items():
                if abs(coeff) >= SIMPLIFY_TOL:
                    self.terms[key] = complex(coeff)

    # ---------------------------------------------------------------- basic

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): coeff})

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def from_label(cls, letters: str, coeff: complex = 1.0) -> "PauliSum":
        s = PauliString.from_letters(letters)
        return cls(s.n_qubits, {(s.x, s.z): coeff})

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterable[Tuple[PauliString, complex]]:
        for (x, z), coeff in self.terms.items():
            yield PauliString(self.n_qubits, x, z), coeff

    def copy(self) -> "PauliSum":
        out = PauliSum(self.n_qubits)
        out.terms = dict(self.terms)
        return out

    def _check_compatible(self, other: "PauliSum") -> None:
        if self.n_qubits != other.n_qubits:
            raise QubitCountMismatchError(
                f"operands act on {self.n_qubits} vs {other.n_qubits} qubits"
            )

    # ----------------------------------------------------------- arithmetic

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_compatible(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = out.get(key, 0.0) + coeff
            if abs(acc) < SIMPLIFY_TOL:
                out.pop(key, None)
            else:
                out[key] = acc
        result = PauliSum(self.n_qubits)
        result.terms = out
        return result

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(
            self.n_qubits, {k: c * scalar for k, c in self.terms.items()}
        )

    __rmul__ = __mul__

    def dagger(self) -> "PauliSum":
        """Hermitian conjugate; Pauli strings are self-adjoint."""
        return PauliSum(
            self.n_qubits, {k: c.conjugate() for k, c in self.terms.items()}
        )

    def is_hermitian(self, tol: float = SIMPLIFY_TOL) -> bool:
        return all(abs(c.imag) < tol for c in self.terms.values())

    def is_anti_hermitian(self, tol: float = SIMPLIFY_TOL) -> bool:
        return all(abs(c.real) < tol for c in self.terms.values())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (x, z), c in sorted(self.terms.items()):
            letters = PauliString(self.n_qubits, x, z).letters
            parts.append(f"({c.real:+g}{c.imag:+g}i)·{letters}")
        return " + ".join(parts)


def multiply(a: PauliSum, b: PauliSum) -> PauliSum:
    """Distributed operator product a·b with exact Pauli phases."""
    a._check_compatible(b)
    out: Dict[Tuple[int, int], complex] = {}
    for (x1, z1), c1 in a.terms.items():
        for (x2, z2), c2 in b.terms.items():
            key = (x1 ^ x2, z1 ^ z2)
            coeff = c1 * c2 * string_phase(x1, z1, x2, z2)
            acc = out.get(key, 0.0) + coeff
            if abs(acc) < SIMPLIFY_TOL:
                out.pop(key, None)
            else:
                out[key] = acc
    result = PauliSum(a.n_qubits)
    result.terms = out
    return result


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """[a, b] = ab - ba.

    Pairs of Pauli strings that commute contribute nothing and are skipped,
    so the cancellation is exact rather than numerical.  Anticommuting pairs
    contribute 2·(ab term).
    """
    a._check_compatible(b)
    out: Dict[Tuple[int, int], complex] = {}
    for (x1, z1), c1 in a.terms.items():
        for (x2, z2), c2 in b.terms.items():
            if strings_commute(x1, z1, x2, z2):
                continue
            key = (x1 ^ x2, z1 ^ z2)
            coeff = 2.0 * c1 * c2 * string_phase(x1, z1, x2, z2)
            acc = out.get(key, 0.0) + coeff
            if abs(acc) < SIMPLIFY_TOL:
                out.pop(key, None)
            else:
                out[key] = acc
    result = PauliSum(a.n_qubits)
    result.terms = out
    return result


def double_commutator(b: PauliSum, g: PauliSum) -> PauliSum:
    """[[b, g], g]."""
    return commutator(commutator(b, g), g)


def dense_matrix(a: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the sum; qubit 0 is the least significant bit."""
    if a.n_qubits > DENSE_LIMIT:
        raise DenseLimitError(
            f"{a.n_qubits} qubits exceeds dense limit {DENSE_LIMIT}"
        )
    dim = 1 << a.n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim, dtype=np.uint64)
    for (x, z), coeff in a.terms.items():
        rows = cols ^ np.uint64(x)
        signs = 1.0 - 2.0 * (np.bitwise_count(cols & np.uint64(z)) & 1)
        phase = _I_POW[_popcount(x & z) % 4]
        mat[rows, cols] += coeff * phase * signs
    return mat
