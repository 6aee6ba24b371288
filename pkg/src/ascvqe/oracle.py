"""Exact ground-truth energies.

Two independent routes:

* ``ground_energy`` diagonalizes the qubit Hamiltonian restricted to the
  basis states with the requested particle number and Sz (dense below
  dimension 4096, Lanczos via scipy.sparse above).
* ``determinant_ci_energy`` builds the FCI matrix directly from the
  molecular integrals with Slater-Condon rules, never touching the
  Jordan-Wigner mapping, so the two paths cross-validate each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .hamio import MolecularIntegrals
from .pauli import PauliSum, _I_POW, _popcount
from .simulator import StateVector

DENSE_SECTOR_LIMIT = 4096
MAX_QUBITS = 16


class SectorTooLargeError(ValueError):
    """Requested diagonalization exceeds the supported size."""


@dataclass
class SpectrumResult:
    ground_energy: float
    ground_state: StateVector
    sector: Tuple[int, int]  # (particle number, 2*Sz)


def sector_basis(n_qubits: int, n_elec: int, ms2: int) -> List[int]:
    """Basis bitmasks with the given electron count and spin projection.

    Interleaved convention: even qubits are alpha, odd are beta, so
    ms2 = n_alpha - n_beta.
    """
    n_alpha = (n_elec + ms2) // 2
    n_beta = n_elec - n_alpha
    if n_alpha < 0 or n_beta < 0 or (n_elec + ms2) % 2 != 0:
        raise ValueError(f"inconsistent sector (n_elec={n_elec}, ms2={ms2})")
    alpha_sites = list(range(0, n_qubits, 2))
    beta_sites = list(range(1, n_qubits, 2))
    states = []
    for occ_a in itertools.combinations(alpha_sites, n_alpha):
        mask_a = sum(1 << p for p in occ_a)
        for occ_b in itertools.combinations(beta_sites, n_beta):
            states.append(mask_a + sum(1 << p for p in occ_b))
    states.sort()
    return states


def ground_energy(h: PauliSum, n_elec: int, ms2: int) -> SpectrumResult:
    """Lowest eigenvalue of h restricted to the (n_elec, Sz) sector."""
    n = h.n_qubits
    if n > MAX_QUBITS:
        raise SectorTooLargeError(f"{n} qubits exceeds oracle limit {MAX_QUBITS}")
    basis = sector_basis(n, n_elec, ms2)
    dim = len(basis)
    index = {b: i for i, b in enumerate(basis)}

    rows, cols, vals = [], [], []
    # canonical term order keeps the result bit-identical no matter how the
    # sum was assembled
    for (x, z), coeff in sorted(h.terms.items()):
        phase = coeff * _I_POW[_popcount(x & z) % 4]
        for j, b in enumerate(basis):
            target = b ^ x
            i = index.get(target)
            if i is None:
                continue
            sign = -1.0 if _popcount(b & z) % 2 else 1.0
            rows.append(i)
            cols.append(j)
            vals.append(phase * sign)
    mat = scipy.sparse.coo_matrix(
        (vals, (rows, cols)), shape=(dim, dim), dtype=complex
    ).tocsr()

    if dim <= DENSE_SECTOR_LIMIT:
        dense = mat.toarray()
        evals, evecs = np.linalg.eigh(dense)
        e0, v0 = float(evals[0]), evecs[:, 0]
    else:
        evals, evecs = scipy.sparse.linalg.eigsh(mat, k=1, which="SA")
        e0, v0 = float(evals[0]), evecs[:, 0]

    residual = np.linalg.norm(mat @ v0 - e0 * v0)
    if residual > 1e-9:
        raise RuntimeError(f"eigenpair residual {residual:.3e} above 1e-9")

    full = np.zeros(1 << n, dtype=complex)
    full[np.array(basis)] = v0
    return SpectrumResult(
        ground_energy=e0,
        ground_state=StateVector(n, full),
        sector=(n_elec, ms2),
    )


# --------------------------------------------------------------------------
# determinant CI (Slater-Condon), independent of the qubit path
# --------------------------------------------------------------------------


def _so_h(m: MolecularIntegrals, p: int, q: int) -> float:
    if p % 2 != q % 2:
        return 0.0
    return m.h(p // 2, q // 2)


def _so_anti(m: MolecularIntegrals, p: int, q: int, r: int, s: int) -> float:
    """<pq||rs> over interleaved spin orbitals, from chemist spatial integrals."""
    coul = 0.0
    if p % 2 == r % 2 and q % 2 == s % 2:
        coul = m.g(p // 2, r // 2, q // 2, s // 2)
    exch = 0.0
    if p % 2 == s % 2 and q % 2 == r % 2:
        exch = m.g(p // 2, s // 2, q // 2, r // 2)
    return coul - exch


def _excitation_info(det_i: int, det_j: int) -> Tuple[int, List[int], List[int]]:
    diff = det_i ^ det_j
    holes = [p for p in _bits(det_j & diff)]
    parts = [p for p in _bits(det_i & diff)]
    return len(holes), holes, parts


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _sign_single(det: int, hole: int, part: int) -> float:
    lo, hi = (hole, part) if hole < part else (part, hole)
    between = det & (((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1))
    return -1.0 if _popcount(between) % 2 else 1.0


def determinant_ci_energy(m: MolecularIntegrals) -> float:
    """FCI ground-state energy by Slater-Condon rules over all determinants."""
    n_so = 2 * m.n_spatial
    if n_so > 12:
        raise SectorTooLargeError(
            f"{n_so} spin orbitals exceeds the determinant-CI cap of 12"
        )
    n_alpha = (m.n_electrons + m.ms2) // 2
    n_beta = m.n_electrons - n_alpha

    dets = []
    for occ_a in itertools.combinations(range(0, n_so, 2), n_alpha):
        for occ_b in itertools.combinations(range(1, n_so, 2), n_beta):
            dets.append(sum(1 << p for p in occ_a) + sum(1 << p for p in occ_b))
    dets.sort()
    index = {d: i for i, d in enumerate(dets)}
    dim = len(dets)
    hmat = np.zeros((dim, dim))

    for i, di in enumerate(dets):
        occ_i = _bits(di)
        # diagonal
        e = sum(_so_h(m, p, p) for p in occ_i)
        for a, b in itertools.combinations(occ_i, 2):
            e += _so_anti(m, a, b, a, b)
        hmat[i, i] = e
        # singles and doubles relative to di
        for j in range(i + 1, dim):
            dj = dets[j]
            ndiff, holes, parts = _excitation_info(di, dj)
            if ndiff == 1:
                (h0,), (p0,) = holes, parts
                val = _so_h(m, p0, h0)
                for k in occ_i:
                    if k != p0:
                        val += _so_anti(m, p0, k, h0, k)
                val *= _sign_single(di & dj, h0, p0)
                hmat[i, j] = hmat[j, i] = val
            elif ndiff == 2:
                h0, h1 = holes
                p0, p1 = parts
                # sign: remove h0,h1 from dj then add p0,p1 (phase product)
                sign = 1.0
                det = dj
                for orb in (h0, h1):
                    below = det & ((1 << orb) - 1)
                    sign *= -1.0 if _popcount(below) % 2 else 1.0
                    det ^= 1 << orb
                for orb in (p1, p0):
                    below = det & ((1 << orb) - 1)
                    sign *= -1.0 if _popcount(below) % 2 else 1.0
                    det |= 1 << orb
                hmat[i, j] = hmat[j, i] = sign * _so_anti(m, p0, p1, h0, h1)

    evals = np.linalg.eigvalsh(hmat)
    return float(evals[0]) + m.e_core


def hf_determinant_energy(m: MolecularIntegrals) -> float:
    """Energy of the aufbau reference determinant from the integrals."""
    n_alpha = (m.n_electrons + m.ms2) // 2
    n_beta = m.n_electrons - n_alpha
    occ = [2 * k for k in range(n_alpha)] + [2 * k + 1 for k in range(n_beta)]
    e = sum(_so_h(m, p, p) for p in occ)
    for a, b in itertools.combinations(occ, 2):
        e += _so_anti(m, a, b, a, b)
    return e + m.e_core
