"""Molecular integral ingestion and fermion-to-qubit mapping.

Reads FCIDUMP files into spatial-orbital integrals, expands them to spin
orbitals (interleaved ordering: spin orbital 2k is the alpha and 2k+1 the
beta component of spatial orbital k), enumerates spin- and particle-number-
conserving excitation pools, and maps excitation generators and the
second-quantized Hamiltonian to Pauli sums via the Jordan-Wigner transform.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .pauli import PauliSum, multiply

RANK_NAMES = {1: "S", 2: "D", 3: "T", 4: "Q"}


class FcidumpParseError(ValueError):
    """Malformed FCIDUMP content; message names the offending line."""


class UnsupportedReferenceError(ValueError):
    """Raised for references outside the closed-shell RHF assumptions."""


class DegenerateDenominatorError(ValueError):
    """Raised when an MP2 denominator is numerically zero."""


# --------------------------------------------------------------------------
# integral containers
# --------------------------------------------------------------------------


def canonical_h1_key(p: int, q: int) -> Tuple[int, int]:
    return (p, q) if p >= q else (q, p)


def canonical_eri_key(p: int, q: int, r: int, s: int) -> Tuple[int, int, int, int]:
    """Canonical representative of the 8 chemist-notation permutations of (pq|rs)."""
    pq = (p, q) if p >= q else (q, p)
    rs = (r, s) if r >= s else (s, r)
    return pq + rs if pq >= rs else rs + pq


@dataclass
class MolecularIntegrals:
    """Spatial-orbital integrals in chemist notation, 8-fold symmetry stored once."""

    n_spatial: int
    n_electrons: int
    ms2: int
    e_core: float
    h1: Dict[Tuple[int, int], float] = field(default_factory=dict)
    eri: Dict[Tuple[int, int, int, int], float] = field(default_factory=dict)

    def h(self, p: int, q: int) -> float:
        return self.h1.get(canonical_h1_key(p, q), 0.0)

    def g(self, p: int, q: int, r: int, s: int) -> float:
        """Chemist-notation (pq|rs)."""
        return self.eri.get(canonical_eri_key(p, q, r, s), 0.0)

    def set_h(self, p: int, q: int, value: float) -> None:
        self.h1[canonical_h1_key(p, q)] = value

    def set_g(self, p: int, q: int, r: int, s: int, value: float) -> None:
        self.eri[canonical_eri_key(p, q, r, s)] = value


@dataclass
class SpinOrbitalIntegrals:
    """Antisymmetrized physicist-notation integrals over interleaved spin orbitals."""

    n_so: int
    h1_so: np.ndarray          # (n_so, n_so)
    eri_so: np.ndarray         # (n_so,)*4, <pq||rs>
    orbital_energies: np.ndarray  # (n_so,)


# --------------------------------------------------------------------------
# FCIDUMP parsing
# --------------------------------------------------------------------------

_HEADER_KEY_RE = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z0-9_]+\s*=)|$)")


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse FCIDUMP-format text.

    Header: a namelist starting with ``&FCI`` carrying NORB, NELEC and MS2,
    terminated by ``&END`` or ``/``.  Body: ``value i j k l`` lines with
    1-based indices; k=l=0 marks a one-electron integral, all-zero indices
    mark the core energy, anything else is a chemist-notation (ij|kl).
    """
    lines = text.splitlines()
    header_parts: List[str] = []
    body_start = None
    for ln, raw in enumerate(lines):
        line = raw.strip()
        if ln == 0:
            if not line.upper().startswith("&FCI"):
                raise FcidumpParseError("line 1: expected header to begin with &FCI")
            line = line[4:]
        end = re.search(r"(&END|/)", line, flags=re.IGNORECASE)
        if end:
            header_parts.append(line[: end.start()])
            body_start = ln + 1
            break
        header_parts.append(line)
    if body_start is None:
        raise FcidumpParseError("header never terminated by &END or /")

    header = " ".join(header_parts)
    header_loc = f"lines 1-{body_start}" if body_start > 1 else "line 1"
    keys: Dict[str, str] = {}
    for m in _HEADER_KEY_RE.finditer(header):
        keys[m.group(1).upper()] = m.group(2).strip().rstrip(",").strip()

    def _int_key(name: str, required: bool, default: int = 0) -> int:
        if name not in keys:
            if required:
                raise FcidumpParseError(f"{header_loc}: header missing {name}")
            return default
        try:
            return int(keys[name])
        except ValueError as exc:
            raise FcidumpParseError(
                f"{header_loc}: header non-integer {name}={keys[name]!r}"
            ) from exc

    norb = _int_key("NORB", required=True)
    nelec = _int_key("NELEC", required=True)
    ms2 = _int_key("MS2", required=False, default=0)
    if norb <= 0:
        raise FcidumpParseError(f"{header_loc}: NORB must be positive")
    if nelec < 0 or nelec > 2 * norb:
        raise FcidumpParseError(f"{header_loc}: NELEC out of range")

    m = MolecularIntegrals(
        n_spatial=norb, n_electrons=nelec, ms2=ms2, e_core=0.0
    )
    for ln in range(body_start, len(lines)):
        line = lines[ln].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise FcidumpParseError(
                f"line {ln + 1}: expected 'value i j k l', got {len(fields)} fields"
            )
        try:
            value = float(fields[0].replace("D", "E").replace("d", "e"))
        except ValueError as exc:
            raise FcidumpParseError(
                f"line {ln + 1}: non-numeric value {fields[0]!r}"
            ) from exc
        try:
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise FcidumpParseError(f"line {ln + 1}: non-integer index") from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > norb:
                raise FcidumpParseError(
                    f"line {ln + 1}: index {idx} outside [0, NORB={norb}]"
                )
        if i == j == k == l == 0:
            m.e_core = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpParseError(
                    f"line {ln + 1}: one-electron entry with a zero index"
                )
            m.set_h(i - 1, j - 1, value)
        else:
            if 0 in (i, j, k, l):
                raise FcidumpParseError(
                    f"line {ln + 1}: two-electron entry with a zero index"
                )
            m.set_g(i - 1, j - 1, k - 1, l - 1, value)
    return m


# --------------------------------------------------------------------------
# spin-orbital expansion
# --------------------------------------------------------------------------


def fock_orbital_energies(m: MolecularIntegrals) -> np.ndarray:
    """Canonical RHF Fock diagonal per spatial orbital.

    eps_p = h_pp + sum_{i in occ} [2 (pp|ii) - (pi|ip)] with the lowest
    n_electrons/2 spatial orbitals doubly occupied.
    """
    if m.n_electrons % 2 != 0:
        raise UnsupportedReferenceError(
            "odd electron count: closed-shell reference required"
        )
    n_occ = m.n_electrons // 2
    eps = np.zeros(m.n_spatial)
    for p in range(m.n_spatial):
        e = m.h(p, p)
        for i in range(n_occ):
            e += 2.0 * m.g(p, p, i, i) - m.g(p, i, i, p)
        eps[p] = e
    return eps


def to_spin_orbitals(m: MolecularIntegrals) -> SpinOrbitalIntegrals:
    """Expand spatial integrals to antisymmetrized spin-orbital form.

    Interleaved ordering: spin orbital 2k (alpha) and 2k+1 (beta) share
    spatial index k.  eri_so[p,q,r,s] = <pq||rs> = <pq|rs> - <pq|sr> in
    physicist notation, with <pq|rs> = (pr|qs) * spin deltas.
    """
    n = m.n_spatial
    n_so = 2 * n
    h_sp = np.zeros((n, n))
    g_sp = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(n):
            h_sp[p, q] = m.h(p, q)
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    g_sp[p, q, r, s] = m.g(p, q, r, s)

    h1_so = np.zeros((n_so, n_so))
    h1_so[0::2, 0::2] = h_sp
    h1_so[1::2, 1::2] = h_sp

    # <pq|rs> = (pr|qs) delta(sp, sr) delta(sq, ss)
    coul = np.zeros((n_so,) * 4)
    spat = np.arange(n_so) // 2
    spin = np.arange(n_so) % 2
    for p in range(n_so):
        for q in range(n_so):
            for r in range(n_so):
                if spin[p] != spin[r]:
                    continue
                for s in range(n_so):
                    if spin[q] != spin[s]:
                        continue
                    coul[p, q, r, s] = g_sp[spat[p], spat[r], spat[q], spat[s]]
    eri_so = coul - coul.transpose(0, 1, 3, 2)

    eps = fock_orbital_energies(m)
    orbital_energies = np.repeat(eps, 2)
    return SpinOrbitalIntegrals(
        n_so=n_so, h1_so=h1_so, eri_so=eri_so, orbital_energies=orbital_energies
    )


# --------------------------------------------------------------------------
# excitations
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FermionExcitation:
    """Hole-particle excitation: occupied (below Fermi level) -> virtual."""

    occupied: Tuple[int, ...]
    virtual: Tuple[int, ...]

    def __post_init__(self):
        if len(self.occupied) != len(self.virtual):
            raise ValueError("occupied/virtual index counts differ")
        if not 1 <= len(self.occupied) <= 4:
            raise ValueError("rank must be 1..4")
        if list(self.occupied) != sorted(set(self.occupied)):
            raise ValueError("occupied indices must be strictly increasing")
        if list(self.virtual) != sorted(set(self.virtual)):
            raise ValueError("virtual indices must be strictly increasing")

    @property
    def rank(self) -> int:
        return len(self.occupied)

    @property
    def spin_conserving(self) -> bool:
        return sum(p % 2 for p in self.occupied) == sum(p % 2 for p in self.virtual)

    @property
    def label(self) -> str:
        occ = ",".join(map(str, self.occupied))
        vir = ",".join(map(str, self.virtual))
        return f"{RANK_NAMES[self.rank]}[{occ}->{vir}]"


def excitation_pool(
    n_so: int, n_elec: int, ranks: Iterable[int]
) -> List[FermionExcitation]:
    """All spin- and particle-number-conserving excitations of the given ranks.

    Deterministic order: rank first, then lexicographic on (occupied, virtual).
    """
    if n_elec >= n_so:
        raise ValueError("pool requires n_elec < n_so")
    occ_space = range(n_elec)
    vir_space = range(n_elec, n_so)
    pool: List[FermionExcitation] = []
    for rank in sorted(set(ranks)):
        for occ in itertools.combinations(occ_space, rank):
            for vir in itertools.combinations(vir_space, rank):
                x = FermionExcitation(occupied=occ, virtual=vir)
                if x.spin_conserving:
                    pool.append(x)
    return pool


# --------------------------------------------------------------------------
# Jordan-Wigner mapping
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _jw_ladder(p: int, dagger: bool, n_so: int) -> PauliSum:
    """JW image of a_p (or a_p^dagger): (X_p -/+ iY_p)/2 with a Z string below p."""
    z_string = (1 << p) - 1
    x_mask = 1 << p
    sign = -1.0 if dagger else 1.0
    return PauliSum(
        n_so,
        {
            (x_mask, z_string): 0.5,
            (x_mask, z_string | x_mask): sign * 0.5j,
        },
    )


@lru_cache(maxsize=None)
def jordan_wigner_excitation(x: FermionExcitation, n_so: int) -> PauliSum:
    """JW image of tau = a_a^† a_b^† ... a_j a_i for excitation i,j,.. -> a,b,.."""
    op = None
    for v in x.virtual:
        factor = _jw_ladder(v, True, n_so)
        op = factor if op is None else multiply(op, factor)
    for o in reversed(x.occupied):
        factor = _jw_ladder(o, False, n_so)
        op = multiply(op, factor)
    return op


@lru_cache(maxsize=None)
def jordan_wigner_generator(x: FermionExcitation, n_so: int) -> PauliSum:
    """Anti-Hermitian rotation generator tau - tau^dagger as a Pauli sum."""
    tau = jordan_wigner_excitation(x, n_so)
    return tau - tau.dagger()


def jordan_wigner_number_operator(n_so: int) -> PauliSum:
    """Total particle-number operator sum_p a_p^† a_p = sum_p (I - Z_p)/2."""
    out = PauliSum.identity(n_so, n_so / 2.0)
    for p in range(n_so):
        out = out + PauliSum(n_so, {(0, 1 << p): -0.5})
    return out


def jordan_wigner_sz_operator(n_so: int) -> PauliSum:
    """S_z = (N_alpha - N_beta)/2 for interleaved spin ordering."""
    out = PauliSum.zero(n_so)
    for p in range(n_so):
        sign = 1.0 if p % 2 == 0 else -1.0
        out = out + PauliSum(n_so, {(0, 0): sign * 0.25, (0, 1 << p): -sign * 0.25})
    return out


def build_hamiltonian(s: SpinOrbitalIntegrals, e_core: float) -> PauliSum:
    """Qubit Hamiltonian H = e_core + sum h_pq a_p^†a_q + 1/4 sum <pq||rs> a_p^†a_q^†a_s a_r."""
    n_so = s.n_so
    h = PauliSum.identity(n_so, e_core)
    for p in range(n_so):
        for q in range(n_so):
            coeff = s.h1_so[p, q]
            if abs(coeff) < 1e-14:
                continue
            term = multiply(_jw_ladder(p, True, n_so), _jw_ladder(q, False, n_so))
            h = h + term * coeff
    # Antisymmetry collapses 1/4 sum over all pqrs to a plain sum over p<q, r<s.
    for p in range(n_so):
        for q in range(p + 1, n_so):
            pq = multiply(_jw_ladder(p, True, n_so), _jw_ladder(q, True, n_so))
            for r in range(n_so):
                for t in range(r + 1, n_so):
                    coeff = s.eri_so[p, q, r, t]
                    if abs(coeff) < 1e-14:
                        continue
                    # <pq||rs> multiplies a_p† a_q† a_s a_r (here s=t).
                    sr = multiply(
                        _jw_ladder(t, False, n_so), _jw_ladder(r, False, n_so)
                    )
                    h = h + multiply(pq, sr) * coeff
    return h


# --------------------------------------------------------------------------
# MP2 amplitudes
# --------------------------------------------------------------------------


@dataclass
class Mp2Amplitudes:
    """First-order doubles amplitudes keyed by excitation."""

    values: Dict[FermionExcitation, float]

    def screened(self, epsilon_bar: float) -> Dict[FermionExcitation, float]:
        return {x: t for x, t in self.values.items() if abs(t) > epsilon_bar}

    def correlation_energy(self, s: SpinOrbitalIntegrals) -> float:
        """MP2 correlation energy from the stored amplitudes."""
        e = 0.0
        for x, t in self.values.items():
            i, j = x.occupied
            a, b = x.virtual
            e += t * s.eri_so[i, j, a, b]
        return e


def mp2_amplitudes(s: SpinOrbitalIntegrals, n_elec: int) -> Mp2Amplitudes:
    """t_ij^ab = <ij||ab> / (eps_i + eps_j - eps_a - eps_b) over the doubles pool."""
    if n_elec % 2 != 0:
        raise UnsupportedReferenceError(
            "odd electron count: closed-shell reference required"
        )
    pool = excitation_pool(s.n_so, n_elec, ranks=(2,))
    return mp2_amplitudes_for_pool(s, pool)


def mp2_amplitudes_for_pool(
    s: SpinOrbitalIntegrals, pool: Sequence[FermionExcitation]
) -> Mp2Amplitudes:
    """MP2 amplitudes for every rank-2 member of the given pool."""
    eps = s.orbital_energies
    values: Dict[FermionExcitation, float] = {}
    for x in pool:
        if x.rank != 2:
            continue
        i, j = x.occupied
        a, b = x.virtual
        num = s.eri_so[i, j, a, b]
        den = eps[i] + eps[j] - eps[a] - eps[b]
        if abs(den) < 1e-10:
            raise DegenerateDenominatorError(
                f"degenerate MP2 denominator for {x.label}"
            )
        if den > 0:
            warnings.warn(
                f"positive MP2 denominator for {x.label}: non-canonical reference",
                stacklevel=2,
            )
        values[x] = num / den
    return Mp2Amplitudes(values=values)
