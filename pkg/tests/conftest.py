import json
from pathlib import Path

import pytest

from ascvqe import build_hamiltonian, parse_fcidump, to_spin_orbitals

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def manifest():
    return {
        entry["file"]: entry
        for entry in json.loads((FIXTURES / "manifest.json").read_text())
    }


def load_integrals(name):
    return parse_fcidump((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def h2():
    m = load_integrals("h2_0.74.fcidump")
    s = to_spin_orbitals(m)
    return m, s, build_hamiltonian(s, m.e_core)


@pytest.fixture(scope="session")
def h4_150():
    m = load_integrals("h4_1.50.fcidump")
    s = to_spin_orbitals(m)
    return m, s, build_hamiltonian(s, m.e_core)


@pytest.fixture(scope="session")
def h4_175():
    m = load_integrals("h4_1.75.fcidump")
    s = to_spin_orbitals(m)
    return m, s, build_hamiltonian(s, m.e_core)
