"""Fixture generator: regeneration round-trips against the committed files.

These tests exercise the standalone generator and only touch the main
package through its public FCIDUMP/oracle interfaces.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "fixturegen"))

import fixturegen  # noqa: E402

from ascvqe import build_hamiltonian, parse_fcidump, to_spin_orbitals  # noqa: E402
from ascvqe.oracle import determinant_ci_energy  # noqa: E402

from conftest import FIXTURES  # noqa: E402


class TestGenerate:
    def test_h2_round_trip(self, tmp_path, manifest):
        out = tmp_path / "h2.fcidump"
        entry = fixturegen.generate("h2", 0.74, out)
        m = parse_fcidump(out.read_text())
        assert (m.n_spatial, m.n_electrons) == (2, 2)
        ref = manifest["h2_0.74.fcidump"]
        assert entry["e_scf"] == pytest.approx(ref["e_scf"], abs=1e-8)
        assert entry["e_fci"] == pytest.approx(ref["e_fci"], abs=1e-8)
        # FCI recomputed by the primary package's independent oracle
        assert determinant_ci_energy(m) == pytest.approx(
            entry["e_fci"], abs=1e-8
        )

    def test_h4_regeneration_matches_committed_fixture(self, tmp_path):
        out = tmp_path / "h4.fcidump"
        fixturegen.generate("h4", 1.75, out)
        fresh = parse_fcidump(out.read_text())
        committed = parse_fcidump(
            (FIXTURES / "h4_1.75.fcidump").read_text()
        )
        assert fresh.e_core == pytest.approx(committed.e_core, abs=1e-8)
        for key, value in committed.h1.items():
            assert fresh.h1.get(key, 0.0) == pytest.approx(value, abs=1e-8)
        for key, value in committed.eri.items():
            assert fresh.eri.get(key, 0.0) == pytest.approx(value, abs=1e-8)

    def test_lih_electron_count_header(self, tmp_path):
        out = tmp_path / "lih.fcidump"
        fixturegen.generate("lih", 1.6, out)
        header = out.read_text().splitlines()[0]
        assert "NELEC=4" in header.replace(" ", "")

    def test_manifest_covers_every_committed_fixture(self, manifest):
        files = {p.name for p in FIXTURES.glob("*.fcidump")}
        assert files == set(manifest)

    def test_internal_fci_agrees_with_primary_oracle(self, tmp_path):
        out = tmp_path / "h4.fcidump"
        entry = fixturegen.generate("h4", 1.0, out)
        m = parse_fcidump(out.read_text())
        assert determinant_ci_energy(m) == pytest.approx(
            entry["e_fci"], abs=1e-8
        )

    def test_unknown_system_rejected(self):
        with pytest.raises(ValueError):
            fixturegen.build_geometry("h3", 1.0)

    def test_cli_single_file(self, tmp_path, capsys):
        out = tmp_path / "h2.fcidump"
        code = fixturegen.main(
            ["--system", "h2", "--r", "0.74", "--out", str(out)]
        )
        assert code == 0 and out.exists()
        assert '"e_fci"' in capsys.readouterr().out
