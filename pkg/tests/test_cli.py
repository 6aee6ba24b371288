"""Command-line interface: exit codes, artifacts, determinism."""

import csv
import io
import json

import pytest

from ascvqe.cli import (
    ConfigError,
    build_run_config,
    main,
    parse_config_file,
)
from ascvqe.oracle import determinant_ci_energy

from conftest import FIXTURES, load_integrals

H2 = str(FIXTURES / "h2_0.74.fcidump")
H4 = str(FIXTURES / "h4_1.50.fcidump")


class TestConfigParsing:
    def test_key_value_with_comments(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# pipeline settings\n"
            f"fcidump = {H2}\n"
            "method = adapt   # macro/micro loop\n"
            "epsilon = 5e-3\n"
            "asc = off\n"
            "\n"
        )
        raw = parse_config_file(cfg)
        rc = build_run_config(raw, {})
        assert rc.method == "adapt"
        assert rc.epsilon == 5e-3
        assert rc.asc is False

    def test_cli_override_wins(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"fcidump = {H2}\nepsilon = 5e-3\n")
        rc = build_run_config(parse_config_file(cfg), {"epsilon": 1e-2})
        assert rc.epsilon == 1e-2

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"fcidump = {H2}\nsigma = 3\n")
        with pytest.raises(ConfigError):
            build_run_config(parse_config_file(cfg), {})

    def test_missing_equals_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("method adapt\n")
        with pytest.raises(ConfigError) as err:
            parse_config_file(cfg)
        assert ":1:" in str(err.value)

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"fcidump = {H2}\nepsilon = fast\n")
        with pytest.raises(ConfigError):
            build_run_config(parse_config_file(cfg), {})

    def test_missing_fcidump_rejected(self):
        with pytest.raises(ConfigError):
            build_run_config({}, {})

    def test_nonexistent_fcidump_rejected(self):
        with pytest.raises(ConfigError):
            build_run_config({"fcidump": "/no/such/file.fcidump"}, {})


class TestRun:
    def test_h2_adapt_asc_reaches_fci(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(
            [
                "run", "--fcidump", H2, "--method", "adapt",
                "--epsilon", "1e-5", "--asc", "on", "--outdir", str(out),
            ]
        )
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert set(summary) == {
            "e_hf", "e_final", "e_asc", "e_fci", "n_params",
            "cnot_estimate", "total_evals", "fresh_asc_evals",
        }
        assert abs(summary["e_asc"] - summary["e_fci"]) < 1e-6
        m = load_integrals("h2_0.74.fcidump")
        assert summary["e_fci"] == pytest.approx(
            determinant_ci_energy(m), abs=1e-8
        )
        assert (out / "trace.jsonl").exists()
        assert (out / "aux_report.csv").exists()

    def test_huge_epsilon_returns_hf(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            [
                "run", "--fcidump", H2, "--method", "adapt",
                "--epsilon", "100", "--asc", "off", "--outdir", str(out),
            ]
        )
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["n_params"] == 0
        assert summary["e_final"] == summary["e_hf"]
        assert summary["e_asc"] is None

    def test_asc_does_not_change_circuit(self, tmp_path):
        outs = []
        for flag in ("on", "off"):
            out = tmp_path / flag
            assert (
                main(
                    [
                        "run", "--fcidump", H2, "--method", "adapt",
                        "--epsilon", "1e-5", "--asc", flag,
                        "--outdir", str(out),
                    ]
                )
                == 0
            )
            outs.append(json.loads((out / "summary.json").read_text()))
        on, off = outs
        assert on["cnot_estimate"] == off["cnot_estimate"]
        assert on["n_params"] == off["n_params"]
        assert on["e_final"] == off["e_final"]

    def test_byte_identical_outputs(self, tmp_path):
        blobs = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            main(
                [
                    "run", "--fcidump", H2, "--method", "mp2s",
                    "--epsilon-bar", "1e-4", "--outdir", str(out),
                ]
            )
            blobs.append(
                tuple(
                    (out / name).read_bytes()
                    for name in ("summary.json", "trace.jsonl", "aux_report.csv")
                )
            )
        assert blobs[0] == blobs[1]

    def test_config_error_exit_code(self, capsys):
        assert main(["run", "--fcidump", "/no/such/file"]) == 2
        assert "error" in capsys.readouterr().err

    def test_corrupted_fcidump_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.fcidump"
        bad.write_text("&FCI NORB=x, NELEC=2\n&END\n")
        assert main(["run", "--fcidump", str(bad)]) == 2
        assert "line" in capsys.readouterr().err.lower()


class TestScan:
    def test_single_geometry_row(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(
            [
                "scan", H2, "--method", "adapt", "--epsilon", "1e-4",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 1
        assert rows[0]["label"] == "h2_0.74"
        assert float(rows[0]["err_asc"]) <= float(rows[0]["err_method"]) + 1e-12

    def test_identical_files_identical_rows(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(
            [
                "scan", H2, H2, "--method", "adapt", "--epsilon", "1e-4",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = out.read_text().splitlines()
        assert rows[1] == rows[2]

    def test_partial_failure_keeps_going(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        code = main(
            [
                "scan", H2, "/no/such/file.fcidump", "--method", "adapt",
                "--epsilon", "1e-4", "--out", str(out),
            ]
        )
        assert code == 0  # one geometry succeeded
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert rows[1]["e_method"] == "E_CONFIG"

    def test_all_failures_exit_nonzero(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        code = main(
            ["scan", "/no/a", "/no/b", "--out", str(out)]
        )
        assert code == 3


class TestFciAndPool:
    def test_fci_ten_decimals(self, capsys):
        assert main(["fci", H2]) == 0
        printed = capsys.readouterr().out.strip()
        assert len(printed.split(".")[1]) == 10
        m = load_integrals("h2_0.74.fcidump")
        assert float(printed) == pytest.approx(
            determinant_ci_energy(m), abs=1e-8
        )

    def test_fci_missing_file(self, capsys):
        assert main(["fci", "/no/such/file"]) == 2

    def test_pool_sd_count(self, capsys):
        assert main(["pool", H4, "--ranks", "sd"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[-1] == "total: 26"
        assert len(lines) == 27

    def test_pool_sdtq_count_larger(self, capsys):
        assert main(["pool", H4, "--ranks", "sdtq"]) == 0
        sdtq_total = int(capsys.readouterr().out.strip().splitlines()[-1].split()[-1])
        assert sdtq_total > 26
