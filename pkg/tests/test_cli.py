import json
import subprocess
import sys

import pytest

from qtlie.cli import ConfigError, load_config, main

CFG_NF = {"normal_form": {"d": 2, "z": 1, "orders": [2, 2]}, "box": 2}
CFG_Q = {"d": 2, "N": 2, "exps": [[0, 1], [1, 0]]}
CFG_Z0 = {"normal_form": {"d": 2, "z": 0, "orders": [1, 1]}}


def write_cfg(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run_cli(args):
    return main(args)


class TestLoadConfig:
    def test_normal_form(self, tmp_path):
        cfg = load_config(write_cfg(tmp_path, CFG_NF))
        assert cfg.setup.N == 2
        assert cfg.setup.nf is not None
        assert cfg.box == 2

    def test_qmatrix(self, tmp_path):
        cfg = load_config(write_cfg(tmp_path, CFG_Q))
        assert cfg.setup.nf is None

    def test_rejects_d1(self, tmp_path):
        bad = {"normal_form": {"d": 1, "z": 0, "orders": [1]}}
        with pytest.raises(ConfigError):
            load_config(write_cfg(tmp_path, bad))

    def test_rejects_unequal_block_orders(self, tmp_path):
        bad = {"normal_form": {"d": 2, "z": 1, "orders": [2, 3]}}
        with pytest.raises(ConfigError):
            load_config(write_cfg(tmp_path, bad))

    def test_rejects_both_forms(self, tmp_path):
        bad = dict(CFG_Q)
        bad["normal_form"] = CFG_NF["normal_form"]
        with pytest.raises(ConfigError):
            load_config(write_cfg(tmp_path, bad))

    def test_rejects_missing(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_cfg(tmp_path, {"box": 3}))

    def test_env_threads_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QTL_THREADS", "3")
        cfg = load_config(write_cfg(tmp_path, CFG_NF))
        assert cfg.threads == 3


class TestCommands:
    def test_verify_jacobi_passes(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["verify-jacobi", "--config", cfg, "--box", "1"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["passed"] is True
        assert set(out["contexts"]) == {"g", "derqt", "ext"}

    def test_verify_embedding(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["verify-embedding", "--config", cfg, "--box", "2"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["passed"] is True

    def test_verify_virasoro(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["verify-virasoro", "--config", cfg, "--box", "2"])
        assert code == 0

    def test_automorphism_verify(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(
            ["automorphism", "--config", cfg, "--lambda", "-1", "--chi", "1,1",
             "--verify-box", "2"]
        )
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["passed"] and out["inverse_verified"] and out["composition_verified"]

    def test_automorphism_zeta_chi(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(
            ["automorphism", "--config", cfg, "--lambda", "1", "--chi", "z,-1",
             "--verify-box", "2"]
        )
        assert code == 0

    def test_derivations_degree_zero(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["derivations", "--config", cfg, "--degree", "0,0", "--box", "3"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["dimension"] == 2
        assert out["matched"] == "degree-derivations"

    def test_derivations_nonzero_degree(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["derivations", "--config", cfg, "--degree", "1,0", "--box", "3"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["dimension"] == 1
        assert out["matched"] == "ad"

    def test_cocycle_solve(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["cocycle-solve", "--config", cfg, "--box", "3"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["h2_dimension_inner"] == 2
        assert out["mismatches"] == 0

    def test_extension_check(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_NF)
        code = run_cli(["extension-check", "--config", cfg, "--box", "2"])
        assert code == 0

    def test_export_structure_and_roundtrip(self, tmp_path):
        cfg = write_cfg(tmp_path, CFG_NF)
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        assert run_cli(["export-structure", "--config", cfg, "--box", "1",
                        "--out", str(out1)]) == 0
        assert run_cli(["export-structure", "--config", cfg, "--box", "1",
                        "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        records = json.loads(out1.read_text())
        assert len(records) == 81
        from qtlie.algebras import replay_records
        from qtlie.cli import load_config

        setup = load_config(cfg).setup
        assert replay_records(setup, records)

    def test_bad_config_exits_2(self, tmp_path, capsys):
        bad = write_cfg(tmp_path, {"normal_form": {"d": 1, "z": 0, "orders": [1]}})
        assert run_cli(["verify-jacobi", "--config", bad]) == 2

    def test_reports_are_byte_identical(self, tmp_path):
        cfg = write_cfg(tmp_path, CFG_NF)
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            run_cli(["verify-jacobi", "--config", cfg, "--box", "1", "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_z0_cocycles(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CFG_Z0)
        code = run_cli(["cocycle-solve", "--config", cfg, "--box", "3"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["h2_dimension_inner"] == 1


class TestConsoleEntry:
    def test_module_invocation(self, tmp_path):
        cfg = write_cfg(tmp_path, CFG_NF)
        proc = subprocess.run(
            [sys.executable, "-m", "qtlie", "verify-embedding", "--config", cfg,
             "--box", "1"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["passed"] is True
        assert "s" in proc.stderr  # wall time goes to stderr, not the report
