"""CLI checks: subcommands, exit codes, artifact writing."""
import json

from fastsim.cli import main


def write_config(tmp_path, name="config.json", **overrides):
    cfg = {
        "model": {"name": "tight_binding_chain", "n": 2, "t_hop": 1.0},
        "mapping": "jw",
        "request": {"kind": "commutator", "family": "density_density", "eps": 0.1},
        "times": [0.5],
        "seed": 42,
        "shots": {
            "per_group": 400, "shadow": 1000, "bell": 400,
            "anchor": 200, "chain": 200, "majority": 400, "nm": 200,
        },
    }
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def test_run_writes_artifacts(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "out"
    code = main(["run", str(cfg), "--out", str(out)])
    assert code == 0
    assert (out / "results.csv").exists()
    assert (out / "report.json").exists()
    assert "fraction=" in capsys.readouterr().out


def test_run_check_passes(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["run", str(cfg), "--check", "--out", str(tmp_path / "o")]) == 0


def test_run_check_fails_with_tight_eps(tmp_path):
    # ridiculous eps: nothing can land within 1e-6 of the oracle at few shots
    cfg = write_config(
        tmp_path,
        request={"kind": "commutator", "family": "density_density", "eps": 1e-6},
        times=[0.9],
    )
    code = main(["run", str(cfg), "--check", "--out", str(tmp_path / "o")])
    assert code == 3


def test_missing_config_exit_1(tmp_path):
    assert main(["run", str(tmp_path / "absent.json")]) == 1


def test_invalid_config_exit_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"model": {"name": "tight_binding_chain", "n": 0}}))
    assert main(["run", str(path)]) == 1


def test_capacity_exit_2(tmp_path):
    cfg = write_config(tmp_path, model={"name": "tight_binding_chain", "n": 13})
    assert main(["run", str(cfg)]) == 2


def test_zero_shots_exit_1(tmp_path):
    cfg = write_config(
        tmp_path,
        shots={"per_group": 0, "shadow": 1, "bell": 1, "anchor": 1, "chain": 1,
               "majority": 1, "nm": 1},
    )
    assert main(["run", str(cfg)]) == 1


def test_oracle_command(tmp_path, capsys):
    cfg = write_config(tmp_path, times=[0.0])
    out = tmp_path / "oracle_out"
    assert main(["oracle", str(cfg), "--out", str(out)]) == 0
    assert "ground_energy=" in capsys.readouterr().out
    assert (out / "oracle.csv").exists()


def test_scaling_command(tmp_path, capsys):
    sweep = {
        "model": {"name": "tight_binding_chain", "n": 2},
        "n_values": [2, 3, 4],
        "protocols": [{"protocol": "brute_commutator"}],
    }
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(sweep))
    out = tmp_path / "scaling_out"
    assert main(["scaling", str(path), "--out", str(out)]) == 0
    assert (out / "scaling.csv").exists()
    assert "brute_commutator" in capsys.readouterr().out


def test_scaling_too_few_points_exit_1(tmp_path):
    sweep = {
        "model": {"name": "tight_binding_chain", "n": 2},
        "n_values": [2, 4],
        "protocols": [{"protocol": "brute_commutator"}],
    }
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(sweep))
    assert main(["scaling", str(path)]) == 1


def test_run_against_server_matches_local(tmp_path, monkeypatch):
    # route --server through the in-process test client: artifacts must match
    import fastsim.cli as cli
    from fastapi.testclient import TestClient
    from fastsim.service.app import create_app

    client = TestClient(create_app())

    def fake_post(server, endpoint, payload):
        return client.post(endpoint, json=payload).json()

    monkeypatch.setattr(cli, "_post", fake_post)
    cfg = write_config(tmp_path)
    local_out = tmp_path / "local"
    remote_out = tmp_path / "remote"
    assert main(["run", str(cfg), "--out", str(local_out)]) == 0
    assert main(["run", str(cfg), "--out", str(remote_out), "--server", "http://fake"]) == 0
    assert (local_out / "results.csv").read_bytes() == (remote_out / "results.csv").read_bytes()
    assert (local_out / "oracle.csv").read_bytes() == (remote_out / "oracle.csv").read_bytes()
