import json

import pandas as pd
import pytest

from conftest import make_copy_trajectory
from graph import load_graph
from main import build_parser, main
from simulator import load_trajectory, save_trajectory
from utils.errors import EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_VALIDATION


@pytest.fixture
def ring_file(tmp_path):
    path = tmp_path / "ring.json"
    assert main(["--quiet", "graph", "ring", "--n", "4", "--out", str(path)]) == EXIT_OK
    return path


def test_graph_ring_and_line(tmp_path, capsys):
    assert main(["graph", "ring", "--n", "10", "--out", str(tmp_path / "ring.json")]) == EXIT_OK
    assert len(load_graph(tmp_path / "ring.json").edges) == 10
    assert main(["graph", "line", "--out", str(tmp_path / "line.json")]) == EXIT_OK
    assert len(load_graph(tmp_path / "line.json").edges) == 9
    assert "10 edges, valid" in capsys.readouterr().out


def test_graph_bad_degree(tmp_path, capsys):
    code = main(["graph", "random", "--n", "6", "--in-degree", "7", "--out", str(tmp_path / "r.json")])
    assert code == EXIT_VALIDATION
    assert capsys.readouterr().err.startswith("error:")
    assert not (tmp_path / "r.json").exists()


def test_graph_violations_reported(tmp_path, capsys):
    code = main(["graph", "ring", "--n", "4", "--alpha", "1.0", "--out", str(tmp_path / "bad.json")])
    assert code == EXIT_VALIDATION
    assert "violation" in capsys.readouterr().out


def test_simulate_writes_hidden_sidecar(ring_file, tmp_path, capsys):
    out = tmp_path / "traj.jsonl"
    code = main(["simulate", "--graph", str(ring_file), "--d", "2", "--p", "1.0", "--T", "50", "--burn-in", "5",
                 "--with-hidden", "--out", str(out)])
    assert code == EXIT_OK
    assert "resets=0" in capsys.readouterr().out
    traj = load_trajectory(out, with_hidden=True)
    assert traj.T == 50 and traj.node_count == 4
    assert (traj.C == 1).all()


def test_simulate_is_seeded(ring_file, tmp_path):
    for name in ("a.jsonl", "b.jsonl"):
        main(["simulate", "--graph", str(ring_file), "--T", "200", "--seed", "3", "--out", str(tmp_path / name)])
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_simulate_missing_graph(tmp_path):
    assert main(["simulate", "--graph", str(tmp_path / "nope.json"), "--out", str(tmp_path / "t.jsonl")]) == EXIT_IO


def test_simulate_infeasible_schedule(ring_file, tmp_path, capsys):
    code = main(["simulate", "--graph", str(ring_file), "--T", "7", "--d", "5", "--burn-in", "0",
                 "--out", str(tmp_path / "t.jsonl")])
    assert code == EXIT_INFEASIBLE
    assert "error:" in capsys.readouterr().err


def test_recover_copy_edge(tmp_path, capsys):
    traj_path = tmp_path / "copy.jsonl"
    save_trajectory(make_copy_trajectory(T=400), traj_path, with_hidden=True)
    out = tmp_path / "rec.json"
    assert main(["recover", "--traj", str(traj_path), "--kappa", "0.5", "--out", str(out),
                 "--trace", str(tmp_path / "trace.jsonl")]) == EXIT_OK
    assert "0->1" in capsys.readouterr().out
    rec = json.loads(out.read_text())
    assert rec["neighborhoods"]["1"] == [0]
    assert (tmp_path / "trace.jsonl").read_text().strip()

    assert main(["recover", "--traj", str(traj_path), "--kappa", "1e9", "--out", str(out)]) == EXIT_OK
    assert "edges=0" in capsys.readouterr().out


def test_recover_genie_needs_sidecar(tmp_path):
    traj_path = tmp_path / "copy.jsonl"
    save_trajectory(make_copy_trajectory(T=100), traj_path)
    code = main(["recover", "--traj", str(traj_path), "--pairing", "genie", "--out", str(tmp_path / "r.json")])
    assert code == EXIT_IO


def test_bound_defaults(capsys):
    assert main(["bound"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "condition-violated" in out
    assert "1.28" in out


def test_bound_json(capsys):
    assert main(["bound", "--json", "--gamma", "0.05", "--epsilon", "1.0", "--epsilon-prime", "1.0",
                 "--c1", "0.005", "--mu-bar", "0.1", "--L", "0.1"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["inputs"]["mu_bar"] == 0.1
    assert report["result"]["status"] == "ok"
    assert report["result"]["T_required"] > 0
    assert report["version"]


def test_bound_from_graph(ring_file, capsys):
    assert main(["bound", "--json", "--graph", str(ring_file)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["inputs"]["V_size"] == 4


def test_bound_bad_delta():
    assert main(["bound", "--delta", "5"]) == EXIT_VALIDATION


def experiment_args(tmp_path, name):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph": {"kind": "ring", "n": 3}, "pim": {"d": 2, "p": 1.0, "burn_in": 10}}))
    return ["--quiet", "experiment", "--config", str(cfg), "--T-grid", "300", "600", "--kappa-grid", "0.3",
            "--trials", "2", "--jobs", "1", "--no-timing", "--out", str(tmp_path / name)]


def test_experiment_is_byte_identical(tmp_path, capsys):
    assert main(experiment_args(tmp_path, "a.csv")) == EXIT_OK
    assert main(experiment_args(tmp_path, "b.csv")) == EXIT_OK
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.summary.csv").exists()
    meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
    assert meta["config"]["T_grid"] == [300, 600]
    assert "trend: spearman" in capsys.readouterr().out


def test_experiment_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"pim": {"d": -1}}))
    assert main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == EXIT_VALIDATION
    assert "pim.d" in capsys.readouterr().err


def test_crossval_curve(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph": {"kind": "ring", "n": 3}, "pim": {"d": 2, "p": 1.0, "burn_in": 10},
                               "T_grid": [600], "kappa_grid": [0.3, 1e6], "trials": 2}))
    out = tmp_path / "cv.csv"
    assert main(["--quiet", "crossval", "--config", str(cfg), "--jobs", "1", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert frame["kappa"].tolist() == [0.3, 1e6]
    assert frame["best"].tolist() == [1, 0]
    assert json.loads((tmp_path / "cv.csv.meta.json").read_text())["best_kappa"] == 0.3
    assert "best kappa=0.3" in capsys.readouterr().out


def test_crossval_needs_two_kappas(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph": {"n": 3}, "T_grid": [600], "kappa_grid": [0.3], "trials": 1}))
    assert main(["crossval", "--config", str(cfg), "--jobs", "1", "--out", str(tmp_path / "cv.csv")]) == EXIT_VALIDATION


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["--version"])
    assert info.value.code == 0
    assert "pim-recovery" in capsys.readouterr().out
