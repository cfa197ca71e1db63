import json
import math

import numpy as np
import pytest

from drsub import meanfield as mf
from drsub.errors import GraphParseError, NegativeWeight
from drsub.harness import (
    PATHOLOGY_POINT,
    InstanceSpec,
    RunReport,
    gen_bipartite_influence,
    gen_pathology,
    gen_revenue,
    gen_softmax,
    gen_sqp,
    load_graph,
    read_trajectory_csv,
)
from drsub.harness.cli import main
from drsub.objectives import objective_equal
from drsub.solvers import SolverConfig, dr_double_greedy

QP632 = {
    "family": "quadratic",
    "params": {"H": [[-1, -1], [-1, -2]], "h": [0.5, 1], "c": 0},
    "domain": {"lower": [0, 0], "upper": [1, 1]},
}


@pytest.fixture
def qp_file(tmp_path):
    path = tmp_path / "qp632.json"
    path.write_text(json.dumps(QP632))
    return path


@pytest.fixture
def toy_graph(tmp_path):
    path = tmp_path / "toy.txt"
    path.write_text("0 1 1.0\n1 2 2.0\n2 3 0.5\n3 4 1.5\n4 0 1.0\n")
    return path


# --- generators --------------------------------------------------------------

def test_sqp_monotone_at_origin():
    for seed in range(5):
        obj, con = gen_sqp(6, 3, seed).build()
        assert np.all(obj.grad(np.zeros(6)) >= 0)
        assert obj.meta.monotone and obj.meta.dr
        assert np.all(obj.H <= 0) and np.all(obj.H >= -100) and np.array_equal(obj.H, obj.H.T)


def test_sqp_deterministic_and_paper_scale():
    a, b = gen_sqp(100, 50, 3), gen_sqp(100, 50, 3)
    assert a.to_dict() == b.to_dict()
    obj, con = a.build()
    assert obj.n == 100 and con.m == 50
    assert np.all(con.b == 1.0) and np.all(con.upper == 1.0)


def test_softmax_generator():
    spec = gen_softmax(8, 0.5, seed=2)
    obj, con = spec.build()
    d = np.sort(spec.info["eigenvalues"])
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(obj.L)), d, atol=1e-8)
    assert np.max(np.abs(obj.L - obj.L.T)) <= 1e-12
    assert con.b[0] == 0.5 * 8
    assert np.all((d >= 0) & (d <= 10))


def test_revenue_generator(toy_graph):
    spec = gen_revenue(toy_graph, q=0.75, budget_frac=0.2)
    obj, con = spec.build()
    assert obj.value(np.zeros(5)) == 0.0
    assert obj.q == 0.75 and con.b[0] == pytest.approx(0.2 * 5 * 1.0)


def test_revenue_undirected_stores_both_arcs(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("0 1 2.0\n")
    W = load_graph(path, undirected=True)
    assert W[0, 1] == W[1, 0] == 2.0


def test_pathology_generator():
    model = gen_pathology(1.0, 10.0)
    elbo = mf.build_elbo(model)
    assert elbo.value(list(PATHOLOGY_POINT)) == pytest.approx(1 + 2 * math.log(2), abs=1e-14)
    assert elbo.value([1, 0, 1, 0]) == 12.0
    assert elbo.value([0, 0, 0, 0]) == 0.0


def test_influence_generator():
    a = gen_bipartite_influence(12, 4, seed=5)
    assert a.to_dict() == gen_bipartite_influence(12, 4, seed=5).to_dict()
    obj, con = a.build()
    assert obj.value(np.zeros(12)) == 0.0
    assert obj.meta.monotone and obj.meta.dr
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.random(12)
        i = rng.integers(12)
        y = x.copy()
        y[i] = min(1.0, y[i] + rng.random())
        assert obj.value(y) >= obj.value(x) - 1e-12


def test_round_trip_bit_identical(tmp_path, toy_graph):
    specs = [gen_sqp(5, 2, 1), gen_softmax(4, 0.5, 1), gen_revenue(toy_graph), gen_bipartite_influence(6, 3, 1)]
    for spec in specs:
        path = tmp_path / "inst.json"
        spec.save(path)
        again = InstanceSpec.load(path)
        o1, c1 = spec.build()
        o2, c2 = again.build()
        assert objective_equal(o1, o2)
        assert c1.to_dict() == c2.to_dict()


# --- graph files ---------------------------------------------------------------

def test_load_graph_examples(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1 2.5\n")
    assert load_graph(p)[0, 1] == 2.5
    p.write_text("0 1 1\n0 1 1\n")
    assert load_graph(p)[0, 1] == 2.0
    p.write_text("0 1 -1\n")
    with pytest.raises(NegativeWeight):
        load_graph(p)


@pytest.mark.parametrize("text", ["0 1\n", "a b 1\n", "0 -1 1\n", "0 1 nan\n"])
def test_load_graph_rejects(tmp_path, text):
    p = tmp_path / "g.txt"
    p.write_text(text)
    with pytest.raises(GraphParseError):
        load_graph(p)


def test_load_graph_missing_file(tmp_path):
    with pytest.raises(GraphParseError):
        load_graph(tmp_path / "none.txt")


# --- reports ---------------------------------------------------------------------

def test_run_report_round_trip(tmp_path, qp):
    cfg = SolverConfig()
    rep = RunReport.from_solve(dr_double_greedy(qp, None, cfg), "qp", cfg, 0.25)
    path = tmp_path / "r.json"
    rep.save(path)
    assert RunReport.load(path) == rep
    csv_path = tmp_path / "t.csv"
    rep.write_csv(csv_path)
    rows = read_trajectory_csv(csv_path)
    assert max(r["f"] for r in rows) == rep.best_f
    assert [r["f"] for r in rows] == [r["f"] for r in rep.trajectory]


# --- command line ---------------------------------------------------------------

def test_cli_solve_dr_dg(qp_file, tmp_path, capsys):
    out, csv_path = tmp_path / "r.json", tmp_path / "t.csv"
    assert main(["solve", "--alg", "dr-dg", "--instance", str(qp_file), "--order", "natural",
                 "-o", str(out), "--csv", str(csv_path)]) == 0
    rep = json.loads(out.read_text())
    np.testing.assert_allclose(rep["solution"], [1 / 18, 17 / 36], atol=1e-9)
    assert csv_path.read_text().splitlines()[0] == "k,t,f,gap,gamma"
    assert max(r["f"] for r in read_trajectory_csv(csv_path)) == rep["best_f"]


def test_cli_oracle(qp_file, capsys):
    assert main(["oracle", "--grid", "201", "--instance", str(qp_file)]) == 0
    assert json.loads(capsys.readouterr().out)["f_star"] == 0.25


def test_cli_check(qp_file, capsys):
    assert main(["check", "--property", "dr", "--instance", str(qp_file), "--trials", "1000"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "pass"
    assert main(["check", "--property", "alpha-dr", "--alpha", "1", "1", "--instance", str(qp_file)]) == 0


def test_cli_gen_and_solve(tmp_path, capsys):
    inst = tmp_path / "sqp.json"
    assert main(["gen", "--family", "sqp", "--n", "3", "--m", "2", "--seed", "4", "-o", str(inst)]) == 0
    out = tmp_path / "r.json"
    assert main(["solve", "--alg", "submodular-fw", "--instance", str(inst), "--iters", "20",
                 "--oracle-grid", "21", "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["f_star"] is not None and rep["certificate"]["rhs"] <= rep["solution_f"] + 1e-6


def test_cli_batch(tmp_path):
    paths = []
    for seed in range(3):
        p = tmp_path / f"sqp{seed}.json"
        gen_sqp(3, 2, seed).save(p)
        paths += ["--instance", str(p)]
    outdir = tmp_path / "reports"
    assert main(["solve", "--alg", "pga", *paths, "--batch", "--jobs", "2", "-o", str(outdir), "--csv", "yes"]) == 0
    assert len(list(outdir.glob("*.report.json"))) == 3 and len(list(outdir.glob("*.csv"))) == 3


def test_cli_meanfield(tmp_path, capsys):
    model = tmp_path / "m.json"
    assert main(["gen", "--family", "pathology", "--c", "50", "--b", "10", "-o", str(model)]) == 0
    assert main(["meanfield", "--alg", "dg-1/2", "--model", str(model), "--epochs", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["objective"] >= 300 and out["objective"] <= out["log_partition_exact"] + 1e-9
    mod = tmp_path / "mod.json"
    mod.write_text(json.dumps({"family": "modular", "n": 2, "params": {"theta": [0.0, 0.0]}}))
    assert main(["meanfield", "--alg", "coord", "--model", str(mod), "--model2", str(mod), "--beta", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["pa_lower_bound"] == pytest.approx(out["log_pa_exact"], abs=1e-9)


def test_cli_errors_exit_nonzero(tmp_path, capsys):
    assert main(["oracle", "--instance", str(tmp_path / "missing.json")]) != 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"family": "quadratic", "params": {"H": [[0, 1], [1, 0]], "h": [0, 0], "require": "dr"}}))
    assert main(["oracle", "--instance", str(bad)]) != 0
    assert "StructuralViolation" in capsys.readouterr().err
    assert main(["solve", "--alg", "dr-dg", "--instance", str(bad)]) != 0


def test_cli_seed_from_environment(qp_file, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("DRSUB_SEED", "23")
    assert main(["check", "--property", "monotone", "--instance", str(qp_file), "--trials", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 23
