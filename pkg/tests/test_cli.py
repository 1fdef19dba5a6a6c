import subprocess
import sys

import numpy as np
import pytest

from roid import io as rio
from roid.cli import bench_grid, parse_triple, read_config, run
from roid.datagen import gen_tucker, sample_mask


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("ROID_JOBS", raising=False)
    return tmp_path


@pytest.fixture
def observed(workdir):
    t = gen_tucker(12, 2, seed=3)
    rio.write_dense("t.dns", t)
    rio.write_coo("obs.coo", sample_mask(t.shape, 0.4, seed=1).fill(t))
    return t


def test_generate_header(workdir):
    assert run(["generate", "--dims", "40,40,40", "--rank", "3", "--seed", "7", "--out", "t.dns"]) == 0
    assert (workdir / "t.dns").read_text().splitlines()[0] == "40 40 40"
    np.testing.assert_array_equal(rio.read_dense("t.dns"), gen_tucker(40, 3, seed=7))


def test_mask_and_noise(workdir, observed):
    assert run(["mask", "--input", "t.dns", "--ratio", "0.25", "--seed", "2", "--out", "m.coo"]) == 0
    assert len(rio.read_coo("m.coo")) == round(0.25 * 12**3)
    assert run(["noise", "--input", "t.dns", "--nf", "0", "--out", "n.dns"]) == 0
    np.testing.assert_array_equal(rio.read_dense("n.dns"), observed)


def test_complete_report_schema(workdir, observed):
    code = run(["complete", "--method", "shooi", "--obs", "obs.coo", "--rank", "2,2,2", "--tol", "1e-5",
                "--out", "rec.dns", "--report", "rep.csv"])
    assert code == 0
    rows = rio.read_results("rep.csv")
    assert len(rows) == 1 and tuple(rows[0]) == rio.RESULT_FIELDS
    assert rows[0]["method"] == "shooi" and rows[0]["dims"] == "12x12x12" and rows[0]["rank"] == "2x2x2"
    assert float(rows[0]["rse"]) < 1e-3
    assert rio.read_dense("rec.dns").shape == (12, 12, 12)


def test_complete_with_truth_and_trace(workdir, observed):
    code = run(["complete", "--method", "roid", "--obs", "obs.coo", "--rank", "2", "--lambda", "1e4",
                "--truth", "t.dns", "--trace", "tr.csv", "--report", "rep.csv"])
    assert code == 0
    trace = (workdir / "tr.csv").read_text().splitlines()
    assert trace[0] == "iter,r,s,rho,objective,rse" and len(trace) > 1
    assert float(rio.read_results("rep.csv")[0]["rse"]) < 1e-2


def test_config_file_and_flag_override(workdir, observed):
    (workdir / "solver.cfg").write_text("# solver settings\nlambda = 1e3\nmaxiter = 3\n")
    run(["complete", "--obs", "obs.coo", "--rank", "2", "--config", "solver.cfg", "--report", "a.csv"])
    run(["complete", "--obs", "obs.coo", "--rank", "2", "--config", "solver.cfg", "--maxiter", "5", "--report", "b.csv"])
    a, b = rio.read_results("a.csv")[0], rio.read_results("b.csv")[0]
    assert a["lambda"] == b["lambda"] == "1000.0"
    assert (a["iters"], b["iters"]) == ("3", "5")


def test_strict_nonconvergence_exit(workdir, observed):
    args = ["complete", "--obs", "obs.coo", "--rank", "2", "--maxiter", "1", "--report", "r.csv"]
    assert run(args) == 0
    assert run(args + ["--strict"]) == 2
    assert rio.read_results("r.csv")[0]["converged"] == "false"


def test_groid_with_affinity_files(workdir, observed):
    w = np.ones((12, 12)) - np.eye(12)
    np.savetxt("w.txt", w)
    code = run(["complete", "--method", "groid", "--obs", "obs.coo", "--rank", "2", "--mu", "0.01",
                "--graphs", "w.txt,none,w.txt", "--maxiter", "5", "--report", "g.csv"])
    assert code == 0 and rio.read_results("g.csv")[0]["method"] == "groid"


def test_decompose_and_evaluate(workdir, observed, capsys):
    assert run(["decompose", "--method", "hooi", "--input", "t.dns", "--rank", "2", "--out", "h.dns", "--report", "h.csv"]) == 0
    assert float(rio.read_results("h.csv")[0]["rse"]) < 1e-10
    assert run(["decompose", "--method", "full", "--input", "t.dns", "--rank", "2", "--lambda", "1e6", "--report", "f.csv"]) == 0
    capsys.readouterr()
    assert run(["evaluate", "--pred", "h.dns", "--truth", "t.dns"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "metric,value" and lines[1].startswith("rse,") and float(lines[1][4:]) < 1e-10


def test_evaluate_auc(workdir, capsys):
    pred = np.zeros((2, 2, 1))
    pred[:, :, 0] = [[0.9, 0.1], [0.8, 0.3]]
    rio.write_dense("p.dns", pred)
    (workdir / "lab.coo").write_text("2 2 1\n1 1 1 1\n2 1 1 1\n1 2 1 0\n2 2 1 0\n")
    assert run(["evaluate", "--pred", "p.dns", "--labels", "lab.coo"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "auc,1.0"


@pytest.mark.parametrize(
    "argv",
    [
        ["complete", "--bogus"],
        ["nonsense"],
        [],
        ["generate", "--dims", "4,4", "--rank", "2", "--out", "x.dns"],
        ["complete", "--obs", "missing.coo", "--rank", "2"],
        ["bench", "--out", "r.csv"],
        ["evaluate", "--pred", "missing.dns"],
    ],
)
def test_usage_errors_exit_one(workdir, argv, capsys):
    assert run(argv) == 1
    assert capsys.readouterr().err


def test_bench_rows_per_cell(workdir):
    (workdir / "sweep.cfg").write_text(
        "methods = roid,shooi\ndims = 10\ntrue_rank = 2\nrank = 3:5\nratio = 0.3\nrepetitions = 2\nmaxiter = 20\n"
    )
    assert run(["bench", "--spec", "sweep.cfg", "--out", "res.csv", "--jobs", "3"]) == 0
    rows = rio.read_results("res.csv")
    assert len(rows) == 2 * 3 * 2
    keys = [(r["method"], r["rank"], r["seed"]) for r in rows]
    assert keys == sorted(keys, key=lambda k: (k[0] != "roid", k[1], k[2]))
    assert len(set(r["config_hash"] for r in rows)) == len(rows)


@pytest.mark.filterwarnings("ignore::roid.errors.NonUniquePolarWarning")
def test_bench_deterministic_across_jobs(workdir, monkeypatch):
    spec = "methods = roid,groid,shooi,full,hooi\ndims = 8\ntrue_rank = 2\nrank = 2,3\nratio = 0.5\nrepetitions = 2\nmaxiter = 30\ngraph_k = 2\n"
    (workdir / "s.cfg").write_text(spec)
    assert run(["bench", "--spec", "s.cfg", "--out", "a.csv", "--jobs", "1"]) == 0
    monkeypatch.setenv("ROID_JOBS", "4")
    assert run(["bench", "--spec", "s.cfg", "--out", "b.csv"]) == 0
    a, b = rio.read_results("a.csv"), rio.read_results("b.csv")
    assert [r["rse"] for r in a] == [r["rse"] for r in b]
    assert [r["config_hash"] for r in a] == [r["config_hash"] for r in b]


def test_bench_set_override_and_strict(workdir):
    (workdir / "s.cfg").write_text("methods = roid\ndims = 6\ntrue_rank = 2\nrank = 2\nmaxiter = 50\n")
    assert run(["bench", "--spec", "s.cfg", "--set", "maxiter=1", "--out", "r.csv", "--strict"]) == 2
    assert rio.read_results("r.csv")[0]["iters"] == "1"


def test_parse_helpers(tmp_path):
    assert parse_triple("40x30x20") == (40, 30, 20) and parse_triple("5") == (5, 5, 5)
    p = tmp_path / "c.cfg"
    p.write_text("a = 1  # trailing\n\nb='x'\n")
    assert read_config(p) == {"a": "1", "b": "x"}
    cells = bench_grid({"methods": "roid", "rank": "3:5,9", "ratio": "0.1,0.2", "repetitions": "2"})
    assert len(cells) == 4 * 2 * 2 and [c["index"] for c in cells] == list(range(16))


def test_module_entry_point(workdir):
    out = subprocess.run([sys.executable, "-m", "roid", "generate", "--dims", "2", "--rank", "1", "--out", "m.dns"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and (workdir / "m.dns").exists()
    bad = subprocess.run([sys.executable, "-m", "roid", "--nope"], capture_output=True, text=True)
    assert bad.returncode == 1 and "usage" in bad.stderr
