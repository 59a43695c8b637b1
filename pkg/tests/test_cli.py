import json

import numpy as np
import pytest

from encomp.cli import main
from encomp.ingest import ColumnMap, write_csv
from encomp.model import validate_sample
from encomp.simulation import DgpSpec, draw_dgp


def _dataset(path, n=80, gamma=0.0, seed=0):
    s = draw_dgp(DgpSpec(n, gamma), np.random.default_rng(seed))
    write_csv(path, s, ColumnMap("y", ["w"], ["x"]))
    return path


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_test_command_report(tmp_path, capsys):
    data = _dataset(tmp_path / "d.csv")
    code, out, err = _run(capsys, ["test", "--data", str(data), "--y", "y", "--w", "w", "--x", "x", "--boot", "49"])
    assert code == 0
    assert err.count("\n") == 1 and err.startswith("encomp test:")
    rep = json.loads(out)
    assert rep["schema"] == 1 and len(rep["reports"]) == 1
    r = rep["reports"][0]
    assert r["direction"] == "w-encompasses-x" and (r["n"], r["p"], r["d"]) == (80, 1, 1)
    assert r["bandwidth"]["rule"].startswith("aicc") and len(r["bandwidth"]["aicc_curve"]) == 25
    assert r["trim"] == {"rule": "none", "tau": 0.0, "n_trimmed": 0}
    assert r["B"] == 49 and r["seed"] == 0 and r["multiplier"] == "mammen"
    assert set(r["statistics"]) == {"icm", "bc", "lr"}
    for st in r["statistics"].values():
        assert st["statistic"] >= 0 and 0 < st["p_value"] <= 1
        assert set(st["critical_values"]) == {"0.05", "0.1"}


def test_both_directions_with_shared_column(tmp_path, capsys):
    rng = np.random.default_rng(1)
    i, pi, pc = rng.normal(size=(3, 60))
    s = validate_sample(i + pi + rng.normal(size=60), np.column_stack([i, pi]), np.column_stack([i, pc]))
    path = tmp_path / "c.csv"
    write_csv(path, s, ColumnMap("c", ["i", "pi"], ["i", "pc"]))
    code, out, _ = _run(
        capsys,
        ["test", "--data", str(path), "--y", "c", "--w", "i,pi", "--x", "i,pc", "--direction", "both",
         "--boot", "19", "--bandwidth", "rot:1", "--trim", "quantile:0.05", "--stat", "bc"],
    )
    assert code == 0
    reps = json.loads(out)["reports"]
    assert [r["direction"] for r in reps] == ["w-encompasses-x", "x-encompasses-w"]
    assert reps[0]["smoothing_columns"] == ["i", "pi"] and reps[1]["smoothing_columns"] == ["i", "pc"]
    assert reps[0]["trim"]["n_trimmed"] == 3 and reps[0]["bandwidth"]["aicc_curve"] is None
    assert list(reps[1]["statistics"]) == ["bc"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["test", "--data", "x.csv"],
        ["test", "--data", "{data}", "--y", "y", "--w", "w", "--x", "x", "--stat", "foo"],
        ["test", "--data", "{data}", "--y", "y", "--w", "w", "--x", "x", "--trim", "quantile:1.5"],
        ["test", "--data", "{data}", "--y", "y", "--w", "w", "--x", "x", "--bandwidth", "silverman"],
        ["test", "--data", "{data}", "--y", "y", "--w", "w", "--x", "x", "--boot", "0"],
        ["test", "--data", "{data}", "--y", "y", "--w", "y", "--x", "x"],
        ["simulate", "--n", "50", "--reps", "0", "--out", "{tmp}"],
        ["simulate", "--n", "50", "--gamma-list", "a,b", "--out", "{tmp}"],
    ],
)
def test_usage_errors_exit_2(tmp_path, capsys, argv):
    data = _dataset(tmp_path / "d.csv", n=20)
    argv = [a.format(data=data, tmp=tmp_path / "o") for a in argv]
    code, out, _ = _run(capsys, argv)
    assert code == 2 and out == ""


def test_data_errors_exit_3(tmp_path, capsys):
    missing = ["test", "--data", str(tmp_path / "nope.csv"), "--y", "y", "--w", "w", "--x", "x"]
    assert _run(capsys, missing)[0] == 3
    bad = tmp_path / "bad.csv"
    bad.write_text('y,w,x\n1,2,3\n"1,5",2,3\n')
    code, _, err = _run(capsys, ["test", "--data", str(bad), "--y", "y", "--w", "w", "--x", "x"])
    assert code == 3 and "data error" in err
    data = _dataset(tmp_path / "d.csv", n=20)
    assert _run(capsys, ["test", "--data", str(data), "--y", "y", "--w", "w", "--x", "zz"])[0] == 3


def test_simulate_outputs(tmp_path, capsys):
    out = tmp_path / "sim"
    code, stdout, err = _run(
        capsys, ["simulate", "--n", "40", "--gamma-list", "0,1", "--reps", "6", "--bandwidth", "rot:1", "--out", str(out)]
    )
    assert code == 0 and stdout == "" and err.count("\n") == 1
    rej = (out / "rejection_table.csv").read_text().splitlines()
    assert rej[0] == "kind,level,gamma,proportion,mc_se" and len(rej) == 1 + 2 * 3 * 2
    erp = (out / "erp_curve.csv").read_text().splitlines()
    assert erp[0] == "kind,nominal,erp" and len(erp) == 1 + 3 * 99
    pc = (out / "power_curve.csv").read_text().splitlines()
    assert pc[0] == "kind,gamma,rejection" and len(pc) == 1 + 3 * 2


def test_simulate_single_rep(tmp_path, capsys):
    out = tmp_path / "one"
    assert _run(capsys, ["simulate", "--n", "30", "--reps", "1", "--bandwidth", "rot:1", "--out", str(out)])[0] == 0
    for line in (out / "rejection_table.csv").read_text().splitlines()[1:]:
        _, _, _, prop, se = line.split(",")
        assert float(prop) in (0.0, 1.0) and float(se) == 0.0


def test_byte_identical_outputs(tmp_path, capsys):
    data = _dataset(tmp_path / "d.csv", n=50)
    runs = []
    for k, threads in enumerate(["1", "1", "3"]):
        rep = tmp_path / f"r{k}.json"
        sim = tmp_path / f"s{k}"
        base = ["--seed", "5", "--threads", threads]
        assert main(["test", "--data", str(data), "--y", "y", "--w", "w", "--x", "x", "--boot", "29",
                     "--direction", "both", "--out", str(rep), *base]) == 0
        assert main(["simulate", "--n", "40", "--gamma-list", "0,0.5", "--reps", "8", "--out", str(sim), *base]) == 0
        runs.append([rep.read_bytes()] + [(sim / f).read_bytes() for f in sorted(p.name for p in sim.iterdir())])
    capsys.readouterr()
    assert runs[0] == runs[1] == runs[2]


def _pvalues(tmp_path, capsys, gamma, seed):
    data = _dataset(tmp_path / f"g{gamma}_{seed}.csv", n=400, gamma=gamma, seed=1000 + seed)
    code, out, _ = _run(capsys, ["test", "--data", str(data), "--y", "y", "--w", "w", "--x", "x", "--seed", str(seed)])
    assert code == 0
    return {k: v["p_value"] for k, v in json.loads(out)["reports"][0]["statistics"].items()}


@pytest.mark.slow
def test_null_datasets_rarely_reject(tmp_path, capsys):
    runs = [_pvalues(tmp_path, capsys, 0.0, s) for s in range(100)]
    ok = sum(all(p > 0.01 for p in r.values()) for r in runs)
    print(f"null runs with all p > 0.01: {ok}/100")
    assert ok >= 95


@pytest.mark.slow
def test_alternative_datasets_reject(tmp_path, capsys):
    runs = [_pvalues(tmp_path, capsys, 2.0, s) for s in range(100)]
    for kind in ("bc", "lr"):
        hits = sum(r[kind] < 0.05 for r in runs)
        print(f"gamma=2 {kind}: p < 0.05 in {hits}/100")
        assert hits >= 90
