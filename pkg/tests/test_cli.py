"""End-to-end command line tests, all in process through ``main``."""

import csv
import json

import pytest

from ccdarp.cli import main
from ccdarp.instance import (format_cordeau, generate_benchmark,
                             save_instance, synthetic_instance)
from ccdarp.milp import build_model, export_lp
from ccdarp.utility import ChanceModel


@pytest.fixture(scope="module")
def bench_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("inst") / "a2-16.json"
    save_instance(generate_benchmark("a2-16"), str(path))
    return str(path)


@pytest.fixture(scope="module")
def sweep_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("inst") / "sweep.json"
    save_instance(synthetic_instance(12, 2, seed=5), str(path))
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_solve_writes_solution_and_trace(bench_file, tmp_path):
    out = tmp_path / "sol.json"
    trace = tmp_path / "trace.csv"
    assert main(["solve", bench_file, "--out", str(out),
                 "--trace", str(trace)]) == 0

    doc = json.loads(out.read_text())
    assert doc["profit"] == pytest.approx(doc["revenue"] - doc["routing_cost"])
    assert doc["accepted"] == len(doc["served"])
    assert doc["instance"] == "a2-16"
    for entry in doc["requests"]:
        assert entry["fare"] == 20.0

    rows = read_rows(str(trace))
    assert rows[0]["iteration"] == "0"
    profits = [float(r["profit"]) for r in rows]
    assert all(b > a for a, b in zip(profits, profits[1:]))
    assert profits[-1] == pytest.approx(doc["profit"])
    assert all(r["accepted_1"] == r["served"] for r in rows)


def test_solve_is_deterministic(bench_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["solve", bench_file, "--out", str(a)]) == 0
    assert main(["solve", bench_file, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_flat_fare_flag_beats_params_file(bench_file, tmp_path):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"fare": {"variant": "flat", "f": 20.0},
                                  "omega": 0.1}))
    out = tmp_path / "sol.json"
    assert main(["solve", bench_file, "--params", str(params),
                 "--flat-fare", "35.0", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert all(entry["fare"] == 35.0 for entry in doc["requests"])


def test_usage_errors_exit_2(bench_file, tmp_path):
    assert main(["frobnicate", bench_file]) == 2       # unknown subcommand
    assert main(["sweep", bench_file, "--axis", "q",
                 "--grid", "1,2"]) == 2                # unknown axis
    assert main(["solve", str(tmp_path / "missing.json")]) == 2
    assert main(["sweep", bench_file, "--axis", "s", "--grid", "5,4"]) == 2
    assert main(["sweep", bench_file, "--axis", "s", "--grid", "5,x"]) == 2
    assert main(["sweep", bench_file, "--axis", "p", "--grid", "0.5,1.5"]) == 2
    assert main(["sweep", bench_file, "--axis", "alpha", "--grid", "1,2"]) == 2
    assert main(["sweep", bench_file, "--axis", "capacity",
                 "--grid", "2.5,3.5"]) == 2
    bad = tmp_path / "params.json"
    bad.write_text("{not json")
    assert main(["solve", bench_file, "--params", str(bad)]) == 2
    assert main(["--help"]) == 0


def test_validate_exit_codes(bench_file, tmp_path):
    assert main(["validate", bench_file]) == 0
    broken = tmp_path / "broken.json"
    doc = json.loads(open(bench_file).read())
    doc["fleet"]["max_ride_time"] = 0.001  # below every direct ride
    broken.write_text(json.dumps(doc))
    assert main(["validate", str(broken)]) == 1


def test_validate_prints_verdict(bench_file, capsys):
    main(["validate", bench_file])
    assert "a2-16: ok" in capsys.readouterr().out


def test_convert_round_trip(tmp_path):
    inst = generate_benchmark("a2-16")
    c1 = tmp_path / "col1.txt"
    c1.write_text(format_cordeau(inst))
    as_json = tmp_path / "inst.json"
    assert main(["convert", str(c1), "--to", "json",
                 "--out", str(as_json)]) == 0
    c2 = tmp_path / "col2.txt"
    assert main(["convert", str(as_json), "--to", "cordeau",
                 "--out", str(c2)]) == 0
    assert c1.read_text() == c2.read_text()


def test_convert_warns_when_lossy(tmp_path, capsys):
    inst = synthetic_instance(4, 1, seed=2, zone_split=True)
    src = tmp_path / "zoned.json"
    save_instance(inst, str(src))
    out = tmp_path / "col.txt"
    assert main(["convert", str(src), "--to", "cordeau",
                 "--out", str(out)]) == 0
    assert "drops class/zone data" in capsys.readouterr().err


def test_export_lp_matches_library(bench_file, tmp_path):
    out = tmp_path / "model.lp"
    assert main(["export-lp", bench_file, "--out", str(out)]) == 0
    inst = generate_benchmark("a2-16")
    assert out.read_text() == export_lp(build_model(inst, ChanceModel.default()))


def test_sweep_outputs_consistent_rows(sweep_file, tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", sweep_file, "--axis", "f",
                 "--grid", "10,15,20,25,30", "--out", str(out)])
    assert code == 0
    rows = read_rows(str(out))
    assert len(rows) == 5
    assert [r["axis"] for r in rows] == ["f"] * 5
    assert [float(r["value"]) for r in rows] == [10, 15, 20, 25, 30]
    for r in rows:
        assert int(r["feasible"]) == 1
        assert float(r["profit"]) == pytest.approx(
            float(r["revenue"]) - float(r["routing_cost"]), abs=1e-9)
        accepted = sum(int(v) for k, v in r.items()
                       if k.startswith("accepted_"))
        assert int(r["served"]) == accepted
    # timing goes to the sidecar, never into the data file
    assert (tmp_path / "sweep.csv.log").exists()
    assert "s\n" in (tmp_path / "sweep.csv.log").read_text()


def test_sweep_is_reproducible(sweep_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["sweep", sweep_file, "--axis", "p", "--grid", "0.8,0.9,0.95"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_parallel_matches_sequential(sweep_file, tmp_path, monkeypatch):
    seq, par = tmp_path / "seq.csv", tmp_path / "par.csv"
    argv = ["sweep", sweep_file, "--axis", "s", "--grid", "5,10,20"]
    monkeypatch.delenv("CCDARP_THREADS", raising=False)
    assert main(argv + ["--out", str(seq)]) == 0
    monkeypatch.setenv("CCDARP_THREADS", "2")
    assert main(argv + ["--out", str(par)]) == 0
    assert seq.read_bytes() == par.read_bytes()

    monkeypatch.setenv("CCDARP_THREADS", "zero")
    assert main(argv + ["--out", str(par)]) == 2
    monkeypatch.setenv("CCDARP_THREADS", "0")
    assert main(argv + ["--out", str(par)]) == 2


def test_sweep_class_restriction(sweep_file, tmp_path):
    out = tmp_path / "one.csv"
    assert main(["sweep", sweep_file, "--axis", "p", "--grid", "0.9",
                 "--class-id", "1", "--out", str(out)]) == 0
    assert main(["sweep", sweep_file, "--axis", "p", "--grid", "0.9",
                 "--class-id", "nope", "--out", str(out)]) == 2
