import subprocess
import sys

import pytest

from directed_ramsey.artifacts import ARTIFACT_NAMES
from directed_ramsey.catalog import Catalog
from directed_ramsey.cli import EXIT_FAIL, EXIT_OK, EXIT_UNKNOWN, main
from directed_ramsey.encoder import parse_dimacs
from directed_ramsey.tournament import has_tt_k, to_matrix_text, three_cycle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    kv = dict(line.split("=", 1) for line in out.out.splitlines() if "=" in line)
    return code, kv, out


def test_bounds_kv(capsys):
    code, kv, _ = run(capsys, "bounds", "--n", "24", "--report", "kv")
    assert code == EXIT_OK
    assert kv["min_tt3"] == "1452" and kv["max_3cycles"] == "572"
    assert kv["avg_cycles_per_edge"] == "572/92" and kv["d_cap"] == "6"


def test_bounds_23_note(capsys):
    code, kv, _ = run(capsys, "bounds", "--n", "23", "--report", "kv")
    assert kv["min_tt3"] == "1265" and kv["avg_cycles_per_edge"] == "6"
    assert "1256" in kv["note0"]


def test_bounds_human(capsys):
    code, _, out = run(capsys, "bounds", "--n", "24")
    assert code == EXIT_OK and "max_3cycles" in out.out and "=" not in out.out


def test_verify_all(capsys):
    code, kv, _ = run(capsys, "verify", "--report", "kv")
    assert code == EXIT_OK and kv["result"] == "PASS"
    assert {k.split(".")[0] for k in kv if "." in k} == set(ARTIFACT_NAMES)


def test_verify_unknown_artifact(capsys):
    code, _, out = run(capsys, "verify", "NOPE")
    assert code == EXIT_FAIL and "error" in out.err


def test_verify_external(capsys, tmp_path):
    from directed_ramsey.artifacts import qr23

    path = tmp_path / "dr.txt"
    path.write_text(to_matrix_text(qr23()))
    code, kv, _ = run(capsys, "verify", "--in", str(path), "--report", "kv")
    assert code == EXIT_OK and kv["tt6_free"] == "1"


def test_encode_stdout(capsys):
    code, _, out = run(capsys, "encode", "--n", "3", "--k", "3", "--encoding", "direct")
    assert code == EXIT_OK and out.out.startswith("p cnf 3 6\n")


def test_encode_fixed_and_solve(capsys, tmp_path):
    cyc = tmp_path / "c3.txt"
    cyc.write_text(to_matrix_text(three_cycle()))
    cnf = tmp_path / "f.cnf"
    code, kv, _ = run(capsys, "encode", "--n", "7", "--k", "4", "--fixed", str(cyc), "--out", str(cnf), "--report", "kv")
    assert code == EXIT_OK and int(kv["clauses"]) == len(parse_dimacs(cnf.read_text()).clauses)
    out = tmp_path / "w.txt"
    code, kv, _ = run(
        capsys, "solve", "--in", str(cnf), "--k", "4", "--expect", "sat", "--out", str(out), "--report", "kv"
    )
    assert code == EXIT_OK and kv["status"] == "SAT" and kv["tt_free_check"] == "PASS"
    (t,) = Catalog.read(out).entries
    assert not has_tt_k(t, 4)
    assert t.has_edge(0, 1) and t.has_edge(1, 2) and t.has_edge(2, 0)


def test_solve_expect_mismatch(capsys, tmp_path):
    cnf = tmp_path / "f.cnf"
    run(capsys, "encode", "--n", "4", "--k", "3", "--out", str(cnf))
    code, kv, _ = run(capsys, "solve", "--in", str(cnf), "--expect", "sat", "--report", "kv")
    assert code == EXIT_FAIL and kv["status"] == "UNSAT"


def test_solve_timeout_unknown(capsys, tmp_path):
    script = tmp_path / "slow.py"
    script.write_text("import time; time.sleep(30)\n")
    cnf = tmp_path / "f.cnf"
    run(capsys, "encode", "--n", "4", "--k", "3", "--out", str(cnf))
    code, kv, _ = run(
        capsys, "solve", "--in", str(cnf), "--solver", f"{sys.executable} {script}", "--timeout", "0.5",
        "--report", "kv",
    )
    assert code == EXIT_UNKNOWN and kv["status"] == "UNKNOWN"


def test_solver_env(capsys, tmp_path, monkeypatch):
    script = tmp_path / "fake.py"
    script.write_text("print('s UNSATISFIABLE'); raise SystemExit(20)\n")
    monkeypatch.setenv("DIRECTED_RAMSEY_SOLVER", f"{sys.executable} {script}")
    cnf = tmp_path / "f.cnf"
    run(capsys, "encode", "--n", "3", "--k", "3", "--out", str(cnf))
    code, kv, _ = run(capsys, "solve", "--in", str(cnf), "--report", "kv")
    assert kv["status"] == "UNSAT"


def test_enumerate(capsys, tmp_path):
    out = tmp_path / "e.txt"
    code, kv, _ = run(capsys, "enumerate", "--n", "3", "--k", "3", "--out", str(out), "--report", "kv")
    assert (kv["labeled_models"], kv["classes"], kv["exhaustive"]) == ("2", "1", "1")
    assert Catalog.read(out).complete


def test_enumerate_limit(capsys):
    code, kv, _ = run(capsys, "enumerate", "--n", "6", "--k", "4", "--limit", "2", "--report", "kv")
    assert kv["labeled_models"] == "2" and kv["exhaustive"] == "0"


@pytest.mark.parametrize("method", ["block", "extend"])
def test_catalog(capsys, tmp_path, method):
    out = tmp_path / "c.txt"
    code, kv, _ = run(
        capsys, "catalog", "--n", "7", "--k", "4", "--method", method, "--out", str(out), "--report", "kv"
    )
    assert code == EXIT_OK and kv["classes"] == "1" and kv["complete"] == "1"
    code, kv, _ = run(capsys, "catalog", "--n", "8", "--k", "4", "--extend", str(out), "--report", "kv")
    assert kv["classes"] == "0" and kv["n"] == "8"


def test_catalog_matrix_format(capsys, tmp_path):
    out = tmp_path / "c.txt"
    run(capsys, "catalog", "--n", "3", "--k", "3", "--format", "matrix", "--out", str(out))
    assert out.read_text().split() == ["010", "001", "100"]


def test_catalog_pattern(capsys):
    code, kv, _ = run(capsys, "catalog", "--n", "9", "--k", "4", "--pattern", "artifact:H6", "--report", "kv")
    assert code == EXIT_OK and kv["order5"] == "3" and kv["largest_order"] == "7"


def test_pivot(capsys, tmp_path):
    cyc = tmp_path / "c3.txt"
    cyc.write_text(to_matrix_text(three_cycle()))
    code, kv, _ = run(
        capsys, "pivot", "--in", str(cyc), "--out-side", "generic:1", "--k", "3", "--expect", "unsat",
        "--report", "kv",
    )
    assert code == EXIT_OK and kv["status"] == "UNSAT" and kv["order"] == "5"
    code, kv, _ = run(capsys, "pivot", "--in", str(cyc), "--out-side", str(cyc), "--k", "4", "--report", "kv")
    assert kv["status"] == "SAT" and kv["tt_free_check"] == "PASS"


def test_pivot_dump(capsys, tmp_path):
    dump = tmp_path / "p.cnf"
    code, kv, _ = run(capsys, "pivot", "--in", "h:6", "--out-side", "generic:2", "--k", "7", "--dump", str(dump), "--report", "kv")
    assert code == EXIT_OK and dump.exists() and (tmp_path / "p.cnf.map").exists()
    assert parse_dimacs(dump.read_text()).var_count == int(kv["vars"])


def test_ramsey(capsys):
    code, kv, _ = run(capsys, "ramsey", "--k", "3", "--report", "kv")
    assert code == EXIT_OK and kv["R"] == "4"


def test_ramsey_unresolved(capsys):
    code, kv, _ = run(capsys, "ramsey", "--k", "4", "--n", "5", "--report", "kv")
    assert code == EXIT_UNKNOWN and kv["R"] == "UNKNOWN"


@pytest.mark.parametrize(
    "argv",
    [
        ["encode", "--n", "5", "--k", "2"],
        ["encode", "--n", "3", "--k", "4"],
        ["encode", "--n", "70", "--k", "4"],
        ["bounds", "--n", "2"],
        ["ramsey", "--k", "4", "--workers", "0"],
        ["ramsey", "--k", "4", "--timeout", "-1"],
        ["nosuch"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_missing_file(capsys):
    code, _, out = run(capsys, "solve", "--in", "/nonexistent.cnf")
    assert code == EXIT_FAIL and "error" in out.err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "directed_ramsey", "bounds", "--n", "23", "--report", "kv"],
        capture_output=True, text=True, check=True,
    )
    assert "min_tt3=1265" in proc.stdout
