import json
import subprocess
import sys

import pytest

from quasifiliform.catalog import build_family, parse_spec
from quasifiliform.cli import INPUT_ERROR, MATH_FAILURE, OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_complete_lnr(capsys):
    code, out, _ = run(capsys, "complete", "Lnr:n=6,r=3")
    rec = json.loads(out)
    assert code == OK and rec["H0"] == 0 and rec["H1"] == 0 and rec["complete"]


def test_build_defective_alphas_exits_one(capsys):
    code, out, _ = run(capsys, "build", "Cnr_k:n=10,r=7,k=2,alpha=1,0,0")
    rec = json.loads(out)
    assert code == MATH_FAILURE and not rec["jacobi"]
    assert all(len(d["triple"]) == 3 for d in rec["defects"]) and rec["defects"]


def test_build_a_plus_c_follows_the_defect_checker(capsys):
    code, out, _ = run(capsys, "build", "A+C:n=8,k=2,alpha=1,1")
    rec = json.loads(out)
    assert code == (OK if rec["jacobi"] else MATH_FAILURE)
    assert rec["jacobi"] == (not rec["defects"])


def test_h2bound_row(capsys):
    code, out, _ = run(capsys, "h2bound", "n=8", "k=2")
    assert code == OK
    assert json.loads(out) == {"n": 8, "k": 2, "t": 3, "bound": 1, "classes": 1, "H2": 1}


def test_h2bound_failure_exits_one(capsys):
    code, out, _ = run(capsys, "h2bound", "n=10", "k=2")
    rec = json.loads(out)
    assert code == MATH_FAILURE and rec["bound"] == 2 and rec["non_cocycles"] == [3]


@pytest.mark.parametrize("argv, field", [
    (["invariants", "Lnr:n=6,r=x"], "'r'"),
    (["invariants", "Lnr:r=3"], "'n'"),
    (["invariants", "A+C:n=8,k=2,alpha=1,oops"], "alpha"),
    (["h2bound", "n=8", "k=two"], "'k'"),
    (["h2bound", "n=8"], "'k'"),
    (["h2bound", "n=8", "k=1"], "'k'"),
])
def test_input_errors_name_the_field(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code == INPUT_ERROR and field in err


def test_malformed_json_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 3, "brackets": [{"i": 0, "j": 1, "terms": [{"k": 7, "c": "1"}]}]}))
    code, _, err = run(capsys, "invariants", str(path))
    assert code == INPUT_ERROR and "terms[0].k" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "invariants", str(tmp_path / "absent.json"))
    assert code == INPUT_ERROR and "cannot read" in err


def test_unknown_verb(capsys):
    assert main(["frobnicate", "Lnr:n=6,r=3"]) == INPUT_ERROR


def test_json_round_trip_matches_in_memory(capsys, tmp_path):
    spec = "Qnr:n=9,r=5"
    code, out, _ = run(capsys, "build", spec)
    assert code == OK
    path = tmp_path / "qnr.json"
    path.write_text(json.dumps(json.loads(out)["document"]))
    _, direct, _ = run(capsys, "invariants", spec)
    _, loaded, _ = run(capsys, "invariants", str(path))
    a, b = json.loads(direct), json.loads(loaded)
    a.pop("printed")
    a.pop("algebra"), b.pop("algebra")
    assert a == b


def test_completed_flag_needs_a_spec(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(build_family(parse_spec("E73")).to_json())
    code, _, err = run(capsys, "cohomology", "--completed", str(path))
    assert code == INPUT_ERROR and "--completed" in err
    code, out, _ = run(capsys, "cohomology", "--completed", "E73")
    assert code == OK and json.loads(out)["H"]["H1"] == 0


def test_derivations_verb(capsys):
    code, out, _ = run(capsys, "derivations", "Lnr:n=6,r=3")
    rec = json.loads(out)
    assert code == OK and rec["der_dim"] == len(rec["basis"]) == rec["inner_dim"] + rec["outer_dim"]


def test_table_format_and_out(capsys, tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run(capsys, "invariants", "--format", "table", "--out", str(target), "E73")
    assert code == OK and out == ""
    text = target.read_text()
    assert any(line.split() == ["nilindex", "5"] for line in text.splitlines())


def test_global_options_before_the_verb(capsys):
    code, out, _ = run(capsys, "--format", "table", "invariants", "E73")
    assert code == OK and "diagonal_rank" in out


def test_max_n_guard(capsys):
    code, _, err = run(capsys, "--max-n", "8", "invariants", "E951")
    assert code == INPUT_ERROR and "'n'" in err


SPEC_FILE = """\
# a comment line
Lnr:n=6,r=3
E73   # trailing comment

Q_sd_a:n=9,l=4
Lnr:n=6,r=4
A+C:n=8,k=2,alpha=1,0
"""


def batch(capsys, tmp_path, *extra):
    path = tmp_path / "specs.txt"
    path.write_text(SPEC_FILE)
    return run(capsys, "batch", str(path), *extra)


def test_batch_is_order_preserving_and_independent_of_jobs(capsys, tmp_path):
    code1, serial, _ = batch(capsys, tmp_path)
    code4, parallel, _ = batch(capsys, tmp_path, "--jobs", "4")
    assert serial == parallel and code1 == code4 == INPUT_ERROR
    records = [json.loads(line) for line in serial.splitlines()]
    assert [r.get("spec", r.get("input")) for r in records] == [
        "Lnr:n=6,r=3", "E73:n=7", "Q_sd_a:n=9,l=4", "Lnr:n=6,r=4", "A+C:n=8,k=2,alpha=1,0"]
    assert [r["status"] for r in records] == [OK, OK, MATH_FAILURE, INPUT_ERROR, OK]


def test_batch_without_input_errors_reports_math_failure(capsys, tmp_path):
    path = tmp_path / "specs.txt"
    path.write_text("Lnr:n=6,r=3\nQ_sd_a:n=9,l=4\n")
    code, _, _ = run(capsys, "batch", str(path))
    assert code == MATH_FAILURE


def test_batch_table_is_sorted_and_fixed_width(capsys, tmp_path):
    path = tmp_path / "specs.txt"
    path.write_text("Lnr:n=6,r=3\nE73\nA+C:n=8,k=2\n")
    code, out, _ = run(capsys, "batch", str(path), "--verb", "invariants", "--format", "table")
    lines = out.splitlines()
    assert code == OK and len(lines) == 4
    assert [ln.split()[0] for ln in lines[1:]] == sorted(ln.split()[0] for ln in lines[1:])
    assert len({len(ln) for ln in lines}) == 1
    header = lines[0]
    assert header.split()[:2] == ["algebra", "status"]
    start = header.index("nilindex")
    assert [ln[start:].split()[0] for ln in lines[1:]] == ["6", "5", "4"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quasifiliform", "complete", "Lnr:n=6,r=3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["complete"]
