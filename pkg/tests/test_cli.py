import io
import json
import subprocess
import sys

import pytest

from conftest import MANIFESTS
from gcx.cli import run

IW = str(MANIFESTS / "iwasawa.json")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    return code, json.loads(out)


def test_validate_ok():
    code, rep = call_json("validate", "-i", IW)
    assert code == 0 and rep["status"] == "ok" and rep["schema"] == 1


def test_report_schema():
    code, rep = call_json("decompose", "-i", IW, "-s", "J0")
    assert code == 0
    assert set(rep) == {"schema", "command", "algebra", "result", "status", "exit"}
    assert rep["result"]["gh_total"] == 36


def test_missing_file_is_parse_error(tmp_path):
    code, _, err = call("validate", "-i", str(tmp_path / "nope.json"))
    assert code == 2 and err


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert call("validate", "-i", str(p))[0] == 2


def test_jacobi_failure_is_validation_error():
    assert call("validate", "-i", str(MANIFESTS / "bad_jacobi.json"))[0] == 3


def test_unknown_structure_is_usage_error():
    assert call("decompose", "-i", IW, "-s", "nothing")[0] == 4


def test_family_needs_circle():
    assert call("decompose", "-i", IW, "-s", "Jt")[0] == 4
    assert call("decompose", "-i", IW, "-s", "J0", "--circle", "1")[0] == 4


def test_bad_flag_is_usage_error():
    assert call("decompose", "--bogus")[0] == 4


def test_derham_check_representatives():
    code, rep = call_json("derham", "-i", IW, "--check-representatives", str(MANIFESTS / "iwasawa_reps.json"))
    assert code == 0
    assert rep["result"]["betti"] == [1, 4, 8, 10, 8, 4, 1]


def test_derham_rejects_non_basis(tmp_path):
    p = tmp_path / "reps.json"
    p.write_text(json.dumps({"1": ["e1", "e1", "e2", "e3"]}))
    assert call("derham", "-i", IW, "--check-representatives", str(p))[0] == 3


def test_complex_command():
    code, rep = call_json("complex", "-i", IW, "-s", "J1")
    assert code == 0
    assert rep["result"]["hpq"]["2,1"] == 4
    assert rep["result"]["pure_and_full_every_stage"] is True


def test_complex_command_needs_complex():
    assert call("complex", "-i", IW, "-s", "rho")[0] == 4


def test_symplectic_command():
    code, rep = call_json("symplectic", "-i", IW, "-s", "omega")
    assert code == 0
    assert rep["result"]["dd_lambda_lemma"] is False


def test_transform_compare():
    rho = "(e1 + i*e2) ^ (e3 + i*e4) ^ (e5 + i*e6)"
    code, rep = call_json("transform", "-i", IW, "-s", "J0", "--B", "e12", "--compare", f"exp(e12) ^ {rho}")
    assert code == 0
    assert rep["result"]["equals_compare"] is True
    assert rep["result"]["steps"] == [{"op": "B", "expr": "e12"}]


def test_transform_order_matters():
    base = ("transform", "-i", IW, "-s", "omega", "--report", "none")
    a = call_json(*base, "--B", "e34", "--beta", "e_34")[1]["result"]["spinor"]
    b = call_json(*base, "--beta", "e_34", "--B", "e34")[1]["result"]["spinor"]
    assert a != b


def test_transform_circle_syntax():
    assert call("transform", "-i", IW, "-s", "rhot", "--circle", "1/2")[0] == 4
    assert call("transform", "-i", IW, "-s", "rhot", "--circle", "s=1/2", "--report", "none")[0] == 0


def test_transform_non_closed_b():
    assert call("transform", "-i", IW, "-s", "omega", "--B", "e15")[0] == 3


def test_sweep_deterministic_across_jobs():
    args = ("sweep", "-i", IW, "-s", "Jt", "--circle-list", "0,1/2,1,2,inf")
    a = call_json(*args, "--jobs", "1")
    b = call_json(*args, "--jobs", "3")
    assert a == b and a[0] == 0
    rows = a[1]["result"]["rows"]
    assert [r["h10"] for r in rows] == [2, 1, 1, 1, 2]


def test_sweep_range():
    code, rep = call_json("sweep", "-i", IW, "-s", "Jt", "--range", "0:1:1/2")
    assert code == 0
    assert [r["s"] for r in rep["result"]["rows"]] == ["0", "1/2", "1"]


def test_mukai():
    code, rep = call_json("mukai", "-i", IW)
    assert code == 0 and rep["result"]["rank"] == 36


def test_table_output_is_deterministic():
    assert call("decompose", "-i", IW, "-s", "rho", "--reps") == call("decompose", "-i", IW, "-s", "rho", "--reps")


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "gcx.cli", "validate", "-i", IW], capture_output=True, text=True)
    assert r.returncode == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("validate", "-i", IW),
        ("derham", "-i", IW),
        ("decompose", "-i", IW, "-s", "rho", "--reps"),
        ("complex", "-i", IW, "-s", "J0"),
        ("symplectic", "-i", IW, "-s", "omega"),
        ("transform", "-i", IW, "-s", "rhot", "--circle", "s=1/2", "--beta", "e_35", "--B", "-(e35 - e46)"),
        ("sweep", "-i", IW, "-s", "Jt", "--circle-list", "0,1/2,1,2,inf"),
        ("mukai", "-i", IW, "-s", "rho"),
    ],
)
def test_command_time_budget(argv):
    import time

    t0 = time.perf_counter()
    code = call(*argv)[0]
    assert code == 0
    assert time.perf_counter() - t0 < 10
