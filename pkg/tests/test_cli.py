import io
import json
import subprocess
import sys

import pytest

from frobhier import cli
from frobhier.algebra import Polynomial
from frobhier.potentials import potential


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code, rep = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_potential_text():
    code, out, _ = run("potential", "--family", "A", "--n", "3", "--format", "text")
    assert code == 0
    assert out == "F_A3 = 1/60*t3^5 - 1/4*t2^2*t3^2 + 1/2*t1^2*t3 + 1/2*t1*t2^2\n"


def test_potential_json_round_trips():
    code, out, _ = run("potential", "--family", "D", "--n", "5", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["family"] == "D" and obj["N"] == 5
    assert Polynomial.from_json_obj(obj["F"]) == potential("D", 5).F
    assert obj["delta"] == "3/4"


def test_metric():
    code, out, _ = run("metric", "--family", "D", "--n", "4", "--json")
    assert code == 0
    eta = json.loads(out)["eta"]
    assert eta[3][3] == "1/1"
    assert eta[0][2] == "1/1"


def test_hierarchy_golden():
    code, out, _ = run("hierarchy", "--family", "D", "--lhs", "2,2", "--format", "text")
    assert code == 0
    assert out.strip() == "1/12*p1^3 - 1/2*p1*p2 + p3"


def test_hierarchy_flow2_json():
    code, out, _ = run("hierarchy", "--family", "D", "--lhs", "0,4", "--json")
    obj = json.loads(out)
    assert obj["cofactor_text"] == "1/8*p1^3 + 1/2*p1*p2 + 1/2*p3"
    assert obj["lhs"] == [0, 4]


def test_rtable_json():
    code, out, _ = run("rtable", "--family", "A", "--max-order", "8", "--json")
    assert code == 0
    obj = json.loads(out)
    entry = next(e for e in obj["tables"][0]["entries"] if e["alpha"] == 2 and e["beta"] == 2 and e["gammas"] == [3])
    assert entry["value"] == "1/1"


def test_oracle_phat():
    code, out, _ = run("oracle", "phat", "--i", "3", "--j", "4", "--gammas", "2,3")
    assert code == 0
    assert out.strip() == "2"


def test_verify_wdvv_json():
    code, out, _ = run("verify", "wdvv", "--family", "A", "--n", "6", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["quadruples_checked"] == 6 ** 4
    assert obj["failures"] == []


@pytest.mark.parametrize("argv", [
    ["verify", "stabilization", "--family", "A", "--n1", "5", "--n2", "7"],
    ["verify", "compatibility", "--family", "B", "--triple", "2,2,3", "--n", "8"],
    ["verify", "enumerative", "--family", "A", "--n", "5"],
    ["verify", "fay", "--family", "A", "--n", "5"],
    ["verify", "fay", "--family", "B", "--n", "4"],
    ["verify", "fay", "--family", "D", "--n", "5"],
])
def test_verify_verbs_pass(argv):
    code, out, _ = run(*argv)
    assert code == 0, out
    assert out.strip().endswith("checks passed")


def test_fay_json_lists_checked_keys():
    code, out, _ = run("verify", "fay", "--family", "A", "--n", "3", "--json")
    detail = json.loads(out)["checks"][0]["detail"]
    assert detail["checked"]
    assert detail["mismatch"] is None


def test_sampled_compatibility_is_seeded():
    argv = ["verify", "compatibility", "--family", "A", "--n", "7", "--sample", "4", "--json", "--no-timing"]
    a = run(*argv, "--seed", "3")[1]
    b = run(*argv, "--seed", "3")[1]
    assert a == b
    assert json.loads(a)["checks"][0]["detail"]["triples_checked"] == 4


@pytest.mark.parametrize("argv", [
    ["potential", "--family", "D", "--n", "3"],
    ["potential", "--family", "E", "--n", "3"],
    ["hierarchy", "--family", "A", "--lhs", "0,3"],
    ["verify", "stabilization", "--family", "A", "--n1", "5", "--n2", "4"],
    ["verify", "compatibility", "--family", "A", "--triple", "4,4,4", "--n", "5"],
    ["oracle", "phat", "--i", "0", "--j", "1", "--gammas", "1"],
    ["nonsense"],
    [],
])
def test_usage_errors(argv, capsys):
    code, _, _ = run(*argv)
    assert code == 2


def test_verification_failure_exit_code(monkeypatch):
    def broken(family, N):
        return f"wdvv/{family}/{N}", False, {"quadruples_checked": 1, "failures": [{"quadruple": [1, 1, 1, 1]}]}

    monkeypatch.setattr(cli, "_check_wdvv", broken)
    code, out, _ = run("verify", "wdvv", "--family", "A", "--n", "3", "--json")
    assert code == 1
    assert json.loads(out)["failures"]


def test_internal_error_exit_code(monkeypatch):
    def boom(args):
        raise AssertionError("invariant")

    monkeypatch.setitem(cli.DISPATCH, "potential", boom)
    code, _, err = run("potential", "--family", "A", "--n", "3")
    assert code == 3
    assert "internal error" in err


def test_global_flags_before_or_after_verb():
    a = run("--format", "json", "potential", "--family", "B", "--n", "3")[1]
    b = run("potential", "--family", "B", "--n", "3", "--format", "json")[1]
    assert a == b


def test_verify_all_is_byte_stable():
    argv = ["verify", "all", "--max-n", "5", "--json", "--no-timing"]
    code1, out1, _ = run(*argv)
    code2, out2, _ = run(*argv, "--jobs", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    ids = [c["id"] for c in json.loads(out1)["checks"]]
    assert ids == sorted(ids)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "frobhier", "oracle", "phat", "--i", "3", "--j", "4",
                           "--gammas", "2,3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2"
