import json
import subprocess
import sys

import pytest

from sparsekit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_fano(capsys):
    code, out, _ = run(capsys, "compute", "--atlas", "fano", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and abs(doc["det"]) == 24 and doc["perm"] == 24


def test_compute_from_file(tmp_path, capsys):
    f = tmp_path / "m.txt"
    f.write_text("3\n110\n011\n101\n")
    code, out, _ = run(capsys, "compute", "--input", str(f), "--mode", "perm")
    assert code == 0 and out.strip() == "perm = 2"


def test_malformed_file_reports_position(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("2\n10\n0x\n")
    code, _, err = run(capsys, "compute", "--input", str(f))
    assert code == 1 and ":3:2:" in err


def test_graph6_input(tmp_path, capsys):
    from sparsekit.atlas import make
    from sparsekit.graph import format_graph6
    f = tmp_path / "h.g6"
    f.write_text(format_graph6(make("heawood").graph))
    code, out, _ = run(capsys, "compute", "--input", str(f), "--mode", "perm")
    assert code == 0 and out.strip() == "perm = 24"


def test_verify_pass_and_precondition(capsys):
    code, out, _ = run(capsys, "verify", "--atlas", "j", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["holds"] and doc["slack"] == "(-3,0,2,0)"
    code, _, err = run(capsys, "verify", "--atlas", "c(4)")
    assert code == 1 and "C4" in err


def test_certify_outputs_rechecked_tree(capsys):
    code, out, _ = run(capsys, "certify", "--atlas", "heawood", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] and doc["recheck"]["verdict"]
    assert doc["root"]["children"]


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "type2-disc1")
    assert code == 0 and out.startswith("type2-disc1: pass")
    code, out, _ = run(capsys, "--list-claims")
    assert code == 0 and "det-c4" in out
    code, _, err = run(capsys, "audit", "nope")
    assert code == 1


def test_enumerate_and_search(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 26
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--keep-sides", "--format", "json")
    assert json.loads(out)["count"] == 36
    code, out, _ = run(capsys, "search", "--n", "3", "--k", "3", "--mode", "det", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["max"] == 2


def test_exhaustive_and_caps(capsys):
    code, out, _ = run(capsys, "exhaustive", "--n-max", "3", "--mode", "perm", "--format", "csv")
    assert code == 0 and out.startswith("n,k,classes")
    code, _, err = run(capsys, "exhaustive", "--n-max", "9", "--mode", "perm")
    assert code == 1


def test_bounds_and_constants(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "7", "--k", "14", "--d", "3", "--format", "json")
    assert code == 0 and json.loads(out)["ryser_k"] == 3
    code, _, _ = run(capsys, "bounds")
    assert code == 1
    code, out, _ = run(capsys, "constants")
    assert "c1 = 0.828386" in out


def test_atlas_commands(capsys):
    code, out, _ = run(capsys, "atlas", "list")
    assert code == 0 and "heawood" in out.split()
    code, out, _ = run(capsys, "atlas", "dump", "j", "--format", "json")
    assert json.loads(out)["k"] == 5
    code, _, _ = run(capsys, "atlas", "dump", "zzz")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "compute")[0] == 1
    assert run(capsys, "compute", "--atlas", "j", "--input", "x")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sparsekit", "compute", "--atlas", "k2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "perm = 1" in r.stdout
