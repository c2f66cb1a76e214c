import json
import subprocess
import sys

import pytest

from qpkit.cli import main, read_matrix
from qpkit.pathalg import read_quiver
from qpkit.repeng import read_rep


@pytest.fixture
def files(tmp_path):
    (tmp_path / "a2.txt").write_text("2 2\n0 1\n-1 0\n")
    (tmp_path / "cyc.txt").write_text("3 3\n0 -1 1\n1 0 -1\n-1 1 0\n")
    (tmp_path / "cyc_pot.txt").write_text("1  a3*a2*a1\n")
    (tmp_path / "zero_pot.txt").write_text("")
    (tmp_path / "q.txt").write_text("3\na 1 2\nb 2 3\nc 3 1\n")
    (tmp_path / "s.txt").write_text("1  c*b*a\n")
    (tmp_path / "cfg.json").write_text(json.dumps({"instances": 3, "pairs": 3, "involution_samples": 2,
                                                   "checks": ["recurrence", "g", "fixtures"]}))
    (tmp_path / "bad.json").write_text(json.dumps({"max_word_len": 9}))
    return tmp_path


def run(capfd, *argv):
    code = main(list(argv))
    out, err = capfd.readouterr()
    return code, out, err


def test_read_matrix():
    assert read_matrix("2 2\n0 1\n-1 0\n") == ((0, 1), (-1, 0))
    with pytest.raises(Exception):
        read_matrix("2 2\n0 1\n")


def test_seed_walk(files, capfd):
    code, out, _ = run(capfd, "seed", "walk", "--matrix", str(files / "a2.txt"), "--word", "2,1,2,1,2")
    assert code == 0
    doc = json.loads(out)
    row = [r for r in doc["rows"] if r["t"] == 2 and r["ell"] == 1][0]
    assert row["F"] == "u1*u2+u1+1" and row["g"] == [-1, 0] and row["h"] == [-1, 0]
    code, out, _ = run(capfd, "seed", "walk", "--matrix", str(files / "a2.txt"), "--word", "2", "--format", "tsv")
    assert code == 0 and out.splitlines()[0] == "t\tprefix\tell\tg\tF\th" and len(out.splitlines()) == 5


def test_table_a2(capfd):
    code, out, err = run(capfd, "seed", "table-a2")
    assert len(out.splitlines()) == 7
    # the swapped-variable periodicity reading fails for m = 1..4, so the command reports a check failure
    assert code == 1 and "periodicity" in err


def test_qp_mutate(files, capfd):
    code, out, _ = run(capfd, "qp", "mutate", "--quiver", str(files / "q.txt"), "--potential",
                       str(files / "s.txt"), "--at", "2", "--truncation", "6")
    assert code == 0
    Q = read_quiver(out.split("# potential")[0])
    assert sorted((a.tail, a.head) for a in Q.arrows) == [(1, 0), (2, 1)]
    assert out.split("# potential")[1].strip() == ""


def test_rep_build(files, capfd):
    code, out, _ = run(capfd, "rep", "build", "--matrix", str(files / "cyc.txt"), "--potential",
                       str(files / "cyc_pot.txt"), "--word", "1,2", "--ell", "2", "--seed", "7")
    assert code == 0
    assert out.startswith("dims 1 1 0")


def test_verify_all(files, capfd):
    code, out, err = run(capfd, "verify", "all", "--config", str(files / "cfg.json"))
    doc = json.loads(out)
    assert doc["summary"]["rep_g"]["fail"] == 0
    assert doc["summary"]["kronecker"]["pass"] == 5
    # the A2 periodicity record with swapped variables is part of the run
    assert code == 1 and not doc["ok"]


def test_usage_errors(files, capfd):
    assert run(capfd, "seed", "walk", "--matrix", str(files / "missing.txt"), "--word", "1")[0] == 2
    assert run(capfd, "seed", "walk", "--matrix", str(files / "a2.txt"), "--word", "1,1")[0] == 2
    assert run(capfd, "seed", "walk", "--matrix", str(files / "a2.txt"), "--word", "3")[0] == 2
    assert run(capfd, "verify", "all", "--config", str(files / "bad.json"))[0] == 2
    assert run(capfd, "rep", "build", "--matrix", str(files / "a2.txt"), "--potential",
               str(files / "zero_pot.txt"), "--word", "1", "--ell", "3")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 2


def test_console_script(files):
    r = subprocess.run([sys.executable, "-m", "qpkit.cli", "seed", "walk", "--matrix", str(files / "a2.txt"),
                        "--word", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["word"] == "2"
