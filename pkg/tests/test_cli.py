import subprocess
import sys

import numpy as np
import pytest

from cyclefree.birkhoff import PermSet
from cyclefree.labeling import Labeling, construct_recursive


def test_construct_then_verify(cli_run, tmp_path):
    f = tmp_path / "g4.txt"
    assert cli_run(["construct", "--n", "4", "--out", str(f)]) == (0, "")
    code, out = cli_run(["verify", "--in", str(f), "--exhaustive"])
    assert code == 0 and out == "verdict=pass cycles=204\n"


def test_construct_stdout_pipe(cli_run):
    code, text = cli_run(["construct", "--n", "2"])
    assert code == 0 and Labeling.decode(text) == construct_recursive(2)
    code, out = cli_run(["verify"], stdin_text=text)
    assert (code, out) == (0, "verdict=pass cycles=1\n")


def test_verify_failure_and_sampled(cli_run):
    zero = Labeling(np.zeros((3, 3, 2), dtype=int)).encode()
    code, out = cli_run(["verify", "--in", "-"], stdin_text=zero)
    assert code == 1 and out == "verdict=fail cycles=1 certificate=1 1 2 2\n"
    code, out = cli_run(["verify", "--samples", "5", "--seed", "1"], stdin_text=zero)
    assert code == 1 and out.startswith("verdict=fail cycles=1 certificate=")


def test_verify_sampled_needs_seed(cli_run):
    _, text = cli_run(["construct", "--n", "4"])
    assert cli_run(["verify", "--samples", "5"], stdin_text=text)[0] == 2


def test_verify_budget_refusal(cli_run):
    _, text = cli_run(["construct", "--n", "16"])
    assert cli_run(["verify"], stdin_text=text)[0] == 3
    _, text = cli_run(["construct", "--n", "4"])
    assert cli_run(["verify", "--budget", "10"], stdin_text=text)[0] == 3


def test_random_label(cli_run):
    code, text = cli_run(["random-label", "--n", "3", "--d", "5", "--q", "7", "--seed", "2"])
    lab = Labeling.decode(text)
    assert code == 0 and (lab.n, lab.d, lab.q) == (3, 5, 7)
    assert cli_run(["random-label", "--n", "3", "--d", "5"])[0] == 2


def test_cycles(cli_run):
    code, out = cli_run(["cycles", "--n", "2"])
    assert (code, out) == (0, "2 1 2 1 2\ncount[2]=1\ncount=1\n")
    code, out = cli_run(["cycles", "--n", "4", "--count-only"])
    assert out == "count[2]=36\ncount[3]=96\ncount[4]=72\ncount=204\n"
    _, out = cli_run(["cycles", "--n", "3"])
    assert len(out.splitlines()) == 15 + 3


def test_reduce(cli_run, tmp_path):
    _, text = cli_run(["construct", "--n", "4"])
    f = tmp_path / "A.txt"
    code, out = cli_run(["reduce", "--out", str(f), "--check"], stdin_text=text)
    assert code == 0 and out.startswith("h=") and "size=" in out
    A = PermSet.decode(f.read_text())
    assert A.n == 4
    assert cli_run(["indep", "verify", "--in", str(f)])[0] == 0


def test_reduce_zero_labeling_control(cli_run):
    zero = Labeling(np.zeros((4, 4, 3), dtype=int)).encode()
    code, permset = cli_run(["reduce"], stdin_text=zero)
    assert code == 0 and len(PermSet.decode(permset)) == 24
    code, out = cli_run(["indep", "verify"], stdin_text=permset)
    assert code == 1 and out.startswith("verdict=fail size=24")
    assert "tau=" in out
    assert cli_run(["reduce", "--check"], stdin_text=zero)[0] == 1


def test_indep_build_and_verify(cli_run):
    code, text = cli_run(["indep", "build", "--n", "8"])
    assert code == 0 and len(PermSet.decode(text)) == 48
    code, out = cli_run(["indep", "verify"], stdin_text=text)
    assert (code, out) == (0, f"verdict=pass size=48 pairs={48 * 47 // 2}\n")
    code, out = cli_run(["indep", "verify", "--samples", "100", "--seed", "3"], stdin_text=text)
    assert code == 0 and "pairs=100" in out
    assert cli_run(["indep", "build", "--n", "16"])[0] == 3
    assert cli_run(["indep", "build", "--n", "6"])[0] == 2


def test_indep_sample_and_member(cli_run):
    code, text = cli_run(["indep", "sample", "--n", "16", "--count", "40", "--seed", "9"])
    assert code == 0 and PermSet.decode(text).n == 16
    code, out = cli_run(["indep", "member"], stdin_text=text)
    assert code == 0 and out.startswith("members=")
    outsider = PermSet.of([tuple(range(1, 9)), (2, 1, 3, 4, 5, 6, 7, 8)]).encode()
    assert cli_run(["indep", "member"], stdin_text=outsider) == (1, "members=1 size=2\n")


def test_mind(cli_run):
    assert cli_run(["mind", "--n", "2"]) == (0, "d=1\n")
    assert cli_run(["mind", "--n", "5"])[0] == 2


def test_chars(cli_run):
    assert cli_run(["chars", "--n", "3"]) == (0, "chi[h_0](3)=1\nchi[h_1](3)=-1\nchi[h_2](3)=1\n")
    code, out = cli_run(["chars", "--n", "3", "--table"])
    assert out.splitlines() == ["classes 3 2,1 1,1,1", "3 1 1 1", "2,1 -1 0 2", "1,1,1 1 -1 1"]


def test_analyze(cli_run):
    _, text = cli_run(["indep", "build", "--n", "4"])
    code, out = cli_run(["analyze", "--k-max", "2"], stdin_text=text)
    lines = out.splitlines()
    assert code == 0
    assert lines[:3] == ["n=4", "size=2", "chi[h_0]=1"]
    assert "ip_chars=0" in lines and "ip_direct=0" in lines and "c_emp[2]=" in out
    assert lines[-2:] == ["independent=pass", "bound=pass"]


def test_analyze_non_independent(cli_run):
    S3 = PermSet.of([(1, 2, 3), (2, 3, 1), (3, 1, 2)]).encode()
    code, out = cli_run(["analyze"], stdin_text=S3)
    assert code == 0 and "independent=fail" in out and "ip_direct=2" in out


def test_series(cli_run):
    code, out = cli_run(["series", "--c", "1.4142135", "--n", "9", "--terms", "100"])
    assert code == 0 and float(out.split("=")[1]) >= 0.057
    assert cli_run(["series", "--c", "1", "--n", "3", "--terms", "5"]) == (0, "series=1.0000000000\n")
    assert cli_run(["series", "--c", "-1", "--n", "3", "--terms", "5"])[0] == 2


def test_usage_errors(cli_run, tmp_path):
    assert cli_run([])[0] == 2
    assert cli_run(["bogus"])[0] == 2
    assert cli_run(["construct", "--n", "6"])[0] == 2
    assert cli_run(["verify", "--in", str(tmp_path / "missing")])[0] == 2
    assert cli_run(["verify"], stdin_text="garbage\n")[0] == 2
    assert cli_run(["indep", "verify"], stdin_text="PERMSET v1\nn=2 count=1\n1 1\n")[0] == 2


def test_real_process_pipe():
    build = subprocess.run([sys.executable, "-m", "cyclefree", "construct", "--n", "4"],
                           capture_output=True, text=True, check=True)
    run = subprocess.run([sys.executable, "-m", "cyclefree", "verify", "--exhaustive"],
                         input=build.stdout, capture_output=True, text=True)
    assert run.returncode == 0 and run.stdout == "verdict=pass cycles=204\n"
    bad = subprocess.run([sys.executable, "-m", "cyclefree", "verify", "--budget", "1"],
                         input=build.stdout, capture_output=True, text=True)
    assert bad.returncode == 3 and bad.stdout == "" and "refused" in bad.stderr
