import json
import subprocess
import sys

import pytest

from radothresh.cli import fmt, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fmt():
    assert fmt(2) == "2"
    assert fmt("8/3") == "8/3 (2.66667)"


def test_check_schur(capsys):
    code, out, _ = run(["check", "schur"], capsys)
    assert code == 0
    assert "partition-regular: yes" in out and "irredundant: confirmed" in out and "m = 2," in out


def test_check_asym(capsys):
    code, out, _ = run(["check", "ap4", "ap3", "--asym"], capsys)
    assert code == 0 and "m(ap4, ap3) = 8/3" in out


def test_check_json(capsys):
    code, out, _ = run(["check", "--matrix", "ap5", "--format", "json"], capsys)
    assert json.loads(out)[0]["m"] == "4"


def test_check_not_partition_regular(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("1 3\n1 1 1\n")
    code, out, _ = run(["check", str(f)], capsys)
    assert code == 2 and "partition-regular: no" in out


def test_parse_error_exit(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("1 3\n1 q 1\n")
    code, _, err = run(["check", str(f)], capsys)
    assert code == 1 and ":2:" in err


def test_unknown_name(capsys):
    assert run(["audit", "nosuch"], capsys)[0] == 1


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_audit(capsys):
    code, out, _ = run(["audit", "schur", "--grid", "100,200,400"], capsys)
    assert code == 0
    lines = [l.split("\t") for l in out.splitlines() if l.startswith("{")]
    assert {int(l[1]) for l in lines} == {1, 2}
    assert all(abs(float(l[3])) < 0.1 for l in lines)


def test_audit_boundedness(capsys):
    code, out, _ = run(["audit", "ap3", "--grid", "100,200,400", "--boundedness", "ap3"], capsys)
    slope = float(out.split("slope ")[-1].split(",")[0])
    assert code == 0 and abs(slope - 0.5) < 0.1


def test_audit_guard(capsys):
    code, _, err = run(["audit", "schur", "--grid", "100,200,400", "--cap", "100"], capsys)
    assert code == 3 and "estimate" in err


def test_weights(capsys):
    code, out, _ = run(["weights", "ap4", "ap3"], capsys)
    assert code == 0 and "proper: yes" in out and "r_x = 0" in out


def test_weights_ordering(capsys):
    assert run(["weights", "ap3", "ap4"], capsys)[0] == 2


def test_arrow(capsys):
    code, out, _ = run(["arrow", "schur", "schur", "--n", "8"], capsys)
    assert code == 0 and "good colouring" in out
    code, out, _ = run(["arrow", "schur", "schur", "--n", "9"], capsys)
    assert code == 0 and "-->" in out
    code, _, _ = run(["arrow", "schur", "schur", "schur", "--n", "40", "--budget", "3"], capsys)
    assert code == 3


def test_scan_minimal_and_rerun(tmp_path, capsys):
    base = ["scan", "schur", "schur", "--n-grid", "64", "--c-grid", "2", "--trials", "10", "--seed", "1"]
    code, _, _ = run(base + ["--out", str(tmp_path / "a")], capsys)
    assert code == 0
    csv = (tmp_path / "a" / "scan.csv").read_text().splitlines()
    assert len(csv) == 2 and csv[0] == "n,C,p,trials,successes,unknown,ci_low,ci_high"
    run(base + ["--out", str(tmp_path / "b"), "--workers", "2"], capsys)
    assert (tmp_path / "a" / "scan.csv").read_bytes() == (tmp_path / "b" / "scan.csv").read_bytes()
    ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert ma["config"]["seed"] == 1 and len(ma["config_hash"]) == 64
    assert {c["check"] for c in ma["preflight"]} == {"codegree", "zeta"}


def test_scan_errors(capsys):
    assert run(["scan", "schur", "schur", "--n-grid", "", "--c-grid", "1", "--seed", "1"], capsys)[0] == 1
    assert run(["scan", "schur", "schur", "--n-grid", "10", "--c-grid", "1"], capsys)[0] == 1
    assert run(["scan", "schur", "schur", "--n-grid", "10", "--c-grid", "-1", "--seed", "1"], capsys)[0] == 1


def test_scan_r_flag(capsys):
    code, out, _ = run(["scan", "schur", "--r", "2", "--n-grid", "20", "--c-grid", "5", "--trials", "3",
                        "--seed", "2"], capsys)
    assert code == 0 and out.splitlines()[1].startswith("20,5,1.0,3,3,0")


def test_janson_and_concentration(capsys):
    code, out, _ = run(["janson", "schur", "--n", "30", "--q", "1/2", "--digits", "15"], capsys)
    assert code == 0 and out.startswith("mu = ")
    code, out, _ = run(["concentration", "schur", "--n", "300", "--trials", "3", "--seed", "4"], capsys)
    assert code == 0 and out.splitlines()[0] == "I,size,threshold,frequency,mean"


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "radothresh.cli", "check", "ap3"], capture_output=True, text=True)
    assert res.returncode == 0 and "m = 2" in res.stdout
