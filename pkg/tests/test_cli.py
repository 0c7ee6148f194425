import json
import subprocess
import sys

import pytest

from weylcount.cli import EXIT_CAP, EXIT_OK, EXIT_USAGE, load_settings, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_lambda(capsys):
    code, out, _ = run(capsys, "count", "--dims", "2", "--lambda", "10")
    assert code == EXIT_OK and out.startswith("N=100 ")


def test_count_lambda_sq(capsys):
    code, out, _ = run(capsys, "count", "--dims", "1,1", "--lambda-sq", "2")
    assert code == EXIT_OK and out.startswith("N=9 ")
    code, out, _ = run(capsys, "count", "--dims", "2,1", "--lambda-sq", "5/2")
    assert code == EXIT_OK and "lambda_sq=5/2" in out


@pytest.mark.parametrize("argv", [
    ["count", "--dims", "2,0", "--lambda", "5"],
    ["count", "--dims", "2", "--lambda", "abc"],
    ["count", "--dims", "2", "--lambda", "-1"],
    ["molly", "--dims", "1,1", "--lambda", "30", "--epsilon", "0"],
    ["molly", "--dims", "1,1", "--lambda", "30", "--epsilon", "-1"],
    ["counterexample", "--kmax", "0"],
    ["remainder", "--dims", "2,1", "--lambda-min", "10", "--lambda-max", "20", "--samples", "4"],
    ["remainder", "--dims", "2,1", "--lattice", "2,1,2", "--lambda-min", "10", "--lambda-max", "20"],
    ["remainder", "--lattice", "2,1", "--lambda-min", "10", "--lambda-max", "20"],
    ["remainder", "--dims", "2,1", "--lambda-min", "30", "--lambda-max", "20"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["count", "--dims", "2"])
    assert info.value.code == 2


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--dims", "2,1")
    assert code == EXIT_OK
    lines = dict(l.split("=") for l in out.strip().splitlines())
    assert float(lines["weyl_constant"]) == pytest.approx(4 / 3, rel=1e-15)
    assert float(lines["reldiff"]) < 1e-9
    _, out, _ = run(capsys, "constants", "--dims", "3")
    assert "weyl_constant=0.33333333333333" in out


def test_molly(capsys):
    code, out, _ = run(capsys, "molly", "--dims", "1,1", "--lambda", "30", "--epsilon", "1")
    assert code == EXIT_OK and "sandwich PASS" in out
    code, out, _ = run(capsys, "molly", "--dims", "2,1", "--lambda", "50", "--epsilon", "auto")
    assert code == EXIT_OK and "sandwich PASS" in out
    eps = float(out.splitlines()[0].split("=")[1])
    assert eps == pytest.approx(50 ** (-1 / 3), rel=1e-15)


def test_work_cap_exit_3(capsys):
    code, _, err = run(capsys, "count", "--dims", "1,1,1,1", "--lambda", "1000")
    assert code == EXIT_CAP and "work cap" in err
    code, _, _ = run(capsys, "--work-cap", "10", "count", "--dims", "2,1", "--lambda", "100")
    assert code == EXIT_CAP


def test_remainder_csv_and_manifest(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, stdout, _ = run(capsys, "remainder", "--dims", "2,1", "--lambda-min", "20", "--lambda-max", "400",
                          "--samples", "64", "--envelope", "--out", str(out))
    assert code == EXIT_OK and "slope=" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,value,main_term,error"
    assert len(lines) == 65
    man = json.loads((tmp_path / "r.csv.manifest.json").read_text())
    for key in ("command_line", "parameters", "version", "timestamp", "grid", "arithmetic", "wall_time_s",
                "quadrature_tolerance", "fit"):
        assert key in man
    assert man["grid"]["spacing"] == "geometric" and man["envelope"] is True


def test_remainder_lattice_exact_values(capsys, tmp_path):
    out = tmp_path / "l.csv"
    code, _, _ = run(capsys, "remainder", "--lattice", "2,1,2", "--shift", "0.37,0.91", "--lambda-min", "10",
                     "--lambda-max", "100", "--samples", "16", "--out", str(out))
    assert code == EXIT_OK
    rows = out.read_text().splitlines()[1:]
    assert any("/" in r.split(",")[1] for r in rows)


def test_csv_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["remainder", "--dims", "2,2", "--lambda-min", "20", "--lambda-max", "200", "--samples", "32"]
    run(capsys, *args, "--out", str(a))
    run(capsys, *args, "--out", str(b), "--threads", "2")
    assert a.read_bytes() == b.read_bytes()


def test_rerun_round_trip(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "counterexample", "--kmax", "10", "--out", str(a))
    code, _, _ = run(capsys, "rerun", str(tmp_path / "a.csv.manifest.json"), "--out", str(b))
    assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "b.csv.manifest.json").exists()


def test_counterexample_rows(capsys, tmp_path):
    out = tmp_path / "c.csv"
    code, stdout, _ = run(capsys, "counterexample", "--kmax", "14", "--out", str(out))
    assert code == EXIT_OK and "max ratio" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "k,jump,threshold,drops,ratio"
    for line in lines[1:]:
        k, j, thr, drops, _ = line.split(",")
        if int(k) >= 3:
            assert int(j) >= float(thr) - 2 * int(drops)


def test_counterexample_small_kmax(capsys):
    code, out, _ = run(capsys, "counterexample", "--kmax", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "k,jump,threshold,drops,ratio"


def test_config_file_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"work_cap": 5}))
    monkeypatch.setenv("WEYLCOUNT_CONFIG", str(cfg))
    assert load_settings().work_cap == 5
    code, _, _ = run(capsys, "count", "--dims", "2,1", "--lambda", "10")
    assert code == EXIT_CAP
    # flag beats the file
    code, _, _ = run(capsys, "--work-cap", "1e9", "count", "--dims", "2,1", "--lambda", "10")
    assert code == EXIT_OK


def test_config_file_errors(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    monkeypatch.setenv("WEYLCOUNT_CONFIG", str(cfg))
    code, _, err = run(capsys, "count", "--dims", "2", "--lambda", "3")
    assert code == EXIT_USAGE and "nonsense" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "weylcount", "count", "--dims", "2", "--lambda", "10"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("N=100")
