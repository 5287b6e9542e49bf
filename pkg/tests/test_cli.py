import json
import math
import subprocess
import sys

import pytest

from rttstats.cli import format_value, main
from rttstats.experiments import mixed_schedule


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,expected", [
    (["--formula", "efix", "--n", "3", "--r", "2"], "1.111111111111"),
    (["--formula", "einv", "--n", "3", "--r", "0"], "0"),
    (["--formula", "einv", "--n", "3", "--r", "1"], "1"),
    (["--formula", "ret", "--n", "2", "--r", "1", "--k", "2"], "0.5"),
    (["--formula", "pg-pmf", "--c", "1", "--k", "0"], "0.335949071234"),
])
def test_exact_values(capsys, argv, expected):
    code, out, _ = run(capsys, "exact", *argv)
    assert code == 0
    assert out.strip() == expected


@pytest.mark.parametrize("argv", [
    ["--formula", "efix", "--n", "3", "--r", "-1"],
    ["--formula", "efix", "--n", "0", "--r", "2"],
    ["--formula", "efix", "--n", "3"],
    ["--formula", "nope", "--n", "3", "--r", "1"],
    ["--formula", "ret", "--n", "3", "--r", "1", "--k", "4"],
    ["--n", "3", "--r", "2"],
])
def test_exact_usage_errors(capsys, argv):
    assert run(capsys, "exact", *argv)[0] == 2


def test_no_command(capsys):
    assert run(capsys)[0] == 2


def test_format_value():
    from fractions import Fraction
    assert format_value(Fraction(10, 9)) == "1.111111111111"
    assert format_value(Fraction(-1, 3)) == "-0.333333333333"
    assert format_value(Fraction(7, 1)) == "7"
    assert format_value(0.0) == "0"
    assert format_value(2.5) == "2.5"


def test_exact_json_output(capsys, tmp_path):
    out = tmp_path / "e.json"
    code, _, _ = run(capsys, "exact", "--formula", "efix", "--n", "3", "--r", "2", "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert data["value"]["exact"] == "10/9"


def test_exact_multi_valued(capsys):
    code, out, _ = run(capsys, "exact", "--formula", "occ-pmf", "--n", "3", "--r", "2")
    assert code == 0 and out.split() == ["0", "0", "1", "0.333333333333", "2", "0.666666666667", "3", "0"]
    code, out, _ = run(capsys, "exact", "--formula", "occ-moments", "--n", "2", "--r", "2")
    assert out.split() == ["mean", "1.5", "variance", "0.25"]
    code, out, _ = run(capsys, "exact", "--formula", "finite-law", "--n", "3", "--c", "20")
    assert code == 0 and out.split()[:2] == ["0", "0.333333333333"]
    code, out, _ = run(capsys, "exact", "--formula", "limit-params", "--c", "1")
    assert code == 0 and "descents_variance" in out


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"formula": "efix", "n": 3, "r": 5}))
    assert run(capsys, "exact", "--config", str(cfg), "--r", "2")[1].strip() == "1.111111111111"
    assert run(capsys, "exact", "--config", str(cfg))[1].strip() == format_value(1 + (1 / 3) ** 5)


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "exact", "--config", str(bad))[0] == 2
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    assert run(capsys, "exact", "--config", str(listed))[0] == 2
    wrong_type = tmp_path / "t.json"
    wrong_type.write_text(json.dumps({"formula": "efix", "n": "three", "r": 2}))
    assert run(capsys, "exact", "--config", str(wrong_type))[0] == 2
    assert run(capsys, "exact", "--config", str(tmp_path / "missing.json"))[0] == 3


def test_simulate_point_mass(capsys, tmp_path):
    prefix = tmp_path / "pm"
    code, _, _ = run(capsys, "simulate", "--n", "6", "--r", "0", "--trials", "1", "--out", str(prefix))
    assert code == 0
    lines = (tmp_path / "pm.csv").read_text().splitlines()
    assert lines[1:] == ["value,count,density", "6,1,1.0"]
    config = json.loads(lines[0][2:])
    assert config["n"] == 6 and config["r"] == 0 and config["seed"] == 0
    report = json.loads((tmp_path / "pm.json").read_text())
    assert report["trials"] == 1 and report["mean"] == 6.0


def test_simulate_byte_identical(capsys, tmp_path):
    args = ["simulate", "--n", "200", "--r", "300", "--trials", "400", "--seed", "5",
            "--statistic", "descents", "--samples"]
    assert run(capsys, *args, "--out", str(tmp_path / "a"), "--workers", "1")[0] == 0
    assert run(capsys, *args, "--out", str(tmp_path / "b"), "--workers", "3")[0] == 0
    for suffix in (".csv", ".json", ".samples.csv"):
        assert (tmp_path / f"a{suffix}").read_bytes() == (tmp_path / f"b{suffix}").read_bytes()


def test_simulate_regimes(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--n", "100", "--c", "1.5", "--trials", "20")
    assert code == 0 and json.loads(out)["r"] == 150
    code, out, _ = run(capsys, "simulate", "--n", "100", "--regime", "mixed",
                       "--statistic", "inversions", "--trials", "5")
    report = json.loads(out)
    assert report["r"] == mixed_schedule("inversions", 100)
    assert "schedule" in report["config"]


@pytest.mark.parametrize("argv", [
    ["--n", "10", "--r", "5", "--c", "0.5"],
    ["--n", "10"],
    ["--n", "10", "--r", "-3"],
    ["--n", "10", "--r", "5", "--trials", "0"],
    ["--n", "10", "--c", "-1"],
    ["--n", "10", "--regime", "mixed", "--statistic", "occupied"],
    ["--n", "1", "--r", "3", "--statistic", "descents", "--sampler", "formula-direct"],
])
def test_simulate_usage_errors(capsys, argv):
    assert run(capsys, "simulate", *argv)[0] == 2


def test_simulate_unwritable(capsys, tmp_path):
    target = tmp_path / "missing-dir" / "x"
    assert run(capsys, "simulate", "--n", "5", "--r", "3", "--out", str(target))[0] == 3


def test_verify_brute(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "brute", "--max-n", "4", "--max-r", "3")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(lines) == 16 and all(rec["pass"] for rec in lines)


def test_verify_small_suites(capsys):
    assert run(capsys, "verify", "--suite", "pathwise", "--max-n", "3", "--max-r", "3")[0] == 0
    assert run(capsys, "verify", "--suite", "decomposition", "--n", "30", "--r", "40",
               "--trials", "3000", "--seed", "3")[0] == 0
    assert run(capsys, "verify", "--suite", "limits", "--figure", "algebra")[0] == 0


def test_verify_figure2_middle(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "limits", "--figure", "2", "--panel", "middle")
    assert code == 0 and len(out.splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ["--suite", "nope"],
    ["--suite", "limits"],
    ["--suite", "limits", "--figure", "mixed", "--panel", "top"],
    ["--suite", "brute", "--max-n", "0"],
])
def test_verify_usage(capsys, argv):
    assert run(capsys, "verify", *argv)[0] == 2


def test_limitcheck_mixed(capsys, tmp_path):
    out_path = tmp_path / "lc.json"
    code, out, _ = run(capsys, "limitcheck", "--regime", "mixed", "--statistic", "descents",
                       "--n", "10000", "--seed", "402", "--out", str(out_path))
    header = json.loads(out.splitlines()[0])
    n = 10000
    assert header["r"] == math.ceil(n * math.log(n) / 2 + n * math.log(math.log(n)))
    assert code == 0
    saved = json.loads(out_path.read_text())
    assert saved["r"] == header["r"] and saved["reports"][0]["pass"]


def test_limitcheck_critical_reports_both_laws(capsys):
    code, out, _ = run(capsys, "limitcheck", "--regime", "critical", "--c", "2",
                       "--statistic", "fixed-points", "--n", "2000", "--trials", "500")
    records = [json.loads(line) for line in out.splitlines()[1:]]
    assert code == 0
    assert [rec["config"]["law"]["kind"] for rec in records] == ["poisson-geometric", "poisson"]


def test_limitcheck_failure_exit(capsys):
    code, _, _ = run(capsys, "limitcheck", "--regime", "critical", "--c", "1",
                     "--statistic", "inversions", "--n", "200", "--trials", "100",
                     "--threshold", "1e-9")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["--regime", "sideways", "--statistic", "descents", "--n", "100"],
    ["--regime", "critical", "--statistic", "descents", "--n", "100"],
    ["--regime", "mixed", "--statistic", "descents", "--n", "100", "--c", "1"],
    ["--regime", "mixed", "--statistic", "descents", "--n", "100", "--r", "5"],
    ["--regime", "mixed", "--statistic", "occupied", "--n", "100"],
])
def test_limitcheck_usage(capsys, argv):
    assert run(capsys, "limitcheck", *argv)[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "rttstats", "exact", "--formula", "efix",
                          "--n", "3", "--r", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "1.111111111111"
