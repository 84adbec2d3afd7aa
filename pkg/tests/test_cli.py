import json
import subprocess
import sys

import pytest

from abasolve.cli import main

from conftest import EX1_TEXT, F2_TEXT


@pytest.fixture
def ex1_file(tmp_path):
    path = tmp_path / "ex1.aba"
    path.write_text(EX1_TEXT)
    return str(path)


@pytest.fixture
def f2_file(tmp_path):
    path = tmp_path / "f2.aba"
    path.write_text(F2_TEXT)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ee_adm_plus_output(capsys, ex1_file):
    code, out, _ = run_cli(capsys, "--task", "EE-ADM+", "--file", ex1_file)
    assert code == 0
    assert out == "\nc\nb c\n"


def test_ee_com_plus_output(capsys, ex1_file):
    code, out, _ = run_cli(capsys, "--task", "EE-COM+", "--file", ex1_file)
    assert code == 0
    assert out == "b c\n"


def test_ds_prf_output(capsys, f2_file):
    code, out, _ = run_cli(capsys, "--task", "DS-PRF", "--file", f2_file, "--query", "z")
    assert (code, out) == (0, "YES\n")
    code, out, _ = run_cli(capsys, "--task", "DS-PRF", "--file", f2_file, "--query", "a")
    assert (code, out) == (0, "NO\n")


def test_dc_tasks_with_witness(capsys, ex1_file):
    code, out, _ = run_cli(capsys, "--task", "DC-ADM+", "--file", ex1_file, "--query", "c")
    assert (code, out) == (0, "YES\nc\n")
    code, out, _ = run_cli(
        capsys, "--task", "DC-COM+", "--file", ex1_file, "--query", "a",
        "--abstraction", "strong",
    )
    assert (code, out) == (0, "NO\n")


def test_se_and_gr(capsys, ex1_file):
    code, out, _ = run_cli(capsys, "--task", "SE-COM+", "--file", ex1_file)
    assert (code, out) == (0, "b c\n")
    code, out, _ = run_cli(capsys, "--task", "GR+", "--file", ex1_file)
    assert (code, out) == (0, "b c\n")


NO_COMPLETE_TEXT = """\
a s3
a s4
a s5
c s3 s1
c s4 s0
c s5 s2
r s0 s2
r s1 s2 s5
r s1 s3 s5
r s2 s1
r s2 s2
p s3 s4
p s3 s5
"""


def test_none_for_empty_find_and_grounded(capsys, tmp_path):
    # this framework has admissible sets but no complete one
    path = tmp_path / "none.aba"
    path.write_text(NO_COMPLETE_TEXT)
    for task in ("SE-COM+", "GR+"):
        code, out, _ = run_cli(capsys, "--task", task, "--file", str(path))
        assert (code, out) == (0, "NONE\n"), task
        code, out, _ = run_cli(capsys, "--task", task, "--file", str(path), "--oracle")
        assert (code, out) == (0, "NONE\n"), task
    code, out, _ = run_cli(capsys, "--task", "EE-COM+", "--file", str(path))
    assert (code, out) == (0, "")


def test_oracle_parity_on_fixtures(capsys, ex1_file, f2_file):
    cases = [
        ("EE-ADM+", ex1_file, None),
        ("EE-COM+", ex1_file, None),
        ("SE-COM+", ex1_file, None),
        ("GR+", ex1_file, None),
        ("DC-ADM+", ex1_file, "c"),
        ("DC-ADM+", ex1_file, "a"),
        ("DC-COM+", ex1_file, "b"),
        ("DS-PRF", f2_file, "z"),
        ("DS-PRF", f2_file, "a"),
        ("EE-PRF", f2_file, None),
    ]
    for task, path, query in cases:
        argv = ["--task", task, "--file", path]
        if query:
            argv += ["--query", query]
        code_main, out_main, _ = run_cli(capsys, *argv)
        code_orc, out_orc, _ = run_cli(capsys, *argv, "--oracle")
        assert code_main == code_orc == 0
        assert out_main == out_orc, task


def test_stats_json(capsys, tmp_path, ex1_file):
    stats_path = tmp_path / "stats.json"
    code, out, _ = run_cli(
        capsys, "--task", "DC-COM+", "--file", ex1_file, "--query", "b",
        "--stats-json", str(stats_path),
    )
    assert code == 0
    payload = json.loads(stats_path.read_text())
    assert payload["task"] == "DC-COM+"
    assert payload["result"] == "YES"
    assert payload["witness"] == ["b", "c"]
    assert 0 < payload["candidates"] <= payload["engine_calls"]


def test_usage_errors(capsys, ex1_file):
    code, _, err = run_cli(capsys, "--task", "DS-PRF", "--file", ex1_file)
    assert code == 1 and "requires --query" in err
    code, _, err = run_cli(capsys, "--task", "EE-ADM+", "--file", ex1_file, "--query", "c")
    assert code == 1 and "takes no --query" in err
    code, _, err = run_cli(
        capsys, "--task", "EE-ADM+", "--file", ex1_file, "--abstraction", "weak"
    )
    assert code == 1 and "COM+" in err
    code, _, err = run_cli(capsys, "--task", "NOPE", "--file", ex1_file)
    assert code == 1


def test_input_errors(capsys, tmp_path, ex1_file, f2_file):
    code, _, err = run_cli(capsys, "--task", "EE-PRF", "--file", str(tmp_path / "nope"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.aba"
    bad.write_text("a a\n")
    code, _, err = run_cli(capsys, "--task", "EE-PRF", "--file", str(bad))
    assert code == 2 and "parse failure" in err
    code, _, err = run_cli(capsys, "--task", "DS-PRF", "--file", f2_file, "--query", "zz")
    assert code == 2 and "unknown query" in err
    # preferences make preferred-semantics tasks inapplicable
    code, _, err = run_cli(capsys, "--task", "EE-PRF", "--file", ex1_file)
    assert code == 2 and "preference-free" in err


def test_oracle_guard(capsys, tmp_path):
    gen_out = tmp_path / "big.aba"
    assert main(["gen", "--n", "80", "--ratio", "0.5", "--seed", "1",
                 "--out", str(gen_out)]) == 0
    capsys.readouterr()
    code, _, err = run_cli(capsys, "--task", "EE-ADM+", "--file", str(gen_out), "--oracle")
    assert code == 2 and "oracle" in err


def test_gen_subcommand(capsys, tmp_path):
    out_path = tmp_path / "g.aba"
    code, out, _ = run_cli(
        capsys, "gen", "--n", "30", "--ratio", "0.3", "--pref-prob", "0.15",
        "--seed", "5", "--out", str(out_path),
    )
    assert code == 0 and out == ""
    text = out_path.read_text()
    code, out2, _ = run_cli(
        capsys, "gen", "--n", "30", "--ratio", "0.3", "--pref-prob", "0.15", "--seed", "5"
    )
    assert code == 0 and out2 == text
    code, _, err = run_cli(capsys, "gen", "--n", "1", "--ratio", "0.5")
    assert code == 1


def test_cli_entrypoint_subprocess(ex1_file):
    proc = subprocess.run(
        [sys.executable, "-m", "abasolve.cli", "--task", "EE-ADM+", "--file", ex1_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "\nc\nb c\n"


def test_byte_determinism_two_processes(ex1_file):
    runs = [
        subprocess.run(
            [sys.executable, "-m", "abasolve.cli", "--task", "EE-COM+",
             "--file", ex1_file, "--abstraction", "weak", "--seed", "0"],
            capture_output=True,
        ).stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1] == b"b c\n"
