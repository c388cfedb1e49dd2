import json
import subprocess
import sys

import pytest

from gwhyp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariant(capsys):
    code, out, _ = run(capsys, "invariant", "Y;N=4;l=5;d=1;ins=1.0")
    assert code == 0
    assert out == "Y;N=4;l=5;d=1;ins=1.0 = 2875\n"


def test_contact_overflow_prints_zero(capsys):
    code, out, _ = run(capsys, "invariant", "R;N=2;l=1;d=1;m=2;ins=0.0")
    assert code == 0 and out.endswith("= 0\n")


@pytest.mark.parametrize(
    "argv",
    [
        ["invariant", "Y;N=4;l=5;d=1;ins=1.0,"],
        ["invariant", "A;N=2;d=1;ins=1.0,2.0"],  # not canonical
        ["cy", "--ambient-dim", "3", "--hyp-degree", "3", "--max-degree", "2"],
        ["cy", "--ambient-dim", "4", "--hyp-degree", "5", "--max-degree", "0"],
        ["relative", "--ambient-dim", "2", "--hyp-degree", "1", "--degree", "1",
         "--multiplicity", "1", "--insertions", "x"],
        ["verify", "--level", "slow"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_json_schema(capsys):
    code, out, _ = run(capsys, "invariant", "Y;N=3;l=3;d=1;ins=1.0", "--json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"key", "value", "vdim", "geometry", "cacheHits"}
    assert data["value"] == {"num": 27, "den": 1}
    assert data["vdim"] == 1
    assert data["geometry"]["restrictedOnly"] is True and "caveat" in data["geometry"]
    code, out, _ = run(capsys, "invariant", "Y;N=4;l=5;d=2;ins=", "--json")
    data = json.loads(out)
    assert data["value"] == {"num": 4876875, "den": 8}
    assert data["geometry"] == {"N": 4, "l": 5, "restrictedOnly": False}


def test_cy_table(capsys):
    code, out, _ = run(capsys, "cy", "--ambient-dim", "4", "--hyp-degree", "5", "--max-degree", "2")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert rows == [["1", "2875", "2875"], ["2", "4876875/8", "609250"]]


def test_relative_command_and_cache(capsys, tmp_path):
    cache = tmp_path / "run.cache"
    argv = [
        "relative", "--ambient-dim", "2", "--hyp-degree", "1", "--degree", "2",
        "--multiplicity", "2", "--insertions", "0.0,2,2,2,2", "--cache", str(cache), "--json",
    ]
    code, out, _ = run(capsys, *argv)
    first = json.loads(out)
    assert code == 0 and first["value"] == {"num": 2, "den": 1} and first["cacheHits"] == 0
    raw = cache.read_bytes()
    code, out, _ = run(capsys, *argv)
    second = json.loads(out)
    assert second["value"] == first["value"] and second["cacheHits"] == 1
    assert cache.read_bytes() == raw


def test_deterministic_output(capsys):
    outs = {run(capsys, "invariant", "A;N=2;d=3;ins=2.0,2.0,2.0,2.0,2.0,2.0,2.0,2.0", "--json")[1]
            for _ in range(2)}
    assert len(outs) == 1


def test_quiet(capsys):
    code, out, _ = run(capsys, "invariant", "Y;N=4;l=5;d=1;ins=1.0", "--quiet")
    assert code == 0 and out == ""


def test_cache_merge(capsys, tmp_path):
    a, b, out = tmp_path / "a", tmp_path / "b", tmp_path / "out"
    run(capsys, "invariant", "Y;N=4;l=5;d=1;ins=1.0", "--cache", str(a))
    run(capsys, "invariant", "Y;N=3;l=3;d=1;ins=1.0", "--cache", str(b))
    code, _, _ = run(capsys, "cache", "merge", str(a), str(b), str(out))
    assert code == 0
    text = out.read_text()
    assert "Y;N=4;l=5;d=1;ins=1.0\t2875/1\n" in text
    assert "Y;N=3;l=3;d=1;ins=1.0\t27/1\n" in text


def test_cache_merge_conflict(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.write_text("A;N=2;d=1;ins=2.0,2.0\t1/1\n")
    b.write_text("A;N=2;d=1;ins=2.0,2.0\t2/1\n")
    code, _, err = run(capsys, "cache", "merge", str(a), str(b), str(tmp_path / "o"))
    assert code == 1 and "conflicting" in err


def test_verify_fast(capsys):
    code, out, _ = run(capsys, "verify", "--level", "fast", "--json")
    report = json.loads(out)
    assert code == 0 and report["ok"]
    assert all(c["status"] == "pass" for c in report["checks"])
    assert {c["criterion"] for c in report["checks"]} == set(range(1, 13)) - {3}


def test_verify_surfaces_corrupted_cache(capsys, tmp_path):
    cache = tmp_path / "bad.cache"
    run(capsys, "invariant", "Y;N=4;l=5;d=1;ins=1.0", "--cache", str(cache))
    cache.write_text(cache.read_text().replace("Y;N=4;l=5;d=1;ins=1.0\t2875/1", "Y;N=4;l=5;d=1;ins=1.0\t2874/1"))
    code, out, _ = run(capsys, "verify", "--level", "fast", "--cache", str(cache), "--json")
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    failed = [c for c in report["checks"] if c["status"] == "fail"]
    assert len(failed) == 1 and "conflict" in failed[0]["detail"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gwhyp.cli", "invariant", "Y;N=4;l=5;d=1;ins=1.0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip().endswith("= 2875")
    proc = subprocess.run(
        [sys.executable, "-m", "gwhyp.cli", "invariant", "garbage"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 2 and "BadKind" in proc.stderr
