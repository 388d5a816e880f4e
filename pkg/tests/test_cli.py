import json
import subprocess
import sys

import pytest

from defverify.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_curve_pass(capsys):
    code, out, _ = run(["curve", "--p", "2", "--p", "3"], capsys)
    assert code == 0
    assert out.count("overall: PASS") == 2


def test_json_schema(capsys):
    code, out, _ = run(["curve", "--p", "3", "--format", "json"], capsys)
    obj = json.loads(out)
    assert code == 0
    assert list(obj) == ["scenario", "p", "checks", "elapsed_ms"]
    assert obj["scenario"] == "curve" and obj["p"] == 3
    assert all(list(c) == ["name", "status", "detail", "anchor"] for c in obj["checks"])


def test_multiple_p_gives_array(capsys):
    _, out, _ = run(["surface", "--p", "2", "--p", "3", "--format", "json"], capsys)
    assert [r["p"] for r in json.loads(out)] == [2, 3]


@pytest.mark.parametrize(
    "argv",
    [
        ["curve", "--p", "4"],
        ["curve", "--format", "xml"],
        ["curve", "--mutate", "flip-psi43-sign"],
        ["surface", "--p", "2", "--mutate", "flip-psi43-sign"],
        ["custom", "/nonexistent/file.scn"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["surface", "--p", "3", "--mutate", "flip-psi43-sign"],
        ["curve", "--p", "3", "--mutate", "wrong-char"],
        ["curve", "--p", "3", "--mutate", "trivial-kernel"],
        ["curve", "--p", "3", "--mutate", "drop-unit-factor"],
    ],
)
def test_mutations_exit_1(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert "verification failed at" in err


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["curve", "--p", "2", "--format", "json", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["p"] == 2


def test_timing_flag(capsys):
    _, out, _ = run(["curve", "--p", "2", "--format", "json", "--timing"], capsys)
    assert isinstance(json.loads(out)["elapsed_ms"], float)


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-c", "import sys; from defverify.cli import main; sys.exit(main())", "curve", "--p", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "overall: PASS" in proc.stdout
