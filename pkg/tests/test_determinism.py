import pytest

from defverify.cli import main


def json_bytes(argv, tmp_path, name):
    path = tmp_path / name
    assert main(argv + ["--format", "json", "--out", str(path)]) in (0, 1)
    return path.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["curve", "--p", "2", "--p", "3", "--p", "5", "--p", "7"],
        ["surface", "--p", "2", "--p", "3"],
        ["surface", "--p", "3", "--mutate", "flip-psi43-sign"],
    ],
)
def test_threads_do_not_change_output(argv, tmp_path):
    one = json_bytes(argv + ["--jobs", "1"], tmp_path, "a.json")
    eight = json_bytes(argv + ["--jobs", "8"], tmp_path, "b.json")
    again = json_bytes(argv + ["--jobs", "1"], tmp_path, "c.json")
    assert one == eight == again
