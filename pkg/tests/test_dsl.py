from pathlib import Path

import pytest

from defverify.cli import main
from defverify.scenarios import parse_scenario, print_scenario, run_custom
from defverify.syntax import DSLError

HERE = Path(__file__).parent
CORPUS = sorted((HERE / "scenarios").glob("*.scn"))
MALFORMED = sorted((HERE / "malformed").glob("*.scn"))
EXPECTED_FAIL = {"17_curve_mutant.scn", "18_surface_mutant.scn", "24_trivial_kernel.scn"}


def test_corpus_size():
    assert len(CORPUS) >= 20
    assert len(MALFORMED) >= 10


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_round_trip(path):
    spec = parse_scenario(path.read_text())
    text = print_scenario(spec)
    again = parse_scenario(text)
    assert again == spec
    assert print_scenario(again) == text


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_exit_codes(path, capsys):
    code = main(["custom", str(path)])
    capsys.readouterr()
    assert code == (1 if path.name in EXPECTED_FAIL else 0)


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.name)
def test_malformed_diagnostics(path, capsys):
    code = main(["custom", str(path)])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith(f"defverify: {path}:")
    line, col = err.split(":")[2:4]
    assert int(line) >= 1 and int(col) >= 1


def test_spec_beta_example():
    spec = parse_scenario("ring R gens t^2 t^3; map beta R->R t -> t + eps*t^-2; check well_defined beta")
    assert spec.p == 2
    r = run_custom(spec)
    assert r.passed and r.checks[0].name == "well_defined beta"


def test_p_six_rejected():
    with pytest.raises(DSLError) as exc:
        parse_scenario("p=6")
    assert (exc.value.line, exc.value.col, exc.value.kind) == (1, 1, "semantic")
    assert "prime" in str(exc.value)


def test_expect_fail_inverts():
    spec = parse_scenario("p=3\nring R gens t^3 t^4\nmap f R->R t -> t + eps*t^-1\ncheck well_defined f expect=fail")
    r = run_custom(spec)
    assert r.passed and r.checks[0].detail.startswith("failed as expected")


def test_undeclared_symbol_position():
    with pytest.raises(DSLError) as exc:
        parse_scenario("ring R gens t^2 t^3\nmap f R->R t -> t + a*eps")
    assert exc.value.line == 2 and exc.value.col == 21


def test_unknown_statement():
    with pytest.raises(DSLError) as exc:
        parse_scenario("p=3\nfrobnicate R")
    assert exc.value.line == 2 and exc.value.kind == "syntax"
