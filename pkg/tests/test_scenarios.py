import pytest

from defverify.scenarios import ScenarioError, run_curve_scenario, run_surface_scenario


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_curve_passes(p):
    r = run_curve_scenario(p)
    assert r.passed, r.first_failure()
    assert {c.status for c in r.checks} == {"pass", "skipped"}
    assert r.elapsed_ms is None


@pytest.mark.parametrize("p", [2, 3, 5])
def test_surface_passes(p):
    r = run_surface_scenario(p)
    assert r.passed, r.first_failure()
    cocycles = [c for c in r.checks if c.name.startswith("cocycle")]
    assert len(cocycles) == 10


def test_curve_diagram_square_by_square():
    r = run_curve_scenario(3)
    squares = [c for c in r.checks if c.name.startswith("diagram ")]
    assert len(squares) == 8
    assert all(c.status == "pass" for c in squares)


def test_surface_restrictions():
    r = run_surface_scenario(3)
    for ij in ("43", "14", "24"):
        assert r.get(f"restriction X''⊗A ≅ X psi_{ij}⊗A = id").status == "pass"
    for i in range(1, 5):
        assert r.get(f"restriction X''⊗A ≅ X psi_0{i}⊗A = phi").status == "pass"


def test_chart_structures():
    r = run_surface_scenario(2)
    assert r.get("chart structure R_0").detail.startswith("not free: 3 minimal generators in pointed rank 2")
    for i in range(1, 10):
        assert r.get(f"chart structure R_{i}").detail.startswith("N^")


def test_mutation_flip_sign():
    r = run_surface_scenario(3, mutate="flip-psi43-sign")
    bad = [c.name for c in r.checks if c.status == "fail"]
    assert bad == ["cocycle (0,3,4)", "cocycle (1,3,4)", "cocycle (2,3,4)"]


def test_mutation_flip_sign_rejected_in_char_2():
    with pytest.raises(ScenarioError):
        run_surface_scenario(2, mutate="flip-psi43-sign")


def test_mutation_wrong_char():
    r = run_curve_scenario(3, mutate="wrong-char")
    assert r.get("beta well-defined on k[t^p, t^(p+1), eps]").status == "fail"
    assert r.get("beta well-defined on k[t, 1/t, eps]").status == "pass"


def test_mutation_trivial_kernel():
    r = run_curve_scenario(3, mutate="trivial-kernel")
    c = r.get("non-liftability obstruction residue")
    assert c.status == "fail" and "no obstruction detected" in c.detail


def test_mutation_drop_unit_factor():
    r = run_curve_scenario(3, mutate="drop-unit-factor")
    assert r.get("glue well-defined").status == "fail"
    assert not r.passed


@pytest.mark.parametrize(
    "call",
    [
        lambda: run_curve_scenario(4),
        lambda: run_curve_scenario(3, mutate="flip-psi43-sign"),
        lambda: run_surface_scenario(3, mutate="wrong-char"),
        lambda: run_curve_scenario(3, mutate="nope"),
    ],
)
def test_bad_arguments(call):
    with pytest.raises(ScenarioError):
        call()


def test_timing_flag_fills_elapsed():
    assert run_curve_scenario(2, timing=True).elapsed_ms is not None
