import pytest

from defverify.monoid import MonomialAlgebra
from defverify.obstruction import (
    LiftSpec,
    LiftTerm,
    ObstructionError,
    brute_force_intersection,
    derive_curve_constraints,
    derive_surface_constraints,
    expected_surface_basis,
    obstruction_residue,
)
from defverify.scenarios.curve import run_curve_scenario
from defverify.scenarios.surface import run_surface_scenario


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_curve_constraints(p):
    rep = derive_curve_constraints(p)
    assert rep.ok
    assert -p in rep.data["u_only"]
    assert rep.tags["v"][1] == "vanishes"
    assert rep.tags["u"][1] == "fixed"


def test_curve_window_too_small():
    with pytest.raises(ObstructionError):
        derive_curve_constraints(3, window=5)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_surface_bases(p):
    rep = derive_surface_constraints(p)
    assert rep.ok, [c for c in rep.checks if not c[1].ok]
    assert rep.data["basis_y"] == expected_surface_basis(p)
    assert rep.data["basis_z"] == [(-1, p), (0, p)]


def test_expected_bases_spelled_out():
    # y, z, y^2, x*y^2, x^2*y^2 for p = 2 (z = x^-1 y^2)
    assert expected_surface_basis(2) == sorted([(0, 1), (-1, 2), (0, 2), (1, 2), (2, 2)])
    # y, y^2, x*y^2, x^2*y^2, x^3*y^2 for p = 3
    assert expected_surface_basis(3) == sorted([(0, 1), (0, 2), (1, 2), (2, 2), (3, 2)])


def test_oracle_on_tiny_case():
    R = MonomialAlgebra.of([(1, 0), (0, 1)])
    got = brute_force_intersection((1, 1), R, R, [(0, 2), (0, 2)], 20)
    assert got == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_surface_box_too_small():
    with pytest.raises(ObstructionError):
        derive_surface_constraints(3, box=3)


def test_lift_term_validation():
    with pytest.raises(ObstructionError):
        LiftTerm("u", 1, "forced", "a")
    with pytest.raises(ObstructionError):
        LiftTerm("u", 1, "weird", "a")


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_curve_residue_is_minus_lam_p(p):
    r = run_curve_scenario(p)
    c = r.get("non-liftability obstruction residue")
    assert c.status == "pass"
    assert f"-lam^{p}" in c.detail


@pytest.mark.parametrize("p", [2, 3])
def test_surface_residue_is_minus_lam_p(p):
    r = run_surface_scenario(p)
    res = [c for c in r.checks if "residue" in c.name]
    assert res and all(c.status == "pass" and f"-lam^{p}" in c.detail for c in res)
