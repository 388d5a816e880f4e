"""The surface suite: X0 built from the ten affine toric charts of k[x, y, z]/(y^p - xz).

Every chart ring is a monomial algebra inside k[x^±1, y^±1] with z = y^p / x.
The deformation X'' over k[lam]/(lam^(p+1)) is given by transitions on the
overlaps of the five charts R_0..R_4.  X' is trivial, and
X = X''⊗A is compared with the trivial deformation via phi on R_0.
"""
from __future__ import annotations

from ..gluing import GluingDatum, compare_with_trivial, first_difference, restrict_gluing, verify_cocycle
from ..homs import (
    RingDesc,
    RingMap,
    check_iso_nilpotent,
    check_well_defined,
    extend_to_localization,
    identity_map,
    invert_unipotent,
)
from ..monoid import (
    MonomialAlgebra,
    algebra_contains,
    algebra_equal,
    localization_check,
    semigroup_structure,
)
from ..obstruction import build_lift_spec, derive_surface_constraints, forced_terms, scenario_contradiction
from ..polyring import LaurentPoly, RewriteRule, ScalarTower
from ..report import Report, Verdict
from ..scalars import CoeffMap, Truncated
from .common import Checklist, ScenarioError, check_mutation, executor_map, require_prime, timed

__all__ = ["zeta_exponents", "chart_table", "overlap_table", "build_surface", "run_surface_scenario"]

V2 = ("x", "y")
V3 = ("x", "y", "z")


def zeta_exponents(p: int) -> list:
    """Exponents of the ten monomials zeta_00..zeta_09 spanning the linear system."""
    return [
        (0, 0), (1, 0), (p * p + p + 1, p + 1), (-1, p + 1), (-1, p),
        (0, 1), (p + 1, 1), (p * p + 1, p), (p * p + p, p + 1), (0, p + 1),
    ]


def _alg(gens, inv=()):
    return MonomialAlgebra.of(list(gens), list(inv))


def chart_table(p: int) -> list:
    """The ten chart semigroups R_0..R_9, listed by minimal generators."""
    lau = _alg([(1, 0), (0, 1)], [(1, 0), (0, 1)])
    r67 = _alg([(p, 1), (-p, -1), (-1, 0)], [(p, 1)])
    r89 = _alg([(1, 0), (-1, 0), (0, -1)], [(1, 0)])
    return [
        _alg([(1, 0), (0, 1), (-1, p)]),
        _alg([(-1, 0), (p, 1)]),
        _alg([(-1, 0), (-p, -1)]),
        _alg([(1, 0), (0, -1)]),
        _alg([(1, -p), (0, 1)]),
        lau,
        r67,
        r67,
        r89,
        r89,
    ]


def fraction_algebra(p: int, i: int) -> MonomialAlgebra:
    """k[zeta_0j / zeta_0i : j] as a semigroup."""
    z = zeta_exponents(p)
    gens = [(a - z[i][0], b - z[i][1]) for a, b in z if (a, b) != z[i]]
    return _alg(dict.fromkeys(gens))


# chart i = localization of chart base at monomial
LOCALIZATIONS = {5: (3, lambda p: (1, -1)), 6: (1, lambda p: (p, 1)), 7: (1, lambda p: (p, 1)),
                 8: (3, lambda p: (1, 0)), 9: (3, lambda p: (1, 0))}


def overlap_table(p: int) -> dict:
    lau = _alg([(1, 0), (0, 1)], [(1, 0), (0, 1)])
    return {
        (0, 1): _alg([(1, 0), (0, 1)], [(1, 0)]),
        (1, 2): _alg([(p, 1), (-1, 0)], [(p, 1)]),
        (2, 3): _alg([(1, 0), (0, -1)], [(1, 0)]),
        (3, 4): _alg([(1, 0), (0, 1)], [(0, 1)]),
        (0, 4): _alg([(1, -p), (0, 1)], [(1, -p)]),
        (0, 2): lau,
        (0, 3): lau,
        (1, 3): lau,
        (1, 4): lau,
        (2, 4): lau,
    }


class SurfaceRings:
    """All rings and maps of one surface run (plain attribute bag)."""

    def __init__(self, p: int, mutate: str = None):
        self.p = p
        self.mutate = mutate
        self.lam = Truncated("lam", p + 1, p)
        self.eps = Truncated("eps", p, p)
        self.pi = CoeffMap.reduction(self.lam, self.eps)
        tl = ScalarTower(p, (), self.lam)
        te = ScalarTower(p, (), self.eps)
        self.table = chart_table(p)
        self.bound = (p + 2) ** 2
        # (p^2+p+2, 1) in R_4 needs p^3 + 2p^2 + 3p + 3 generator steps
        self.table_bound = (p + 1) ** 3 + 8
        self.charts = {i: RingDesc(f"R_{i}", tl, V2, alg) for i, alg in enumerate(self.table[:5])}
        self.overlaps = {ij: RingDesc(f"R_{ij[0]}{ij[1]}", tl, V2, alg) for ij, alg in overlap_table(p).items()}
        self.R02 = self.overlaps[(0, 2)]
        self.transitions = self._transitions(tl)
        self.datum = GluingDatum("X''", self.charts, self.overlaps, self.transitions, self.R02)
        # phi on R_0 = k[x, y, z]/(y^p - xz) over k[eps]/(eps^p), and its Laurent form
        self.R0q = RingDesc("R_0", te, V3, _alg([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), RewriteRule("y", p, (1, 0, 1)))
        yq = LaurentPoly.gen(te, V3, "y")
        eq = LaurentPoly.gen(te, V3, "eps")
        self.phi = RingMap.from_var_images("phi", self.R0q, self.R0q, {"y": yq + eq})
        self.R0e = self.charts[0].over(self.eps)
        ye = LaurentPoly.gen(te, V2, "y")
        ee = LaurentPoly.gen(te, V2, "eps")
        self.phi_L = RingMap.from_var_images("phi", self.R0e, self.R0e, {"y": ye + ee})

    def _transitions(self, tw: ScalarTower) -> dict:
        p = self.p
        ov = self.overlaps
        x = LaurentPoly.gen(tw, V2, "x")
        y = LaurentPoly.gen(tw, V2, "y")
        lam = LaurentPoly.gen(tw, V2, "lam")
        shift = {"y": y + lam}
        twist = x * (1 + lam * y ** -1) ** p
        sign = 1 if self.mutate == "flip-psi43-sign" else -1
        psi43 = RingMap.from_var_images("psi_43", ov[(3, 4)], ov[(3, 4)], {"x": x * (1 + sign * lam * y ** -1) ** p})
        m04 = ov[(0, 4)].monomial((1, -p))
        out = {
            (0, 1): RingMap.from_var_images("psi_01", ov[(0, 1)], ov[(0, 1)], shift),
            (0, 2): RingMap.from_var_images("psi_02", ov[(0, 2)], ov[(0, 2)], shift),
            (0, 3): RingMap.from_var_images("psi_03", ov[(0, 3)], ov[(0, 3)], shift),
            (1, 2): identity_map(ov[(1, 2)], "psi_12"),
            (2, 3): identity_map(ov[(2, 3)], "psi_23"),
            (1, 3): identity_map(ov[(1, 3)], "psi_13"),
            (3, 4): invert_unipotent(psi43, "psi_34"),
            (0, 4): RingMap("psi_04", ov[(0, 4)], ov[(0, 4)], [m04, y + lam]),
            (1, 4): RingMap.from_var_images("psi_14", ov[(1, 4)], ov[(1, 4)], {"x": twist}),
            (2, 4): RingMap.from_var_images("psi_24", ov[(2, 4)], ov[(2, 4)], {"x": twist}),
        }
        self.psi43 = psi43
        return out


def build_surface(p: int, mutate: str = None) -> SurfaceRings:
    return SurfaceRings(p, mutate)


def _mono(e) -> str:
    return "*".join(f"{v}^{a}" if a != 1 else v for v, a in zip(V2, e) if a) or "1"


def _table_checks(S: SurfaceRings) -> list:
    out = []
    for i in range(10):
        frac = fraction_algebra(S.p, i)
        ok = algebra_equal(S.table[i], frac, S.table_bound)
        out.append((f"R_{i}", Verdict(ok, f"k[zeta_0j/zeta_0{i}] {'=' if ok else '!='} {S.table[i]}")))
    return out


def _localization_checks(S: SurfaceRings) -> list:
    out = []
    for i, (base, mono) in sorted(LOCALIZATIONS.items()):
        m = mono(S.p)
        ok = localization_check(S.table[i], S.table[base], m, S.bound)
        out.append((f"R_{i}", Verdict(ok, f"R_{i} {'=' if ok else '!='} R_{base}[1/{_mono(m)}]")))
    return out


def _structure_checks(S: SurfaceRings) -> list:
    out = []
    for i, alg in enumerate(S.table):
        st = semigroup_structure(alg, S.bound)
        want_free = i != 0
        out.append((f"R_{i}", Verdict(st.is_free == want_free, st.describe())))
    return out


def _overlap_checks(S: SurfaceRings) -> list:
    out = []
    outer = S.R02.algebra
    for (i, j), ring in sorted(S.overlaps.items()):
        A = ring.algebra
        fails = [n for n, sub in ((f"R_{i}", S.table[i]), (f"R_{j}", S.table[j])) if not algebra_contains(A, sub, S.bound)]
        if not algebra_contains(outer, A, S.bound):
            fails.append(f"R_{i}{j} ⊄ R_02")
        detail = f"R_{i}, R_{j} ⊆ R_{i}{j} = {A} ⊆ k[x^±1, y^±1]"
        out.append((f"R_{i}{j}", Verdict(not fails, detail if not fails else "fails: " + ", ".join(fails))))
    return out


def _phi_agreement(S: SurfaceRings) -> Verdict:
    """phi on the quotient presentation and phi_L on the Laurent presentation agree under z = y^p/x."""
    p = S.p
    te = S.R0e.tower
    x = LaurentPoly.gen(te, V2, "x")
    y = LaurentPoly.gen(te, V2, "y")
    sub = {"x": x, "y": y, "z": x ** -1 * y ** p}
    for g, e in zip(("x", "y", "z"), ((1, 0), (0, 1), (-1, p))):
        q = S.phi.apply(LaurentPoly.gen(S.R0q.tower, V3, g)).substitute(sub, x)
        lau = S.phi_L.apply(S.R0e.monomial(e))
        if q != lau:
            return Verdict(False, f"{g}: {q} (quotient form) vs {lau} (Laurent form)")
    return Verdict(True, "x -> x, y -> y + eps, z -> z in both presentations (z = y^p/x)")


def _restriction_checks(S: SurfaceRings) -> list:
    d = restrict_gluing(S.datum, S.pi)
    out = []
    for ij in ((3, 4), (1, 4), (2, 4)):
        psi = d.transitions[ij]
        diff = first_difference(psi, identity_map(psi.source))
        name = "psi_43" if ij == (3, 4) else f"psi_{ij[0]}{ij[1]}"
        out.append((f"{name}⊗A = id", Verdict(diff is None, "identity (eps^p = 0)" if diff is None else diff)))
    for j in (1, 2, 3, 4):
        psi = d.transitions[(0, j)]
        phi_j = extend_to_localization(S.phi_L, psi.source)
        diff = first_difference(psi, phi_j)
        out.append((f"psi_0{j}⊗A = phi", Verdict(diff is None, psi.describe() if diff is None else diff)))
    rhos = {0: S.phi_L}
    rhos.update({i: identity_map(d.patches[i]) for i in (1, 2, 3, 4)})
    for (i, j), v in compare_with_trivial(d, rhos):
        out.append((f"trivialization on R_{i}{j}", v))
    return out


def surface_checklist(p: int, box: int = None, mutate: str = None) -> Checklist:
    require_prime(p)
    check_mutation(mutate, "surface")
    if mutate == "flip-psi43-sign" and p == 2:
        raise ScenarioError("flip-psi43-sign needs odd p: the sign change is invisible in characteristic 2")
    S = build_surface(p, mutate)
    ck = Checklist()
    ck.add("chart table", "R_i = k[zeta_0j/zeta_0i], i = 0..9", lambda: _table_checks(S))
    ck.add("localizations", "R_5 = R_3[y/x], R_6 = R_7 = R_1[x^p y], R_8 = R_9 = R_3[1/x]", lambda: _localization_checks(S))
    ck.add("chart structure", "R_0 singular, R_1..R_9 smooth (N^a x Z^b)", lambda: _structure_checks(S))
    ck.add("overlaps", "R_i, R_j ⊆ R_ij ⊆ k[x^±1, y^±1]", lambda: _overlap_checks(S))
    ck.add("phi well-defined", "phi: (x, y, z, eps) ↦ (x, y + eps, z, eps) on k[x,y,z]/(y^p - xz)",
           lambda: check_well_defined(S.phi))
    ck.add("phi presentations agree", "z = y^p/x", lambda: _phi_agreement(S))

    def transitions():
        out = []
        for ij, psi in sorted(S.transitions.items()):
            label = f"psi_{ij[0]}{ij[1]}"
            out.append((f"{label} well-defined", check_well_defined(psi)))
            out.append((f"{label} is an isomorphism", check_iso_nilpotent(psi)))
        out.append(("psi_43 well-defined", check_well_defined(S.psi43)))
        return out

    ck.add("transitions", "psi_0i: y ↦ y + lam; psi_43: x ↦ x(1 - lam/y)^p; psi_i4: x ↦ x(1 + lam/y)^p", transitions)

    def cocycle():
        return [(f"({i},{j},{k})", v) for (i, j, k), v in verify_cocycle(S.datum)]

    ck.add("cocycle", "psi_jk ∘ psi_ij = psi_ik on R_02", cocycle)
    ck.add("restriction X''⊗A ≅ X", "psi_0i⊗A = phi, other transitions reduce to the identity", lambda: _restriction_checks(S))

    def constraints():
        return list(derive_surface_constraints(p, box, S.eps.order).checks)

    ck.add(
        "automorphism constraints",
        "sigma(y) = y - eps x^p y^2 f, sigma(z) = z + eps y^p g; (y + eps h)^p = y^p",
        constraints,
    )

    def contradiction():
        rep = derive_surface_constraints(p, box, S.eps.order)
        chart = S.R0q.over(None)
        spec = build_lift_spec(
            p, S.pi, chart, [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1))],
            rep.tags, forced_terms(S.phi), {"x": ("m", "m"), "y": ("n", "n"), "z": ("l", "l")},
        )
        rel = LaurentPoly(ScalarTower(p), V3, {(1, 0, 1, 0): 1, (0, p, 0, 0): -1})
        checks, _ = scenario_contradiction(spec, rel, S.pi)
        return checks

    ck.add("non-liftability", "(x + lam m)(z + lam l) - (y + lam + lam n)^p ↦ -lam^p ≠ 0 at the singular point", contradiction)
    ck.skip("automorphism reading", "sigma induces id on O_X0",
            "sigma is read as a k[eps]-automorphism of O_X reducing to the identity modulo eps")
    ck.skip("flatness over Ā", "flat over Ā (fiber-product flatness lemma)", "trusted assumption, not re-verified")
    return ck


def run_surface_scenario(p: int, box: int = None, mutate: str = None, jobs: int = 1, timing: bool = False) -> Report:
    def go():
        ck = surface_checklist(p, box, mutate)
        name = "surface" if mutate is None else f"surface[{mutate}]"
        with executor_map(jobs) as m:
            return ck.run(Report(name, p), m)

    return timed(go, timing)
