"""The curve suite: the cuspidal rational curve X0 = Spec k[t^p, t^(p+1)] ∪ Spec k[s^(2p+1), s^(2p+2)].

All overlap computations happen in the t-chart with s = 1/t applied eagerly,
except the two displayed diagrams, which keep the honest s-chart rings.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..gluing import (
    GluingDatum,
    TwistPair,
    compare_with_trivial,
    restrict_gluing,
    twist_pair_valid,
    verify_separated_inputs,
)
from ..homs import (
    RingDesc,
    RingMap,
    check_iso_nilpotent,
    check_well_defined,
    coefficient_change,
    diagram_commutes,
    identity_map,
    inclusion,
)
from ..monoid import DEFAULT_BOUND, MonomialAlgebra
from ..obstruction import build_lift_spec, derive_curve_constraints, forced_terms, scenario_contradiction
from ..polyring import LaurentPoly, ScalarTower, invert_unit
from ..report import Report, Verdict
from ..scalars import CoeffMap, Truncated, fiber_product, is_small_extension, kernel_dimension, kernel_order
from .common import Checklist, check_mutation, executor_map, require_prime, timed

__all__ = ["CurveRings", "build_curve", "run_curve_scenario", "curve_checklist"]


@dataclass
class CurveRings:
    p: int
    lam: Truncated
    eps: Truncated
    pi: CoeffMap
    R: dict  # "lam"/"eps" -> RingDesc of k[t^p, t^(p+1)]
    T: dict  # k[t, 1/t]
    Ts: dict  # k[s, 1/s]
    S: dict  # k[s^(2p+1), s^(2p+2)]
    St: dict  # S written in t
    glue: RingMap  # T[lam] -> Ts[lam]
    glue_t: RingMap  # the same transition in the t-chart, T[lam] -> T[lam]
    alpha: RingMap
    beta: RingMap
    beta_on_R: RingMap
    # the maps whose well-definedness is tested; differ from the above only
    # under the wrong-char mutation, where they are built over the integers
    alpha_test: RingMap
    beta_test: RingMap
    datum: GluingDatum


def _rings(p: int, coeff: Truncated, name_suffix: str = "", char: int = None):
    tw = ScalarTower(p if char is None else char, (), coeff)
    R = RingDesc("R" + name_suffix, tw, ("t",), MonomialAlgebra.of([(p,), (p + 1,)]))
    T = RingDesc("T", tw, ("t",), MonomialAlgebra.of([(1,)], [(1,)]))
    Ts = RingDesc("T_s", tw, ("s",), MonomialAlgebra.of([(1,)], [(1,)]))
    S = RingDesc("S", tw, ("s",), MonomialAlgebra.of([(2 * p + 1,), (2 * p + 2,)]))
    St = RingDesc("S", tw, ("t",), MonomialAlgebra.of([(-(2 * p + 1),), (-(2 * p + 2),)]))
    return R, T, Ts, S, St


def _alpha_beta(p_arith: int, p: int, eps: Truncated):
    """alpha on k[t^p, t^(p+1)][eps], beta on k[t, 1/t][eps] and beta restricted
    to k[t^p, t^(p+1)][eps]; ``p_arith`` is the characteristic used (0 = integers)."""
    e_alg = Truncated(eps.var, eps.order, p_arith)
    R, T, _, _, _ = _rings(p, e_alg, char=p_arith)
    t = LaurentPoly.gen(R.tower, ("t",), "t")
    e = LaurentPoly.gen(R.tower, ("t",), eps.var)
    alpha = RingMap("alpha", R, R, [t ** p, t ** (p + 1) + e])
    shift = {"t": t + e * t ** (-p)}
    beta = RingMap.from_var_images("beta", T, T, shift)
    beta_on_R = RingMap.from_var_images("beta|R", R, R, shift)
    return alpha, beta, beta_on_R


def build_curve(p: int, mutate: str = None) -> CurveRings:
    eps_order = p + 1 if mutate == "trivial-kernel" else 2
    lam = Truncated("lam", p + 1, p)
    eps = Truncated("eps", eps_order, p)
    pi = CoeffMap.reduction(lam, eps)
    Rl, Tl, Tsl, Sl, Stl = _rings(p, lam)
    Re, Te, Tse, Se, Ste = _rings(p, eps)
    s = LaurentPoly.gen(Tsl.tower, ("s",), "s")
    t = LaurentPoly.gen(Tl.tower, ("t",), "t")
    lm_s = LaurentPoly.gen(Tsl.tower, ("s",), "lam")
    lm_t = LaurentPoly.gen(Tl.tower, ("t",), "lam")
    if mutate == "drop-unit-factor":
        img_s, img_t = lm_s * s ** p, lm_t * t ** (-p)
    else:
        img_s, img_t = s ** -1 + lm_s * s ** p, t + lm_t * t ** (-p)
    glue = RingMap("glue", Tl, Tsl, [img_s])
    glue_t = RingMap("psi_UV", Tl, Tl, [img_t])
    alpha, beta, beta_on_R = _alpha_beta(p, p, eps)
    if mutate == "wrong-char":
        alpha_t, beta_t, beta_on_R = _alpha_beta(0, p, eps)
    else:
        alpha_t, beta_t = alpha, beta
    datum = GluingDatum(
        "X''",
        {0: Rl, 1: Stl},
        {(0, 1): Tl},
        {(0, 1): glue_t},
        None,
        ("overlap computed in the t-chart, s = 1/t",),
    )
    return CurveRings(
        p, lam, eps, pi,
        {"lam": Rl, "eps": Re}, {"lam": Tl, "eps": Te}, {"lam": Tsl, "eps": Tse},
        {"lam": Sl, "eps": Se}, {"lam": Stl, "eps": Ste},
        glue, glue_t, alpha, beta, beta_on_R, alpha_t, beta_t, datum,
    )


def _squares(c: CurveRings) -> list:
    """Every square of both displayed diagrams, as (label, path, path)."""
    R, T, Ts, S = c.R, c.T, c.Ts, c.S
    pi = c.pi
    incRT = {k: inclusion(R[k], T[k], f"R⊂T[{k}]") for k in R}
    incSTs = {k: inclusion(S[k], Ts[k], f"S⊂T_s[{k}]") for k in S}
    piR, piT, piTs, piS = (coefficient_change(X["lam"], pi, f"id⊗π on {X['lam'].name}") for X in (R, T, Ts, S))
    glue_e = RingMap(
        "glue⊗ε", T["eps"], Ts["eps"], [img.map_coefficients(pi, Ts["eps"].tower) for img in c.glue.images]
    )
    s = LaurentPoly.gen(Ts["eps"].tower, ("s",), "s")
    h = RingMap("t↦1/s", T["eps"], Ts["eps"], [s ** -1])
    idTs = identity_map(Ts["eps"])
    idS = identity_map(S["eps"])
    a, b = c.alpha, c.beta
    return [
        ("top-left square", [incRT["lam"], piT], [piR, incRT["eps"]]),
        ("top-middle square", [c.glue, piTs], [piT, glue_e]),
        ("top-right square", [incSTs["lam"], piTs], [piS, incSTs["eps"]]),
        ("bottom-left square", [incRT["eps"], b], [a, incRT["eps"]]),
        ("bottom-middle square", [b, h], [glue_e, idTs]),
        ("bottom-right square", [incSTs["eps"], idTs], [idS, incSTs["eps"]]),
        ("pullback diagram, left square", [incRT["lam"], piT, b], [piR, a, incRT["eps"]]),
        ("pullback diagram, middle square", [piT, b, h], [c.glue, piTs]),
    ]


def curve_checklist(p: int, window: int = None, mutate: str = None) -> Checklist:
    require_prime(p)
    check_mutation(mutate, "curve")
    c = build_curve(p, mutate)
    W = 6 * p + 8 if window is None else window
    ck = Checklist()
    pi = c.pi

    ck.add(
        "coefficient diagram",
        "Ā = k[λ] ×_{k[ε]} k[λ], π(λ) = ε",
        lambda: _coeff_diagram(c),
    )
    ck.add(
        "separatedness inputs",
        "R and S generate T = k[t,t⁻¹] = k[s,s⁻¹] (t = s⁻¹)",
        lambda: verify_separated_inputs(c.R["lam"].algebra, c.St["lam"].algebra, DEFAULT_BOUND(p)),
    )
    ck.add("glue image is a unit", "s⁻¹+λsᵖ = s⁻¹(1+λsᵖ⁺¹), 1+λsᵖ⁺¹ is a unit", lambda: _unit_check(c))
    ck.add("glue well-defined", "(t,λ) ↦ (s⁻¹+λsᵖ, λ)", lambda: check_well_defined(c.glue))
    ck.add("alpha well-defined", "α: (tᵖ, tᵖ⁺¹, ε) ↦ (tᵖ, tᵖ⁺¹+ε, ε)", lambda: check_well_defined(c.alpha_test))
    ck.add("beta well-defined on k[t, 1/t, eps]", "β: (t, ε) ↦ (t + ε/tᵖ, ε)", lambda: check_well_defined(c.beta_test))
    ck.add(
        "beta well-defined on k[t^p, t^(p+1), eps]",
        "β takes k[tᵖ,tᵖ⁺¹,ε] into k[tᵖ,tᵖ⁺¹,ε] in characteristic p",
        lambda: check_well_defined(c.beta_on_R),
    )
    ref = RingMap("t↦1/s", c.T["lam"], c.Ts["lam"], [LaurentPoly.gen(c.Ts["lam"].tower, ("s",), "s") ** -1])
    ck.add("glue is an isomorphism", "u reduces to an isomorphism mod nilpotents ⇒ u is an isomorphism",
           lambda: check_iso_nilpotent(c.glue, ref))
    ck.add("alpha is an isomorphism", "α, β isomorphisms (nilpotent reduction)", lambda: check_iso_nilpotent(c.alpha_test))
    ck.add("beta is an isomorphism", "α, β isomorphisms (nilpotent reduction)", lambda: check_iso_nilpotent(c.beta_test))

    def squares():
        out = []
        for label, p1, p2 in _squares(c):
            try:
                v = diagram_commutes(p1, p2)
            except Exception as exc:  # noqa: BLE001 - reported as a failing square
                v = Verdict(False, f"error: {exc}")
            out.append((label, v))
        return out

    ck.add("diagram", "X'' pulls back to X: both displayed diagrams commute", squares)

    def restriction():
        d = restrict_gluing(c.datum, pi)
        psi = d.transitions[(0, 1)]
        shown = f"restricted transition t ↦ {psi.images[0]} (= s⁻¹+εsᵖ under t = 1/s)"
        rhos = {0: c.alpha, 1: identity_map(c.St["eps"])}
        results = compare_with_trivial(d, rhos)
        return [(f"overlap {i}{j}", Verdict(v.ok, f"{shown}; {v.detail}")) for (i, j), v in results]

    ck.add("restriction X''⊗A ≅ X", "(t,ε) ↦ (s⁻¹+εsᵖ, ε) and (t,ε) ↦ (s⁻¹, ε) intertwined by α, β", restriction)

    def twist():
        return _twist_pair_checks(c)

    ck.add("twisted fiber product", "O_X'' ×_σ O_X' (pairs agreeing after restriction and twist)", twist)

    def constraints():
        return list(derive_curve_constraints(p, W, c.eps.order).checks)

    ck.add("automorphism constraints", "σ(tᵖ⁺¹) = tᵖ⁺¹ + ε(a₀ + a_p tᵖ + …), a₀ = 0; (t + xε)ᵖ = tᵖ", constraints)
    ck.skip(
        "automorphism reading",
        "σ induces id on O_X0",
        "σ is read as a k[ε]-automorphism of O_X reducing to the identity modulo ε",
    )

    def contradiction():
        rep = derive_curve_constraints(p, W, c.eps.order)
        chart = RingDesc("R", ScalarTower(p), ("t",), c.R["lam"].algebra)
        spec = build_lift_spec(
            p, pi, chart, [("u", (p,)), ("v", (p + 1,))], rep.tags, forced_terms(c.alpha),
            {"u": ("a", "x"), "v": ("m", "y")},
        )
        rel = LaurentPoly(ScalarTower(p), ("u", "v"), {(p + 1, 0, 0): 1, (0, p, 0): -1})
        checks, _ = scenario_contradiction(spec, rel, pi)
        return checks

    ck.add("non-liftability", "(tᵖ+λ²x′)ᵖ⁺¹ − (tᵖ⁺¹+m⊗λ+1⊗λ+λ²y′)ᵖ ↦ −λᵖ(1+λy″)ᵖ = −λᵖ ≠ 0", contradiction)
    ck.skip("flatness over Ā", "flat over Ā (fiber-product flatness lemma)", "trusted assumption, not re-verified")
    return ck


def _coeff_diagram(c: CurveRings) -> Verdict:
    fp = fiber_product(c.lam, c.lam, c.eps, c.pi, c.pi)
    dim = kernel_dimension(c.pi)
    small = is_small_extension(c.pi)
    return Verdict(
        True,
        f"π: {c.lam} → {c.eps} is surjective, kernel dimension {dim} "
        f"({'small extension' if small else 'not a small extension'}); dim Ā = {fp.dim()}",
    )


def _unit_check(c: CurveRings) -> Verdict:
    u = c.glue.images[0]
    inv = invert_unit(u)
    prod = u * inv
    ok = prod == 1
    return Verdict(ok, f"({u})^-1 = {inv}; product = {prod}")


def _twist_pair_checks(c: CurveRings) -> list:
    """sigma = id on R[eps]: (v + lam^2, v) is a valid pair, (v + lam, v) is not."""
    Rl, Re = c.R["lam"], c.R["eps"]
    p = c.p
    sigma = identity_map(Re)
    v = Rl.monomial((p + 1,))
    lam = LaurentPoly.gen(Rl.tower, ("t",), "lam")
    K = kernel_order(c.pi) if kernel_dimension(c.pi) else None
    out = []
    if K is not None:
        good = TwistPair(v + lam ** K, v, sigma, c.pi, c.pi)
        out.append(("kernel shift", Verdict(twist_pair_valid(good), f"(t^{p + 1} + lam^{K}, t^{p + 1}) restricts compatibly")))
        prod = good * good
        out.append(("closed under products", Verdict(twist_pair_valid(prod), "square of a valid pair is valid")))
    bad = TwistPair(v + lam, v, sigma, c.pi, c.pi)
    out.append(("non-kernel shift", Verdict(not twist_pair_valid(bad), f"(t^{p + 1} + lam, t^{p + 1}) is rejected")))
    return out


def run_curve_scenario(p: int, window: int = None, mutate: str = None, jobs: int = 1, timing: bool = False) -> Report:
    def go():
        ck = curve_checklist(p, window, mutate)
        name = "curve" if mutate is None else f"curve[{mutate}]"
        with executor_map(jobs) as m:
            return ck.run(Report(name, p), m)

    return timed(go, timing)
