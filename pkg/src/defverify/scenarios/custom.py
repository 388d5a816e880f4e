"""Running parsed scenario files."""
from __future__ import annotations

from ..gluing import first_difference, verify_separated_inputs
from ..homs import check_iso_nilpotent, check_well_defined, diagram_commutes
from ..monoid import MonoidError, algebra_contains, semigroup_structure
from ..obstruction import ObstructionError
from ..polyring import invert_unit
from ..report import Report, Verdict
from ..scalars import AlgebraError
from .common import Checklist, executor_map, timed
from .curve import curve_checklist
from .dsl import CheckDecl, Model, ScenarioSpec, elaborate, eval_in, monomial_in, statement_str
from .surface import surface_checklist

__all__ = ["run_custom", "custom_checklist"]

_ERRORS = (AlgebraError, MonoidError, ObstructionError, ZeroDivisionError)


def _same_ambient(a, b) -> None:
    if a.vars != b.vars:
        raise AlgebraError(f"{a.name} and {b.name} live in different variables")


def _evaluate(s: CheckDecl, m: Model) -> Verdict:
    k, a = s.kind, s.args
    if k == "well_defined":
        return check_well_defined(m.maps[a[0]])
    if k == "iso":
        ref = m.maps[a[1]] if len(a) > 1 else None
        return check_iso_nilpotent(m.maps[a[0]], ref)
    if k == "equal":
        f, g = m.maps[a[0]], m.maps[a[1]]
        if not (f.source.same_ring(g.source) and f.target.same_ring(g.target)):
            return Verdict(False, f"{f.name} and {g.name} have different source or target")
        diff = first_difference(f, g)
        return Verdict(diff is None, "maps agree on all generators" if diff is None else diff)
    if k == "commutes":
        return diagram_commutes([m.maps[n] for n in a[0]], [m.maps[n] for n in a[1]])
    if k == "member":
        R = m.rings[a[1]]
        e = monomial_in(a[0], R)
        ok = R.contains_monomial(e)
        w = R.decompose(e) if ok else None
        detail = f"multiplicities {list(w)} over {R.generator_labels()}" if w is not None else ""
        return Verdict(ok, f"{'in' if ok else 'not in'} {R}" + (f"; {detail}" if detail else ""))
    if k == "contains":
        A, B = m.rings[a[0]], m.rings[a[1]]
        _same_ambient(A, B)
        ok = algebra_contains(A.algebra, B.algebra, max(A.bound, B.bound))
        return Verdict(ok, f"{B.name} {'⊆' if ok else '⊄'} {A.name}")
    if k == "separated":
        A, B = m.rings[a[0]], m.rings[a[1]]
        _same_ambient(A, B)
        return verify_separated_inputs(A.algebra, B.algebra, max(A.bound, B.bound))
    if k == "unit":
        R = m.rings[a[1]]
        u = eval_in(a[0], R)
        try:
            inv = R.normal(invert_unit(u))
        except AlgebraError as exc:
            return Verdict(False, f"{u} is not a unit: {exc}")
        prod = R.normal(u * inv)
        return Verdict(prod == 1, f"({u})^-1 = {inv}; product = {prod}")
    if k == "identity":
        R = m.rings[a[2]]
        lhs, rhs = eval_in(a[0], R), eval_in(a[1], R)
        return Verdict(lhs == rhs, f"{lhs} {'=' if lhs == rhs else '!='} {rhs}")
    if k == "structure":
        R = m.rings[a[0]]
        st = semigroup_structure(R.algebra, R.bound)
        return Verdict(st.is_free, st.describe())
    raise AssertionError(k)


def _thunk(s: CheckDecl, m: Model):
    def run():
        try:
            v = _evaluate(s, m)
        except _ERRORS as exc:
            v = Verdict(False, f"error: {exc}")
        if s.expect == "fail":
            return Verdict(not v.ok, ("failed as expected: " if not v.ok else "expected failure but passed: ") + v.detail)
        return v

    return run


def custom_checklist(spec: ScenarioSpec, p: int = None, ck: Checklist = None) -> Checklist:
    m = elaborate(spec, p)
    ck = ck or Checklist()
    for s in spec.checks:
        text = statement_str(s)
        ck.add(text[len("check "):], f"scenario line {s.line}: {text}" if s.line else text, _thunk(s, m))
    return ck


def run_custom(spec: ScenarioSpec, p: int = None, jobs: int = 1, timing: bool = False) -> Report:
    """Run a scenario at ``p`` (default: its declared p).  The names curve and
    surface first run the builtin suite with the declared window/box/mutation."""
    p = spec.p if p is None else p

    def go():
        m_ck = None
        if spec.name == "curve":
            m_ck = curve_checklist(p, spec.window, spec.mutate)
        elif spec.name == "surface":
            m_ck = surface_checklist(p, spec.box, spec.mutate)
        ck = custom_checklist(spec, p, m_ck)
        name = spec.name if spec.mutate is None else f"{spec.name}[{spec.mutate}]"
        with executor_map(jobs) as mp:
            return ck.run(Report(name, p), mp)

    return timed(go, timing)
