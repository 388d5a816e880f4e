"""Ring homomorphisms between monomial / quotient rings over coefficient algebras.

A ring is a :class:`RingDesc`: a monomial subalgebra of a Laurent ring (or the
quotient k[x, y, z]/(y^p - xz), presented by a rewrite rule) tensored with a
scalar tower.  A :class:`RingMap` is fixed by the images of the ring's
generators plus a map of coefficient algebras; it is evaluated on arbitrary
elements by decomposing each monomial over the generators.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

from .monoid import (
    MonomialAlgebra,
    algebra_contains,
    integer_kernel,
    rank1_member,
    semigroup_member,
)
from .polyring import LaurentPoly, RewriteRule, ScalarTower, invert_unit, normal_form
from .report import Verdict
from .scalars import AlgebraError, CoeffMap, Truncated, is_surjective, kernel_dimension

__all__ = [
    "RingDesc",
    "RingMap",
    "mono_str",
    "identity_map",
    "inclusion",
    "coefficient_change",
    "compose",
    "compose_path",
    "maps_equal",
    "check_well_defined",
    "restrict_coefficients",
    "check_iso_nilpotent",
    "diagram_commutes",
    "extend_to_localization",
    "invert_unipotent",
]


def mono_str(vars: Sequence[str], e: Sequence[int]) -> str:
    parts = [v if a == 1 else f"{v}^{a}" for v, a in zip(vars, e) if a]
    return "*".join(parts) if parts else "1"


def _standard_basis(alg: MonomialAlgebra) -> bool:
    d = alg.rank
    return len(alg.generators) == d and all(
        g == tuple(1 if i == j else 0 for i in range(d)) for j, g in enumerate(alg.generators)
    )


@dataclass(frozen=True)
class RingDesc:
    """k[S] (or a rule quotient) over ``tower``; ``vars`` name the ambient Laurent variables.

    With a ``rule`` the algebra must be the free monoid on ``vars`` and elements
    are kept in rule normal form.
    """

    name: str
    tower: ScalarTower
    vars: tuple
    algebra: MonomialAlgebra
    rule: Optional[RewriteRule] = None
    bound: int = 64

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if self.algebra.rank != len(self.vars):
            raise AlgebraError(f"{self.name}: algebra rank does not match the variables")
        if self.rule is not None:
            self.rule.check(self.vars)
            if not _standard_basis(self.algebra) or self.algebra.invertible:
                raise AlgebraError(f"{self.name}: a quotient ring needs a polynomial generator set")

    # identity of the underlying ring, ignoring the display name
    @property
    def key(self) -> tuple:
        return (self.tower, self.vars, self.algebra, self.rule)

    def same_ring(self, other: "RingDesc") -> bool:
        return self.key == other.key

    @property
    def label(self) -> str:
        return f"{self.name}[{self.tower.cvar}]" if self.tower.cvar else self.name

    def over(self, coeff: Optional[Truncated]) -> "RingDesc":
        return replace(self, tower=self.tower.with_coeff(coeff))

    def with_tower(self, tower: ScalarTower) -> "RingDesc":
        return replace(self, tower=tower)

    def renamed(self, name: str) -> "RingDesc":
        return replace(self, name=name)

    # elements -------------------------------------------------------------

    def monomial(self, e: Sequence[int], c: int = 1) -> LaurentPoly:
        return LaurentPoly.monomial(self.tower, self.vars, e, c)

    def generators(self) -> list:
        return [self.monomial(g) for g in self.algebra.generators]

    def signed_generators(self) -> list:
        """Generators followed by the inverses of the invertible ones."""
        out = self.generators()
        out += [self.monomial([-a for a in g]) for g in self.algebra.invertible]
        return out

    def generator_labels(self) -> list:
        return [mono_str(self.vars, g) for g in self.algebra.generators]

    def const(self, c: int) -> LaurentPoly:
        return LaurentPoly.const(self.tower, self.vars, c)

    def normal(self, f: LaurentPoly) -> LaurentPoly:
        if f.vars != self.vars or f.tower != self.tower:
            raise AlgebraError(f"element of {f.vars}/{f.tower} is not in {self.label}")
        return normal_form(f, self.rule) if self.rule else f

    def decompose(self, e: Sequence[int]) -> Optional[tuple]:
        """Generator multiplicities for the monomial with exponent ``e`` (None if absent)."""
        e = tuple(e)
        if _standard_basis(self.algebra):
            inv = set(self.algebra.invertible)
            ok = all(a >= 0 or g in inv for a, g in zip(e, self.algebra.generators))
            return e if ok else None
        w = semigroup_member(e, self.algebra, self.bound)
        return None if w is None else w.multiplicities

    def contains_monomial(self, e: Sequence[int]) -> bool:
        e = tuple(e)
        if self.algebra.rank == 1 and not _standard_basis(self.algebra):
            return rank1_member(e[0], self.algebra)
        return self.decompose(e) is not None

    def relations(self) -> list:
        """Integer vectors c over the generators with prod g^c = 1."""
        if self.rule is not None:
            i = self.vars.index(self.rule.var)
            c = list(self.rule.rhs)
            c[i] = -self.rule.power
            return [tuple(c)]
        return integer_kernel(self.algebra.generators)

    def __str__(self):
        if self.rule is not None:
            rhs = mono_str(self.vars, self.rule.rhs)
            base = f"k[{', '.join(self.vars)}]/({self.rule.var}^{self.rule.power} - {rhs})"
        else:
            gens = []
            for g in self.algebra.generators:
                s = mono_str(self.vars, g)
                gens.append(s if g not in self.algebra.invertible else f"{s}^±1")
            base = "k[" + ", ".join(gens) + "]"
        coeff = f" over {self.tower.coeff}" if self.tower.coeff else ""
        return base + coeff


class RingMap:
    """source -> target given by generator images and a coefficient map.

    ``coeff_map`` None means the two rings share their coefficient algebra and
    the map is linear over it.  Symbols are carried over by name.
    """

    def __init__(
        self,
        name: str,
        source: RingDesc,
        target: RingDesc,
        images: Sequence[LaurentPoly],
        coeff_map: Optional[CoeffMap] = None,
    ):
        images = list(images)
        if len(images) != len(source.algebra.generators):
            raise AlgebraError(f"{name}: one image per generator of {source.label} is required")
        if coeff_map is None:
            if source.tower.coeff != target.tower.coeff:
                raise AlgebraError(f"{name}: coefficient algebras differ but no coefficient map given")
        elif coeff_map.source != source.tower.coeff or coeff_map.target != target.tower.coeff:
            raise AlgebraError(f"{name}: coefficient map does not match the rings")
        missing = [s for s in source.tower.symbols if s not in target.tower.symbols]
        if missing:
            raise AlgebraError(f"{name}: symbols {missing} are missing from the target")
        self.name = name
        self.source = source
        self.target = target
        self.images = tuple(target.normal(img) for img in images)
        self.coeff_map = None if coeff_map is not None and coeff_map.is_identity() else coeff_map
        self._powers: dict = {}
        self._monos: dict = {}
        self._inverses: dict = {}
        nv = len(target.vars)
        sidx = [target.tower.symbols.index(s) for s in source.tower.symbols]
        self._sym_layout = (nv, len(target.tower.symbols), sidx)

    # constructors -----------------------------------------------------------

    @classmethod
    def from_var_images(
        cls,
        name: str,
        source: RingDesc,
        target: RingDesc,
        var_images: Mapping[str, LaurentPoly],
        coeff_map: Optional[CoeffMap] = None,
    ) -> "RingMap":
        """Images given on the ambient variables; generator images are the
        corresponding monomials in them (unlisted variables map to themselves)."""
        for v in var_images:
            if v not in source.vars:
                raise AlgebraError(f"{name}: {v!r} is not a variable of {source.label}")
        imgs = []
        for g in source.algebra.generators:
            out = target.const(1)
            for v, a in zip(source.vars, g):
                if not a:
                    continue
                img = var_images[v] if v in var_images else LaurentPoly.gen(target.tower, target.vars, v)
                out = out * (img ** a)
            imgs.append(out)
        return cls(name, source, target, imgs, coeff_map)

    @classmethod
    def from_partial(
        cls,
        name: str,
        source: RingDesc,
        target: RingDesc,
        images: Mapping[int, LaurentPoly],
        coeff_map: Optional[CoeffMap] = None,
    ) -> "RingMap":
        """Images given on some generators; a generator that is the inverse of an
        invertible generator with a given image receives the inverse image."""
        gens = source.algebra.generators
        full = dict(images)
        for i, g in enumerate(gens):
            if i in full:
                continue
            neg = tuple(-a for a in g)
            j = next(
                (j for j in full if gens[j] == neg and gens[j] in source.algebra.invertible), None
            )
            if j is None:
                raise AlgebraError(f"{name}: no image for generator {mono_str(source.vars, g)}")
            full[i] = invert_unit(full[j])
        return cls(name, source, target, [full[i] for i in range(len(gens))], coeff_map)

    # evaluation -----------------------------------------------------------

    def _inverse_image(self, i: int) -> LaurentPoly:
        if i not in self._inverses:
            self._inverses[i] = self.target.normal(invert_unit(self.images[i]))
        return self._inverses[i]

    def _gen_power(self, i: int, m: int) -> LaurentPoly:
        key = (i, m)
        if key not in self._powers:
            base = self.images[i] if m >= 0 else self._inverse_image(i)
            self._powers[key] = base ** abs(m)
        return self._powers[key]

    def _mono_image(self, e: tuple) -> LaurentPoly:
        if e not in self._monos:
            w = self.source.decompose(e)
            if w is None:
                raise AlgebraError(
                    f"{self.name}: monomial {mono_str(self.source.vars, e)} is not in {self.source.label}"
                )
            out = self.target.const(1)
            for i, m in enumerate(w):
                if m:
                    out = out * self._gen_power(i, m)
            self._monos[e] = out
        return self._monos[e]

    def _scalar_image(self, se: tuple, cp: int) -> LaurentPoly:
        nv, ns, sidx = self._sym_layout
        sym = [0] * ns
        for i, a in zip(sidx, se):
            sym[i] = a
        base = (0,) * nv + tuple(sym)
        if self.coeff_map is None:
            return LaurentPoly(self.target.tower, self.target.vars, {base + (cp,): 1})
        img = self.coeff_map.power_images()[cp]
        return LaurentPoly(
            self.target.tower, self.target.vars, {base + (j,): a for j, a in enumerate(img.coeffs) if a}
        )

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        f = self.source.normal(f)
        acc: dict = {}
        for key, c in f.terms.items():
            ve, se, cp = f.split(key)
            term = self._mono_image(ve) * self._scalar_image(se, cp)
            for kk, cc in term.terms.items():
                acc[kk] = acc.get(kk, 0) + c * cc
        return self.target.normal(LaurentPoly(self.target.tower, self.target.vars, acc))

    __call__ = apply

    def describe(self) -> str:
        parts = [
            f"{lab} -> {img}" for lab, img in zip(self.source.generator_labels(), self.images)
        ]
        return f"{self.name}: " + ", ".join(parts)

    def __repr__(self):
        return f"RingMap({self.describe()})"


# --- constructors -------------------------------------------------------------


def identity_map(R: RingDesc, name: str = None) -> RingMap:
    return RingMap(name or f"id_{R.name}", R, R, R.generators())


def inclusion(sub: RingDesc, ring: RingDesc, name: str = None) -> RingMap:
    """sub -> ring sending every generator to the same monomial (same ambient vars)."""
    if sub.vars != ring.vars or sub.tower != ring.tower:
        raise AlgebraError("inclusion needs the same ambient variables and tower")
    imgs = [ring.monomial(g) for g in sub.algebra.generators]
    return RingMap(name or f"{sub.name}->{ring.name}", sub, ring, imgs)


def coefficient_change(R: RingDesc, pi: CoeffMap, name: str = None) -> RingMap:
    """id (x) pi : R[source] -> R[target]."""
    if R.tower.coeff != pi.source:
        raise AlgebraError("coefficient map does not start at the ring's coefficient algebra")
    T = R.over(pi.target)
    return RingMap(name or f"id(x){pi.source.var}->{pi.target.var}", R, T, T.generators(), pi)


def _compose_coeff(second: Optional[CoeffMap], first: Optional[CoeffMap]) -> Optional[CoeffMap]:
    if first is None:
        return second
    if second is None:
        return first
    return second.compose(first)


def compose(g: RingMap, f: RingMap, name: str = None) -> RingMap:
    """g o f."""
    if not f.target.same_ring(g.source):
        raise AlgebraError(f"cannot compose {g.name} after {f.name}: {f.target} vs {g.source}")
    images = [g.apply(img) for img in f.images]
    return RingMap(
        name or f"{g.name}∘{f.name}", f.source, g.target, images, _compose_coeff(g.coeff_map, f.coeff_map)
    )


def compose_path(path: Sequence[RingMap]) -> RingMap:
    """Maps listed in the order they are applied: path[-1] o ... o path[0]."""
    if not path:
        raise AlgebraError("empty path")
    out = path[0]
    for m in path[1:]:
        out = compose(m, out)
    return out


def maps_equal(f: RingMap, g: RingMap) -> bool:
    return (
        f.source.same_ring(g.source)
        and f.target.same_ring(g.target)
        and f.coeff_map == g.coeff_map
        and f.images == g.images
    )


# --- checks --------------------------------------------------------------------


def _relation_str(R: RingDesc, c: Sequence[int]) -> str:
    labels = R.generator_labels()

    def side(sign):
        parts = []
        for lab, a in zip(labels, c):
            if a * sign > 0:
                b = abs(a)
                if b != 1 and ("*" in lab or "^" in lab):
                    lab = f"({lab})"
                parts.append(lab if b == 1 else f"{lab}^{b}")
        return "*".join(parts) or "1"

    return f"{side(1)} = {side(-1)}"


def check_well_defined(f: RingMap) -> Verdict:
    """Relations of the source map to 0, images of invertible generators are
    units, and every monomial of every image lies in the target algebra."""
    src, tgt = f.source, f.target
    rels = src.relations()
    for c in rels:
        lhs = tgt.const(1)
        rhs = tgt.const(1)
        for i, a in enumerate(c):
            if a > 0:
                lhs = lhs * f._gen_power(i, a)
            elif a < 0:
                rhs = rhs * f._gen_power(i, -a)
        d = tgt.normal(lhs - rhs)
        if not d.is_zero():
            return Verdict(False, f"relation {_relation_str(src, c)} maps to {d} != 0")
    checked = []
    for i, (g, img) in enumerate(zip(src.algebra.generators, f.images)):
        lab = mono_str(src.vars, g)
        checked.append((lab, img))
        if g in src.algebra.invertible:
            try:
                inv = f._inverse_image(i)
            except AlgebraError:
                return Verdict(False, f"image {img} of invertible generator {lab} is not a unit")
            checked.append((f"{lab}^-1", inv))
    for lab, img in checked:
        for e in img.support():
            if not tgt.contains_monomial(e):
                return Verdict(
                    False,
                    f"monomial {mono_str(tgt.vars, e)} of the image of {lab} is not in {tgt}",
                )
    return Verdict(
        True, f"{len(rels)} relation(s) map to 0; all generator images lie in {tgt}"
    )


def restrict_coefficients(f: RingMap, pi: CoeffMap, name: str = None) -> RingMap:
    """f (x) id along pi: apply pi to every coefficient of every image."""
    if f.coeff_map is not None:
        raise AlgebraError("restriction is defined for maps linear over their coefficients")
    if f.source.tower.coeff != pi.source:
        raise AlgebraError("coefficient map does not start at the map's coefficient algebra")
    S, T = f.source.over(pi.target), f.target.over(pi.target)
    imgs = [img.map_coefficients(pi, T.tower) for img in f.images]
    return RingMap(name or f"{f.name}⊗{pi.target.var}", S, T, imgs)


def _reduced(f: LaurentPoly) -> dict:
    return {k[:-1]: c for k, c in f.terms.items() if k[-1] == 0}


def check_iso_nilpotent(f: RingMap, reference: RingMap = None) -> Verdict:
    """Reduction modulo the nilpotent coefficients is the identity (or the
    ``reference`` map's reduction), so f is an isomorphism."""
    cm = f.coeff_map
    if cm is not None and not (is_surjective(cm) and kernel_dimension(cm) == 0):
        return Verdict(False, "coefficient map is not an isomorphism")
    labels = f.source.generator_labels()
    if reference is None:
        if f.source.vars != f.target.vars:
            return Verdict(False, "no reference map for rings with different variables")
        expected = [f.target.monomial(g) for g in f.source.algebra.generators]
    else:
        if reference.target.vars != f.target.vars or len(reference.images) != len(f.images):
            return Verdict(False, "reference map has a different shape")
        expected = reference.images
    for lab, img, ref in zip(labels, f.images, expected):
        if _reduced(img) != _reduced(ref):
            return Verdict(
                False, f"reduction of {lab} -> {img} is {img.reduce_nilpotent()}, expected {ref.reduce_nilpotent()}"
            )
    what = "the identity" if reference is None else f"{reference.name}"
    return Verdict(True, f"reduces to {what} modulo the nilpotent coefficients")


def diagram_commutes(
    path1: Sequence[RingMap], path2: Sequence[RingMap], elements: Sequence[LaurentPoly] = None
) -> Verdict:
    """Compare the two composites (maps listed in application order) on
    ``elements`` (default: the generators and inverses of invertible ones)."""
    f, g = compose_path(path1), compose_path(path2)
    if not (f.source.same_ring(g.source) and f.target.same_ring(g.target)):
        return Verdict(False, "paths have different endpoints")
    if elements is None:
        elements = f.source.signed_generators()
    for e in elements:
        a, b = f.apply(e), g.apply(e)
        if a != b:
            return Verdict(False, f"{e}: {a} along {f.name} but {b} along {g.name}")
    shown = ", ".join(f"{e} -> {f.apply(e)}" for e in elements)
    return Verdict(True, shown)


def extend_to_localization(
    f: RingMap, src_loc: RingDesc, tgt_loc: RingDesc = None, name: str = None
) -> RingMap:
    """Extend f : R -> T to R_loc -> T_loc where R_loc is a localization of R
    (same ambient variables).  Each generator of R_loc is written as an integer
    combination of R's generators and sent to the matching product of images."""
    R = f.source
    if src_loc.vars != R.vars or src_loc.tower != R.tower:
        raise AlgebraError("localization must share the ambient variables and tower")
    if not algebra_contains(src_loc.algebra, R.algebra, src_loc.bound):
        raise AlgebraError(f"{R.label} is not contained in {src_loc.label}")
    tgt_loc = tgt_loc or src_loc.with_tower(f.target.tower)
    group = MonomialAlgebra(R.algebra.rank, R.algebra.generators, R.algebra.generators)
    imgs = []
    for h in src_loc.algebra.generators:
        w = semigroup_member(h, group, src_loc.bound)
        if w is None:
            raise AlgebraError(f"{mono_str(R.vars, h)} is not a fraction of generators of {R.label}")
        out = tgt_loc.const(1)
        for i, m in enumerate(w.multiplicities):
            if m:
                base = f.images[i] if m > 0 else invert_unit(f.images[i])
                out = out * base.embed(tgt_loc.vars, tgt_loc.tower) ** abs(m)
        imgs.append(out)
    return RingMap(name or f.name, src_loc, tgt_loc, imgs, f.coeff_map)


def invert_unipotent(f: RingMap, name: str = None, max_iter: int = 64) -> RingMap:
    """Inverse of an endomorphism reducing to the identity modulo the
    coefficient ideal, by the iteration g <- g - (f(g) - id)."""
    R = f.source
    if not (R.same_ring(f.target) and f.coeff_map is None):
        raise AlgebraError("invert_unipotent needs an endomorphism over the coefficients")
    if not check_iso_nilpotent(f):
        raise AlgebraError(f"{f.name} does not reduce to the identity")
    gens = R.generators()
    g = list(gens)
    for _ in range(max_iter):
        errs = [f.apply(gi) - x for gi, x in zip(g, gens)]
        if all(e.is_zero() for e in errs):
            break
        g = [R.normal(gi - e) for gi, e in zip(g, errs)]
    else:
        raise AlgebraError("unipotent inversion did not converge")
    return RingMap(name or f"{f.name}^-1", R, R, g)
