"""Deformations given by gluing data: patches, overlaps and transition maps.

No global sheaf is built; every check here is pairwise (overlaps) or
triple-wise (cocycles).  Transition ``(i, j)`` is an algebra map on the
overlap ring, oriented so that the cocycle identity reads
psi_jk o psi_ij = psi_ik on the common triple-overlap ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Mapping, Optional, Sequence

from .homs import (
    RingDesc,
    RingMap,
    compose,
    extend_to_localization,
    identity_map,
    restrict_coefficients,
)
from .monoid import MonomialAlgebra, semigroup_member
from .polyring import LaurentPoly
from .report import Verdict
from .scalars import AlgebraError, CoeffMap

__all__ = [
    "GluingDatum",
    "TwistPair",
    "verify_cocycle",
    "verify_separated_inputs",
    "restrict_gluing",
    "compare_with_trivial",
    "twist_pair_valid",
    "first_difference",
]


@dataclass(frozen=True)
class GluingDatum:
    name: str
    patches: Mapping[int, RingDesc]
    overlaps: Mapping[tuple, RingDesc]
    transitions: Mapping[tuple, RingMap]
    triple: Optional[RingDesc] = None
    notes: tuple = field(default=())

    def __post_init__(self):
        for (i, j), psi in self.transitions.items():
            if i >= j:
                raise AlgebraError(f"transition ({i},{j}) must have i < j")
            ov = self.overlaps[(i, j)]
            if not (psi.source.same_ring(ov) and psi.target.same_ring(ov)):
                raise AlgebraError(f"transition ({i},{j}) is not an endomorphism of its overlap ring")

    @property
    def coeff(self):
        return next(iter(self.patches.values())).tower.coeff

    def pairs(self) -> list:
        return sorted(self.transitions)

    def triples(self) -> list:
        return list(combinations(sorted(self.patches), 3))


def first_difference(f: RingMap, g: RingMap, elements: Sequence[LaurentPoly] = None) -> Optional[str]:
    """None when f and g agree on ``elements`` (default: signed generators)."""
    if elements is None:
        elements = f.source.signed_generators()
    for e in elements:
        a, b = f.apply(e), g.apply(e)
        if a != b:
            return f"{e}: {a} vs {b}"
    return None


def _extend(psi: RingMap, ring: RingDesc) -> RingMap:
    if psi.source.same_ring(ring):
        return psi
    return extend_to_localization(psi, ring, ring, name=psi.name)


def _cocycle_one(d: GluingDatum, triple: tuple) -> Verdict:
    i, j, k = triple
    W = d.triple
    try:
        ij = _extend(d.transitions[(i, j)], W)
        jk = _extend(d.transitions[(j, k)], W)
        ik = _extend(d.transitions[(i, k)], W)
    except AlgebraError as exc:
        return Verdict(False, f"cannot extend to {W.label}: {exc}")
    lhs = compose(jk, ij)
    diff = first_difference(lhs, ik)
    if diff is not None:
        return Verdict(False, f"psi_{j}{k}∘psi_{i}{j} != psi_{i}{k} at {diff}")
    shown = ", ".join(f"{g} -> {img}" for g, img in zip(W.generator_labels(), ik.images))
    return Verdict(True, f"psi_{j}{k}∘psi_{i}{j} = psi_{i}{k}: {shown}")


def verify_cocycle(d: GluingDatum, mapper: Callable = map) -> list:
    """[(triple, Verdict)] for every i < j < k; ``mapper`` may run them in parallel."""
    triples = d.triples()
    if not triples:
        return []
    if d.triple is None:
        raise AlgebraError("datum has triples but no triple-overlap ring")
    verdicts = list(mapper(lambda t: _cocycle_one(d, t), triples))
    return list(zip(triples, verdicts))


def verify_separated_inputs(U: MonomialAlgebra, V: MonomialAlgebra, bound: int) -> Verdict:
    """±1 lies in the semigroup generated by both charts' exponents (rank 1),
    i.e. the two coordinate rings together generate the overlap ring."""
    if U.rank != 1 or V.rank != 1:
        raise AlgebraError("separatedness inputs are checked for rank-1 charts")
    both = MonomialAlgebra.of(
        list(dict.fromkeys(U.generators + V.generators)),
        list(dict.fromkeys(U.invertible + V.invertible)),
    )
    found = []
    for target in ((1,), (-1,)):
        w = semigroup_member(target, both, bound)
        if w is None:
            return Verdict(False, f"{target[0]} is not in {both} within bound {bound}")
        terms = " + ".join(f"{m}*({g[0]})" for m, g in zip(w.multiplicities, both.generators) if m)
        found.append(f"{target[0]} = {terms}")
    return Verdict(True, "; ".join(found))


def restrict_gluing(d: GluingDatum, pi: CoeffMap) -> GluingDatum:
    """Pull the datum back along pi (every ring and transition tensored with pi)."""
    patches = {i: R.over(pi.target) for i, R in d.patches.items()}
    overlaps = {ij: R.over(pi.target) for ij, R in d.overlaps.items()}
    transitions = {ij: restrict_coefficients(psi, pi, name=psi.name) for ij, psi in d.transitions.items()}
    triple = d.triple.over(pi.target) if d.triple is not None else None
    return GluingDatum(f"{d.name}⊗{pi.target.var}", patches, overlaps, transitions, triple, d.notes)


def compare_with_trivial(
    d: GluingDatum, rhos: Mapping[int, RingMap], mapper: Callable = map
) -> list:
    """[((i, j), Verdict)]: rho_j o psi_ij = rho_i on each overlap ring, so the
    rho_i glue to an isomorphism with the trivial deformation (whose
    transitions are identities)."""

    def one(ij):
        i, j = ij
        ov = d.overlaps[ij]
        try:
            ri = _extend(rhos[i], ov)
            rj = _extend(rhos[j], ov)
        except AlgebraError as exc:
            return Verdict(False, f"cannot extend trivialization to {ov.label}: {exc}")
        lhs = compose(rj, d.transitions[ij])
        rhs = compose(identity_map(ov), ri)
        diff = first_difference(lhs, rhs)
        if diff is not None:
            return Verdict(False, f"rho_{j}∘psi_{i}{j} != rho_{i} at {diff}")
        return Verdict(True, f"rho_{j}∘psi_{i}{j} = rho_{i} on {ov}")

    pairs = d.pairs()
    return list(zip(pairs, mapper(one, pairs)))


@dataclass(frozen=True)
class TwistPair:
    """An element of the sigma-twisted fiber product: ``left`` over A'', ``right``
    over A', agreeing after restriction to A and twisting the left side by sigma."""

    left: LaurentPoly
    right: LaurentPoly
    sigma: RingMap
    restrict_left: CoeffMap
    restrict_right: CoeffMap

    def _with(self, left, right) -> "TwistPair":
        return TwistPair(left, right, self.sigma, self.restrict_left, self.restrict_right)

    def __add__(self, other: "TwistPair") -> "TwistPair":
        return self._with(self.left + other.left, self.right + other.right)

    def __mul__(self, other: "TwistPair") -> "TwistPair":
        return self._with(self.left * other.left, self.right * other.right)

    def __neg__(self):
        return self._with(-self.left, -self.right)


def twist_pair_valid(pair: TwistPair) -> bool:
    sig = pair.sigma
    a = sig.apply(pair.left.map_coefficients(pair.restrict_left, sig.source.tower))
    b = pair.right.map_coefficients(pair.restrict_right, sig.target.tower)
    return a == b
