"""Exponent-lattice model of monomial subalgebras of Laurent rings.

A monomial algebra k[S] is described by the affine semigroup S generated by
lattice vectors, some of which are declared invertible (their negatives are
adjoined).  Membership is decided by breadth-first search over lattice points
inside a box; the box is padded by the Steinitz bound (2 * rank * max generator
size), so every element with a representation of total multiplicity
<= ``bound`` is found.  Negative answers therefore mean "not within bound",
except for the rank-1 helpers, which are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "MonoidError",
    "MonomialAlgebra",
    "MembershipWitness",
    "SemigroupStructure",
    "semigroup_member",
    "semigroup_points",
    "algebra_equal",
    "algebra_contains",
    "localization_check",
    "module_intersection_basis",
    "semigroup_structure",
    "achievable_exponents",
    "rank1_member",
    "rank1_elements",
    "rank1_minimal_generators",
    "conductor",
    "integer_kernel",
    "DEFAULT_BOUND",
]


class MonoidError(ValueError):
    pass


def DEFAULT_BOUND(p: int) -> int:
    return 4 * p + 8


Vector = tuple


@dataclass(frozen=True)
class MonomialAlgebra:
    """k[S] for S generated by ``generators`` plus negatives of ``invertible``."""

    rank: int
    generators: tuple
    invertible: tuple = ()

    def __post_init__(self):
        gens = tuple(tuple(int(a) for a in g) for g in self.generators)
        inv = tuple(tuple(int(a) for a in g) for g in self.invertible)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "invertible", inv)
        if not gens:
            raise MonoidError("generator list must be nonempty")
        if len(set(gens)) != len(gens):
            raise MonoidError(f"duplicate generators in {gens}")
        if any(len(g) != self.rank for g in gens):
            raise MonoidError("generator of the wrong rank")
        if not set(inv) <= set(gens):
            raise MonoidError("invertible generators must be generators")

    @classmethod
    def of(cls, generators: Sequence[Sequence[int]], invertible: Sequence[Sequence[int]] = ()):
        gens = [tuple(g) for g in generators]
        return cls(len(gens[0]), tuple(gens), tuple(tuple(g) for g in invertible))

    def is_invertible(self, g: Vector) -> bool:
        return tuple(g) in self.invertible

    def signed_generators(self) -> tuple:
        """((vector, generator index, sign), ...); invertible generators appear twice."""
        out = [(g, i, 1) for i, g in enumerate(self.generators)]
        for i, g in enumerate(self.generators):
            if g in self.invertible:
                out.append((tuple(-a for a in g), i, -1))
        return tuple(out)

    def localize(self, v: Vector) -> "MonomialAlgebra":
        """Adjoin -v (v is assumed to be an element)."""
        v = tuple(v)
        gens = list(self.generators)
        if v not in gens:
            gens.append(v)
        inv = list(self.invertible)
        if v not in inv:
            inv.append(v)
        return MonomialAlgebra(self.rank, tuple(gens), tuple(inv))

    def __str__(self):
        def fmt(g):
            s = "(" + ",".join(map(str, g)) + ")"
            return ("±" + s) if g in self.invertible else s

        return "<" + ", ".join(fmt(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class MembershipWitness:
    """Multiplicities per generator (negative entries only for invertible ones)."""

    multiplicities: tuple

    def combine(self, R: MonomialAlgebra) -> Vector:
        out = [0] * R.rank
        for m, g in zip(self.multiplicities, R.generators):
            for i, a in enumerate(g):
                out[i] += m * a
        return tuple(out)

    @property
    def total(self) -> int:
        return sum(abs(m) for m in self.multiplicities)


# --- box BFS -------------------------------------------------------------------


def _margin(R: MonomialAlgebra) -> int:
    m = max(max(abs(a) for a in g) for g in R.generators)
    return 2 * R.rank * m


def _pow2_at_least(n: int) -> int:
    k = 8
    while k < n:
        k *= 2
    return k


@lru_cache(maxsize=256)
def _reach(R: MonomialAlgebra, radius: int, bound: int):
    """BFS from 0 over the cube [-radius, radius]^rank.

    Returns (level, parent) arrays; level -1 marks unreached points and
    parent holds the index into ``R.signed_generators()`` used on arrival.
    """
    d = R.rank
    size = 2 * radius + 1
    shape = (size,) * d
    level = np.full(shape, -1, dtype=np.int32)
    parent = np.full(shape, -1, dtype=np.int16)
    origin = (radius,) * d
    level[origin] = 0
    frontier = np.zeros(shape, dtype=bool)
    frontier[origin] = True
    sgens = R.signed_generators()
    slices = []
    for g, _, _ in sgens:
        if any(abs(a) >= size for a in g):
            slices.append(None)
            continue
        src = tuple(slice(max(0, -a), size - max(0, a)) for a in g)
        dst = tuple(slice(max(0, a), size - max(0, -a)) for a in g)
        slices.append((src, dst))
    for lev in range(1, bound + 1):
        new = np.zeros(shape, dtype=bool)
        for gi, sl in enumerate(slices):
            if sl is None:
                continue
            src, dst = sl
            cand = frontier[src] & (level[dst] < 0) & ~new[dst]
            if cand.any():
                parent[dst][cand] = gi
                new[dst] |= cand
        if not new.any():
            break
        level[new] = lev
        frontier = new
    level.setflags(write=False)
    parent.setflags(write=False)
    return level, parent


def _radius_for(R: MonomialAlgebra, extent: int) -> int:
    return _pow2_at_least(extent + _margin(R))


def semigroup_member(v: Sequence[int], R: MonomialAlgebra, bound: int) -> Optional[MembershipWitness]:
    """A witness that v lies in the semigroup of R, or None (not within bound).

    The witness has minimal total multiplicity among representations found by
    the search; ties are broken by generator order, so results are deterministic.
    """
    v = tuple(int(a) for a in v)
    if len(v) != R.rank:
        raise MonoidError(f"rank mismatch: vector {v} vs algebra of rank {R.rank}")
    return _member_cached(v, R, bound)


@lru_cache(maxsize=65536)
def _member_cached(v: Vector, R: MonomialAlgebra, bound: int) -> Optional[MembershipWitness]:
    if not any(v):
        return MembershipWitness((0,) * len(R.generators))
    radius = _radius_for(R, max(abs(a) for a in v))
    level, parent = _reach(R, radius, bound)
    idx = tuple(a + radius for a in v)
    if level[idx] < 0:
        return None
    sgens = R.signed_generators()
    mult = [0] * len(R.generators)
    cur = list(v)
    while any(cur):
        gi = int(parent[tuple(a + radius for a in cur)])
        g, i, sign = sgens[gi]
        mult[i] += sign
        cur = [a - b for a, b in zip(cur, g)]
    return MembershipWitness(tuple(mult))


def semigroup_points(R: MonomialAlgebra, box: Sequence[tuple], bound: int) -> set:
    """All elements of the semigroup inside ``box`` (within bound)."""
    if len(box) != R.rank:
        raise MonoidError("box has the wrong rank")
    if any(lo > hi for lo, hi in box):
        raise MonoidError("empty box")
    extent = max(max(abs(lo), abs(hi)) for lo, hi in box)
    radius = _radius_for(R, extent)
    level, _ = _reach(R, radius, bound)
    sub = tuple(slice(lo + radius, hi + radius + 1) for lo, hi in box)
    hits = np.argwhere(level[sub] >= 0)
    offs = np.array([lo for lo, _ in box])
    return {tuple(int(a) for a in row + offs) for row in hits}


# --- algebra comparisons ------------------------------------------------------


def _check_rank(R: MonomialAlgebra, R2: MonomialAlgebra):
    if R.rank != R2.rank:
        raise MonoidError(f"rank mismatch: {R.rank} vs {R2.rank}")


def algebra_contains(R: MonomialAlgebra, sub: MonomialAlgebra, bound: int) -> bool:
    """sub is a subalgebra of R (every generator, and every inverse, lies in R)."""
    _check_rank(R, sub)
    for g, _, _ in sub.signed_generators():
        if semigroup_member(g, R, bound) is None:
            return False
    return True


def algebra_equal(R: MonomialAlgebra, R2: MonomialAlgebra, bound: int) -> bool:
    _check_rank(R, R2)
    return algebra_contains(R, R2, bound) and algebra_contains(R2, R, bound)


def localization_check(R_loc: MonomialAlgebra, R: MonomialAlgebra, inverted: Sequence[int], bound: int) -> bool:
    """R_loc == R[1/x^inverted]."""
    _check_rank(R, R_loc)
    inverted = tuple(inverted)
    if semigroup_member(inverted, R, bound) is None:
        raise MonoidError(f"{inverted} is not an element of {R}")
    return algebra_equal(R_loc, R.localize(inverted), bound)


def module_intersection_basis(
    shift: Sequence[int],
    R: MonomialAlgebra,
    R2: MonomialAlgebra,
    box: Sequence[tuple],
    bound: int = 64,
) -> list:
    """Exponents v in ``box`` with v - shift in S(R) and v in S(R2), sorted.

    These are the monomials spanning (x^shift * k[R]) ∩ k[R2] inside the box.
    """
    shift = tuple(shift)
    _check_rank(R, R2)
    if len(shift) != R.rank:
        raise MonoidError("shift has the wrong rank")
    box = [tuple(b) for b in box]
    if any(lo > hi for lo, hi in box):
        raise MonoidError("empty box")
    shifted_box = [(lo - s, hi - s) for (lo, hi), s in zip(box, shift)]
    in_R = semigroup_points(R, shifted_box, bound)
    in_R2 = semigroup_points(R2, box, bound)
    out = [tuple(a + s for a, s in zip(w, shift)) for w in in_R]
    return sorted(v for v in out if v in in_R2)


# --- structure -------------------------------------------------------------------


@dataclass(frozen=True)
class SemigroupStructure:
    unit_rank: int
    pointed_rank: int
    minimal_generators: tuple
    is_free: bool
    torsion_free: bool = True

    def describe(self) -> str:
        a, b = self.pointed_rank, self.unit_rank
        n = len(self.minimal_generators)
        if self.is_free:
            return f"N^{a} x Z^{b}"
        return f"not free: {n} minimal generators in pointed rank {a}, unit rank {b}"


def _rank(vectors: list) -> int:
    if not vectors:
        return 0
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))


def semigroup_structure(R: MonomialAlgebra, bound: int) -> SemigroupStructure:
    """Units, pointed quotient and its minimal generators (rank <= 2).

    The chart Spec k[R] is smooth exactly when the semigroup is N^a x Z^b,
    i.e. when the pointed quotient is minimally generated by ``a``
    independent elements and the unit group is saturated.
    """
    if R.rank > 2:
        raise MonoidError("structure detection is implemented for rank <= 2")
    units = []
    for g in R.generators:
        if g in R.invertible or semigroup_member(tuple(-a for a in g), R, bound) is not None:
            units.append(g)
    b = _rank(units)
    d = R.rank
    a = d - b
    torsion_free = True
    if b == 0:
        project = lambda v: tuple(v)
    elif b == d:
        project = lambda v: ()
        if d == 1:
            torsion_free = gcd(*[abs(u[0]) for u in units]) == 1
        else:
            det = 0
            for i in range(len(units)):
                for j in range(i + 1, len(units)):
                    det = gcd(det, abs(units[i][0] * units[j][1] - units[i][1] * units[j][0]))
            torsion_free = det == 1
    else:
        # d == 2, b == 1: quotient by the line through the units
        w = next(u for u in units if any(u))
        gw = gcd(abs(w[0]), abs(w[1]))
        w = (w[0] // gw, w[1] // gw)
        # the unit lattice is m * Z w; saturated iff m == 1
        mults = [u[0] // w[0] if w[0] else u[1] // w[1] for u in units]
        torsion_free = gcd(*[abs(m) for m in mults]) == 1 if mults else True
        project = lambda v, w=w: (v[0] * w[1] - v[1] * w[0],)
    images = []
    for g in R.generators:
        if g in units:
            continue
        q = project(g)
        if any(q) and q not in images:
            images.append(q)
    if a == 0:
        minimal = ()
    elif a == 1:
        vals = sorted(abs(q[0]) for q in images)
        sign = 1 if all(q[0] > 0 for q in images) else -1
        minimal = tuple((sign * m,) for m in rank1_minimal_generators(vals))
    else:
        minimal = []
        for i, q in enumerate(images):
            others = [o for j, o in enumerate(images) if j != i]
            if others and semigroup_member(q, MonomialAlgebra.of(others), bound) is not None:
                continue
            minimal.append(q)
        minimal = tuple(sorted(minimal))
    is_free = torsion_free and len(minimal) == a and _rank(list(minimal)) == a
    return SemigroupStructure(b, a, minimal, is_free, torsion_free)


# --- rank 1 -------------------------------------------------------------------


def conductor(g1: int, g2: int) -> int:
    """Smallest c with every integer >= c in <g1, g2> (coprime g1, g2 > 0)."""
    if gcd(g1, g2) != 1:
        raise MonoidError("conductor formula needs coprime generators")
    return g1 * g2 - g1 - g2 + 1


def _numerical_elements(gens: Sequence[int], upto: int) -> list:
    ok = [False] * (upto + 1)
    if upto >= 0:
        ok[0] = True
    for n in range(1, upto + 1):
        ok[n] = any(n >= g and ok[n - g] for g in gens)
    return ok


def rank1_member(n: int, R: MonomialAlgebra) -> bool:
    """Exact membership for rank-1 semigroups."""
    if R.rank != 1:
        raise MonoidError("rank-1 only")
    gens = [g[0] for g in R.generators if g[0] != 0]
    if n == 0:
        return True
    if not gens:
        return False
    g = 0
    for a in gens:
        g = gcd(g, abs(a))
    if R.invertible or (min(gens) < 0 < max(gens)):
        return n % g == 0
    sign = 1 if gens[0] > 0 else -1
    m = n * sign
    if m < 0:
        return False
    pos = [abs(a) for a in gens]
    if len(pos) >= 2 and g == 1:
        srt = sorted(pos)
        if gcd(srt[0], srt[1]) == 1 and m >= conductor(srt[0], srt[1]):
            return True
    return _numerical_elements(pos, m)[m]


def rank1_elements(R: MonomialAlgebra, lo: int, hi: int) -> list:
    return [n for n in range(lo, hi + 1) if rank1_member(n, R)]


def rank1_minimal_generators(vals: Sequence[int]) -> list:
    """Minimal generating set of the numerical semigroup generated by positive ``vals``."""
    vals = sorted(set(v for v in vals if v > 0))
    out: list = []
    for v in vals:
        if out and _numerical_elements(out, v)[v]:
            continue
        out.append(v)
    return out


def achievable_exponents(R: MonomialAlgebra, shift: int, window: tuple, sign: int = 1) -> set:
    """{shift + sign*r : r in S(R)} ∩ [window], exactly."""
    if R.rank != 1:
        raise MonoidError("achievable_exponents needs a rank-1 algebra")
    lo, hi = window
    return {e for e in range(lo, hi + 1) if rank1_member(sign * (e - shift), R)}


# --- lattice relations ------------------------------------------------------------


def integer_kernel(vectors: Sequence[Sequence[int]]) -> list:
    """A Z-basis of {c in Z^k : sum c_i v_i = 0} for k vectors of equal length.

    Column-style unimodular reduction of the d x k matrix [v_1 ... v_k]; the
    transformation columns matching zero columns span the kernel lattice.
    """
    k = len(vectors)
    if k == 0:
        return []
    d = len(vectors[0])
    cols = [list(v) for v in vectors]
    trans = [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    start = 0
    for row in range(d):
        while True:
            nz = [j for j in range(start, k) if cols[j][row] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda j: abs(cols[j][row]))
            for j in nz:
                if j == piv:
                    continue
                q = cols[j][row] // cols[piv][row]
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[piv])]
                trans[j] = [a - q * b for a, b in zip(trans[j], trans[piv])]
        nz = [j for j in range(start, k) if cols[j][row] != 0]
        if nz:
            j = nz[0]
            cols[start], cols[j] = cols[j], cols[start]
            trans[start], trans[j] = trans[j], trans[start]
            start += 1
    basis = [tuple(trans[j]) for j in range(start, k)]
    out = []
    for b in basis:
        first = next(a for a in b if a)
        s = 1 if first > 0 else -1
        out.append(tuple(s * a for a in b))
    return sorted(out)
