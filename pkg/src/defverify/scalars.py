"""Exact coefficient arithmetic: prime fields, truncated algebras k[v]/(v^n),
algebra maps between them and fiber products.

Everything here is immutable; elements carry their owner algebra so mixing
elements of different algebras raises instead of silently coercing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "AlgebraError",
    "PrimeField",
    "Truncated",
    "CoeffElem",
    "CoeffMap",
    "FiberProduct",
    "PairElem",
    "coeff_arith",
    "coeff_map_apply",
    "fiber_product",
    "is_small_extension",
    "kernel_dimension",
    "kernel_order",
    "is_prime",
]


class AlgebraError(ValueError):
    """Raised on ownership mismatches and invalid algebra data."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p.

    ``p == 0`` is accepted as a stand-in for the integers; it is only used by
    negative controls that deliberately forget the characteristic.
    """

    p: int

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise AlgebraError(f"p must be prime, got {self.p}")

    def reduce(self, a: int) -> int:
        return a % self.p if self.p else a

    def inv(self, a: int) -> int:
        a = self.reduce(a)
        if self.p == 0:
            if a in (1, -1):
                return a
            raise AlgebraError(f"{a} is not a unit in Z")
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def signed(self, a: int) -> int:
        """Symmetric representative, used for printing."""
        a = self.reduce(a)
        if self.p and a > self.p // 2:
            return a - self.p
        return a


@dataclass(frozen=True)
class Truncated:
    """k[var]/(var^order) over F_p (``order`` >= 1, ``order == 1`` is k itself)."""

    var: str
    order: int
    p: int

    def __post_init__(self):
        if self.order < 1:
            raise AlgebraError("nilpotency order must be >= 1")
        PrimeField(self.p)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def dim(self) -> int:
        return self.order

    def elem(self, coeffs: Sequence[int]) -> "CoeffElem":
        f = self.field
        cs = [f.reduce(c) for c in coeffs]
        # entries at or above the order are truncated away
        cs = cs[: self.order] + [0] * (self.order - len(cs[: self.order]))
        return CoeffElem(self, tuple(cs))

    def one(self) -> "CoeffElem":
        return self.elem([1])

    def zero(self) -> "CoeffElem":
        return self.elem([])

    def gen(self) -> "CoeffElem":
        return self.elem([0, 1])

    def __str__(self):
        return f"F_{self.p}[{self.var}]/({self.var}^{self.order})"


@dataclass(frozen=True)
class CoeffElem:
    owner: Truncated
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.owner.order:
            raise AlgebraError("coefficient list does not match nilpotency order")

    def _check(self, other: "CoeffElem"):
        if not isinstance(other, CoeffElem) or other.owner != self.owner:
            raise AlgebraError("owner mismatch")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.owner.elem([other])
        self._check(other)
        return self.owner.elem([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return self.owner.elem([-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.owner.elem([other])
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.owner.elem([other * a for a in self.coeffs])
        self._check(other)
        n = self.owner.order
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n - i):
                out[i + j] += a * other.coeffs[j]
        return self.owner.elem(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise AlgebraError("negative power of a truncated-algebra element")
        result = self.owner.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int:
        """Lowest power of the variable with a nonzero coefficient (order if zero)."""
        for i, a in enumerate(self.coeffs):
            if a:
                return i
        return self.owner.order

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def __str__(self):
        f = self.owner.field
        parts = []
        for i, a in enumerate(self.coeffs):
            a = f.signed(a)
            if not a:
                continue
            mono = "" if i == 0 else (self.owner.var if i == 1 else f"{self.owner.var}^{i}")
            if not mono:
                parts.append(str(a))
            elif a == 1:
                parts.append(mono)
            elif a == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{a}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def coeff_arith(a: CoeffElem, b: CoeffElem, op: str) -> CoeffElem:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise AlgebraError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class CoeffMap:
    """Local algebra map source -> target fixed by the image of the source variable."""

    source: Truncated
    target: Truncated
    image: CoeffElem

    def __post_init__(self):
        if self.image.owner != self.target:
            raise AlgebraError("image must live in the target algebra")
        if self.source.p != self.target.p:
            raise AlgebraError("characteristic mismatch")
        if self.image.coeffs[0] != 0:
            raise AlgebraError("image of a nilpotent variable must be nilpotent")
        if not (self.image ** self.source.order).is_zero():
            raise AlgebraError(
                f"{self.source.var}^{self.source.order} = 0 is not respected by the image"
            )

    @classmethod
    def identity(cls, alg: Truncated) -> "CoeffMap":
        return cls(alg, alg, alg.gen())

    @classmethod
    def reduction(cls, source: Truncated, target: Truncated) -> "CoeffMap":
        """The map var -> var' (e.g. lambda -> epsilon)."""
        return cls(source, target, target.gen())

    def __call__(self, a: CoeffElem) -> CoeffElem:
        return coeff_map_apply(self, a)

    def power_images(self) -> list:
        """Images of 1, v, v^2, ... v^(order-1)."""
        out = [self.target.one()]
        for _ in range(1, self.source.order):
            out.append(out[-1] * self.image)
        return out

    def compose(self, first: "CoeffMap") -> "CoeffMap":
        """self o first."""
        if first.target != self.source:
            raise AlgebraError("maps are not composable")
        return CoeffMap(first.source, self.target, self(first.image))

    def is_identity(self) -> bool:
        return self.source == self.target and self.image == self.target.gen()


def coeff_map_apply(pi: CoeffMap, a: CoeffElem) -> CoeffElem:
    if a.owner != pi.source:
        raise AlgebraError("element does not belong to the map's source")
    out = pi.target.zero()
    for c, img in zip(a.coeffs, pi.power_images()):
        if c:
            out = out + img * c
    return out


def _rank_mod_p(rows: list, p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _image_rank(pi: CoeffMap) -> int:
    return _rank_mod_p([img.coeffs for img in pi.power_images()], pi.source.p)


def is_surjective(pi: CoeffMap) -> bool:
    return _image_rank(pi) == pi.target.dim


def kernel_dimension(pi: CoeffMap) -> int:
    return pi.source.dim - _image_rank(pi)


def is_small_extension(pi: CoeffMap) -> bool:
    """True iff pi is surjective with a one-dimensional kernel."""
    if not is_surjective(pi):
        raise AlgebraError("small-extension test needs a surjective map")
    return kernel_dimension(pi) == 1


def kernel_order(pi: CoeffMap) -> int:
    """Smallest k with v^k in ker(pi); equals source.order when the kernel is 0.

    For maps with pi(v) of valuation 1 the kernel is exactly the ideal (v^k).
    """
    for k, img in enumerate(pi.power_images()):
        if img.is_zero():
            return k
    return pi.source.order


@dataclass(frozen=True)
class PairElem:
    owner: "FiberProduct"
    left: CoeffElem
    right: CoeffElem

    def __add__(self, other: "PairElem") -> "PairElem":
        if other.owner != self.owner:
            raise AlgebraError("owner mismatch")
        return self.owner.pair(self.left + other.left, self.right + other.right)

    def __mul__(self, other: "PairElem") -> "PairElem":
        if other.owner != self.owner:
            raise AlgebraError("owner mismatch")
        return self.owner.pair(self.left * other.left, self.right * other.right)

    def __neg__(self):
        return self.owner.pair(-self.left, -self.right)

    def __str__(self):
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class FiberProduct:
    """left x_base right, elements stored as compatible pairs."""

    left: Truncated
    right: Truncated
    base: Truncated
    proj_left: CoeffMap
    proj_right: CoeffMap

    def pair(self, left: CoeffElem, right: CoeffElem) -> PairElem:
        if left.owner != self.left or right.owner != self.right:
            raise AlgebraError("pair components belong to the wrong algebras")
        if self.proj_left(left) != self.proj_right(right):
            raise AlgebraError(
                f"incompatible pair ({left}, {right}): images differ in {self.base}"
            )
        return PairElem(self, left, right)

    def one(self) -> PairElem:
        return self.pair(self.left.one(), self.right.one())

    def dim(self) -> int:
        # dim(A'' x_A A') = dim A'' + dim A' - dim A for surjective projections
        return self.left.dim + self.right.dim - self.base.dim


def fiber_product(
    left: Truncated, right: Truncated, base: Truncated, proj_left: CoeffMap, proj_right: CoeffMap
) -> FiberProduct:
    for name, pi, src in (("left", proj_left, left), ("right", proj_right, right)):
        if pi.source != src or pi.target != base:
            raise AlgebraError(f"{name} projection has the wrong source or target")
        if not is_surjective(pi):
            raise AlgebraError(f"{name} projection is not surjective")
    return FiberProduct(left, right, base, proj_left, proj_right)
