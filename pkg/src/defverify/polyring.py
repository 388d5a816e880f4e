"""Sparse Laurent polynomials over a scalar tower F_p -> F_p[symbols] -> (optional) k[v]/(v^n).

A polynomial is stored flat: every term key is one tuple

    (exponents of the Laurent variables..., exponents of the symbols..., power of v)

mapped to a nonzero integer mod p.  Symbols and ``v`` never carry negative
exponents; Laurent variables may.  Keys with ``v``-power >= n are dropped on
construction, which is how truncation is enforced.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .scalars import AlgebraError, CoeffElem, CoeffMap, PrimeField, Truncated
from . import syntax

__all__ = [
    "ScalarTower",
    "LaurentPoly",
    "RewriteRule",
    "NotAUnit",
    "poly_arith",
    "normal_form",
    "invert_unit",
    "frobenius_power",
    "naive_power",
    "coefficient_at",
    "parse_poly",
]


class NotAUnit(AlgebraError):
    """The polynomial is not (invertible monomial) * (1 + nilpotent)."""


@dataclass(frozen=True)
class ScalarTower:
    p: int
    symbols: tuple = ()
    coeff: Optional[Truncated] = None

    def __post_init__(self):
        PrimeField(self.p)
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(set(self.symbols)) != len(self.symbols):
            raise AlgebraError("symbols must be distinct")
        if self.coeff is not None and self.coeff.p != self.p:
            raise AlgebraError("coefficient algebra has a different characteristic")

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def order(self) -> int:
        """Nilpotency order of the coefficient variable (1 when there is none)."""
        return self.coeff.order if self.coeff else 1

    @property
    def cvar(self) -> Optional[str]:
        return self.coeff.var if self.coeff else None

    def with_symbols(self, symbols: Iterable[str]) -> "ScalarTower":
        extra = [s for s in symbols if s not in self.symbols]
        return ScalarTower(self.p, self.symbols + tuple(extra), self.coeff)

    def with_coeff(self, coeff: Optional[Truncated]) -> "ScalarTower":
        return ScalarTower(self.p, self.symbols, coeff)


def _tadd(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    __slots__ = ("tower", "vars", "terms", "_nv", "_ns", "_hash")

    def __init__(self, tower: ScalarTower, vars: Sequence[str], terms: Mapping[tuple, int] = None):
        self.tower = tower
        self.vars = tuple(vars)
        self._nv = len(self.vars)
        self._ns = len(tower.symbols)
        p, n = tower.p, tower.order
        clean = {}
        for k, c in (terms or {}).items():
            if k[-1] >= n:
                continue
            c = c % p if p else c
            if c:
                clean[k] = c
        self.terms = clean
        self._hash = None

    # construction ------------------------------------------------------

    @classmethod
    def _raw(cls, tower, vars, terms) -> "LaurentPoly":
        """Build from terms that are already reduced; skips normalisation."""
        obj = cls.__new__(cls)
        obj.tower = tower
        obj.vars = vars
        obj._nv = len(vars)
        obj._ns = len(tower.symbols)
        obj.terms = terms
        obj._hash = None
        return obj

    def _key(self, vexp=None, sexp=None, cpow=0) -> tuple:
        vexp = tuple(vexp) if vexp is not None else (0,) * self._nv
        sexp = tuple(sexp) if sexp is not None else (0,) * self._ns
        return vexp + sexp + (cpow,)

    @classmethod
    def zero(cls, tower: ScalarTower, vars: Sequence[str] = ()) -> "LaurentPoly":
        return cls(tower, vars)

    @classmethod
    def const(cls, tower: ScalarTower, vars: Sequence[str], c: int) -> "LaurentPoly":
        z = cls(tower, vars)
        return cls(tower, vars, {z._key(): c})

    @classmethod
    def monomial(
        cls, tower: ScalarTower, vars: Sequence[str], exps: Sequence[int], c: int = 1
    ) -> "LaurentPoly":
        z = cls(tower, vars)
        if len(exps) != len(z.vars):
            raise AlgebraError("exponent vector has the wrong length")
        return cls(tower, vars, {z._key(exps): c})

    @classmethod
    def gen(cls, tower: ScalarTower, vars: Sequence[str], name: str) -> "LaurentPoly":
        """A Laurent variable, a symbol, or the coefficient variable, by name."""
        z = cls(tower, vars)
        if name in z.vars:
            e = [0] * z._nv
            e[z.vars.index(name)] = 1
            return cls(tower, vars, {z._key(e): 1})
        if name in tower.symbols:
            s = [0] * z._ns
            s[tower.symbols.index(name)] = 1
            return cls(tower, vars, {z._key(sexp=s): 1})
        if name == tower.cvar:
            return cls(tower, vars, {z._key(cpow=1): 1})
        raise AlgebraError(f"undeclared name {name!r}")

    @classmethod
    def from_coeff(cls, tower: ScalarTower, vars: Sequence[str], a: CoeffElem) -> "LaurentPoly":
        if tower.coeff != a.owner:
            raise AlgebraError("coefficient element from a different algebra")
        z = cls(tower, vars)
        return cls(tower, vars, {z._key(cpow=i): c for i, c in enumerate(a.coeffs) if c})

    def _like(self, terms) -> "LaurentPoly":
        return LaurentPoly(self.tower, self.vars, terms)

    # structure -----------------------------------------------------------

    def split(self, key: tuple):
        nv, ns = self._nv, self._ns
        return key[:nv], key[nv : nv + ns], key[-1]

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def support(self) -> list:
        """Distinct Laurent exponent vectors, sorted."""
        return sorted({k[: self._nv] for k in self.terms})

    def lattice_terms(self) -> dict:
        """Group by Laurent exponent: {exponent: scalar polynomial (vars=())}."""
        nv = self._nv
        groups: dict = {}
        for k, c in self.terms.items():
            groups.setdefault(k[:nv], {})[k[nv:]] = c
        return {e: LaurentPoly._raw(self.tower, (), t) for e, t in sorted(groups.items())}

    def is_scalar(self) -> bool:
        return all(not any(k[: self._nv]) for k in self.terms)

    def symbol_free(self) -> bool:
        nv, ns = self._nv, self._ns
        return all(not any(k[nv : nv + ns]) for k in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(self._key(), 0)

    def reduce_nilpotent(self) -> "LaurentPoly":
        """Image modulo the coefficient variable (v -> 0)."""
        return LaurentPoly._raw(
            self.tower, self.vars, {k: c for k, c in self.terms.items() if k[-1] == 0}
        )

    def max_symbol_degree(self) -> int:
        nv, ns = self._nv, self._ns
        return max((sum(k[nv : nv + ns]) for k in self.terms), default=0)

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.tower != self.tower or other.vars != self.vars:
                raise AlgebraError(
                    f"tower/vars mismatch: {self.vars}/{self.tower} vs {other.vars}/{other.tower}"
                )
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.tower, self.vars, other)
        if isinstance(other, CoeffElem):
            return LaurentPoly.from_coeff(self.tower, self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self.tower.order
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                if k1[-1] + k2[-1] >= n:
                    continue
                k = _tadd(k1, k2)
                out[k] = out.get(k, 0) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return invert_unit(self) ** (-e)
        return frobenius_power(self, e) if e else LaurentPoly.const(self.tower, self.vars, 1)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.tower, self.vars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.tower == other.tower and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.tower, self.vars, frozenset(self.terms.items())))
        return self._hash

    # changes of ring -------------------------------------------------------

    def embed(self, vars: Sequence[str] = None, tower: ScalarTower = None) -> "LaurentPoly":
        """Re-express in a ring with more variables and/or symbols (same coefficients)."""
        vars = tuple(vars) if vars is not None else self.vars
        tower = tower or self.tower
        if tower.coeff != self.tower.coeff or tower.p != self.tower.p:
            raise AlgebraError("embed cannot change the coefficient algebra")
        vidx = []
        for v in self.vars:
            if v not in vars:
                raise AlgebraError(f"variable {v!r} missing from the target ring")
            vidx.append(vars.index(v))
        sidx = []
        for s in self.tower.symbols:
            if s not in tower.symbols:
                raise AlgebraError(f"symbol {s!r} missing from the target tower")
            sidx.append(tower.symbols.index(s))
        nv, ns = len(vars), len(tower.symbols)
        out = {}
        for k, c in self.terms.items():
            ve, se, cp = self.split(k)
            nve = [0] * nv
            for i, e in zip(vidx, ve):
                nve[i] = e
            nse = [0] * ns
            for i, e in zip(sidx, se):
                nse[i] = e
            out[tuple(nve) + tuple(nse) + (cp,)] = c
        return LaurentPoly._raw(tower, vars, out)

    def map_coefficients(self, pi: CoeffMap, tower: ScalarTower = None) -> "LaurentPoly":
        """Apply a coefficient-algebra map v -> pi(v) to every coefficient."""
        if self.tower.coeff != pi.source:
            raise AlgebraError("coefficient map source does not match the tower")
        tower = tower or self.tower.with_coeff(pi.target)
        imgs = pi.power_images()
        out: dict = {}
        for k, c in self.terms.items():
            base = k[:-1]
            for j, a in enumerate(imgs[k[-1]].coeffs):
                if a:
                    kk = base + (j,)
                    out[kk] = out.get(kk, 0) + c * a
        return LaurentPoly(tower, self.vars, out)

    def substitute(
        self,
        images: Mapping[str, "LaurentPoly"],
        target: "LaurentPoly" = None,
    ) -> "LaurentPoly":
        """Ring-map evaluation.

        ``images`` maps Laurent variable names (and optionally symbol names or
        the coefficient variable) to polynomials in a common target ring.  Names
        without an image are carried over unchanged and must exist in the target.
        ``target`` is any polynomial of the target ring (used when ``images`` is
        empty).
        """
        if target is None:
            if not images:
                return self
            target = next(iter(images.values()))
        tt, tv = target.tower, target.vars
        one = LaurentPoly.const(tt, tv, 1)
        names = list(self.vars) + list(self.tower.symbols)
        gens = []
        for name in names:
            gens.append(images[name] if name in images else LaurentPoly.gen(tt, tv, name))
        cvar = self.tower.cvar
        if cvar is not None:
            if cvar in images:
                cgen = images[cvar]
            elif tt.cvar == cvar:
                cgen = LaurentPoly.gen(tt, tv, cvar)
            else:
                raise AlgebraError(f"no image for coefficient variable {cvar!r}")
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                g = gens[i] if i >= 0 else cgen
                cache[key] = g ** e if e >= 0 else invert_unit(g) ** (-e)
            return cache[key]

        acc: dict = {}
        for k, c in self.terms.items():
            term = one * c
            for i, e in enumerate(k[:-1]):
                if e:
                    term = term * power(i, e)
            if k[-1]:
                term = term * power(-1, k[-1])
            for kk, cc in term.terms.items():
                acc[kk] = acc.get(kk, 0) + cc
        return LaurentPoly(tt, tv, acc)

    def specialize(self, values: Mapping[str, int]) -> "LaurentPoly":
        """Set Laurent variables and/or symbols to integer constants and drop them
        from the ring.  Setting a variable to 0 needs nonnegative exponents."""
        vmask = [name in values for name in self.vars]
        smask = [name in values for name in self.tower.symbols]
        tower = ScalarTower(
            self.tower.p,
            tuple(s for s, m in zip(self.tower.symbols, smask) if not m),
            self.tower.coeff,
        )
        vars = tuple(v for v, m in zip(self.vars, vmask) if not m)
        out: dict = {}
        for k, c in self.terms.items():
            ve, se, cp = self.split(k)
            coef = c
            for name, e, m in zip(self.vars + self.tower.symbols, ve + se, vmask + smask):
                if not m or not e:
                    continue
                val = values[name]
                if e < 0:
                    if val not in (1, -1):
                        raise AlgebraError(f"cannot set {name}={val} in a term with {name}^{e}")
                    coef *= val ** (-e)
                else:
                    coef *= val ** e
            if coef:
                kk = tuple(e for e, m in zip(ve, vmask) if not m)
                kk += tuple(e for e, m in zip(se, smask) if not m) + (cp,)
                out[kk] = out.get(kk, 0) + coef
        return LaurentPoly(tower, vars, out)

    def rename_symbols(self, renames: Mapping[str, str]) -> "LaurentPoly":
        syms = tuple(renames.get(s, s) for s in self.tower.symbols)
        tower = ScalarTower(self.tower.p, syms, self.tower.coeff)
        return LaurentPoly._raw(tower, self.vars, dict(self.terms))

    # printing --------------------------------------------------------------

    def _mono_str(self, key) -> str:
        ve, se, cp = self.split(key)
        parts = []

        def fmt(name, e):
            return name if e == 1 else f"{name}^{e}"

        for name, e in zip(self.tower.symbols, se):
            if e:
                parts.append(fmt(name, e))
        if cp:
            parts.append(fmt(self.tower.cvar, cp))
        for name, e in zip(self.vars, ve):
            if e:
                parts.append(fmt(name, e))
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.tower.field
        out = []
        for k, c in self.sorted_terms():
            c = f.signed(c)
            mono = self._mono_str(k)
            neg = c < 0
            a = abs(c)
            body = mono if (mono and a == 1) else (f"{a}*{mono}" if mono else str(a))
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"LaurentPoly({self})"


# --- operations ---------------------------------------------------------------


def poly_arith(f: LaurentPoly, g: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise AlgebraError(f"unknown operation {op!r}")


def coefficient_at(f: LaurentPoly, exponent: Sequence[int]) -> LaurentPoly:
    """The scalar (a polynomial with no Laurent variables) at a Laurent exponent."""
    exponent = tuple(exponent)
    nv = len(f.vars)
    t = {k[nv:]: c for k, c in f.terms.items() if k[:nv] == exponent}
    return LaurentPoly._raw(f.tower, (), t)


@dataclass(frozen=True)
class RewriteRule:
    """var^power -> monomial ``rhs`` (an exponent vector over the same variables)."""

    var: str
    power: int
    rhs: tuple

    def __post_init__(self):
        if self.power < 1:
            raise AlgebraError("rule power must be positive")

    def check(self, vars: Sequence[str]):
        if self.var not in vars or len(self.rhs) != len(vars):
            raise AlgebraError("rule does not match the ring variables")
        if self.rhs[vars.index(self.var)] != 0:
            raise AlgebraError("rule right-hand side must not involve the rewritten variable")

    def relation(self, tower: ScalarTower, vars: Sequence[str]) -> LaurentPoly:
        """lhs - rhs as a polynomial (e.g. y^p - x*z)."""
        self.check(vars)
        lhs = [0] * len(vars)
        lhs[list(vars).index(self.var)] = self.power
        return LaurentPoly.monomial(tower, vars, lhs) - LaurentPoly.monomial(tower, vars, self.rhs)


def normal_form(f: LaurentPoly, rule: RewriteRule) -> LaurentPoly:
    """Rewrite var^power -> rhs until every term has var-exponent < power."""
    rule.check(f.vars)
    i = f.vars.index(rule.var)
    nv = len(f.vars)
    out: dict = {}
    for k, c in f.terms.items():
        e = k[i]
        if e < 0:
            raise AlgebraError(f"negative exponent of {rule.var} cannot be rewritten")
        q, r = divmod(e, rule.power)
        ve = list(k[:nv])
        ve[i] = r
        if q:
            ve = [a + q * b for a, b in zip(ve, rule.rhs)]
        kk = tuple(ve) + k[nv:]
        out[kk] = out.get(kk, 0) + c
    return LaurentPoly(f.tower, f.vars, out)


def invert_unit(u: LaurentPoly) -> LaurentPoly:
    """Inverse of u = c*m*(1 + N) with m a Laurent monomial, c in F_p^* and N nilpotent.

    The inverse is c^-1 m^-1 * sum_{k<n} (-N)^k; the series stops at the
    nilpotency order n of the coefficient variable.
    """
    red = u.reduce_nilpotent()
    if len(red.terms) != 1:
        raise NotAUnit(f"reduction {red} is not a single monomial")
    (key, c), = red.terms.items()
    ve, se, _ = u.split(key)
    if any(se):
        raise NotAUnit(f"leading coefficient of {u} involves symbols")
    f = u.tower.field
    try:
        cinv = f.inv(c)
    except (ZeroDivisionError, AlgebraError) as exc:
        raise NotAUnit(str(exc)) from exc
    minv = LaurentPoly.monomial(u.tower, u.vars, [-e for e in ve], cinv)
    neg_n = 1 - u * minv  # = -N
    result = LaurentPoly.const(u.tower, u.vars, 1)
    power = result
    for _ in range(1, u.tower.order):
        power = power * neg_n
        if power.is_zero():
            break
        result = result + power
    return result * minv


def naive_power(f: LaurentPoly, e: int) -> LaurentPoly:
    """Repeated multiplication; kept as the reference for frobenius_power."""
    out = LaurentPoly.const(f.tower, f.vars, 1)
    for _ in range(e):
        out = out * f
    return out


def frobenius_power(f: LaurentPoly, e: int) -> LaurentPoly:
    """f^e, using (sum m_i)^p = sum m_i^p whenever p divides e."""
    if e < 0:
        raise AlgebraError("frobenius_power needs a nonnegative exponent")
    p = f.tower.p
    if e == 0:
        return LaurentPoly.const(f.tower, f.vars, 1)
    if p and e % p == 0:
        n = f.tower.order
        out: dict = {}
        for k, c in f.terms.items():
            if k[-1] * p >= n:
                continue
            kk = tuple(a * p for a in k)
            out[kk] = out.get(kk, 0) + pow(c, p, p)
        return frobenius_power(LaurentPoly(f.tower, f.vars, out), e // p)
    result = LaurentPoly.const(f.tower, f.vars, 1)
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def parse_poly(text: str, tower: ScalarTower, vars: Sequence[str]) -> LaurentPoly:
    """Parse ``text`` in the shared expression syntax into the given ring."""
    return eval_expr(syntax.parse_expr(text), tower, vars)


def eval_expr(e, tower: ScalarTower, vars: Sequence[str]) -> LaurentPoly:
    if isinstance(e, syntax.Num):
        return LaurentPoly.const(tower, vars, e.value)
    if isinstance(e, syntax.Name):
        return LaurentPoly.gen(tower, vars, e.name)
    if isinstance(e, syntax.Pow):
        return eval_expr(e.base, tower, vars) ** e.exp
    if isinstance(e, syntax.Mul):
        out = LaurentPoly.const(tower, vars, 1)
        for f in e.factors:
            out = out * eval_expr(f, tower, vars)
        return out
    if isinstance(e, syntax.Neg):
        return -eval_expr(e.operand, tower, vars)
    if isinstance(e, syntax.Add):
        out = LaurentPoly.zero(tower, vars)
        for sign, t in e.terms:
            v = eval_expr(t, tower, vars)
            out = out + v if sign > 0 else out - v
        return out
    raise TypeError(f"not an expression: {e!r}")
