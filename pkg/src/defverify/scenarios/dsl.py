"""The scenario language: parser, canonical printer and elaboration into rings and maps.

A scenario file is a sequence of statements, one per line (``;`` also ends a
statement, ``#`` starts a comment)::

    scenario NAME key=value ...          # keys: p, window, box, mutate
    p = N
    symbols a b ...
    coeff NAME var=V order=N
    ring NAME [over COEFF] [quotient V^N = MONO] gens MONO MONO ...
    map NAME SRC -> DST V -> EXPR, V -> EXPR ...
    check KIND ARGS [expect=pass|fail]

Check kinds and their arguments::

    well_defined MAP             iso MAP [REFERENCE]       equal MAP MAP
    commutes PATH PATH           (PATH = MAP.MAP... in application order)
    member MONO RING             contains RING RING        separated RING RING
    unit EXPR in RING            identity EXPR = EXPR in RING
    structure RING

Listing both ``g`` and ``g^-1`` among a ring's generators makes ``g``
invertible.  Rings without ``over`` use the first declared coefficient
algebra, or k[eps]/(eps^2) when none is declared.  ``p`` defaults to 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..homs import RingDesc, RingMap
from ..monoid import MonomialAlgebra
from ..polyring import LaurentPoly, RewriteRule, ScalarTower, eval_expr
from ..scalars import AlgebraError, CoeffMap, Truncated, is_prime
from ..syntax import DSLError, Expr, ExprParser, Name, Pow, describe_token, show, tokenize
from .common import MUTATIONS

__all__ = [
    "Src",
    "ScenarioDecl",
    "PrimeDecl",
    "SymbolsDecl",
    "CoeffDecl",
    "RingDecl",
    "MapDecl",
    "CheckDecl",
    "ScenarioSpec",
    "Model",
    "CHECK_KINDS",
    "BUILTIN",
    "parse_scenario",
    "print_scenario",
    "elaborate",
]

BUILTIN = ("curve", "surface")
SCENARIO_KEYS = ("p", "window", "box", "mutate")
DEFAULT_P = 2

# argument shapes: "map", "map?", "ring", "path", "expr", and literal keywords
CHECK_KINDS = {
    "well_defined": ("map",),
    "iso": ("map", "map?"),
    "equal": ("map", "map"),
    "commutes": ("path", "path"),
    "member": ("expr", "ring"),
    "contains": ("ring", "ring"),
    "separated": ("ring", "ring"),
    "unit": ("expr", "in", "ring"),
    "identity": ("expr", "=", "expr", "in", "ring"),
    "structure": ("ring",),
}


@dataclass(frozen=True)
class Src:
    """An expression together with the positions of the names it mentions."""

    expr: Expr
    refs: tuple = field(default=(), compare=False, repr=False)  # ((name, line, col), ...)
    line: int = field(default=0, compare=False, repr=False)
    col: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class ScenarioDecl:
    name: str
    params: tuple  # ((key, int | str), ...)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PrimeDecl:
    value: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SymbolsDecl:
    names: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CoeffDecl:
    name: str
    var: str
    order: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RingDecl:
    name: str
    over: Optional[str]
    quotient: Optional[tuple]  # (Src, Src)
    gens: tuple  # (Src, ...)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MapDecl:
    name: str
    src: str
    dst: str
    images: tuple  # ((var, Src), ...)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CheckDecl:
    kind: str
    args: tuple  # str (a name), tuple of str (a path) or Src
    expect: Optional[str] = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Statement = Union[ScenarioDecl, PrimeDecl, SymbolsDecl, CoeffDecl, RingDecl, MapDecl, CheckDecl]


@dataclass(frozen=True)
class ScenarioSpec:
    statements: tuple

    def _header(self) -> Optional[ScenarioDecl]:
        return next((s for s in self.statements if isinstance(s, ScenarioDecl)), None)

    @property
    def name(self) -> str:
        h = self._header()
        return h.name if h else "custom"

    @property
    def params(self) -> dict:
        h = self._header()
        return dict(h.params) if h else {}

    @property
    def p(self) -> int:
        for s in self.statements:
            if isinstance(s, PrimeDecl):
                return s.value
        return self.params.get("p", DEFAULT_P)

    @property
    def window(self) -> Optional[int]:
        return self.params.get("window")

    @property
    def box(self) -> Optional[int]:
        return self.params.get("box")

    @property
    def mutate(self) -> Optional[str]:
        return self.params.get("mutate")

    @property
    def builtin(self) -> bool:
        return self.name in BUILTIN

    @property
    def checks(self) -> list:
        return [s for s in self.statements if isinstance(s, CheckDecl)]


# --- parsing -------------------------------------------------------------------


class _Parser(ExprParser):
    def src(self) -> Src:
        start = self.pos
        tok = self.tok
        e = self.expr()
        refs = tuple(
            (t.text, t.line, t.col) for t in self.tokens[start:self.pos] if t.kind == "IDENT"
        )
        return Src(e, refs, tok.line, tok.col)

    def ident(self, what: str = "a name") -> str:
        if self.tok.kind != "IDENT":
            self.error(f"expected {what}, got {describe_token(self.tok)}")
        return self.advance().text

    def keyword(self, word: str) -> None:
        if self.tok.kind != "IDENT" or self.tok.text != word:
            self.error(f"expected {word!r}, got {describe_token(self.tok)}")
        self.advance()

    def integer(self) -> int:
        return int(self.expect("INT").text)

    def at_end(self) -> bool:
        return self.tok.kind in ("NEWLINE", "EOF")

    def end_statement(self) -> None:
        if not self.at_end():
            self.error(f"unexpected {describe_token(self.tok)} at end of statement")

    def word(self) -> Union[int, str]:
        """An INT, or a hyphenated word such as flip-psi43-sign."""
        if self.tok.kind == "INT":
            return self.integer()
        parts = [self.ident("a value")]
        while self.at_op("-"):
            self.advance()
            if self.tok.kind not in ("IDENT", "INT"):
                self.error("expected a word after '-'")
            parts.append(self.advance().text)
        return "-".join(parts)

    def key_value(self) -> tuple:
        key = self.ident("a key")
        self.expect("OP", "=")
        return key, self.word()

    # statements ------------------------------------------------------------

    def statement(self) -> Statement:
        head = self.tok
        kw = self.ident("a statement keyword")
        at = dict(line=head.line, col=head.col)
        if kw == "scenario":
            name = self.ident("a scenario name")
            params = []
            while not self.at_end():
                params.append(self.key_value())
            return ScenarioDecl(name, tuple(params), **at)
        if kw == "p":
            self.expect("OP", "=")
            return PrimeDecl(self.integer(), **at)
        if kw == "symbols":
            names = []
            while not self.at_end():
                names.append(self.ident("a symbol name"))
            if not names:
                self.error("symbols needs at least one name")
            return SymbolsDecl(tuple(names), **at)
        if kw == "coeff":
            name = self.ident("a coefficient algebra name")
            kv = {}
            while not self.at_end():
                tok = self.tok
                k, v = self.key_value()
                if k not in ("var", "order") or k in kv:
                    self.error(f"unexpected coeff key {k!r}", tok)
                kv[k] = v
            if "var" not in kv or not isinstance(kv["var"], str) or "-" in kv["var"]:
                self.error("coeff needs var=NAME")
            if not isinstance(kv.get("order"), int):
                self.error("coeff needs order=N")
            return CoeffDecl(name, kv["var"], kv["order"], **at)
        if kw == "ring":
            name = self.ident("a ring name")
            over = quotient = None
            if self.tok.kind == "IDENT" and self.tok.text == "over":
                self.advance()
                over = self.ident("a coefficient algebra name")
            if self.tok.kind == "IDENT" and self.tok.text == "quotient":
                self.advance()
                lhs = self.src()
                self.expect("OP", "=")
                quotient = (lhs, self.src())
            self.keyword("gens")
            gens = []
            while not self.at_end():
                gens.append(self.src())
            if not gens:
                self.error("ring needs at least one generator")
            return RingDecl(name, over, quotient, tuple(gens), **at)
        if kw == "map":
            name = self.ident("a map name")
            src = self.ident("a source ring")
            self.expect("OP", "->")
            dst = self.ident("a target ring")
            images = []
            while not self.at_end():
                if images and self.at_op(","):
                    self.advance()
                var = self.ident("a variable")
                self.expect("OP", "->")
                images.append((var, self.src()))
            return MapDecl(name, src, dst, tuple(images), **at)
        if kw == "check":
            return self.check(at)
        self.error(f"unknown statement {kw!r}", head)

    def check(self, at: dict) -> CheckDecl:
        kind_tok = self.tok
        kind = self.ident("a check kind")
        if kind not in CHECK_KINDS:
            self.error(f"unknown check kind {kind!r}; known: {', '.join(CHECK_KINDS)}", kind_tok)
        args = []
        for shape in CHECK_KINDS[kind]:
            if shape in ("map", "ring"):
                args.append(self.ident(f"a {shape} name"))
            elif shape == "map?":
                if self.tok.kind == "IDENT" and self.tok.text != "expect":
                    args.append(self.ident())
            elif shape == "path":
                path = [self.ident("a map name")]
                while self.at_op("."):
                    self.advance()
                    path.append(self.ident("a map name"))
                args.append(tuple(path))
            elif shape == "expr":
                args.append(self.src())
            elif shape == "=":
                self.expect("OP", "=")
            else:
                self.keyword(shape)
        expect = None
        if self.tok.kind == "IDENT" and self.tok.text == "expect":
            self.advance()
            self.expect("OP", "=")
            tok = self.tok
            expect = self.ident("pass or fail")
            if expect not in ("pass", "fail"):
                self.error("expect must be pass or fail", tok)
        return CheckDecl(kind, tuple(args), expect, **at)

    def scenario(self) -> ScenarioSpec:
        out = []
        while True:
            while self.tok.kind == "NEWLINE":
                self.advance()
            if self.tok.kind == "EOF":
                break
            out.append(self.statement())
            self.end_statement()
        return ScenarioSpec(tuple(out))


def parse_scenario(text: str, validate: bool = True) -> ScenarioSpec:
    """Parse (and, by default, elaborate at the declared p to catch semantic errors)."""
    spec = _Parser(tokenize(text)).scenario()
    if validate:
        elaborate(spec)
    return spec


# --- printing ------------------------------------------------------------------


def _arg_str(a) -> str:
    if isinstance(a, Src):
        return show(a.expr)
    if isinstance(a, tuple):
        return ".".join(a)
    return a


def _check_str(s: CheckDecl) -> str:
    parts = ["check", s.kind]
    args = iter(s.args)
    for shape in CHECK_KINDS[s.kind]:
        if shape in ("in", "="):
            parts.append(shape)
        elif shape == "map?":
            rest = list(args)
            parts.extend(_arg_str(a) for a in rest)
        else:
            parts.append(_arg_str(next(args)))
    if s.expect:
        parts.append(f"expect={s.expect}")
    return " ".join(parts)


def statement_str(s: Statement) -> str:
    if isinstance(s, ScenarioDecl):
        return " ".join(["scenario", s.name] + [f"{k}={v}" for k, v in s.params])
    if isinstance(s, PrimeDecl):
        return f"p={s.value}"
    if isinstance(s, SymbolsDecl):
        return "symbols " + " ".join(s.names)
    if isinstance(s, CoeffDecl):
        return f"coeff {s.name} var={s.var} order={s.order}"
    if isinstance(s, RingDecl):
        parts = ["ring", s.name]
        if s.over:
            parts += ["over", s.over]
        if s.quotient:
            parts += ["quotient", show(s.quotient[0].expr), "=", show(s.quotient[1].expr)]
        parts.append("gens")
        parts += [show(g.expr) for g in s.gens]
        return " ".join(parts)
    if isinstance(s, MapDecl):
        imgs = ", ".join(f"{v} -> {show(e.expr)}" for v, e in s.images)
        return f"map {s.name} {s.src}->{s.dst} {imgs}".rstrip()
    if isinstance(s, CheckDecl):
        return _check_str(s)
    raise TypeError(f"not a statement: {s!r}")


def print_scenario(spec: ScenarioSpec) -> str:
    """Canonical text: one statement per line."""
    return "".join(statement_str(s) + "\n" for s in spec.statements)


# --- elaboration -----------------------------------------------------------------


def _sem(msg: str, at) -> DSLError:
    return DSLError(msg, getattr(at, "line", 0), getattr(at, "col", 0), "semantic")


@dataclass
class Model:
    p: int
    symbols: tuple
    coeffs: dict
    rings: dict
    maps: dict
    default_coeff: Truncated


# a large prime keeps integer coefficients intact while parsing monomials
_MONO_TOWER = ScalarTower(1_000_003)


def _monomial(src: Src, vars: tuple, what: str) -> tuple:
    try:
        f = eval_expr(src.expr, _MONO_TOWER, vars)
    except AlgebraError as exc:
        raise _sem(f"{what}: {exc}", src)
    items = list(f.terms.items())
    if len(items) != 1 or items[0][1] != 1 or any(items[0][0][len(vars):]):
        raise _sem(f"{what} must be a monomial with coefficient 1, got {show(src.expr)}", src)
    return tuple(items[0][0][: len(vars)])


def _check_names(src: Src, allowed: set, where: str) -> None:
    for name, line, col in src.refs:
        if name not in allowed:
            raise DSLError(f"undeclared symbol {name!r} in {where}", line, col, "semantic")


def _rule(lhs: Src, rhs: Src, vars: tuple, at) -> RewriteRule:
    e = lhs.expr
    if isinstance(e, Name):
        var, power = e.name, 1
    elif isinstance(e, Pow) and isinstance(e.base, Name) and e.exp > 0:
        var, power = e.base.name, e.exp
    else:
        raise _sem("quotient left-hand side must be VAR^N", lhs)
    rhs_e = _monomial(rhs, vars, "quotient right-hand side")
    if any(a < 0 for a in rhs_e):
        raise _sem("quotient right-hand side must have non-negative exponents", rhs)
    rule = RewriteRule(var, power, rhs_e)
    try:
        rule.check(vars)
    except AlgebraError as exc:
        raise _sem(f"bad quotient: {exc}", at)
    return rule


def _ring_vars(s: RingDecl, reserved: set) -> tuple:
    seen = []
    srcs = list(s.gens) + (list(s.quotient) if s.quotient else [])
    for src in srcs:
        for name, line, col in src.refs:
            if name in reserved:
                raise DSLError(
                    f"{name!r} is a coefficient variable or symbol, not a variable of ring {s.name}",
                    line, col, "semantic",
                )
            if name not in seen:
                seen.append(name)
    return tuple(seen)


def _declared_p(spec: ScenarioSpec) -> tuple:
    """(p, statement that set it); conflicting declarations are errors."""
    found = []
    for s in spec.statements:
        if isinstance(s, PrimeDecl):
            found.append((s.value, s))
        elif isinstance(s, ScenarioDecl) and "p" in dict(s.params):
            found.append((dict(s.params)["p"], s))
    if not found:
        return DEFAULT_P, None
    p, at = found[0]
    for q, s in found[1:]:
        if q != p:
            raise _sem(f"p declared twice ({p} and {q})", s)
    return p, at


def _check_header(spec: ScenarioSpec) -> None:
    headers = [s for s in spec.statements if isinstance(s, ScenarioDecl)]
    for s in headers[1:]:
        raise _sem("only one scenario statement is allowed", s)
    if not headers:
        return
    h = headers[0]
    seen = set()
    for k, v in h.params:
        if k not in SCENARIO_KEYS:
            raise _sem(f"unknown scenario key {k!r}; known: {', '.join(SCENARIO_KEYS)}", h)
        if k in seen:
            raise _sem(f"scenario key {k!r} given twice", h)
        seen.add(k)
        if k in ("p", "window", "box") and not isinstance(v, int):
            raise _sem(f"{k} must be an integer", h)
        if k == "mutate":
            if v not in MUTATIONS:
                raise _sem(f"unknown mutation {v!r}", h)
            if MUTATIONS[v] != h.name:
                raise _sem(f"mutation {v!r} applies to the {MUTATIONS[v]} scenario", h)
        if k in ("window", "box") and h.name not in BUILTIN:
            raise _sem(f"{k} only applies to the builtin curve and surface scenarios", h)


def elaborate(spec: ScenarioSpec, p: int = None) -> Model:
    """Build every declared ring and map at ``p`` (default: the declared p)."""
    _check_header(spec)
    declared, at = _declared_p(spec)
    if p is None:
        p = declared
    if not is_prime(p):
        raise _sem(f"p must be prime, got {p}", at)
    symbols: list = []
    coeffs: dict = {}
    rings: dict = {}
    maps: dict = {}
    names: set = set()

    def claim(name, s):
        if name in names:
            raise _sem(f"{name!r} is already declared", s)
        names.add(name)

    for s in spec.statements:
        if isinstance(s, SymbolsDecl):
            for n in s.names:
                claim(n, s)
                symbols.append(n)
        elif isinstance(s, CoeffDecl):
            claim(s.name, s)
            if s.order < 1:
                raise _sem("coefficient order must be at least 1", s)
            if s.var in symbols:
                raise _sem(f"coefficient variable {s.var!r} clashes with a symbol", s)
            coeffs[s.name] = Truncated(s.var, s.order, p)
    default = next(iter(coeffs.values()), Truncated("eps", 2, p))
    sym = tuple(symbols)

    def tower_of(c: Truncated) -> ScalarTower:
        return ScalarTower(p, sym, c)

    for s in spec.statements:
        if isinstance(s, RingDecl):
            claim(s.name, s)
            if s.over is not None and s.over not in coeffs:
                raise _sem(f"undeclared coefficient algebra {s.over!r}", s)
            coeff = coeffs[s.over] if s.over else default
            vars = _ring_vars(s, set(sym) | {coeff.var})
            exps = [_monomial(g, vars, f"generator of {s.name}") for g in s.gens]
            uniq = list(dict.fromkeys(exps))
            if any(not any(e) for e in uniq):
                raise _sem("1 is not a generator", s)
            paired = [e for e in uniq if tuple(-a for a in e) in uniq]
            inv = [e for e in paired if _first_pos(e)]
            gens = [e for e in uniq if e not in paired or _first_pos(e)]
            if not gens:
                raise _sem("1 is not a generator", s)
            rule = _rule(*s.quotient, vars, s) if s.quotient else None
            try:
                alg = MonomialAlgebra.of(gens, inv)
                rings[s.name] = RingDesc(s.name, tower_of(coeff), vars, alg, rule)
            except (AlgebraError, ValueError) as exc:
                raise _sem(f"bad ring {s.name}: {exc}", s)
        elif isinstance(s, MapDecl):
            claim(s.name, s)
            for r in (s.src, s.dst):
                if r not in rings:
                    raise _sem(f"undeclared ring {r!r}", s)
            src, dst = rings[s.src], rings[s.dst]
            allowed = set(dst.vars) | set(sym) | {dst.tower.cvar}
            imgs = {}
            for var, e in s.images:
                if var not in src.vars:
                    raise _sem(f"{var!r} is not a variable of ring {s.src}", e)
                if var in imgs:
                    raise _sem(f"two images for {var!r}", e)
                _check_names(e, allowed, f"map {s.name}")
                try:
                    imgs[var] = eval_expr(e.expr, dst.tower, dst.vars)
                except AlgebraError as exc:
                    raise _sem(f"map {s.name}: {exc}", e)
            for v in src.vars:
                if v not in imgs and v not in dst.vars:
                    raise _sem(f"map {s.name} needs an image for {v!r} (not a variable of {s.dst})", s)
            cmap = None
            if src.tower.coeff != dst.tower.coeff:
                a, b = src.tower.coeff, dst.tower.coeff
                if a is None or b is None or a.order < b.order:
                    raise _sem(f"no coefficient map from {a} to {b}", s)
                cmap = CoeffMap.reduction(a, b)
            try:
                maps[s.name] = RingMap.from_var_images(s.name, src, dst, imgs, cmap)
            except AlgebraError as exc:
                raise _sem(str(exc), s)
        elif isinstance(s, CheckDecl):
            _check_refs(s, rings, maps)
    return Model(p, sym, coeffs, rings, maps, default)


def _first_pos(e: tuple) -> bool:
    """Pick one of g, g^-1 as the listed generator: the one whose first nonzero exponent is positive."""
    return next(a for a in e if a) > 0


def _check_refs(s: CheckDecl, rings: dict, maps: dict) -> None:
    args = list(s.args)
    shapes = [sh for sh in CHECK_KINDS[s.kind] if sh not in ("in", "=")]
    ring = None
    for sh, a in zip(shapes, args):
        if sh in ("map", "map?"):
            if a not in maps:
                raise _sem(f"undeclared map {a!r}", s)
        elif sh == "path":
            for m in a:
                if m not in maps:
                    raise _sem(f"undeclared map {m!r}", s)
        elif sh == "ring":
            if a not in rings:
                raise _sem(f"undeclared ring {a!r}", s)
            ring = rings[a]
    if ring is not None:
        allowed = set(ring.vars) | set(ring.tower.symbols) | {ring.tower.cvar}
        if s.kind == "member":
            allowed = set(ring.vars)
        for a in args:
            if isinstance(a, Src):
                _check_names(a, allowed, f"check {s.kind}")


def eval_in(src: Src, ring: RingDesc) -> LaurentPoly:
    return ring.normal(eval_expr(src.expr, ring.tower, ring.vars))


def monomial_in(src: Src, ring: RingDesc) -> tuple:
    return _monomial(src, ring.vars, "member")


__all__ += ["eval_in", "monomial_in", "statement_str"]
