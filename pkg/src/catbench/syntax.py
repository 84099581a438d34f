"""Abstract syntax, values, numerals, substitution, and the `.cat` text format.

Terms and types share one grammar: there is no syntactic distinction between
them, typehood being a semantic property.  Numerals are kept in a canonical
arbitrary-precision form (`Num`), so building the value `suc(n)` from a
numeral value is not an evaluation step.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterator, Mapping, Optional


class SubstitutionError(ValueError):
    """Raised when a substitution image is not a value."""


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

# Binder layout per constructor: maps field name of the body to the field
# names of the variables bound in it.
_BINDERS: dict[str, dict[str, tuple[str, ...]]] = {
    "Fun": {"body": ("fname", "aname")},
    "Ifz": {"succ": ("var",)},
    "Sigma": {"snd": ("var",)},
    "Subset": {"body": ("var",)},
    "Pi": {"cod": ("var",)},
    "Funtime": {"cod": ("var",), "cost": ("var",)},
    "Let": {"body": ("var",)},
}


@dataclass(frozen=True, eq=False)
class Expr:
    """Base class of all expressions.  Equality is up to alpha."""

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Expr):
            return NotImplemented
        return alpha_eq(self, other)

    def __ne__(self, other: object) -> bool:
        if not isinstance(other, Expr):
            return NotImplemented
        return not alpha_eq(self, other)

    def __hash__(self) -> int:
        return hash(_alpha_key(self, {}, 0))

    def __str__(self) -> str:
        return print_expr(self)

    def __repr__(self) -> str:
        return f"<{print_expr(self)}>"


@dataclass(frozen=True, eq=False)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=False)
class Funtime(Expr):
    """Dependent function type with a cost bound: (funtime a A B P)."""

    var: str
    dom: Expr
    cod: Expr
    cost: Expr


@dataclass(frozen=True, eq=False)
class Pi(Expr):
    var: str
    dom: Expr
    cod: Expr


@dataclass(frozen=True, eq=False)
class Fun(Expr):
    """Recursive function value: `fname` is the self-reference, `aname` the argument."""

    fname: str
    aname: str
    body: Expr


@dataclass(frozen=True, eq=False)
class Ap(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True, eq=False)
class Nat(Expr):
    pass


@dataclass(frozen=True, eq=False)
class Num(Expr):
    """Canonical numeral; Num(0) is `zero` and Num(k+1) is `suc(Num(k))`."""

    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("numerals are naturals")


@dataclass(frozen=True, eq=False)
class Suc(Expr):
    """Successor of a non-numeral expression; use `suc()` to construct."""

    arg: Expr

    def __post_init__(self) -> None:
        if isinstance(self.arg, Num):
            raise ValueError("suc of a numeral must be built with suc()")


@dataclass(frozen=True, eq=False)
class Ifz(Expr):
    scrut: Expr
    zero: Expr
    var: str
    succ: Expr


@dataclass(frozen=True, eq=False)
class Sigma(Expr):
    var: str
    fst: Expr
    snd: Expr


@dataclass(frozen=True, eq=False)
class Pair(Expr):
    fst: Expr
    snd: Expr


@dataclass(frozen=True, eq=False)
class Fst(Expr):
    arg: Expr


@dataclass(frozen=True, eq=False)
class Snd(Expr):
    arg: Expr


@dataclass(frozen=True, eq=False)
class Eq(Expr):
    ty: Expr
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, eq=False)
class Triv(Expr):
    pass


@dataclass(frozen=True, eq=False)
class Subset(Expr):
    var: str
    dom: Expr
    body: Expr


@dataclass(frozen=True, eq=False)
class Let(Expr):
    bound: Expr
    var: str
    body: Expr


@dataclass(frozen=True, eq=False)
class Univ(Expr):
    level: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("universe levels are naturals")


@dataclass(frozen=True, eq=False)
class Rel2(Expr):
    rel: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, eq=False)
class Rel3(Expr):
    rel: str
    a: Expr
    b: Expr
    c: Expr


@dataclass(frozen=True, eq=False)
class Cff1(Expr):
    """Foreign-function call, one step with no word guard."""

    fn: str
    arg: Expr


@dataclass(frozen=True, eq=False)
class Cff2(Expr):
    fn: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, eq=False)
class Op(Expr):
    """Word-guarded unary machine primitive."""

    fn: str
    arg: Expr


@dataclass(frozen=True, eq=False)
class Arith(Expr):
    """Word-guarded binary machine primitive."""

    fn: str
    lhs: Expr
    rhs: Expr


NAT = Nat()
TRIV = Triv()
ZERO = Num(0)

Binding = Mapping[str, Expr]


def suc(e: Expr) -> Expr:
    """Successor with numeral canonicalization (value formation is free)."""
    if isinstance(e, Num):
        return Num(e.value + 1)
    return Suc(e)


def num(k: int) -> Num:
    return Num(k)


def as_numeral(e: Expr) -> Optional[int]:
    """The k with e = Num(k), or None for anything else."""
    return e.value if isinstance(e, Num) else None


def _children(e: Expr) -> Iterator[tuple[str, Expr]]:
    for f in fields(e):
        v = getattr(e, f.name)
        if isinstance(v, Expr):
            yield f.name, v


def _rebuild(e: Expr, repl: dict[str, Expr]) -> Expr:
    kw = {f.name: repl.get(f.name, getattr(e, f.name)) for f in fields(e)}
    return type(e)(**kw)


def _bound_in(e: Expr, field_name: str) -> tuple[str, ...]:
    spec = _BINDERS.get(type(e).__name__, {})
    names = spec.get(field_name, ())
    return tuple(getattr(e, n) for n in names)


def is_value(e: Expr) -> bool:
    """The `final` predicate; free variables count as values."""
    match e:
        case Var() | Fun() | Nat() | Num() | Triv() | Univ():
            return True
        case Funtime() | Pi() | Sigma() | Subset() | Eq() | Rel2() | Rel3():
            return True
        case Suc(arg):
            return is_value(arg)
        case Pair(a, b):
            return is_value(a) and is_value(b)
        case _:
            return False


def free_vars(e: Expr) -> set[str]:
    match e:
        case Var(name):
            return {name}
        case _:
            out: set[str] = set()
            for fname, child in _children(e):
                out |= free_vars(child) - set(_bound_in(e, fname))
            return out


def fresh_name(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}_{i}" in avoid:
        i += 1
    return f"{base}_{i}"


def subst(e: Expr, binding: Binding) -> Expr:
    """Simultaneous capture-avoiding substitution; images must be values."""
    for k, v in binding.items():
        if not is_value(v):
            raise SubstitutionError(f"image for {k} is not a value: {v}")
    return _subst(e, dict(binding))


def _subst(e: Expr, binding: dict[str, Expr]) -> Expr:
    if not binding:
        return e
    if isinstance(e, Var):
        return binding.get(e.name, e)
    if isinstance(e, Suc):
        # Renormalize: a substituted argument may become a numeral.
        return suc(_subst(e.arg, binding))
    spec = _BINDERS.get(type(e).__name__)
    if not spec:
        repl = {f: _subst(c, binding) for f, c in _children(e)}
        return _rebuild(e, repl)

    # Binder nodes need shadowing and capture handling.  All binder names of
    # the node are renamed consistently since a constructor like Funtime
    # scopes one variable over two fields.
    binder_fields = {n for body in spec for n in spec[body]}
    bound: list[str] = []
    for bf in binder_fields:
        nm = getattr(e, bf)
        if nm not in bound:
            bound.append(nm)
    live = {k: v for k, v in binding.items() if k not in bound}
    img_fvs: set[str] = set()
    for v in live.values():
        img_fvs |= free_vars(v)
    avoid = img_fvs | set(live) | set(bound)
    for _, child in _children(e):
        avoid |= free_vars(child)
    new_names: dict[str, str] = {}
    for b in bound:
        if b in img_fvs:
            nb = fresh_name(b, avoid)
            avoid.add(nb)
            new_names[b] = nb
    rename = {old: Var(new) for old, new in new_names.items()}

    kw = {}
    for f in fields(e):
        v = getattr(e, f.name)
        if f.name in binder_fields:
            kw[f.name] = new_names.get(v, v)
        elif isinstance(v, Expr):
            if f.name in spec:  # body field: binders shadow, renames apply
                inner = dict(live)
                inner.update(rename)
                kw[f.name] = _subst(v, inner) if inner else v
            else:  # outside binder scope: full binding applies
                kw[f.name] = _subst(v, binding)
        else:
            kw[f.name] = v
    return type(e)(**kw)


def _alpha_key(e: Expr, env: dict[str, int], depth: int):
    match e:
        case Var(name):
            return ("var", env.get(name, name))
        case Num(k):
            return ("num", k)
        case _:
            tag = type(e).__name__
            spec = _BINDERS.get(tag, {})
            parts: list = [tag]
            for f in fields(e):
                v = getattr(e, f.name)
                if isinstance(v, Expr):
                    if f.name in spec:
                        inner = dict(env)
                        d = depth
                        for n in spec[f.name]:
                            inner[getattr(e, n)] = d
                            d += 1
                        parts.append(_alpha_key(v, inner, d))
                    else:
                        parts.append(_alpha_key(v, env, depth))
                elif isinstance(v, str):
                    binder_fields = {n for k in spec for n in spec[k]}
                    if f.name not in binder_fields:
                        parts.append(v)  # registry name
                elif isinstance(v, int):
                    parts.append(v)
            return tuple(parts)


def alpha_eq(a: Expr, b: Expr) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha_key(a, {}, 0) == _alpha_key(b, {}, 0)


def parin(e1: Expr, e2: Expr, a: str, b: str, body: Expr) -> Expr:
    """Binary sequencing sugar, defined via unary let-sequencing."""
    avoid = free_vars(body) | free_vars(e1) | free_vars(e2) | {a, b}
    c = fresh_name("c", avoid)
    return Let(
        Pair(e1, e2),
        c,
        Let(Fst(Var(c)), a, Let(Snd(Var(c)), b, body)),
    )


# ---------------------------------------------------------------------------
# Telescopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Telescope:
    """Ordered dependent context: each type may mention only earlier variables."""

    entries: tuple[tuple[str, Expr], ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for v, ty in self.entries:
            if v in seen:
                raise ValueError(f"duplicate telescope variable {v}")
            extra = free_vars(ty) - seen
            if extra:
                raise ValueError(f"type of {v} mentions later/unbound {sorted(extra)}")
            seen.add(v)

    def extend(self, var: str, ty: Expr) -> "Telescope":
        return Telescope(self.entries + ((var, ty),))

    def vars(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.entries)

    def type_of(self, var: str) -> Optional[Expr]:
        for v, ty in self.entries:
            if v == var:
                return ty
        return None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Telescope):
            return NotImplemented
        return self.encode() == other.encode()

    def __hash__(self) -> int:
        return hash(self.encode())

    def encode(self):
        """Comparison key: variable names plus alpha keys of their types."""
        env: dict[str, int] = {}
        parts = []
        for i, (v, ty) in enumerate(self.entries):
            # Internal binders of entry i key at levels >= 10_000 + i, which
            # never collide with earlier telescope variables.
            parts.append((v, _alpha_key(ty, env, 10_000 + i)))
            env[v] = 10_000 + i
        return tuple(parts)


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} (line {line}, col {col})")
        self.line = line
        self.col = col


_KEYWORDS = {
    "fun", "ap", "nat", "zero", "suc", "ifz", "pair", "fst", "snd", "eq",
    "triv", "subset", "let", "univ", "pi", "funtime", "sigma", "rel2",
    "rel3", "cff1", "cff2", "op", "arith", "par",
}

_NAME_ALIASES = {"×": "*", "÷": "/", "≤": "<="}


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":  # comment to end of line
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            toks.append(_Tok(ch, line, col))
            col += 1
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            toks.append(_Tok(text[i:j], line, col))
            col += j - i
            i = j
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def name(self, what: str) -> str:
        tok = self.next()
        t = _NAME_ALIASES.get(tok.text, tok.text)
        if t in _KEYWORDS or t in "()" or t.isdigit():
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.col)
        return t

    def level(self) -> int:
        tok = self.next()
        if not tok.text.isdigit():
            raise ParseError("expected a universe level", tok.line, tok.col)
        return int(tok.text)

    def expr(self) -> Expr:
        tok = self.next()
        if tok.text == ")":
            raise ParseError("unexpected ')'", tok.line, tok.col)
        if tok.text != "(":
            return self.atom(tok)
        head = self.next()
        e = self.form(head)
        close = self.next()
        if close.text != ")":
            raise ParseError(f"expected ')', found {close.text!r}", close.line, close.col)
        return e

    def atom(self, tok: _Tok) -> Expr:
        if tok.text.isdigit():
            return Num(int(tok.text))
        if tok.text == "zero":
            return ZERO
        if tok.text == "nat":
            return NAT
        if tok.text == "triv":
            return TRIV
        if tok.text in _KEYWORDS:
            raise ParseError(f"keyword {tok.text!r} is not an expression", tok.line, tok.col)
        return Var(_NAME_ALIASES.get(tok.text, tok.text))

    def form(self, head: _Tok) -> Expr:
        match head.text:
            case "fun":
                f = self.name("function name")
                a = self.name("argument name")
                return Fun(f, a, self.expr())
            case "ap":
                return Ap(self.expr(), self.expr())
            case "suc":
                return suc(self.expr())
            case "ifz":
                s = self.expr()
                z = self.expr()
                v = self.name("branch variable")
                return Ifz(s, z, v, self.expr())
            case "pair":
                return Pair(self.expr(), self.expr())
            case "fst":
                return Fst(self.expr())
            case "snd":
                return Snd(self.expr())
            case "let":
                bound = self.expr()
                v = self.name("let variable")
                return Let(bound, v, self.expr())
            case "eq":
                return Eq(self.expr(), self.expr(), self.expr())
            case "pi":
                v = self.name("binder")
                return Pi(v, self.expr(), self.expr())
            case "sigma":
                v = self.name("binder")
                return Sigma(v, self.expr(), self.expr())
            case "subset":
                v = self.name("binder")
                return Subset(v, self.expr(), self.expr())
            case "funtime":
                v = self.name("binder")
                return Funtime(v, self.expr(), self.expr(), self.expr())
            case "univ":
                return Univ(self.level())
            case "rel2":
                return Rel2(self.name("relation"), self.expr(), self.expr())
            case "rel3":
                return Rel3(self.name("relation"), self.expr(), self.expr(), self.expr())
            case "cff1":
                return Cff1(self.name("function"), self.expr())
            case "cff2":
                return Cff2(self.name("function"), self.expr(), self.expr())
            case "op":
                return Op(self.name("function"), self.expr())
            case "arith":
                return Arith(self.name("function"), self.expr(), self.expr())
            case "par":
                e1 = self.expr()
                e2 = self.expr()
                a = self.name("binder")
                b = self.name("binder")
                return parin(e1, e2, a, b, self.expr())
            case _:
                raise ParseError(f"unknown form {head.text!r}", head.line, head.col)


def parse(text: str) -> Expr:
    """Parse one expression from `.cat` concrete syntax."""
    p = _Parser(_tokenize(text))
    if p.peek() is None:
        raise ParseError("empty input", 1, 1)
    e = p.expr()
    trailing = p.peek()
    if trailing is not None:
        raise ParseError(f"trailing input {trailing.text!r}", trailing.line, trailing.col)
    return e


def print_expr(e: Expr) -> str:
    """Canonical concrete syntax; parse(print_expr(e)) is alpha-equal to e."""
    match e:
        case Var(name):
            return name
        case Num(k):
            return str(k)
        case Nat():
            return "nat"
        case Triv():
            return "triv"
        case Suc(arg):
            return f"(suc {print_expr(arg)})"
        case Fun(f, a, body):
            return f"(fun {f} {a} {print_expr(body)})"
        case Ap(fn, arg):
            return f"(ap {print_expr(fn)} {print_expr(arg)})"
        case Ifz(s, z, v, sb):
            return f"(ifz {print_expr(s)} {print_expr(z)} {v} {print_expr(sb)})"
        case Pair(a, b):
            return f"(pair {print_expr(a)} {print_expr(b)})"
        case Fst(a):
            return f"(fst {print_expr(a)})"
        case Snd(a):
            return f"(snd {print_expr(a)})"
        case Let(bound, v, body):
            return f"(let {print_expr(bound)} {v} {print_expr(body)})"
        case Eq(ty, l, r):
            return f"(eq {print_expr(ty)} {print_expr(l)} {print_expr(r)})"
        case Pi(v, d, c):
            return f"(pi {v} {print_expr(d)} {print_expr(c)})"
        case Sigma(v, d, c):
            return f"(sigma {v} {print_expr(d)} {print_expr(c)})"
        case Subset(v, d, c):
            return f"(subset {v} {print_expr(d)} {print_expr(c)})"
        case Funtime(v, d, c, p):
            return f"(funtime {v} {print_expr(d)} {print_expr(c)} {print_expr(p)})"
        case Univ(i):
            return f"(univ {i})"
        case Rel2(r, a, b):
            return f"(rel2 {r} {print_expr(a)} {print_expr(b)})"
        case Rel3(r, a, b, c):
            return f"(rel3 {r} {print_expr(a)} {print_expr(b)} {print_expr(c)})"
        case Cff1(f, a):
            return f"(cff1 {f} {print_expr(a)})"
        case Cff2(f, a, b):
            return f"(cff2 {f} {print_expr(a)} {print_expr(b)})"
        case Op(f, a):
            return f"(op {f} {print_expr(a)})"
        case Arith(f, a, b):
            return f"(arith {f} {print_expr(a)} {print_expr(b)})"
        case _:
            raise TypeError(f"unprintable expression {e!r}")
