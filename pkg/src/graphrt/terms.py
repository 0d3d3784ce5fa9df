"""Application terms: AST, parser, bracket-abstraction compiler, evaluation.

Core terms are variables, constants and left-associated application.  The
sugared layer adds lambda binders, tuples, projections, numeral literals and
a fixed-point former; desugaring eliminates all of it.  Lambdas compile by
the classic three-rule bracket abstraction (eager constant rule, identity
via s k k, application rule), which realizes the abstraction contract
(lam x. t) A  ==  t[x := A] observationally.  Evaluation is denotational:
constants map to their set denotations and application to the graph-model
operator, so every closed term evaluates (the structure is total).

Grammar:  term := lam | app ;  lam := "\\" ident+ "." term ;
app := atom+ (left assoc) ;  atom := ident | const | natlit | "(" term ")"
| "<" term ("," term)+ ">" | "fix" atom | atom "." ("0"|"1") ;
const in {k, s, p, p0, p1, d, s_N, p_N, 0}; digits desugar to iterated s_N.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from . import model, reset
from .reset import ReSet


class TermError(Exception):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Con:
    cid: str  # one of model.CONSTANT_IDS


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


Term = Var | Con | App


# sugared layer
@dataclass(frozen=True)
class Lam:
    params: tuple[str, ...]
    body: "Sugared"


@dataclass(frozen=True)
class Tup:
    items: tuple["Sugared", ...]


@dataclass(frozen=True)
class Prj:
    index: int  # 0 or 1
    body: "Sugared"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Fix:
    body: "Sugared"


Sugared = Term | Lam | Tup | Prj | Num | Fix


K = Con("k")
S = Con("s")
P = Con("p")
P0 = Con("p0")
P1 = Con("p1")
D = Con("d")
SN = Con("sN")
PN = Con("pN")
ZERO = Con("zero")


def app(f, *args) -> Term:
    for a in args:
        f = App(f, a)
    return f


def free_vars(t: Sugared) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset({t.name})
    if isinstance(t, Con) or isinstance(t, Num):
        return frozenset()
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Lam):
        return free_vars(t.body) - frozenset(t.params)
    if isinstance(t, Tup):
        out = frozenset()
        for it in t.items:
            out |= free_vars(it)
        return out
    if isinstance(t, Prj):
        return free_vars(t.body)
    if isinstance(t, Fix):
        return free_vars(t.body)
    raise TermError(f"not a term: {t!r}")


def abstract(var: str, t: Term) -> Term:
    """Compile away one binder: (abstract x t) a == t[x := a] observationally.

    Eager constant rule first to bound growth; no eta step (unsound in a
    general applicative structure).
    """
    if var not in free_vars(t):
        return App(K, t)
    if isinstance(t, Var):  # t is exactly var here
        return app(S, K, K)
    if isinstance(t, App):
        return app(S, abstract(var, t.fn), abstract(var, t.arg))
    raise TermError(f"cannot abstract over {t!r}")


_FIX_W: Term | None = None


def _fix_w() -> Term:
    # W = lam x y. y ((x x) y); the fixed point of f is (W W) f, which
    # satisfies (W W) f == f ((W W) f) by the abstraction contract.
    global _FIX_W
    if _FIX_W is None:
        body = app(Var("y"), app(Var("x"), Var("x"), Var("y")))
        _FIX_W = abstract("x", abstract("y", body))
    return _FIX_W


def fixpoint(f: Term) -> Term:
    """Closed g with g a1 ... an == f g a1 ... an observationally."""
    if free_vars(f):
        raise TermError("fixpoint needs a closed operator")
    w = _fix_w()
    return app(w, w, f)


def desugar(t: Sugared) -> Term:
    if isinstance(t, (Var, Con)):
        return t
    if isinstance(t, App):
        return App(desugar(t.fn), desugar(t.arg))
    if isinstance(t, Lam):
        body = desugar(t.body)
        for v in reversed(t.params):
            body = abstract(v, body)
        return body
    if isinstance(t, Tup):
        if not t.items:
            raise TermError("empty tuple")
        out = desugar(t.items[0])
        for it in t.items[1:]:
            out = app(P, out, desugar(it))
        return out
    if isinstance(t, Prj):
        if t.index not in (0, 1):
            raise TermError(f"projection index must be 0 or 1: {t.index}")
        return App(P0 if t.index == 0 else P1, desugar(t.body))
    if isinstance(t, Num):
        out: Term = ZERO
        for _ in range(t.value):
            out = App(SN, out)
        return out
    if isinstance(t, Fix):
        return fixpoint(desugar(t.body))
    raise TermError(f"not a term: {t!r}")


_EVAL_CACHE: dict[Term, ReSet] = {}


def evaluate(t: Sugared) -> ReSet:
    """Denotation of a closed term."""
    core = desugar(t)
    fv = free_vars(core)
    if fv:
        raise TermError(f"free variables: {sorted(fv)}")
    return _eval_core(core)


def _eval_core(t: Term) -> ReSet:
    got = _EVAL_CACHE.get(t)
    if got is not None:
        return got
    if isinstance(t, Con):
        val = model.const_set(t.cid)
    elif isinstance(t, App):
        val = reset.apply(_eval_core(t.fn), _eval_core(t.arg))
    else:
        raise TermError(f"free variable: {t.name}")
    _EVAL_CACHE[t] = val
    return val


def substitute(t: Sugared, var: str, value: Sugared) -> Sugared:
    if isinstance(t, Var):
        return value if t.name == var else t
    if isinstance(t, (Con, Num)):
        return t
    if isinstance(t, App):
        return App(substitute(t.fn, var, value), substitute(t.arg, var, value))
    if isinstance(t, Lam):
        if var in t.params:
            return t
        return Lam(t.params, substitute(t.body, var, value))
    if isinstance(t, Tup):
        return Tup(tuple(substitute(it, var, value) for it in t.items))
    if isinstance(t, Prj):
        return Prj(t.index, substitute(t.body, var, value))
    if isinstance(t, Fix):
        return Fix(substitute(t.body, var, value))
    raise TermError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Parser

_CONST_NAMES = {
    "k": "k",
    "s": "s",
    "p": "p",
    "p0": "p0",
    "p1": "p1",
    "d": "d",
    "s_N": "sN",
    "p_N": "pN",
}

_TOKEN = re.compile(
    r"\s*(?:(?P<lam>\\)|(?P<lpar>\()|(?P<rpar>\))|(?P<lang><)|(?P<rang>>)"
    r"|(?P<comma>,)|(?P<dot>\.)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9']*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise TermError(f"syntax error at position {pos}: {rest[:12]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind is not None:
            out.append((kind, m.group(kind), m.start(kind)))
    return out


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, -1)

    def take(self, kind):
        k, v, pos = self.peek()
        if k != kind:
            raise TermError(f"expected {kind} at position {pos}, found {k}")
        self.i += 1
        return v

    def term(self) -> Sugared:
        if self.peek()[0] == "lam":
            self.take("lam")
            params = []
            while self.peek()[0] == "ident":
                params.append(self.take("ident"))
            if not params:
                raise TermError("lambda without binders")
            self.take("dot")
            return Lam(tuple(params), self.term())
        return self.application()

    def application(self) -> Sugared:
        out = self.atom()
        while self.peek()[0] in ("lpar", "lang", "num", "ident"):
            out = App(out, self.atom())
        return out

    def atom(self) -> Sugared:
        k, v, pos = self.peek()
        if k == "lpar":
            self.take("lpar")
            out = self.term()
            self.take("rpar")
        elif k == "lang":
            self.take("lang")
            items = [self.term()]
            while self.peek()[0] == "comma":
                self.take("comma")
                items.append(self.term())
            self.take("rang")
            if len(items) < 2:
                raise TermError(f"tuple needs at least two items at position {pos}")
            out = Tup(tuple(items))
        elif k == "num":
            self.take("num")
            out = Num(int(v))
        elif k == "ident":
            self.take("ident")
            if v == "fix":
                out = Fix(self.atom())
            elif v in _CONST_NAMES:
                out = Con(_CONST_NAMES[v])
            else:
                out = Var(v)
        else:
            raise TermError(f"expected a term at position {pos}, found {k}")
        while self.peek()[0] == "dot":
            self.take("dot")
            idx = self.take("num")
            if idx not in ("0", "1"):
                raise TermError(f"projection index must be 0 or 1, got {idx}")
            out = Prj(int(idx), out)
        return out


def parse_term(text: str) -> Sugared:
    p = _Parser(_tokenize(text))
    out = p.term()
    if p.i != len(p.toks):
        raise TermError(f"trailing input at position {p.toks[p.i][2]}")
    return out


def show_term(t: Sugared) -> str:
    inv = {v: k for k, v in _CONST_NAMES.items()}
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Con):
        return "0" if t.cid == "zero" else inv.get(t.cid, t.cid)
    if isinstance(t, App):
        fn = show_term(t.fn)
        arg = show_term(t.arg)
        if isinstance(t.arg, App) or isinstance(t.arg, Lam):
            arg = f"({arg})"
        if isinstance(t.fn, Lam):
            fn = f"({fn})"
        return f"{fn} {arg}"
    if isinstance(t, Lam):
        return "\\" + " ".join(t.params) + ". " + show_term(t.body)
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Tup):
        return "<" + ", ".join(show_term(i) for i in t.items) + ">"
    if isinstance(t, Prj):
        return show_term(t.body) + f".{t.index}"
    if isinstance(t, Fix):
        return "fix (" + show_term(t.body) + ")"
    raise TermError(f"not a term: {t!r}")
