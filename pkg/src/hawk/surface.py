"""Concrete syntax (`.haw` files): parser and printer.

Precedence, loosest first.

  sorts     ``->`` (right associative) over ``N``
  terms     ``fun (x : s) => t``  <  ``S t``  <  application  <  atoms
  formulas  quantifiers and ``->`` (right assoc.)  <  ``\\/``  <  ``/\\``
            (right assoc.)  <  ``t = u``, ``t =[s] u``, ``t != u``, ``null t``, ``bot``, ``top``
  proofs    ``fun``/``unpack``  <  application (``M N``, ``M @t``)  <  ``M.1``, ``M.2``

Quantifiers, ``fun`` and ``unpack`` extend as far right as possible.
``top``, ``\\/``, ``!=`` and numerals are expanded while parsing.  Names
containing ``#`` are reserved for generated variables and are rejected
unless the file is marked ``generated``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from hawk.syntax import (
    LEHAW, LHAW, N, And, App, AppPm, Arrow, Bot, Efq, Eq, ExElim, Exists,
    ExIntro, ExtIntro, Forall, Imp, Ind, Judgment, Lam, Nat, Null, Pair, Peel,
    PApp, PLam, Proj, PVar, Rec, Refl, Succ, TApp, TLam, Var, Zero,
    FORMULA_TYPES, PROOF_TYPES, TERM_TYPES, disj, is_reserved, neq, numeral,
    subst_formula, subst_proof, subst_term, top,
)

KEYWORDS = {
    "N", "S", "fun", "rec", "bot", "top", "null", "forall", "exists", "refl",
    "peel", "efq", "ind", "wit", "unpack", "in", "ext", "apppm", "def",
    "theorem", "logic",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|--[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:\#[A-Za-z0-9_']+)*)
  | (?P<sym>->|=>|:=|/\\|\\/|!=|[=()\[\],:.@])
    """,
    re.VERBOSE,
)

MAX_DEPTH = 400


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'kw', 'sym', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str, allow_reserved: bool = False) -> list[Token]:
    out = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        s = m.group()
        col = pos - lstart + 1
        if kind == "ident":
            if s in KEYWORDS:
                kind = "kw"
            elif is_reserved(s) and not allow_reserved:
                raise ParseError(f"reserved name {s} (names containing '#' are generated)", line, col)
        if kind != "ws":
            out.append(Token(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            lstart = pos + s.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - lstart + 1))
    return out


# ---------------------------------------------------------------- declarations


@dataclass(frozen=True)
class DefDecl:
    name: str
    sort: object
    term: object
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class TheoremDecl:
    name: str
    sig: tuple
    ctx: tuple
    goal: object
    proof: object
    line: int = 0
    col: int = 0


@dataclass
class SourceFile:
    logic: str = LHAW
    generated: bool = False
    decls: list = field(default_factory=list)

    @property
    def defs(self) -> dict:
        return {d.name: d for d in self.decls if isinstance(d, DefDecl)}

    @property
    def theorems(self) -> list[TheoremDecl]:
        return [d for d in self.decls if isinstance(d, TheoremDecl)]

    def expanded_defs(self) -> dict:
        """Term definitions with earlier definitions substituted in."""
        out = {}
        for d in self.decls:
            if isinstance(d, DefDecl):
                out[d.name] = (d.sort, subst_term(d.term, {k: v for k, (_, v) in out.items()}))
        return out

    def judgment(self, thm: TheoremDecl, logic: str | None = None) -> Judgment:
        """The theorem as a kernel judgment, definitions expanded."""
        defs = self.expanded_defs()
        bound = {x for x, _ in thm.sig}
        theta = {k: v for k, (_, v) in defs.items() if k not in bound}
        ctx = tuple((h, subst_formula(phi, theta)) for h, phi in thm.ctx)
        return Judgment(
            logic or self.logic, tuple(thm.sig), ctx,
            subst_proof(thm.proof, theta), subst_formula(thm.goal, theta),
        )


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str, allow_reserved: bool = False):
        self.toks = tokenize(text, allow_reserved)
        self.i = 0
        self.depth = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, kind=None) -> bool:
        t = self.tok
        return t.text == text and t.kind in ((kind,) if kind else ("kw", "sym"))

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ParseError(f"{msg} (found {found!r})", tok.line, tok.col)

    def eat(self, text) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            raise self.error("expected a name")
        self.i += 1
        return t.text

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("nesting too deep")

    def leave(self):
        self.depth -= 1

    def done(self):
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")

    # -- sorts

    def sort(self):
        self.enter()
        try:
            left = self.sort_atom()
            if self.accept("->"):
                return Arrow(left, self.sort())
            return left
        finally:
            self.leave()

    def sort_atom(self):
        if self.accept("N"):
            return N
        if self.accept("("):
            s = self.sort()
            self.eat(")")
            return s
        raise self.error("expected a sort")

    # -- terms

    def binder_groups(self, allow_hyps=False):
        """`(x y : s)` groups and, for proofs, `[h : A]` hypotheses."""
        out = []
        while True:
            if self.at("("):
                self.eat("(")
                names = [self.ident()]
                while self.tok.kind == "ident":
                    names.append(self.ident())
                self.eat(":")
                s = self.sort()
                self.eat(")")
                out.extend(("t", x, s) for x in names)
            elif allow_hyps and self.at("["):
                self.eat("[")
                h = self.ident()
                self.eat(":")
                phi = self.formula()
                self.eat("]")
                out.append(("h", h, phi))
            else:
                break
        if not out:
            raise self.error("expected a binder")
        return out

    def term(self):
        self.enter()
        try:
            if self.accept("fun"):
                groups = self.binder_groups()
                self.eat("=>")
                body = self.term()
                for _, x, s in reversed(groups):
                    body = Lam(x, s, body)
                return body
            return self.sterm()
        finally:
            self.leave()

    def sterm(self):
        self.enter()
        try:
            if self.accept("S"):
                return Succ(self.sterm())
            return self.app()
        finally:
            self.leave()

    def starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "num") or self.at("(")

    def app(self):
        if self.accept("rec"):
            self.eat("[")
            s = self.sort()
            self.eat("]")
            head = Rec(s, self.term_atom(), self.term_atom(), self.term_atom())
        else:
            head = self.term_atom()
        while self.starts_atom():
            head = App(head, self.term_atom())
        return head

    def term_atom(self):
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return Var(t.text)
        if t.kind == "num":
            self.i += 1
            return numeral(int(t.text))
        if self.accept("("):
            self.enter()
            try:
                inner = self.term()
            finally:
                self.leave()
            self.eat(")")
            return inner
        raise self.error("expected a term")

    # -- formulas

    def formula(self):
        self.enter()
        try:
            if self.at("forall") or self.at("exists"):
                return self.quantifier()
            left = self.disj()
            if self.accept("->"):
                return Imp(left, self.formula())
            return left
        finally:
            self.leave()

    def quantifier(self):
        cls = Forall if self.eat(self.tok.text).text == "forall" else Exists
        binders = []
        if self.at("("):
            binders = [(x, s) for _, x, s in self.binder_groups()]
        else:
            names = [self.ident()]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.eat(":")
            s = self.sort()
            binders = [(x, s) for x in names]
        self.eat(".")
        body = self.formula()
        for x, s in reversed(binders):
            body = cls(x, s, body)
        return body

    def disj(self):
        left = self.conj()
        if self.accept("\\/"):
            return disj(left, self.disj())
        return left

    def conj(self):
        left = self.unary()
        if self.accept("/\\"):
            return And(left, self.conj())
        return left

    def unary(self):
        self.enter()
        try:
            if self.accept("bot"):
                return Bot()
            if self.accept("top"):
                return top()
            if self.accept("null"):
                return Null(self.sterm())
            if self.at("forall") or self.at("exists"):
                return self.quantifier()
            if self.at("("):
                save = self.i
                try:
                    return self.equation()
                except ParseError as first:
                    far = self.i
                    self.i = save
                    try:
                        self.eat("(")
                        inner = self.formula()
                        self.eat(")")
                        return inner
                    except ParseError as second:
                        if far > self.i:
                            raise first from None
                        raise second from None
            return self.equation()
        finally:
            self.leave()

    def equation(self):
        lhs = self.term()
        if self.accept("="):
            s = self.opt_sort()
            return Eq(s, lhs, self.term())
        if self.accept("!="):
            s = self.opt_sort()
            return neq(lhs, self.term(), s)
        raise self.error("expected '=' or '!='")

    def opt_sort(self):
        if self.accept("["):
            s = self.sort()
            self.eat("]")
            return s
        return N

    # -- proofs

    def proof(self):
        self.enter()
        try:
            if self.accept("fun"):
                groups = self.binder_groups(allow_hyps=True)
                self.eat("=>")
                body = self.proof()
                for kind, x, a in reversed(groups):
                    body = TLam(x, a, body) if kind == "t" else PLam(x, a, body)
                return body
            if self.accept("unpack"):
                self.eat("[")
                x = self.ident()
                self.eat(",")
                h = self.ident()
                self.eat("]")
                self.eat(":=")
                m = self.proof()
                self.eat("in")
                return ExElim(m, x, h, self.proof())
            return self.papp()
        finally:
            self.leave()

    def starts_patom(self) -> bool:
        t = self.tok
        if t.kind == "ident":
            return True
        return any(self.at(k) for k in ("(", "@", "refl", "peel", "efq", "ind", "wit", "ext", "apppm"))

    def papp(self):
        head = self.ppostfix()
        while self.starts_patom():
            if self.accept("@"):
                head = TApp(head, self.term_atom())
            else:
                head = PApp(head, self.ppostfix())
        return head

    def ppostfix(self):
        m = self.patom()
        while self.at(".") and self.peek().kind == "num":
            self.eat(".")
            t = self.tok
            if t.text not in ("1", "2"):
                raise self.error("projection index must be 1 or 2")
            self.i += 1
            m = Proj(int(t.text), m)
        return m

    def patom(self):
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return PVar(t.text)
        if self.accept("refl"):
            s = self.opt_sort()
            return Refl(s, self.term_atom())
        if self.accept("peel"):
            self.eat("[")
            s = self.sort()
            self.eat(",")
            lhs = self.term()
            self.eat(",")
            rhs = self.term()
            self.eat("]")
            self.eat("(")
            eq = self.proof()
            self.eat(",")
            x = self.ident()
            self.eat(".")
            motive = self.formula()
            self.eat(",")
            base = self.proof()
            self.eat(")")
            return Peel(s, lhs, rhs, eq, x, motive, base)
        if self.accept("efq"):
            self.eat("(")
            m = self.proof()
            self.eat(",")
            phi = self.formula()
            self.eat(")")
            return Efq(m, phi)
        if self.accept("ind"):
            self.eat("(")
            x = self.ident()
            self.eat(".")
            motive = self.formula()
            self.eat(",")
            base = self.proof()
            self.eat(",")
            step = self.proof()
            self.eat(",")
            scrut = self.term()
            self.eat(")")
            return Ind(x, motive, base, step, scrut)
        if self.accept("wit"):
            self.eat("[")
            target = self.formula()
            self.eat("]")
            self.eat("(")
            w = self.term()
            self.eat(",")
            m = self.proof()
            self.eat(")")
            return ExIntro(w, m, target)
        if self.accept("ext"):
            dom, cod = self.two_sorts()
            self.eat("(")
            m = self.proof()
            self.eat(")")
            return ExtIntro(dom, cod, m)
        if self.accept("apppm"):
            dom, cod = self.two_sorts()
            self.eat("(")
            m = self.proof()
            self.eat(",")
            lhs = self.term()
            self.eat(",")
            rhs = self.term()
            self.eat(",")
            arg = self.proof()
            self.eat(")")
            return AppPm(dom, cod, m, lhs, rhs, arg)
        if self.accept("("):
            first = self.proof()
            if self.accept(","):
                second = self.proof()
                self.eat(")")
                return Pair(first, second)
            self.eat(")")
            return first
        raise self.error("expected a proof term")

    def two_sorts(self):
        self.eat("[")
        a = self.sort()
        self.eat(",")
        b = self.sort()
        self.eat("]")
        return a, b

    # -- files

    def source_file(self) -> SourceFile:
        sf = SourceFile()
        if self.accept("logic"):
            t = self.tok
            if t.kind != "ident" or t.text not in (LHAW, LEHAW):
                raise self.error("expected 'lhaw' or 'lehaw'")
            self.i += 1
            sf.logic = t.text
            if self.tok.kind == "ident" and self.tok.text == "generated":
                self.i += 1
                sf.generated = True
        seen = {}
        while self.tok.kind != "eof":
            start = self.tok
            if self.accept("def"):
                name = self.ident()
                self.eat(":")
                s = self.sort()
                self.eat(":=")
                decl = DefDecl(name, s, self.term(), start.line, start.col)
            elif self.accept("theorem"):
                name = self.ident()
                sig, ctx = [], []
                if self.at("(") or self.at("["):
                    for kind, x, a in self.binder_groups(allow_hyps=True):
                        (sig if kind == "t" else ctx).append((x, a))
                self.eat(":")
                goal = self.formula()
                self.eat(":=")
                proof = self.proof()
                decl = TheoremDecl(name, tuple(sig), tuple(ctx), goal, proof, start.line, start.col)
                for names, what in (([x for x, _ in sig], "variable"), ([h for h, _ in ctx], "hypothesis")):
                    if len(set(names)) != len(names):
                        raise ParseError(f"duplicate {what} in theorem {name}", start.line, start.col)
            else:
                raise self.error("expected 'def' or 'theorem'")
            if decl.name in seen:
                raise ParseError(f"duplicate name {decl.name}", start.line, start.col)
            seen[decl.name] = decl
            sf.decls.append(decl)
        return sf


def _run(text, allow_reserved, method):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"input is not UTF-8: {e.reason}", 1, e.start + 1) from None
    p = _Parser(text, allow_reserved)
    try:
        out = getattr(p, method)()
        p.done()
    except RecursionError:
        raise p.error("nesting too deep") from None
    return out


def parse(text, allow_reserved: bool = False) -> SourceFile:
    """Parse a whole `.haw` file.  A `logic ... generated` pragma permits
    reserved names."""
    if not allow_reserved and isinstance(text, str) and re.match(
        r"\s*(--[^\n]*\s*)*logic\s+\w+\s+generated\b", text
    ):
        allow_reserved = True
    return _run(text, allow_reserved, "source_file")


def parse_sort(text, allow_reserved=False):
    return _run(text, allow_reserved, "sort")


def parse_term(text, allow_reserved=False):
    return _run(text, allow_reserved, "term")


def parse_formula(text, allow_reserved=False):
    return _run(text, allow_reserved, "formula")


def parse_proof(text, allow_reserved=False):
    return _run(text, allow_reserved, "proof")


# ---------------------------------------------------------------- printer


def show_sort(s) -> str:
    if isinstance(s, Nat):
        return "N"
    dom = show_sort(s.dom)
    if isinstance(s.dom, Arrow):
        dom = f"({dom})"
    return f"{dom} -> {show_sort(s.cod)}"


def _paren(text, cond):
    return f"({text})" if cond else text


def show_term(t, prec: int = 0) -> str:
    """Levels: 0 fun, 1 S, 2 application, 3 atom."""
    match t:
        case Var(x):
            return x
        case Zero():
            return "0"
        case Succ(a):
            return _paren(f"S {show_term(a, 3)}", prec > 1)
        case App(f, a):
            return _paren(f"{show_term(f, 2)} {show_term(a, 3)}", prec > 2)
        case Rec(s, b, st, n):
            args = " ".join(show_term(k, 3) for k in (b, st, n))
            return _paren(f"rec[{show_sort(s)}] {args}", prec > 2)
        case Lam():
            binders = []
            while isinstance(t, Lam):
                binders.append(f"({t.var} : {show_sort(t.sort)})")
                t = t.body
            return _paren(f"fun {' '.join(binders)} => {show_term(t, 0)}", prec > 0)
    raise TypeError(f"not a term: {t!r}")


def _eq_op(op, s):
    return op if isinstance(s, Nat) else f"{op}[{show_sort(s)}]"


def show_formula(f, prec: int = 0) -> str:
    """Levels: 0 quantifiers and implication, 1 conjunction, 2 atoms."""
    match f:
        case Eq(s, l, r):
            return f"{show_term(l, 1)} {_eq_op('=', s)} {show_term(r, 1)}"
        case Imp(Eq(s, l, r), Bot()):
            return f"{show_term(l, 1)} {_eq_op('!=', s)} {show_term(r, 1)}"
        case Bot():
            return "bot"
        case Null(a):
            return f"null {show_term(a, 3)}"
        case Imp(a, b):
            return _paren(f"{show_formula(a, 1)} -> {show_formula(b, 0)}", prec > 0)
        case And(a, b):
            return _paren(f"{show_formula(a, 2)} /\\ {show_formula(b, 1)}", prec > 1)
        case Forall(x, s, b) | Exists(x, s, b):
            q = "forall" if isinstance(f, Forall) else "exists"
            return _paren(f"{q} {x}:{show_sort(s)}. {show_formula(b, 0)}", prec > 0)
    raise TypeError(f"not a formula: {f!r}")


def show_proof(m, prec: int = 0) -> str:
    """Levels: 0 fun/unpack, 1 application, 2 atoms and projections."""
    match m:
        case PVar(h):
            return h
        case Refl(s, t):
            kw = "refl" if isinstance(s, Nat) else f"refl[{show_sort(s)}]"
            return _paren(f"{kw} {show_term(t, 3)}", prec > 1)
        case Peel(s, t, u, e, x, phi, b):
            return (f"peel[{show_sort(s)}, {show_term(t)}, {show_term(u)}]"
                    f"({show_proof(e)}, {x}. {show_formula(phi)}, {show_proof(b)})")
        case Efq(p, phi):
            return f"efq({show_proof(p)}, {show_formula(phi)})"
        case Ind(x, phi, b, st, t):
            return f"ind({x}. {show_formula(phi)}, {show_proof(b)}, {show_proof(st)}, {show_term(t)})"
        case ExIntro(t, p, phi):
            return f"wit[{show_formula(phi)}]({show_term(t)}, {show_proof(p)})"
        case ExtIntro(s, r, p):
            return f"ext[{show_sort(s)}, {show_sort(r)}]({show_proof(p)})"
        case AppPm(s, r, p, t, u, q):
            return (f"apppm[{show_sort(s)}, {show_sort(r)}]"
                    f"({show_proof(p)}, {show_term(t)}, {show_term(u)}, {show_proof(q)})")
        case Pair(a, b):
            return f"({show_proof(a)}, {show_proof(b)})"
        case Proj(i, p):
            return f"{show_proof(p, 2)}.{i}"
        case PApp(f, a):
            return _paren(f"{show_proof(f, 1)} {show_proof(a, 2)}", prec > 1)
        case TApp(p, t):
            return _paren(f"{show_proof(p, 1)} @{show_term(t, 3)}", prec > 1)
        case PLam() | TLam():
            binders = []
            while isinstance(m, (PLam, TLam)):
                if isinstance(m, TLam):
                    binders.append(f"({m.var} : {show_sort(m.sort)})")
                else:
                    binders.append(f"[{m.name} : {show_formula(m.hyp)}]")
                m = m.body
            return _paren(f"fun {' '.join(binders)} => {show_proof(m, 0)}", prec > 0)
        case ExElim(p, x, h, b):
            return _paren(f"unpack [{x}, {h}] := {show_proof(p)} in {show_proof(b, 0)}", prec > 0)
    raise TypeError(f"not a proof term: {m!r}")


def show_theorem(name, sig, ctx, goal, proof) -> str:
    binders = [f"({x} : {show_sort(s)})" for x, s in sig]
    binders += [f"[{h} : {show_formula(phi)}]" for h, phi in ctx]
    head = " ".join([f"theorem {name}", *binders])
    return f"{head} :\n  {show_formula(goal)}\n:= {show_proof(proof)}\n"


def show_file(sf: SourceFile) -> str:
    out = [f"logic {sf.logic}{' generated' if sf.generated else ''}\n"]
    for d in sf.decls:
        if isinstance(d, DefDecl):
            out.append(f"def {d.name} : {show_sort(d.sort)} := {show_term(d.term)}\n")
        else:
            out.append(show_theorem(d.name, d.sig, d.ctx, d.goal, d.proof))
    return "\n".join(out)


def show(a) -> str:
    if isinstance(a, (Nat, Arrow)):
        return show_sort(a)
    if isinstance(a, TERM_TYPES):
        return show_term(a)
    if isinstance(a, FORMULA_TYPES):
        return show_formula(a)
    if isinstance(a, PROOF_TYPES):
        return show_proof(a)
    if isinstance(a, SourceFile):
        return show_file(a)
    raise TypeError(f"cannot print {a!r}")
