"""Abstract syntax for sorts, System T terms, formulas and proof terms.

Nodes are immutable and compared structurally.  Bound variables keep their
display names; alpha-equivalence is decided on a canonical nameless key
(see :func:`alpha_key`), and all substitutions are capture-avoiding.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import wraps
from typing import Iterable, Mapping, Union


class Node:
    """Structural equality and a cached hash for frozen dataclass nodes."""

    __slots__ = ()
    _field_names: dict = {}

    def _values(self):
        cls = type(self)
        names = Node._field_names.get(cls)
        if names is None:
            names = Node._field_names[cls] = tuple(f.name for f in fields(cls))
        return tuple(getattr(self, n) for n in names)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._values() == other._values()

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + self._values())
            object.__setattr__(self, "_hash", h)
            return h

    def __str__(self):
        from hawk import surface

        return surface.show(self)


node = dataclass(frozen=True, eq=False)


def node_memo(fn):
    """Cache a unary function of a node on the node itself.  Unlike
    lru_cache, a hit costs no structural comparison."""
    attr = "_memo_" + fn.__name__

    @wraps(fn)
    def wrapper(a):
        d = a.__dict__
        try:
            return d[attr]
        except KeyError:
            v = d[attr] = fn(a)
            return v
    return wrapper


# ---------------------------------------------------------------- sorts


@node
class Nat(Node):
    pass


@node
class Arrow(Node):
    dom: "Sort"
    cod: "Sort"


Sort = Union[Nat, Arrow]
N = Nat()


def arrow(*sorts: Sort) -> Sort:
    """Right-nested arrow: arrow(a, b, c) is a -> (b -> c)."""
    out = sorts[-1]
    for s in reversed(sorts[:-1]):
        out = Arrow(s, out)
    return out


def sort_depth(s: Sort) -> int:
    if isinstance(s, Nat):
        return 0
    return 1 + max(sort_depth(s.dom), sort_depth(s.cod))


def sorts_up_to_depth(d: int) -> list[Sort]:
    """Every sort of depth <= d, ordered by depth then construction order."""
    levels = [[N]]
    for _ in range(d):
        known = [s for lvl in levels for s in lvl]
        fresh = [
            Arrow(a, b)
            for a in known
            for b in known
            if max(sort_depth(a), sort_depth(b)) == len(levels) - 1
        ]
        levels.append(fresh)
    return [s for lvl in levels for s in lvl]


# ---------------------------------------------------------------- terms


@node
class Var(Node):
    name: str


@node
class Lam(Node):
    var: str
    sort: Sort
    body: "Term"


@node
class App(Node):
    fn: "Term"
    arg: "Term"


@node
class Zero(Node):
    pass


@node
class Succ(Node):
    arg: "Term"


@node
class Rec(Node):
    sort: Sort
    base: "Term"
    step: "Term"
    scrut: "Term"


Term = Union[Var, Lam, App, Zero, Succ, Rec]


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def numeral(n: int) -> Term:
    t: Term = Zero()
    for _ in range(n):
        t = Succ(t)
    return t


def as_numeral(t: Term) -> int | None:
    n = 0
    while isinstance(t, Succ):
        t, n = t.arg, n + 1
    return n if isinstance(t, Zero) else None


# ---------------------------------------------------------------- formulas


@node
class Eq(Node):
    sort: Sort
    lhs: Term
    rhs: Term


@node
class Bot(Node):
    pass


@node
class Null(Node):
    arg: Term


@node
class Imp(Node):
    left: "Formula"
    right: "Formula"


@node
class And(Node):
    left: "Formula"
    right: "Formula"


@node
class Forall(Node):
    var: str
    sort: Sort
    body: "Formula"


@node
class Exists(Node):
    var: str
    sort: Sort
    body: "Formula"


Formula = Union[Eq, Bot, Null, Imp, And, Forall, Exists]


def imps(*fs: Formula) -> Formula:
    """Right-nested implication chain."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Imp(f, out)
    return out


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


# ---------------------------------------------------------------- proofs


@node
class PVar(Node):
    name: str


@node
class Refl(Node):
    sort: Sort
    term: Term


@node
class Peel(Node):
    sort: Sort
    lhs: Term
    rhs: Term
    eq: "Proof"
    var: str
    motive: Formula
    base: "Proof"


@node
class Efq(Node):
    proof: "Proof"
    target: Formula


@node
class PLam(Node):
    name: str
    hyp: Formula
    body: "Proof"


@node
class PApp(Node):
    fn: "Proof"
    arg: "Proof"


@node
class Pair(Node):
    left: "Proof"
    right: "Proof"


@node
class Proj(Node):
    index: int
    proof: "Proof"


@node
class TLam(Node):
    var: str
    sort: Sort
    body: "Proof"


@node
class TApp(Node):
    proof: "Proof"
    term: Term


@node
class ExIntro(Node):
    witness: Term
    proof: "Proof"
    target: Formula


@node
class ExElim(Node):
    proof: "Proof"
    var: str
    name: str
    body: "Proof"


@node
class Ind(Node):
    var: str
    motive: Formula
    base: "Proof"
    step: "Proof"
    scrut: Term


@node
class ExtIntro(Node):
    dom: Sort
    cod: Sort
    proof: "Proof"


@node
class AppPm(Node):
    dom: Sort
    cod: Sort
    proof: "Proof"
    lhs: Term
    rhs: Term
    arg: "Proof"


Proof = Union[
    PVar, Refl, Peel, Efq, PLam, PApp, Pair, Proj, TLam, TApp,
    ExIntro, ExElim, Ind, ExtIntro, AppPm,
]

TERM_TYPES = (Var, Lam, App, Zero, Succ, Rec)
FORMULA_TYPES = (Eq, Bot, Null, Imp, And, Forall, Exists)
PROOF_TYPES = (
    PVar, Refl, Peel, Efq, PLam, PApp, Pair, Proj, TLam, TApp,
    ExIntro, ExElim, Ind, ExtIntro, AppPm,
)


def papps(fn: Proof, *args: Proof | Term) -> Proof:
    """Apply a proof to a mixed sequence of term and proof arguments."""
    for a in args:
        fn = TApp(fn, a) if isinstance(a, TERM_TYPES) else PApp(fn, a)
    return fn


def tlams(binders: Iterable[tuple[str, Sort]], body: Proof) -> Proof:
    for x, s in reversed(list(binders)):
        body = TLam(x, s, body)
    return body


# ---------------------------------------------------------------- judgments

Signature = tuple  # tuple[tuple[str, Sort], ...]
Context = tuple  # tuple[tuple[str, Formula], ...]

LHAW = "lhaw"
LEHAW = "lehaw"


@dataclass(frozen=True)
class Judgment:
    logic: str
    sig: Signature
    ctx: Context
    proof: Proof
    goal: Formula


# ---------------------------------------------------------------- names

RESERVED = "#"


def is_reserved(name: str) -> bool:
    return RESERVED in name


def fresh(base: str, avoid: Iterable[str] | set) -> str:
    """`base` primed until it is not in `avoid`."""
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


class NameSupply:
    """Deterministic generator of reserved names (`base#gK`) for constructions."""

    def __init__(self):
        self.count = 0

    def __call__(self, base: str) -> str:
        self.count += 1
        return f"{base.split(RESERVED)[0]}{RESERVED}g{self.count}"


# ---------------------------------------------------------------- free variables


@node_memo
def term_fv(t: Term) -> frozenset:
    match t:
        case Var(x):
            return frozenset((x,))
        case Lam(x, _, b):
            return term_fv(b) - {x}
        case App(f, a):
            return term_fv(f) | term_fv(a)
        case Zero():
            return frozenset()
        case Succ(a):
            return term_fv(a)
        case Rec(_, b, s, n):
            return term_fv(b) | term_fv(s) | term_fv(n)
    raise TypeError(f"not a term: {t!r}")


@node_memo
def formula_fv(f: Formula) -> frozenset:
    match f:
        case Eq(_, l, r):
            return term_fv(l) | term_fv(r)
        case Bot():
            return frozenset()
        case Null(a):
            return term_fv(a)
        case Imp(a, b) | And(a, b):
            return formula_fv(a) | formula_fv(b)
        case Forall(x, _, b) | Exists(x, _, b):
            return formula_fv(b) - {x}
    raise TypeError(f"not a formula: {f!r}")


@node_memo
def proof_fv(m: Proof) -> frozenset:
    """Free first-order (term) variables of a proof term, annotations included."""
    match m:
        case PVar(_):
            return frozenset()
        case Refl(_, t):
            return term_fv(t)
        case Peel(_, t, u, e, x, phi, b):
            return term_fv(t) | term_fv(u) | proof_fv(e) | (formula_fv(phi) - {x}) | proof_fv(b)
        case Efq(p, phi):
            return proof_fv(p) | formula_fv(phi)
        case PLam(_, phi, b):
            return formula_fv(phi) | proof_fv(b)
        case PApp(a, b) | Pair(a, b):
            return proof_fv(a) | proof_fv(b)
        case Proj(_, p):
            return proof_fv(p)
        case TLam(x, _, b):
            return proof_fv(b) - {x}
        case TApp(p, t):
            return proof_fv(p) | term_fv(t)
        case ExIntro(t, p, phi):
            return term_fv(t) | proof_fv(p) | formula_fv(phi)
        case ExElim(p, x, _, b):
            return proof_fv(p) | (proof_fv(b) - {x})
        case Ind(x, phi, b, s, t):
            return (formula_fv(phi) - {x}) | proof_fv(b) | proof_fv(s) | term_fv(t)
        case ExtIntro(_, _, p):
            return proof_fv(p)
        case AppPm(_, _, p, t, u, q):
            return proof_fv(p) | term_fv(t) | term_fv(u) | proof_fv(q)
    raise TypeError(f"not a proof term: {m!r}")


@node_memo
def proof_pfv(m: Proof) -> frozenset:
    """Free proof variables of a proof term."""
    match m:
        case PVar(x):
            return frozenset((x,))
        case Refl():
            return frozenset()
        case Peel(_, _, _, e, _, _, b):
            return proof_pfv(e) | proof_pfv(b)
        case Efq(p, _) | Proj(_, p) | TLam(_, _, p) | TApp(p, _) | ExIntro(_, p, _) | ExtIntro(_, _, p):
            return proof_pfv(p)
        case PLam(x, _, b):
            return proof_pfv(b) - {x}
        case PApp(a, b) | Pair(a, b):
            return proof_pfv(a) | proof_pfv(b)
        case ExElim(p, _, x, b):
            return proof_pfv(p) | (proof_pfv(b) - {x})
        case Ind(_, _, b, s, _):
            return proof_pfv(b) | proof_pfv(s)
        case AppPm(_, _, p, _, _, q):
            return proof_pfv(p) | proof_pfv(q)
    raise TypeError(f"not a proof term: {m!r}")


def free_vars(a) -> frozenset:
    """Free first-order variables of a term, formula, proof term or context."""
    if isinstance(a, TERM_TYPES):
        return term_fv(a)
    if isinstance(a, FORMULA_TYPES):
        return formula_fv(a)
    if isinstance(a, PROOF_TYPES):
        return proof_fv(a)
    out = frozenset()
    for _, phi in a:
        out |= formula_fv(phi)
    return out


# ---------------------------------------------------------------- substitution


def _relevant(theta: Mapping, fv: frozenset) -> dict:
    return {k: v for k, v in theta.items() if k in fv}


def _range_fv(theta: Mapping, fv_of) -> frozenset:
    out = frozenset()
    for v in theta.values():
        out |= fv_of(v)
    return out


def _bind(x, theta, body_fv, range_fv, extra_avoid=frozenset()):
    """Rename binder `x` if any image in `theta` would be captured by it.

    Returns the (possibly new) binder name and the substitution to push
    under it (with `x` dropped, or mapped to the new name).
    """
    theta = {k: v for k, v in theta.items() if k != x}
    if x in range_fv or x in extra_avoid:
        x2 = fresh(x, range_fv | body_fv | set(theta) | extra_avoid)
        theta[x] = Var(x2)
        return x2, theta
    return x, theta


def subst_term(t: Term, theta: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of free term variables."""
    theta = _relevant(theta, term_fv(t))
    if not theta:
        return t
    match t:
        case Var(x):
            return theta[x]
        case Lam(x, s, b):
            x2, th = _bind(x, theta, term_fv(b), _range_fv(theta, term_fv))
            return Lam(x2, s, subst_term(b, th))
        case App(f, a):
            return App(subst_term(f, theta), subst_term(a, theta))
        case Succ(a):
            return Succ(subst_term(a, theta))
        case Rec(s, b, st, n):
            return Rec(s, subst_term(b, theta), subst_term(st, theta), subst_term(n, theta))
    raise TypeError(f"not a term: {t!r}")


def subst_formula(f: Formula, theta: Mapping[str, Term]) -> Formula:
    theta = _relevant(theta, formula_fv(f))
    if not theta:
        return f
    match f:
        case Eq(s, l, r):
            return Eq(s, subst_term(l, theta), subst_term(r, theta))
        case Null(a):
            return Null(subst_term(a, theta))
        case Imp(a, b):
            return Imp(subst_formula(a, theta), subst_formula(b, theta))
        case And(a, b):
            return And(subst_formula(a, theta), subst_formula(b, theta))
        case Forall(x, s, b) | Exists(x, s, b):
            x2, th = _bind(x, theta, formula_fv(b), _range_fv(theta, term_fv))
            return type(f)(x2, s, subst_formula(b, th))
    raise TypeError(f"not a formula: {f!r}")


def _subst_motive(x, phi, theta):
    x2, th = _bind(x, theta, formula_fv(phi), _range_fv(theta, term_fv))
    return x2, subst_formula(phi, th)


def subst_proof(
    m: Proof,
    tsub: Mapping[str, Term] | None = None,
    psub: Mapping[str, Proof] | None = None,
) -> Proof:
    """Simultaneous capture-avoiding substitution in a proof term.

    `tsub` replaces free first-order variables (in proofs, annotations and
    motives); `psub` replaces free proof variables.
    """
    tsub = _relevant(tsub or {}, proof_fv(m))
    psub = _relevant(psub or {}, proof_pfv(m))
    if not tsub and not psub:
        return m
    return _subst_proof(m, tsub, psub)


def _subst_proof(m, tsub, psub):
    tsub = _relevant(tsub, proof_fv(m))
    psub = _relevant(psub, proof_pfv(m))
    if not tsub and not psub:
        return m
    T = lambda t: subst_term(t, tsub)  # noqa: E731
    F = lambda f: subst_formula(f, tsub)  # noqa: E731
    P = lambda p: _subst_proof(p, tsub, psub)  # noqa: E731
    match m:
        case PVar(x):
            return psub.get(x, m)
        case Refl(s, t):
            return Refl(s, T(t))
        case Peel(s, t, u, e, x, phi, b):
            x2, phi2 = _subst_motive(x, phi, tsub)
            return Peel(s, T(t), T(u), P(e), x2, phi2, P(b))
        case Efq(p, phi):
            return Efq(P(p), F(phi))
        case PLam(x, phi, b):
            prange = _range_fv(psub, proof_pfv)
            x2, ps = _bind_proof(x, psub, proof_pfv(b), prange)
            return PLam(x2, F(phi), _subst_proof(b, tsub, ps))
        case PApp(a, b):
            return PApp(P(a), P(b))
        case Pair(a, b):
            return Pair(P(a), P(b))
        case Proj(i, p):
            return Proj(i, P(p))
        case TLam(x, s, b):
            rng = _range_fv(tsub, term_fv) | _range_fv(psub, proof_fv)
            x2, ts = _bind(x, tsub, proof_fv(b), rng)
            return TLam(x2, s, _subst_proof(b, ts, psub))
        case TApp(p, t):
            return TApp(P(p), T(t))
        case ExIntro(t, p, phi):
            return ExIntro(T(t), P(p), F(phi))
        case ExElim(p, x, h, b):
            rng = _range_fv(tsub, term_fv) | _range_fv(psub, proof_fv)
            x2, ts = _bind(x, tsub, proof_fv(b), rng)
            prange = _range_fv(psub, proof_pfv)
            h2, ps = _bind_proof(h, psub, proof_pfv(b), prange)
            return ExElim(P(p), x2, h2, _subst_proof(b, ts, ps))
        case Ind(x, phi, b, st, t):
            x2, phi2 = _subst_motive(x, phi, tsub)
            return Ind(x2, phi2, P(b), P(st), T(t))
        case ExtIntro(s, r, p):
            return ExtIntro(s, r, P(p))
        case AppPm(s, r, p, t, u, q):
            return AppPm(s, r, P(p), T(t), T(u), P(q))
    raise TypeError(f"not a proof term: {m!r}")


def _bind_proof(x, psub, body_pfv, range_pfv):
    psub = {k: v for k, v in psub.items() if k != x}
    if x in range_pfv:
        x2 = fresh(x, range_pfv | body_pfv | set(psub))
        psub[x] = PVar(x2)
        return x2, psub
    return x, psub


def subst(a, theta: Mapping[str, Term]):
    """First-order substitution dispatched on the node kind."""
    if isinstance(a, TERM_TYPES):
        return subst_term(a, theta)
    if isinstance(a, FORMULA_TYPES):
        return subst_formula(a, theta)
    return subst_proof(a, theta)


def rename_term_var(a, old: str, new: str):
    return subst(a, {old: Var(new)})


# ---------------------------------------------------------------- alpha-equivalence


def _push(env, x):
    # levels count binders passed, so shadowing never reuses a level
    depth = env.get(None, 0)
    return {**env, x: depth, None: depth + 1}


def _tkey(t, env):
    match t:
        case Var(x):
            return env[x] if x in env else ("v", x)
        case Lam(x, s, b):
            return ("lam", s, _tkey(b, _push(env, x)))
        case App(f, a):
            return ("app", _tkey(f, env), _tkey(a, env))
        case Zero():
            return ("0",)
        case Succ(a):
            return ("S", _tkey(a, env))
        case Rec(s, b, st, n):
            return ("rec", s, _tkey(b, env), _tkey(st, env), _tkey(n, env))
    raise TypeError(f"not a term: {t!r}")


def _fkey(f, env):
    match f:
        case Eq(s, l, r):
            return ("eq", s, _tkey(l, env), _tkey(r, env))
        case Bot():
            return ("bot",)
        case Null(a):
            return ("null", _tkey(a, env))
        case Imp(a, b):
            return ("imp", _fkey(a, env), _fkey(b, env))
        case And(a, b):
            return ("and", _fkey(a, env), _fkey(b, env))
        case Forall(x, s, b):
            return ("all", s, _fkey(b, _push(env, x)))
        case Exists(x, s, b):
            return ("ex", s, _fkey(b, _push(env, x)))
    raise TypeError(f"not a formula: {f!r}")


def _pkey(m, env, penv):
    K = lambda p: _pkey(p, env, penv)  # noqa: E731
    match m:
        case PVar(x):
            return penv[x] if x in penv else ("pv", x)
        case Refl(s, t):
            return ("refl", s, _tkey(t, env))
        case Peel(s, t, u, e, x, phi, b):
            return ("peel", s, _tkey(t, env), _tkey(u, env), K(e),
                    _fkey(phi, _push(env, x)), K(b))
        case Efq(p, phi):
            return ("efq", K(p), _fkey(phi, env))
        case PLam(x, phi, b):
            return ("plam", _fkey(phi, env), _pkey(b, env, _push(penv, x)))
        case PApp(a, b):
            return ("papp", K(a), K(b))
        case Pair(a, b):
            return ("pair", K(a), K(b))
        case Proj(i, p):
            return ("proj", i, K(p))
        case TLam(x, s, b):
            return ("tlam", s, _pkey(b, _push(env, x), penv))
        case TApp(p, t):
            return ("tapp", K(p), _tkey(t, env))
        case ExIntro(t, p, phi):
            return ("wit", _tkey(t, env), K(p), _fkey(phi, env))
        case ExElim(p, x, h, b):
            return ("unpack", K(p), _pkey(b, _push(env, x), _push(penv, h)))
        case Ind(x, phi, b, st, t):
            return ("ind", _fkey(phi, _push(env, x)), K(b), K(st), _tkey(t, env))
        case ExtIntro(s, r, p):
            return ("ext", s, r, K(p))
        case AppPm(s, r, p, t, u, q):
            return ("apppm", s, r, K(p), _tkey(t, env), _tkey(u, env), K(q))
    raise TypeError(f"not a proof term: {m!r}")


@node_memo
def alpha_key(a):
    """Canonical nameless form: bound variables become binding depths."""
    if isinstance(a, TERM_TYPES):
        return _tkey(a, {})
    if isinstance(a, FORMULA_TYPES):
        return _fkey(a, {})
    if isinstance(a, PROOF_TYPES):
        return _pkey(a, {}, {})
    if isinstance(a, (Nat, Arrow)):
        return a
    raise TypeError(f"no alpha key for {a!r}")


def alpha_eq(a, b) -> bool:
    return a == b or alpha_key(a) == alpha_key(b)


# ---------------------------------------------------------------- derived connectives


def top() -> Formula:
    return Imp(Bot(), Bot())


def neg(f: Formula) -> Formula:
    return Imp(f, Bot())


def neq(t: Term, u: Term, sort: Sort = N) -> Formula:
    return Imp(Eq(sort, t, u), Bot())


def disj(a: Formula, b: Formula) -> Formula:
    z = fresh("z", formula_fv(a) | formula_fv(b))
    return Exists(z, N, And(Imp(Eq(N, Var(z), Zero()), a), Imp(neq(Var(z), Zero()), b)))


def expand_derived(kind: str, *args):
    """Expand a surface connective: 'top', 'or' (two formulas) or 'neq' (two terms)."""
    match kind:
        case "top":
            return top()
        case "or":
            return disj(*args)
        case "neq":
            return neq(*args)
    raise ValueError(f"unknown derived connective {kind!r}")


# ---------------------------------------------------------------- freshening


def freshen_proof(m: Proof, avoid: Iterable[str]) -> Proof:
    """Alpha-rename every term binder of `m` that clashes with `avoid` or
    with an enclosing binder, so that binders are pairwise distinct and
    disjoint from `avoid`."""
    return _freshen(m, set(avoid))


def _fresh_binder(x, avoid):
    if x in avoid:
        return fresh(x, avoid)
    return x


def freshen_formula(f: Formula, avoid: Iterable[str]) -> Formula:
    avoid = set(avoid)
    match f:
        case Imp(a, b):
            return Imp(freshen_formula(a, avoid), freshen_formula(b, avoid))
        case And(a, b):
            return And(freshen_formula(a, avoid), freshen_formula(b, avoid))
        case Forall(x, s, b) | Exists(x, s, b):
            x2 = _fresh_binder(x, avoid | formula_fv(b) - {x})
            body = rename_term_var(b, x, x2) if x2 != x else b
            return type(f)(x2, s, freshen_formula(body, avoid | {x2}))
    return f


def _freshen(m, avoid):
    R = lambda p: _freshen(p, avoid)  # noqa: E731
    match m:
        case TLam(x, s, b):
            x2 = _fresh_binder(x, avoid | (proof_fv(b) - {x}))
            body = rename_term_var(b, x, x2) if x2 != x else b
            return TLam(x2, s, _freshen(body, avoid | {x2}))
        case ExElim(p, x, h, b):
            x2 = _fresh_binder(x, avoid | (proof_fv(b) - {x}))
            body = rename_term_var(b, x, x2) if x2 != x else b
            return ExElim(R(p), x2, h, _freshen(body, avoid | {x2}))
        case Peel(s, t, u, e, x, phi, b):
            x2 = _fresh_binder(x, avoid | (formula_fv(phi) - {x}))
            phi2 = rename_term_var(phi, x, x2) if x2 != x else phi
            return Peel(s, t, u, R(e), x2, freshen_formula(phi2, avoid | {x2}), R(b))
        case Ind(x, phi, b, st, t):
            x2 = _fresh_binder(x, avoid | (formula_fv(phi) - {x}))
            phi2 = rename_term_var(phi, x, x2) if x2 != x else phi
            return Ind(x2, freshen_formula(phi2, avoid | {x2}), R(b), R(st), t)
        case PLam(h, phi, b):
            return PLam(h, freshen_formula(phi, avoid), R(b))
        case Efq(p, phi):
            return Efq(R(p), freshen_formula(phi, avoid))
        case ExIntro(t, p, phi):
            return ExIntro(t, R(p), freshen_formula(phi, avoid))
        case PApp(a, b):
            return PApp(R(a), R(b))
        case Pair(a, b):
            return Pair(R(a), R(b))
        case Proj(i, p):
            return Proj(i, R(p))
        case TApp(p, t):
            return TApp(R(p), t)
        case ExtIntro(s, r, p):
            return ExtIntro(s, r, R(p))
        case AppPm(s, r, p, t, u, q):
            return AppPm(s, r, R(p), t, u, R(q))
    return m
