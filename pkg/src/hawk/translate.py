"""The parametricity translation and the proof families around it.

Every variable ``x`` of a signature is split into two copies ``x#1`` and
``x#2`` and a relatedness hypothesis ``x#pm``.  Terms become proofs that
their two copies are related by ``eqpm``; formulas and proofs of LHAw or
LEHAw become formulas and proofs of LHAw over the duplicated signature.

Binders introduced by the constructions themselves (the generalized
induction variable, the ``y`` copies in ``Elim``, hypothesis names) come
from a :class:`NameSupply` so they can never meet a user name or a
``#1``/``#2``/``#pm`` name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from hawk.kernel import check_judgment, infer_proof, infer_sort
from hawk.rewrite import normalize_formula
from hawk.syntax import (
    LHAW, N, And, App, AppPm, Bot, Efq, Eq, ExElim, Exists,
    ExIntro, ExtIntro, Forall, Imp, Ind, Judgment, Lam, NameSupply, Nat, Null,
    Pair, Peel, PApp, PLam, Proj, PVar, Rec, Refl, Succ, TApp, TLam, Var, Zero,
    formula_fv, freshen_formula, freshen_proof, fresh, iff, imps, papps,
    subst_formula, subst_proof, subst_term, term_fv,
)


def rename(x: str, tag) -> str:
    """The reserved copy of `x` for tag 1, 2 or 'pm'."""
    return f"{x}#{tag}"


# ---------------------------------------------------------------- duplication


def dup_sig(sig):
    return ([(rename(x, 1), s) for x, s in sig], [(rename(x, 2), s) for x, s in sig])


def _dup_theta(fv, i):
    return {x: Var(rename(x, i)) for x in fv}


def dup_term(t, i: int):
    return subst_term(t, _dup_theta(term_fv(t), i))


def dup_formula(f, i: int):
    return subst_formula(f, _dup_theta(formula_fv(f), i))


def sig_to_pm_context(sig):
    return [(rename(x, "pm"), eqpm(s, Var(rename(x, 1)), Var(rename(x, 2)))) for x, s in sig]


# ---------------------------------------------------------------- relations


def eqpm(s, a, b):
    """a Eqpm_s b: equality at N, related inputs to related outputs above."""
    if isinstance(s, Nat):
        return Eq(N, a, b)
    avoid = term_fv(a) | term_fv(b)
    x = fresh("x", avoid)
    y = fresh("y", avoid | {x})
    return Forall(x, s.dom, Forall(y, s.dom, Imp(
        eqpm(s.dom, Var(x), Var(y)), eqpm(s.cod, App(a, Var(x)), App(b, Var(y))))))


def ext(s, a, b):
    """a Ext_s b: pointwise equality."""
    if isinstance(s, Nat):
        return Eq(N, a, b)
    x = fresh("x", term_fv(a) | term_fv(b))
    return Forall(x, s.dom, ext(s.cod, App(a, Var(x)), App(b, Var(x))))


def sym_formula(s):
    return Forall("x", s, Forall("y", s, Imp(eqpm(s, Var("x"), Var("y")), eqpm(s, Var("y"), Var("x")))))


def trans_formula(s):
    x, y, z = Var("x"), Var("y"), Var("z")
    return Forall("x", s, Forall("y", s, Forall("z", s, imps(
        eqpm(s, x, y), eqpm(s, y, z), eqpm(s, x, z)))))


def refl_formula(s):
    x, y = Var("x"), Var("y")
    return Forall("x", s, Forall("y", s, Imp(
        eqpm(s, x, y), And(eqpm(s, x, x), eqpm(s, y, y)))))


def per_formula(kind: str, s):
    return {"sympm": sym_formula, "transpm": trans_formula, "reflpm": refl_formula}[kind](s)


# ---------------------------------------------------------------- PER witnesses


@lru_cache(maxsize=None)
def sympm(s):
    if isinstance(s, Nat):
        x, y = Var("x"), Var("y")
        return TLam("x", N, TLam("y", N, PLam("h", Eq(N, x, y),
                    Peel(N, x, y, PVar("h"), "z", Eq(N, Var("z"), x), Refl(N, x)))))
    f, g, x, y = Var("f"), Var("g"), Var("x"), Var("y")
    body = papps(sympm(s.cod), App(f, y), App(g, x),
                 papps(PVar("h"), y, x, papps(sympm(s.dom), x, y, PVar("k"))))
    return TLam("f", s, TLam("g", s, PLam("h", eqpm(s, f, g),
                TLam("x", s.dom, TLam("y", s.dom, PLam("k", eqpm(s.dom, x, y), body))))))


@lru_cache(maxsize=None)
def transpm(s):
    if isinstance(s, Nat):
        x, y, z = Var("x"), Var("y"), Var("z")
        return TLam("x", N, TLam("y", N, TLam("z", N, PLam("h", Eq(N, x, y), PLam("k", Eq(N, y, z),
                    Peel(N, y, z, PVar("k"), "w", Eq(N, x, Var("w")), PVar("h")))))))
    f, g, h, x, y = Var("f"), Var("g"), Var("h"), Var("x"), Var("y")
    back = papps(transpm(s.dom), y, x, y, papps(sympm(s.dom), x, y, PVar("c")), PVar("c"))
    body = papps(transpm(s.cod), App(f, x), App(g, y), App(h, y),
                 papps(PVar("p"), x, y, PVar("c")),
                 papps(PVar("q"), y, y, back))
    return TLam("f", s, TLam("g", s, TLam("h", s,
                PLam("p", eqpm(s, f, g), PLam("q", eqpm(s, g, h),
                     TLam("x", s.dom, TLam("y", s.dom, PLam("c", eqpm(s.dom, x, y), body))))))))


@lru_cache(maxsize=None)
def reflpm(s):
    x, y, h = Var("x"), Var("y"), PVar("h")
    back = papps(sympm(s), x, y, h)
    return TLam("x", s, TLam("y", s, PLam("h", eqpm(s, x, y), Pair(
        papps(transpm(s), x, y, x, h, back),
        papps(transpm(s), y, x, y, back, h)))))


def per_witness(kind: str, s):
    """Closed LHAw proof of Sym, Trans or the 'related implies self-related'
    property of eqpm at sort `s`."""
    try:
        return {"sympm": sympm, "transpm": transpm, "reflpm": reflpm}[kind](s)
    except KeyError:
        raise ValueError(f"unknown witness {kind!r}") from None


# ---------------------------------------------------------------- terms


def translate_term(sig, t, sort=None, supply: NameSupply | None = None):
    """t^pm, a proof of eqpm(sort, t#1, t#2) under sig#1, sig#2; sig#pm."""
    got = infer_sort(sig, t)
    if sort is not None and got != sort:
        raise ValueError(f"{t} has sort {got}, not {sort}")
    return _tr_term(t, supply or NameSupply())


def _tr_term(t, supply):
    match t:
        case Var(x):
            return PVar(rename(x, "pm"))
        case Lam(x, s, b):
            x1, x2 = rename(x, 1), rename(x, 2)
            return TLam(x1, s, TLam(x2, s, PLam(rename(x, "pm"), eqpm(s, Var(x1), Var(x2)),
                                                _tr_term(b, supply))))
        case App(f, a):
            return papps(_tr_term(f, supply), dup_term(a, 1), dup_term(a, 2), _tr_term(a, supply))
        case Zero():
            return Refl(N, Zero())
        case Succ(a):
            a1, a2 = dup_term(a, 1), dup_term(a, 2)
            x = supply("x")
            return Peel(N, a1, a2, _tr_term(a, supply), x,
                        Eq(N, Succ(a1), Succ(Var(x))), Refl(N, Succ(a1)))
        case Rec(s, base, step, n):
            return _tr_rec(s, base, step, n, supply)
    raise TypeError(f"not a term: {t!r}")


def _tr_rec(s, base, step, n, supply):
    b1, b2 = dup_term(base, 1), dup_term(base, 2)
    s1, s2 = dup_term(step, 1), dup_term(step, 2)
    x, y, z = supply("x"), supply("y"), supply("z")
    h, k = supply("h"), supply("k")
    X, Y, Z = Var(x), Var(y), Var(z)

    def rel(lhs, m):
        return eqpm(s, lhs, Rec(s, b2, s2, m))

    motive = Forall(y, N, Imp(Eq(N, X, Y), rel(Rec(s, b1, s1, X), Y)))
    base_pf = TLam(y, N, PLam(h, Eq(N, Zero(), Y),
                   Peel(N, Zero(), Y, PVar(h), z, rel(b1, Z), _tr_term(base, supply))))
    r1, r2 = Rec(s, b1, s1, X), Rec(s, b2, s2, X)
    inner = papps(_tr_term(step, supply), r1, r2, papps(PVar(k), X, Refl(N, X)), X, X, Refl(N, X))
    step_pf = TLam(x, N, PLam(k, motive, TLam(y, N, PLam(h, Eq(N, Succ(X), Y),
                   Peel(N, Succ(X), Y, PVar(h), z, rel(App(App(s1, r1), X), Z), inner)))))
    n1, n2 = dup_term(n, 1), dup_term(n, 2)
    return papps(Ind(x, motive, base_pf, step_pf, n1), n2, _tr_term(n, supply))


def elim_term(i: int, sig, z: str, zsort, t, supply: NameSupply | None = None):
    """Elim^i for z.t: from z#1 Eqpm z#2 relate t^i at z#1 and at z#2."""
    sig = list(sig)
    names = {x for x, _ in sig}
    if not term_fv(t) <= names | {z}:
        raise ValueError("elim_term: free variables of the term must be declared or the binder")
    ext_sig = [(x, s) for x, s in sig if x != z] + [(z, zsort)]
    tsort = infer_sort(ext_sig, t)
    return _elim_term(i, z, zsort, t, tsort, supply or NameSupply())


def _elim_term(i, z, zsort, t, tsort, supply):
    z1, z2, zp = rename(z, 1), rename(z, 2), rename(z, "pm")
    t1, t2 = dup_term(t, 1), dup_term(t, 2)
    tpm = _tr_term(t, supply)
    r = papps(reflpm(zsort), Var(z1), Var(z2), PVar(zp))
    if i == 1:
        t1b = subst_term(t1, {z1: Var(z2)})
        tpm_b = subst_proof(tpm, {z1: Var(z2)}, {zp: Proj(2, r)})
        body = papps(transpm(tsort), t1, t2, t1b, tpm,
                     papps(sympm(tsort), t1b, t2, tpm_b))
    else:
        t2a = subst_term(t2, {z2: Var(z1)})
        tpm_a = subst_proof(tpm, {z2: Var(z1)}, {zp: Proj(1, r)})
        body = papps(transpm(tsort), t2a, t1, t2,
                     papps(sympm(tsort), t1, t2a, tpm_a), tpm)
    return TLam(z1, zsort, TLam(z2, zsort, PLam(zp, eqpm(zsort, Var(z1), Var(z2)), body)))


def elim_term_formula(i, z, zsort, t, tsort):
    z1, z2 = rename(z, 1), rename(z, 2)
    ti = dup_term(t, i)
    zi = rename(z, i)
    return Forall(z1, zsort, Forall(z2, zsort, Imp(
        eqpm(zsort, Var(z1), Var(z2)),
        eqpm(tsort, subst_term(ti, {zi: Var(z1)}), subst_term(ti, {zi: Var(z2)})))))


# ---------------------------------------------------------------- formulas


def translate_formula(f):
    match f:
        case Eq(s, l, r):
            return eqpm(s, dup_term(l, 1), dup_term(r, 2))
        case Bot():
            return f
        case Null(a):
            return Null(dup_term(a, 1))
        case Imp(a, b):
            return Imp(translate_formula(a), translate_formula(b))
        case And(a, b):
            return And(translate_formula(a), translate_formula(b))
        case Forall(x, s, b):
            x1, x2 = rename(x, 1), rename(x, 2)
            return Forall(x1, s, Forall(x2, s, Imp(eqpm(s, Var(x1), Var(x2)), translate_formula(b))))
        case Exists(x, s, b):
            x1, x2 = rename(x, 1), rename(x, 2)
            return Exists(x1, s, Exists(x2, s, And(eqpm(s, Var(x1), Var(x2)), translate_formula(b))))
    raise TypeError(f"not a formula: {f!r}")


def translate_context(ctx):
    return [(h, translate_formula(phi)) for h, phi in ctx]


def _pm_subst(f, x, a, b):
    """f[x#1 := a][x#2 := b] (simultaneous)."""
    theta = {}
    if a is not None:
        theta[rename(x, 1)] = a
    if b is not None:
        theta[rename(x, 2)] = b
    return subst_formula(f, theta)


# ---------------------------------------------------------------- Elim for formulas


def elim_formula(sig, x: str, xsort, phi, supply: NameSupply | None = None):
    """Elim for x.phi: transports phi^pm along x#1 Eqpm y#1 and x#2 Eqpm y#2.

    Accepted under sig#1, sig#2; sig#pm at
    forall x1 x2 y1 y2. x1~y1 -> x2~y2 -> phi^pm -> phi^pm[x1:=y1][x2:=y2].
    """
    sig = list(sig)
    names = {n for n, _ in sig}
    if not formula_fv(phi) <= names | {x}:
        raise ValueError("elim_formula: free variables of the formula must be declared or the binder")
    delta = {n: s for n, s in sig if n != x}
    delta[x] = xsort
    phi = freshen_formula(phi, set(delta))
    return _Elim(supply or NameSupply()).build(delta, x, xsort, phi)


def elim_formula_statement(x, xsort, phi, y1: str = "y#1", y2: str = "y#2"):
    x1, x2 = rename(x, 1), rename(x, 2)
    p = translate_formula(phi)
    return Forall(x1, xsort, Forall(x2, xsort, Forall(y1, xsort, Forall(y2, xsort, imps(
        eqpm(xsort, Var(x1), Var(y1)), eqpm(xsort, Var(x2), Var(y2)), p,
        _pm_subst(p, x, Var(y1), Var(y2)))))))


class _Elim:
    def __init__(self, supply):
        self.supply = supply

    def build(self, delta, x, s, phi):
        sp = self.supply
        x1, x2 = rename(x, 1), rename(x, 2)
        y1, y2 = sp("y"), sp("y")
        k1, k2, k = sp("k"), sp("k"), sp("k")
        X1, X2, Y1, Y2 = Var(x1), Var(x2), Var(y1), Var(y2)
        p = translate_formula(phi)
        moved = _pm_subst(p, x, Y1, Y2)

        def plus(psi, dl, proof, psub=None):
            # Elim+ : the recursive family applied to the current binders
            el = self.build(dl, x, s, psi)
            if psub:
                el = subst_proof(el, {}, psub)
            return papps(el, X1, X2, Y1, Y2, PVar(k1), PVar(k2), proof)

        match phi:
            case Eq(r, t, u):
                t1, u2 = dup_term(t, 1), dup_term(u, 2)
                t1y, u2y = subst_term(t1, {x1: Y1}), subst_term(u2, {x2: Y2})
                e1 = _elim_term(1, x, s, t, r, sp)
                e2 = _elim_term(2, x, s, u, r, sp)
                body = papps(transpm(r), t1y, t1, u2y,
                             papps(e1, Y1, X1, papps(sympm(s), X1, Y1, PVar(k1))),
                             papps(transpm(r), t1, u2, u2y, PVar(k), papps(e2, X2, Y2, PVar(k2))))
            case Bot():
                body = PVar(k)
            case Null(t):
                t1 = dup_term(t, 1)
                w = sp("w")
                body = Peel(N, t1, subst_term(t1, {x1: Y1}),
                            papps(_elim_term(1, x, s, t, N, sp), X1, Y1, PVar(k1)),
                            w, Null(Var(w)), PVar(k))
            case Imp(a, b):
                h = sp("h")
                back = papps(self.build(delta, x, s, a), Y1, Y2, X1, X2,
                             papps(sympm(s), X1, Y1, PVar(k1)),
                             papps(sympm(s), X2, Y2, PVar(k2)), PVar(h))
                body = PLam(h, _pm_subst(translate_formula(a), x, Y1, Y2),
                            plus(b, delta, PApp(PVar(k), back)))
            case And(a, b):
                body = Pair(plus(a, delta, Proj(1, PVar(k))), plus(b, delta, Proj(2, PVar(k))))
            case Forall(z, r, b):
                z1, z2, zp = rename(z, 1), rename(z, 2), rename(z, "pm")
                inner = {**delta, z: r}
                body = TLam(z1, r, TLam(z2, r, PLam(zp, eqpm(r, Var(z1), Var(z2)),
                            plus(b, inner, papps(PVar(k), Var(z1), Var(z2), PVar(zp))))))
            case Exists(z, r, b):
                z1, z2 = rename(z, 1), rename(z, 2)
                inner = {**delta, z: r}
                eta, chi = sp("h"), sp("h")
                bp = _pm_subst(translate_formula(b), x, Y1, Y2)
                t2 = Exists(z2, r, And(eqpm(r, Var(z1), Var(z2)), bp))
                body = ExElim(PVar(k), z1, eta, ExElim(PVar(eta), z2, chi, ExIntro(
                    Var(z1),
                    ExIntro(Var(z2), Pair(Proj(1, PVar(chi)),
                                          plus(b, inner, Proj(2, PVar(chi)), {rename(z, "pm"): Proj(1, PVar(chi))})),
                            t2),
                    moved)))
            case _:
                raise TypeError(f"not a formula: {phi!r}")
        return TLam(x1, s, TLam(x2, s, TLam(y1, s, TLam(y2, s,
                    PLam(k1, eqpm(s, X1, Y1), PLam(k2, eqpm(s, X2, Y2), PLam(k, p, body)))))))


# ---------------------------------------------------------------- proofs


@dataclass
class TranslationUnit:
    source: Judgment
    produced: Judgment
    notes: list = field(default_factory=list)

    def check(self):
        return check_judgment(self.produced)


TYPO_NOTES = {
    "transpm": "transpm at arrow sorts: printed 'trans' read as transpm",
    "elim-exists": "Elim for exists: pair built from chi.1 and Elim+ chi.2 (printed eta), "
                   "with z#pm bound to chi.1 inside Elim+",
    "equiv1-exists": "Equiv1 for exists: unpacked witness proof used, relatedness from Collaps",
    "equiv2-exists": "Equiv2 for exists: x#pm replaced by chi.1 in Equiv2 of the body",
    "collaps": "Collaps at arrow sorts: stray token dropped",
    "null": "null t translated as null t#1 (no printed clause)",
}


def translate_proof(logic: str, sig, ctx, proof, goal) -> TranslationUnit:
    """(sig ; ctx |- proof : goal)^pm as a judgment of LHAw.

    The source judgment must be accepted by the kernel in `logic`; the
    translation reads sorts off it.
    """
    rep = check_judgment(Judgment(logic, tuple(sig), tuple(ctx), proof, goal))
    if not rep.accepted:
        raise ValueError(f"source judgment rejected: {rep.describe()}")
    tr = _ProofTranslator(logic, NameSupply())
    delta = dict(sig)
    m = freshen_proof(proof, set(delta) | {x for _, phi in ctx for x in formula_fv(phi)})
    out = tr.run(delta, dict(ctx), m, ())
    s1, s2 = dup_sig(sig)
    produced = Judgment(
        LHAW, tuple(s1 + s2),
        tuple(sig_to_pm_context(sig) + translate_context(ctx)),
        out, translate_formula(goal),
    )
    return TranslationUnit(Judgment(logic, tuple(sig), tuple(ctx), proof, goal), produced, tr.notes)


class _ProofTranslator:
    def __init__(self, logic, supply):
        self.logic = logic
        self.supply = supply
        self.notes: list[str] = []
        self._seen: set = set()

    def note(self, path, clause):
        self.notes.append(f"{'.'.join(map(str, path)) or '<root>'}: {clause}")

    def typo(self, key):
        if key not in self._seen:
            self._seen.add(key)
            self.notes.append(f"correction: {TYPO_NOTES[key]}")

    def term(self, t):
        return _tr_term(t, self.supply)

    def run(self, delta, gamma, m, path):
        R = self.run
        match m:
            case PVar():
                self.note(path, "proof variable")
                return m
            case PLam(h, phi, b):
                self.note(path, "implication intro")
                return PLam(h, translate_formula(phi), R(delta, {**gamma, h: phi}, b, path + ("body",)))
            case PApp(f, a):
                self.note(path, "implication elim")
                return PApp(R(delta, gamma, f, path + ("fn",)), R(delta, gamma, a, path + ("arg",)))
            case Pair(a, b):
                self.note(path, "pair")
                return Pair(R(delta, gamma, a, path + ("left",)), R(delta, gamma, b, path + ("right",)))
            case Proj(i, p):
                self.note(path, f"projection {i}")
                return Proj(i, R(delta, gamma, p, path + ("proof",)))
            case TLam(x, s, b):
                self.note(path, "forall intro (three abstractions)")
                x1, x2 = rename(x, 1), rename(x, 2)
                return TLam(x1, s, TLam(x2, s, PLam(rename(x, "pm"), eqpm(s, Var(x1), Var(x2)),
                            R({**delta, x: s}, gamma, b, path + ("body",)))))
            case TApp(p, t):
                self.note(path, "forall elim (three applications)")
                return papps(R(delta, gamma, p, path + ("proof",)),
                             dup_term(t, 1), dup_term(t, 2), self.term(t))
            case ExIntro(t, p, phi):
                self.note(path, "exists intro (nested witnesses)")
                t1, t2 = dup_term(t, 1), dup_term(t, 2)
                target = translate_formula(phi)
                inner = _pm_subst(translate_formula(phi.body), phi.var, t1, None)
                x2 = rename(phi.var, 2)
                inner_t = Exists(x2, phi.sort, And(eqpm(phi.sort, t1, Var(x2)), inner))
                return ExIntro(t1, ExIntro(t2, Pair(self.term(t), R(delta, gamma, p, path + ("proof",))),
                                           inner_t), target)
            case ExElim(p, x, h, b):
                self.note(path, "exists elim (nested unpacking)")
                ex = self._infer(delta, gamma, p)
                hyp = subst_formula(ex.body, {ex.var: Var(x)})
                body = R({**delta, x: ex.sort}, {**gamma, h: hyp}, b, path + ("body",))
                eta, chi = self.supply("h"), self.supply("h")
                body = subst_proof(body, {}, {rename(x, "pm"): Proj(1, PVar(chi)), h: Proj(2, PVar(chi))})
                return ExElim(R(delta, gamma, p, path + ("proof",)), rename(x, 1), eta,
                              ExElim(PVar(eta), rename(x, 2), chi, body))
            case Efq(p, phi):
                self.note(path, "efq")
                return Efq(R(delta, gamma, p, path + ("proof",)), translate_formula(phi))
            case Refl(_, t):
                self.note(path, "refl (term translation)")
                return self.term(t)
            case Peel():
                return self.peel(delta, gamma, m, path)
            case Ind():
                self.note(path, "induction (generalized motive)")
                return self.ind(delta, gamma, m, path)
            case ExtIntro(s, _, p):
                self.note(path, "ext (eta-expanded premise)")
                a, c, h = self.supply("x"), self.supply("x"), self.supply("h")
                inner = R(delta, gamma, p, path + ("proof",))
                return TLam(a, s, TLam(c, s, PLam(h, eqpm(s, Var(a), Var(c)),
                            papps(inner, Var(a), Var(c), PVar(h)))))
            case AppPm(_, _, p, t, u, q):
                self.note(path, "apppm")
                return papps(R(delta, gamma, p, path + ("proof",)), dup_term(t, 1), dup_term(u, 2),
                             R(delta, gamma, q, path + ("arg",)))
        raise TypeError(f"not a proof term: {m!r}")

    def _infer(self, delta, gamma, p):
        f = infer_proof(self.logic, list(delta.items()), list(gamma.items()), p)
        while not isinstance(f, Exists):
            g = normalize_formula(f)
            if g == f:
                raise ValueError("unpacked proof does not prove an existential")
            f = g
        return f

    def peel(self, delta, gamma, m, path):
        s, t, u, e, x, phi, b = m.sort, m.lhs, m.rhs, m.eq, m.var, m.motive, m.base
        t1, t2, u1, u2 = (dup_term(t, 1), dup_term(t, 2), dup_term(u, 1), dup_term(u, 2))
        tpm, upm = self.term(t), self.term(u)
        epm = self.run(delta, gamma, e, path + ("eq",))
        bpm = self.run(delta, gamma, b, path + ("base",))
        m1 = papps(transpm(s), t1, u2, u1, epm, papps(sympm(s), u1, u2, upm))
        m2 = papps(transpm(s), t2, t1, u2, papps(sympm(s), t1, t2, tpm), epm)
        if self.logic == LHAW:
            self.note(path, "peel (two nested peels)")
            p = translate_formula(phi)
            x1, x2 = rename(x, 1), rename(x, 2)
            inner = Peel(N, t1, u1, m1, x1, _pm_subst(p, x, None, t2), bpm)
            return Peel(N, t2, u2, m2, x2, _pm_subst(p, x, u1, None), inner)
        self.note(path, "peel (Elim family)")
        el = _Elim(self.supply).build({**delta, x: s}, x, s, phi)
        return papps(el, t1, t2, u1, u2, m1, m2, bpm)

    def ind(self, delta, gamma, m, path):
        x, phi, b, st, t = m.var, m.motive, m.base, m.step, m.scrut
        sp = self.supply
        p = translate_formula(phi)
        xv, y, z, h, k = sp("x"), sp("y"), sp("z"), sp("h"), sp("h")
        X, Y, Z = Var(xv), Var(y), Var(z)

        def P(a, c):
            return _pm_subst(p, x, a, c)

        motive = Forall(y, N, Imp(Eq(N, X, Y), P(X, Y)))
        bpm = self.run(delta, gamma, b, path + ("base",))
        stpm = self.run(delta, gamma, st, path + ("step",))
        base = TLam(y, N, PLam(h, Eq(N, Zero(), Y), Peel(N, Zero(), Y, PVar(h), z, P(Zero(), Z), bpm)))
        sx = Succ(X)
        step = TLam(xv, N, PLam(k, motive, TLam(y, N, PLam(h, Eq(N, sx, Y), Peel(
            N, sx, Y, PVar(h), z, P(sx, Z),
            papps(stpm, X, X, Refl(N, X), papps(PVar(k), X, Refl(N, X))))))))
        return papps(Ind(xv, motive, base, step, dup_term(t, 1)), dup_term(t, 2), self.term(t))


# ---------------------------------------------------------------- Collaps and Equiv


@lru_cache(maxsize=None)
def collaps(s):
    """Closed LEHAw proof of forall x y. (x =_s y <-> x Eqpm_s y)."""
    if isinstance(s, Nat):
        x, y = Var("x"), Var("y")
        e = Eq(N, x, y)
        return TLam("x", N, TLam("y", N, Pair(PLam("h", e, PVar("h")), PLam("h", e, PVar("h")))))
    f, g, x, y, z = Var("f"), Var("g"), Var("x"), Var("y"), Var("z")
    sd, sc = s.dom, s.cod
    fwd = PLam("h", Eq(s, f, g), TLam("x", sd, TLam("y", sd, PLam("k", eqpm(sd, x, y), PApp(
        Proj(1, papps(collaps(sc), App(f, x), App(g, y))),
        AppPm(sd, sc, PVar("h"), x, y, PApp(Proj(2, papps(collaps(sd), x, y)), PVar("k"))))))))
    diag = PApp(Proj(1, papps(collaps(sd), z, z)), Refl(sd, z))
    bwd = PLam("h", eqpm(s, f, g), ExtIntro(sd, sc, TLam("z", sd, PApp(
        Proj(2, papps(collaps(sc), App(f, z), App(g, z))),
        papps(PVar("h"), z, z, diag)))))
    return TLam("f", s, TLam("g", s, Pair(fwd, bwd)))


def collaps_formula(s):
    x, y = Var("x"), Var("y")
    return Forall("x", s, Forall("y", s, iff(Eq(s, x, y), eqpm(s, x, y))))


def equiv(i: int, sig, phi, supply: NameSupply | None = None):
    """Equiv^1 : phi#1 -> phi^pm and Equiv^2 : phi^pm -> phi#1, both LEHAw
    proofs under sig#1, sig#2; sig#pm."""
    sig = list(sig)
    if not formula_fv(phi) <= {x for x, _ in sig}:
        raise ValueError("equiv: free variables of the formula must be declared")
    delta = dict(sig)
    phi = freshen_formula(phi, set(delta))
    e = _Equiv(supply or NameSupply())
    return e.one(delta, phi) if i == 1 else e.two(delta, phi)


def equiv_statement(i: int, phi):
    a, b = dup_formula(phi, 1), translate_formula(phi)
    return Imp(a, b) if i == 1 else Imp(b, a)


class _Equiv:
    def __init__(self, supply):
        self.supply = supply

    def one(self, delta, phi):
        sp = self.supply
        h = sp("h")
        src = dup_formula(phi, 1)
        match phi:
            case Eq(s, t, u):
                t1, u1, u2 = dup_term(t, 1), dup_term(u, 1), dup_term(u, 2)
                body = papps(transpm(s), t1, u1, u2,
                             PApp(Proj(1, papps(collaps(s), t1, u1)), PVar(h)), _tr_term(u, sp))
            case Bot() | Null():
                body = PVar(h)
            case Imp(a, b):
                k = sp("h")
                body = PLam(k, translate_formula(a), PApp(self.one(delta, b),
                            PApp(PVar(h), PApp(self.two(delta, a), PVar(k)))))
            case And(a, b):
                body = Pair(PApp(self.one(delta, a), Proj(1, PVar(h))),
                            PApp(self.one(delta, b), Proj(2, PVar(h))))
            case Forall(x, s, b):
                x1, x2 = rename(x, 1), rename(x, 2)
                inner = self.one({**delta, x: s}, b)
                body = TLam(x1, s, TLam(x2, s, PLam(rename(x, "pm"), eqpm(s, Var(x1), Var(x2)),
                            PApp(inner, TApp(PVar(h), Var(x1))))))
            case Exists(x, s, b):
                x1, x2 = rename(x, 1), rename(x, 2)
                eta = sp("h")
                c = PApp(Proj(1, papps(collaps(s), Var(x1), Var(x1))), Refl(s, Var(x1)))
                inner = subst_proof(self.one({**delta, x: s}, b), {x2: Var(x1)}, {rename(x, "pm"): c})
                target = translate_formula(phi)
                bp = _pm_subst(translate_formula(b), x, Var(x1), None)
                t2 = Exists(x2, s, And(eqpm(s, Var(x1), Var(x2)), bp))
                body = ExElim(PVar(h), x1, eta, ExIntro(Var(x1), ExIntro(
                    Var(x1), Pair(c, PApp(inner, PVar(eta))), t2), target))
            case _:
                raise TypeError(f"not a formula: {phi!r}")
        return PLam(h, src, body)

    def two(self, delta, phi):
        sp = self.supply
        h = sp("h")
        src = translate_formula(phi)
        match phi:
            case Eq(s, t, u):
                t1, u1, u2 = dup_term(t, 1), dup_term(u, 1), dup_term(u, 2)
                body = PApp(Proj(2, papps(collaps(s), t1, u1)),
                            papps(transpm(s), t1, u2, u1, PVar(h),
                                  papps(sympm(s), u1, u2, _tr_term(u, sp))))
            case Bot() | Null():
                body = PVar(h)
            case Imp(a, b):
                k = sp("h")
                body = PLam(k, dup_formula(a, 1), PApp(self.two(delta, b),
                            PApp(PVar(h), PApp(self.one(delta, a), PVar(k)))))
            case And(a, b):
                body = Pair(PApp(self.two(delta, a), Proj(1, PVar(h))),
                            PApp(self.two(delta, b), Proj(2, PVar(h))))
            case Forall(x, s, b):
                x1, x2 = rename(x, 1), rename(x, 2)
                c = PApp(Proj(1, papps(collaps(s), Var(x1), Var(x1))), Refl(s, Var(x1)))
                inner = subst_proof(self.two({**delta, x: s}, b), {x2: Var(x1)}, {rename(x, "pm"): c})
                body = TLam(x1, s, PApp(inner, papps(PVar(h), Var(x1), Var(x1), c)))
            case Exists(x, s, b):
                x1, x2 = rename(x, 1), rename(x, 2)
                eta, chi = sp("h"), sp("h")
                inner = subst_proof(self.two({**delta, x: s}, b), {},
                                    {rename(x, "pm"): Proj(1, PVar(chi))})
                target = dup_formula(phi, 1)
                body = ExElim(PVar(h), x1, eta, ExElim(PVar(eta), x2, chi, ExIntro(
                    Var(x1), PApp(inner, Proj(2, PVar(chi))), target)))
            case _:
                raise TypeError(f"not a formula: {phi!r}")
        return PLam(h, src, body)


def pm_signature(sig):
    """The signature and context of the translated judgment."""
    s1, s2 = dup_sig(sig)
    return s1 + s2, sig_to_pm_context(sig)

