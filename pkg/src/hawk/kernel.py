"""Trusted checkers: System T sorting, LHAw and LEHAw proof checking.

The proof checker is bidirectional.  Eliminations (hypotheses, applications,
projections, instantiation, peel, ind, apppm) synthesize their formula;
introductions are checked against a goal, and every proof term that carries
enough annotations can also synthesize.  The conversion rule is applied only
where a synthesized formula meets an expected one, through
:func:`hawk.rewrite.formula_congruent`.

The kernel never builds proofs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from hawk.rewrite import formula_congruent, normalize_formula, term_congruent
from hawk.syntax import (
    LEHAW, LHAW, N, And, App, AppPm, Arrow, Bot, Efq, Eq, ExElim, Exists,
    ExIntro, ExtIntro, Forall, Formula, Imp, Ind, Lam, Null, Pair, Peel, PApp,
    PLam, Proj, Proof, PVar, Rec, Refl, Sort, Succ, TApp, TLam, Term, Var, Zero,
    Nat, formula_fv, fresh, proof_fv, proof_pfv, rename_term_var,
    subst_formula, term_fv,
)

# named diagnostics
UNBOUND_VARIABLE = "unbound variable"
NOT_A_FUNCTION = "not a function"
DOMAIN_MISMATCH = "domain mismatch"
REC_MISMATCH = "rec mismatch"
SUCC_MISMATCH = "succ mismatch"
SORT_MISMATCH = "sort mismatch"
UNBOUND_PROOF_VARIABLE = "unbound proof variable"
EIGENVARIABLE = "non-fresh eigenvariable"
MOTIVE_MISMATCH = "motive mismatch"
PEEL_EQUATION = "peel equation mismatch"
ARROW_EQUALITY = "equality at arrow sort"
EFQ_FREE_VARIABLES = "efq free variables"
EXTENSIONALITY = "extensionality rule outside LEHAw"
FORMULA_MISMATCH = "formula mismatch"
WRONG_CONNECTIVE = "wrong connective"
HYPOTHESIS_MISMATCH = "hypothesis mismatch"
CANNOT_INFER = "cannot infer"
ILL_FORMED_CONTEXT = "ill-formed context"
DUPLICATE_NAME = "duplicate name"

LOGICS = (LHAW, LEHAW)


class SortError(Exception):
    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message


class ProofError(Exception):
    def __init__(self, rule, message, path=(), expected=None, found=None):
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message
        self.path = tuple(path)
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    goal: Formula | None = None
    rule: str | None = None
    message: str = ""
    path: tuple = ()
    expected: object = None
    found: object = None

    @property
    def verdict(self) -> str:
        return "accepted" if self.accepted else "rejected"

    def describe(self) -> str:
        if self.accepted:
            return "accepted"
        where = "/".join(map(str, self.path)) or "<root>"
        out = f"rejected [{self.rule}] at {where}: {self.message}"
        if self.expected is not None:
            out += f"\n  expected: {self.expected}"
        if self.found is not None:
            out += f"\n  found:    {self.found}"
        return out


# ---------------------------------------------------------------- System T


def _as_dict(sig) -> dict:
    return dict(sig.items() if isinstance(sig, Mapping) else sig)


def infer_sort(sig, t: Term) -> Sort:
    """The sort of `t` in signature `sig`, or SortError."""
    return _sort(_as_dict(sig), t)


def _sort(delta: dict, t: Term) -> Sort:
    match t:
        case Var(x):
            if x not in delta:
                raise SortError(UNBOUND_VARIABLE, f"{x} is not declared")
            return delta[x]
        case Lam(x, s, b):
            return Arrow(s, _sort({**delta, x: s}, b))
        case App(f, a):
            fs = _sort(delta, f)
            if not isinstance(fs, Arrow):
                raise SortError(NOT_A_FUNCTION, f"{f} has sort {fs}")
            as_ = _sort(delta, a)
            if as_ != fs.dom:
                raise SortError(DOMAIN_MISMATCH, f"{f} expects {fs.dom}, {a} has {as_}")
            return fs.cod
        case Zero():
            return N
        case Succ(a):
            s = _sort(delta, a)
            if s != N:
                raise SortError(SUCC_MISMATCH, f"S applied to {a} of sort {s}")
            return N
        case Rec(s, b, st, n):
            bs = _sort(delta, b)
            if bs != s:
                raise SortError(REC_MISMATCH, f"base {b} has sort {bs}, expected {s}")
            ss = _sort(delta, st)
            want = Arrow(s, Arrow(N, s))
            if ss != want:
                raise SortError(REC_MISMATCH, f"step {st} has sort {ss}, expected {want}")
            ns = _sort(delta, n)
            if ns != N:
                raise SortError(REC_MISMATCH, f"recursion argument {n} has sort {ns}")
            return s
    raise TypeError(f"not a term: {t!r}")


def check_formula(logic: str, sig, f: Formula) -> None:
    """Raise SortError/ProofError unless `f` is well formed over `sig`."""
    _wf(logic, _as_dict(sig), f, ())


def _wf(logic, delta, f, path):
    match f:
        case Eq(s, l, r):
            if logic == LHAW and s != N:
                raise ProofError(ARROW_EQUALITY, f"equality at sort {s} in LHAw", path, found=f)
            for side in (l, r):
                got = _sort_p(delta, side, path)
                if got != s:
                    raise ProofError(SORT_MISMATCH, f"{side} has sort {got}, equation is at {s}",
                                     path, expected=s, found=got)
        case Bot():
            pass
        case Null(a):
            got = _sort_p(delta, a, path)
            if got != N:
                raise ProofError(SORT_MISMATCH, f"null applied to {a} of sort {got}", path)
        case Imp(a, b) | And(a, b):
            _wf(logic, delta, a, path)
            _wf(logic, delta, b, path)
        case Forall(x, s, b) | Exists(x, s, b):
            _wf(logic, {**delta, x: s}, b, path)
        case _:
            raise TypeError(f"not a formula: {f!r}")


def _sort_p(delta, t, path):
    try:
        return _sort(delta, t)
    except SortError as e:
        raise ProofError(e.rule, e.message, path, found=t) from None


def wf_report(sig, ctx, logic: str = LEHAW) -> CheckReport:
    """Well-formedness of a signature/context pair, with diagnostics."""
    names = [x for x, _ in sig]
    if len(set(names)) != len(names):
        return CheckReport(False, rule=DUPLICATE_NAME, message="signature names repeat")
    pnames = [h for h, _ in ctx]
    if len(set(pnames)) != len(pnames):
        return CheckReport(False, rule=DUPLICATE_NAME, message="context names repeat")
    delta = dict(sig)
    for h, phi in ctx:
        missing = formula_fv(phi) - delta.keys()
        if missing:
            return CheckReport(False, rule=ILL_FORMED_CONTEXT,
                               message=f"{h} mentions undeclared {', '.join(sorted(missing))}",
                               path=(h,), found=phi)
        try:
            _wf(logic, delta, phi, (h,))
        except ProofError as e:
            return CheckReport(False, rule=e.rule, message=e.message, path=e.path, found=phi)
    return CheckReport(True)


def check_wf(sig, ctx, logic: str = LEHAW) -> bool:
    return wf_report(sig, ctx, logic).accepted


# ---------------------------------------------------------------- proofs


def _ctx_fv(gamma: dict) -> frozenset:
    out = frozenset()
    for phi in gamma.values():
        out |= formula_fv(phi)
    return out


def _shape(f: Formula, cls):
    if isinstance(f, cls):
        return f
    g = normalize_formula(f)
    return g if isinstance(g, cls) else None


_CONNECTIVE = {Imp: "an implication", And: "a conjunction", Forall: "a universal",
               Exists: "an existential", Eq: "an equation", Bot: "bot"}


class _Checker:
    def __init__(self, logic: str):
        if logic not in LOGICS:
            raise ValueError(f"unknown logic {logic!r}")
        self.logic = logic
        self.cache: dict = {}

    # -- helpers

    def expect(self, f, cls, path, what=""):
        g = _shape(f, cls)
        if g is None:
            raise ProofError(WRONG_CONNECTIVE, f"{what}expected {_CONNECTIVE[cls]}", path, found=f)
        return g

    def sort_of(self, delta, t, path):
        return _sort_p(delta, t, path)

    def wf(self, delta, f, path):
        _wf(self.logic, delta, f, path)

    def need_lehaw(self, rule_name, path):
        if self.logic != LEHAW:
            raise ProofError(EXTENSIONALITY, f"{rule_name} is only available in LEHAw", path)

    def need_sort_in_logic(self, s, path):
        if self.logic == LHAW and s != N:
            raise ProofError(ARROW_EQUALITY, f"equality at sort {s} in LHAw", path)

    def bind_term(self, x, body, delta, gamma, gamma_fv, avoid_fv):
        """Alpha-rename the binder `x` away from the signature, the context and
        `avoid_fv`.  Also reports whether `x` clashed with a hypothesis the body
        uses or with `avoid_fv`, where renaming may change what the body means."""
        used = frozenset().union(*(formula_fv(gamma[h]) for h in proof_pfv(body) if h in gamma))
        clash = x in used or x in avoid_fv
        if x in delta or x in gamma_fv or x in avoid_fv:
            x2 = fresh(x, set(delta) | gamma_fv | proof_fv(body) | avoid_fv)
            return x2, rename_term_var(body, x, x2), clash
        return x, body, clash

    def scoped(self, clash, x, path, run):
        """Run `run`; when the binder clashed, blame a failure on the
        eigenvariable condition."""
        if not clash:
            return run()
        try:
            return run()
        except ProofError as e:
            if e.rule == EIGENVARIABLE:
                raise
            raise ProofError(EIGENVARIABLE, f"{x} is not fresh for the hypotheses or the conclusion "
                             f"({e.rule}: {e.message})", path, e.expected, e.found) from None

    # -- synthesis

    def infer(self, delta, gamma, gfv, m, path) -> Formula:
        key = None
        if isinstance(m, (TLam, PLam)) and not proof_pfv(m):
            key = (m, frozenset((x, delta[x]) for x in proof_fv(m) if x in delta), gfv)
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        out = self._infer(delta, gamma, gfv, m, path)
        if key is not None:
            self.cache[key] = out
        return out

    def _infer(self, delta, gamma, gfv, m, path) -> Formula:
        match m:
            case PVar(h):
                if h not in gamma:
                    raise ProofError(UNBOUND_PROOF_VARIABLE, f"{h} is not in the context", path)
                return gamma[h]
            case PApp(f, a):
                ft = self.expect(self.infer(delta, gamma, gfv, f, path + ("fn",)), Imp,
                                 path + ("fn",), "applied proof: ")
                self.check(delta, gamma, gfv, a, ft.left, path + ("arg",))
                return ft.right
            case Proj(i, p):
                pt = self.expect(self.infer(delta, gamma, gfv, p, path + ("proof",)), And,
                                 path + ("proof",), "projected proof: ")
                return pt.left if i == 1 else pt.right
            case TApp(p, t):
                pt = self.expect(self.infer(delta, gamma, gfv, p, path + ("proof",)), Forall,
                                 path + ("proof",), "instantiated proof: ")
                got = self.sort_of(delta, t, path + ("term",))
                if got != pt.sort:
                    raise ProofError(SORT_MISMATCH, f"instantiating {pt.var} : {pt.sort} with {t} : {got}",
                                     path + ("term",), expected=pt.sort, found=got)
                return subst_formula(pt.body, {pt.var: t})
            case Peel(s, t, u, e, x, phi, b):
                self.need_sort_in_logic(s, path)
                for side in (t, u):
                    got = self.sort_of(delta, side, path)
                    if got != s:
                        raise ProofError(SORT_MISMATCH, f"peel endpoint {side} : {got}, expected {s}",
                                         path, expected=s, found=got)
                self.wf({**delta, x: s}, phi, path + ("motive",))
                et = self.expect(self.infer(delta, gamma, gfv, e, path + ("eq",)), Eq,
                                 path + ("eq",), "peel equation: ")
                if et.sort != s or not term_congruent(et.lhs, t) or not term_congruent(et.rhs, u):
                    raise ProofError(PEEL_EQUATION, "equation does not match the peel annotation",
                                     path + ("eq",), expected=Eq(s, t, u), found=et)
                self.check(delta, gamma, gfv, b, subst_formula(phi, {x: t}), path + ("base",),
                           MOTIVE_MISMATCH)
                return subst_formula(phi, {x: u})
            case Ind(x, phi, b, st, t):
                got = self.sort_of(delta, t, path + ("scrut",))
                if got != N:
                    raise ProofError(SORT_MISMATCH, f"induction on {t} of sort {got}", path + ("scrut",))
                self.wf({**delta, x: N}, phi, path + ("motive",))
                self.check(delta, gamma, gfv, b, subst_formula(phi, {x: Zero()}), path + ("base",),
                           MOTIVE_MISMATCH)
                step_goal = Forall(x, N, Imp(phi, subst_formula(phi, {x: Succ(Var(x))})))
                self.check(delta, gamma, gfv, st, step_goal, path + ("step",), MOTIVE_MISMATCH)
                return subst_formula(phi, {x: t})
            case AppPm(s, r, p, t, u, q):
                self.need_lehaw("apppm", path)
                fs = Arrow(s, r)
                pt = self.expect(self.infer(delta, gamma, gfv, p, path + ("proof",)), Eq,
                                 path + ("proof",), "apppm function equation: ")
                if pt.sort != fs:
                    raise ProofError(SORT_MISMATCH, f"apppm expects an equation at {fs}",
                                     path + ("proof",), expected=fs, found=pt.sort)
                for side in (t, u):
                    got = self.sort_of(delta, side, path)
                    if got != s:
                        raise ProofError(SORT_MISMATCH, f"apppm argument {side} : {got}, expected {s}", path)
                self.check(delta, gamma, gfv, q, Eq(s, t, u), path + ("arg",))
                return Eq(r, App(pt.lhs, t), App(pt.rhs, u))
            case PLam(h, phi, b):
                self.wf(delta, phi, path + ("hyp",))
                g2 = {**gamma, h: phi}
                return Imp(phi, self.infer(delta, g2, gfv | formula_fv(phi), b, path + ("body",)))
            case TLam(x, s, b):
                x0 = x
                x, b, clash = self.bind_term(x, b, delta, gamma, gfv, frozenset())
                return self.scoped(clash, x0, path, lambda: Forall(
                    x, s, self.infer({**delta, x: s}, gamma, gfv, b, path + ("body",))))
            case Pair(a, b):
                return And(self.infer(delta, gamma, gfv, a, path + ("left",)),
                           self.infer(delta, gamma, gfv, b, path + ("right",)))
            case Refl(s, t):
                self.need_sort_in_logic(s, path)
                got = self.sort_of(delta, t, path)
                if got != s:
                    raise ProofError(SORT_MISMATCH, f"refl at {s} of {t} : {got}", path, expected=s, found=got)
                return Eq(s, t, t)
            case Efq(p, phi):
                missing = formula_fv(phi) - delta.keys()
                if missing:
                    raise ProofError(EFQ_FREE_VARIABLES,
                                     f"efq target mentions undeclared {', '.join(sorted(missing))}",
                                     path + ("target",), found=phi)
                self.wf(delta, phi, path + ("target",))
                self.check(delta, gamma, gfv, p, Bot(), path + ("proof",))
                return phi
            case ExIntro(t, p, phi):
                self.wf(delta, phi, path + ("target",))
                ex = self.expect(phi, Exists, path + ("target",), "witness target: ")
                got = self.sort_of(delta, t, path + ("witness",))
                if got != ex.sort:
                    raise ProofError(SORT_MISMATCH, f"witness {t} : {got}, expected {ex.sort}",
                                     path + ("witness",), expected=ex.sort, found=got)
                self.check(delta, gamma, gfv, p, subst_formula(ex.body, {ex.var: t}), path + ("proof",))
                return phi
            case ExElim(p, x, h, b):
                ex = self.expect(self.infer(delta, gamma, gfv, p, path + ("proof",)), Exists,
                                 path + ("proof",), "unpacked proof: ")
                x0 = x
                x, b, clash = self.bind_term(x, b, delta, gamma, gfv, frozenset())
                hyp = subst_formula(ex.body, {ex.var: Var(x)})
                out = self.scoped(clash, x0, path, lambda: self.infer(
                    {**delta, x: ex.sort}, {**gamma, h: hyp}, gfv | formula_fv(hyp), b, path + ("body",)))
                if x in formula_fv(out):
                    raise ProofError(EIGENVARIABLE, f"{x} escapes through the conclusion", path, found=out)
                return out
            case ExtIntro(s, r, p):
                self.need_lehaw("ext", path)
                pt = self.expect(self.infer(delta, gamma, gfv, p, path + ("proof",)), Forall,
                                 path + ("proof",), "ext premise: ")
                body = _shape(pt.body, Eq)
                if pt.sort != s or body is None or body.sort != r:
                    raise ProofError(CANNOT_INFER, "ext premise is not a pointwise equation",
                                     path + ("proof",), found=pt)
                f = _unapply(body.lhs, pt.var)
                g = _unapply(body.rhs, pt.var)
                if f is None or g is None:
                    raise ProofError(CANNOT_INFER, "cannot read the functions off an ext premise; "
                                     "use it against a known goal", path, found=pt)
                return Eq(Arrow(s, r), f, g)
        raise TypeError(f"not a proof term: {m!r}")

    # -- checking

    def check(self, delta, gamma, gfv, m, goal, path, mismatch=FORMULA_MISMATCH):
        match m:
            case PLam(h, phi, b):
                g = self.expect(goal, Imp, path, "")
                self.wf(delta, phi, path + ("hyp",))
                if not formula_congruent(phi, g.left):
                    raise ProofError(HYPOTHESIS_MISMATCH, "annotated hypothesis differs from the goal's premise",
                                     path + ("hyp",), expected=g.left, found=phi)
                self.check(delta, {**gamma, h: phi}, gfv | formula_fv(phi), b, g.right, path + ("body",))
                return
            case TLam(x, s, b):
                g = self.expect(goal, Forall, path, "")
                if g.sort != s:
                    raise ProofError(SORT_MISMATCH, f"binder {x} : {s}, goal quantifies over {g.sort}",
                                     path, expected=g.sort, found=s)
                x0 = x
                x, b, clash = self.bind_term(x, b, delta, gamma, gfv, formula_fv(g))
                self.scoped(clash, x0, path, lambda: self.check(
                    {**delta, x: s}, gamma, gfv, b, subst_formula(g.body, {g.var: Var(x)}), path + ("body",)))
                return
            case Pair(a, b):
                g = self.expect(goal, And, path, "")
                self.check(delta, gamma, gfv, a, g.left, path + ("left",))
                self.check(delta, gamma, gfv, b, g.right, path + ("right",))
                return
            case ExElim(p, x, h, b):
                ex = self.expect(self.infer(delta, gamma, gfv, p, path + ("proof",)), Exists,
                                 path + ("proof",), "unpacked proof: ")
                x0 = x
                x, b, clash = self.bind_term(x, b, delta, gamma, gfv, formula_fv(goal))
                hyp = subst_formula(ex.body, {ex.var: Var(x)})
                self.scoped(clash, x0, path, lambda: self.check(
                    {**delta, x: ex.sort}, {**gamma, h: hyp}, gfv | formula_fv(hyp), b, goal,
                    path + ("body",), mismatch))
                return
            case ExtIntro(s, r, p):
                self.need_lehaw("ext", path)
                g = self.expect(goal, Eq, path, "")
                if g.sort != Arrow(s, r):
                    raise ProofError(SORT_MISMATCH, f"ext at {Arrow(s, r)}, goal equation at {g.sort}",
                                     path, expected=g.sort, found=Arrow(s, r))
                x = fresh("x", set(delta) | formula_fv(g))
                pointwise = Forall(x, s, Eq(r, App(g.lhs, Var(x)), App(g.rhs, Var(x))))
                self.check(delta, gamma, gfv, p, pointwise, path + ("proof",))
                return
        found = self.infer(delta, gamma, gfv, m, path)
        if not formula_congruent(found, goal):
            raise ProofError(mismatch, "proof does not establish the expected formula", path,
                             expected=goal, found=found)


def _unapply(t: Term, x: str):
    if isinstance(t, App) and t.arg == Var(x) and x not in term_fv(t.fn):
        return t.fn
    return None


def _prepare(logic, sig, ctx):
    rep = wf_report(sig, ctx, logic)
    if not rep.accepted:
        raise ProofError(rep.rule, rep.message, rep.path, found=rep.found)
    delta = dict(sig)
    gamma = dict(ctx)
    return delta, gamma, _ctx_fv(gamma)


def check_proof(logic: str, sig, ctx, proof: Proof, goal: Formula) -> CheckReport:
    """Decide `sig ; ctx |- proof : goal` in `logic` ('lhaw' or 'lehaw')."""
    checker = _Checker(logic)
    try:
        delta, gamma, gfv = _prepare(logic, sig, ctx)
        missing = formula_fv(goal) - delta.keys()
        if missing:
            raise ProofError(UNBOUND_VARIABLE, f"goal mentions undeclared {', '.join(sorted(missing))}",
                             ("goal",), found=goal)
        checker.wf(delta, goal, ("goal",))
        checker.check(delta, gamma, gfv, proof, goal, ())
    except ProofError as e:
        return CheckReport(False, rule=e.rule, message=e.message, path=e.path,
                           expected=e.expected, found=e.found)
    return CheckReport(True, goal=goal)


def infer_proof(logic: str, sig, ctx, proof: Proof) -> Formula:
    """Synthesize the formula proved by `proof`; raises ProofError."""
    checker = _Checker(logic)
    delta, gamma, gfv = _prepare(logic, sig, ctx)
    return checker.infer(delta, gamma, gfv, proof, ())


def check_judgment(j) -> CheckReport:
    return check_proof(j.logic, j.sig, j.ctx, j.proof, j.goal)


def is_lhaw_formula(f: Formula) -> bool:
    match f:
        case Eq(s, _, _):
            return isinstance(s, Nat)
        case Imp(a, b) | And(a, b):
            return is_lhaw_formula(a) and is_lhaw_formula(b)
        case Forall(_, _, b) | Exists(_, _, b):
            return is_lhaw_formula(b)
    return True
