"""Experimental check that the translation respects proof reduction.

Proof terms get beta rules (term and proof abstraction, unpacking a
witness pair, projecting a pair) and iota rules (induction on 0 and on a
successor, peel on refl, apppm on ext).  For a closed, peel-free source
proof M and each one-step reduct N, the harness looks for a common reduct
of M^pm and N^pm within a step budget.  The outcome is only ever
"joinable" or "unknown".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hawk.kernel import check_judgment
from hawk.rewrite import StepBudgetExceeded, normalize_formula, normalize_term
from hawk.syntax import (
    AppPm, Efq, ExElim, ExIntro, ExtIntro, Ind, Judgment, PApp, PLam, Pair,
    Peel, Proj, PVar, Refl, Succ, TApp, TLam, Zero, alpha_key, proof_fv,
    subst_proof,
)
from hawk.translate import translate_proof

DEFAULT_MAX_STEPS = 10**4


# ---------------------------------------------------------------- reduction


def _contract(m):
    match m:
        case TApp(TLam(x, _, b), t):
            return "beta-term", subst_proof(b, {x: t}, {})
        case PApp(PLam(h, _, b), a):
            return "beta-proof", subst_proof(b, {}, {h: a})
        case ExElim(ExIntro(t, p, _), x, h, b):
            return "beta-unpack", subst_proof(b, {x: t}, {h: p})
        case Proj(i, Pair(a, b)):
            return "beta-proj", a if i == 1 else b
        case Ind(x, phi, b, st, t):
            n = normalize_term(t)
            if isinstance(n, Zero):
                return "iota-ind-zero", b
            if isinstance(n, Succ):
                return "iota-ind-succ", PApp(TApp(st, n.arg), Ind(x, phi, b, st, n.arg))
        case Peel(_, _, _, Refl(), _, _, b):
            return "iota-peel", b
        case AppPm(_, _, ExtIntro(_, _, p), t, u, Refl()):
            if alpha_key(normalize_term(t)) == alpha_key(normalize_term(u)):
                return "ext-app", TApp(p, t)
    return None


def _children(m):
    """(index, child, rebuild) for each proof-term child, left to right."""
    match m:
        case PApp(f, a):
            return [(0, f, lambda c: PApp(c, a)), (1, a, lambda c: PApp(f, c))]
        case TApp(p, t):
            return [(0, p, lambda c: TApp(c, t))]
        case Pair(a, b):
            return [(0, a, lambda c: Pair(c, b)), (1, b, lambda c: Pair(a, c))]
        case Proj(i, p):
            return [(0, p, lambda c: Proj(i, c))]
        case PLam(h, phi, b):
            return [(0, b, lambda c: PLam(h, phi, c))]
        case TLam(x, s, b):
            return [(0, b, lambda c: TLam(x, s, c))]
        case Peel(s, t, u, e, x, phi, b):
            return [(0, e, lambda c: Peel(s, t, u, c, x, phi, b)),
                    (1, b, lambda c: Peel(s, t, u, e, x, phi, c))]
        case Efq(p, phi):
            return [(0, p, lambda c: Efq(c, phi))]
        case ExIntro(t, p, phi):
            return [(0, p, lambda c: ExIntro(t, c, phi))]
        case ExElim(p, x, h, b):
            return [(0, p, lambda c: ExElim(c, x, h, b)), (1, b, lambda c: ExElim(p, x, h, c))]
        case Ind(x, phi, b, st, t):
            return [(0, b, lambda c: Ind(x, phi, c, st, t)), (1, st, lambda c: Ind(x, phi, b, c, t))]
        case ExtIntro(s, r, p):
            return [(0, p, lambda c: ExtIntro(s, r, c))]
        case AppPm(s, r, p, t, u, q):
            return [(0, p, lambda c: AppPm(s, r, c, t, u, q)), (1, q, lambda c: AppPm(s, r, p, t, u, c))]
    return []


def proof_steps(m, path=()):
    """Every one-step reduct of `m` as (position, rule, reduct), outermost first."""
    hit = _contract(m)
    if hit is not None:
        yield path, hit[0], hit[1]
    for i, child, rebuild in _children(m):
        for pos, rule, red in proof_steps(child, path + (i,)):
            yield pos, rule, rebuild(red)


def step_proof(m):
    """Leftmost-outermost reduct of `m`, or None when `m` is normal."""
    for _, _, red in proof_steps(m):
        return red
    return None


def canonical(m):
    """Alpha key of `m` with every embedded term and formula normalized."""
    return alpha_key(_canon(m))


def _canon(m):
    nt, nf = normalize_term, normalize_formula
    match m:
        case PVar():
            return m
        case Refl(s, t):
            return Refl(s, nt(t))
        case Peel(s, t, u, e, x, phi, b):
            return Peel(s, nt(t), nt(u), _canon(e), x, nf(phi), _canon(b))
        case Efq(p, phi):
            return Efq(_canon(p), nf(phi))
        case PLam(h, phi, b):
            return PLam(h, nf(phi), _canon(b))
        case PApp(a, b):
            return PApp(_canon(a), _canon(b))
        case Pair(a, b):
            return Pair(_canon(a), _canon(b))
        case Proj(i, p):
            return Proj(i, _canon(p))
        case TLam(x, s, b):
            return TLam(x, s, _canon(b))
        case TApp(p, t):
            return TApp(_canon(p), nt(t))
        case ExIntro(t, p, phi):
            return ExIntro(nt(t), _canon(p), nf(phi))
        case ExElim(p, x, h, b):
            return ExElim(_canon(p), x, h, _canon(b))
        case Ind(x, phi, b, st, t):
            return Ind(x, nf(phi), _canon(b), _canon(st), nt(t))
        case ExtIntro(s, r, p):
            return ExtIntro(s, r, _canon(p))
        case AppPm(s, r, p, t, u, q):
            return AppPm(s, r, _canon(p), nt(t), nt(u), _canon(q))
    raise TypeError(f"not a proof term: {m!r}")


def joinable(p, q, max_steps: int = DEFAULT_MAX_STEPS):
    """Search for a common reduct along the normal-order sequences of `p`
    and `q`.  Returns (True, steps) or (False, reason)."""
    seen = ({canonical(p): 0}, {canonical(q): 0})
    cur = [p, q]
    done = [False, False]
    if set(seen[0]) & set(seen[1]):
        return True, 0
    steps = 0
    while steps < max_steps and not all(done):
        steps += 1
        for side in (0, 1):
            if done[side]:
                continue
            nxt = step_proof(cur[side])
            if nxt is None:
                done[side] = True
                continue
            cur[side] = nxt
            k = canonical(nxt)
            seen[side].setdefault(k, steps)
            if k in seen[1 - side]:
                return True, steps
    if all(done):
        return False, "distinct normal forms"
    return False, "budget exhausted"


# ---------------------------------------------------------------- the experiment


def contains_peel(m) -> bool:
    if isinstance(m, Peel):
        return True
    return any(contains_peel(c) for _, c, _ in _children(m))


@dataclass
class Instance:
    theorem: str
    position: tuple
    rule: str
    verdict: str  # joinable | unknown | skipped | error
    detail: str = ""


@dataclass
class Report:
    instances: list = field(default_factory=list)

    def count(self, verdict):
        return sum(1 for i in self.instances if i.verdict == verdict)

    @property
    def considered(self):
        return [i for i in self.instances if i.verdict in ("joinable", "unknown", "error")]

    def summary(self) -> str:
        n = len(self.considered)
        j = self.count("joinable")
        rate = f"{100 * j / n:.1f}%" if n else "n/a"
        return (f"instances={n} joinable={j} unknown={self.count('unknown')} "
                f"errors={self.count('error')} skipped={self.count('skipped')} joinable_rate={rate}")


def run_theorem(name, judgment: Judgment, max_steps: int = DEFAULT_MAX_STEPS) -> list[Instance]:
    j = judgment
    if j.sig or proof_fv(j.proof):
        return [Instance(name, (), "-", "skipped", "free first-order variables")]
    if contains_peel(j.proof):
        return [Instance(name, (), "-", "skipped", "excluded by conjecture hypothesis (contains peel)")]
    out = []
    try:
        src = translate_proof(j.logic, j.sig, j.ctx, j.proof, j.goal).produced.proof
    except Exception as e:  # the source itself is outside the experiment
        return [Instance(name, (), "-", "skipped", f"source not translatable: {e}")]
    steps = list(proof_steps(j.proof))
    if not steps:
        return [Instance(name, (), "-", "skipped", "source proof is normal")]
    for pos, rule, red in steps:
        try:
            rep = check_judgment(Judgment(j.logic, j.sig, j.ctx, red, j.goal))
            if not rep.accepted:
                out.append(Instance(name, pos, rule, "error", f"reduct rejected: {rep.describe()}"))
                continue
            tgt = translate_proof(j.logic, j.sig, j.ctx, red, j.goal).produced.proof
            ok, info = joinable(src, tgt, max_steps)
            out.append(Instance(name, pos, rule, "joinable" if ok else "unknown",
                                f"steps={info}" if ok else info))
        except StepBudgetExceeded:
            out.append(Instance(name, pos, rule, "unknown", "term step budget exhausted"))
        except Exception as e:  # reported, never raised: the harness is exploratory
            out.append(Instance(name, pos, rule, "error", f"{type(e).__name__}: {e}"))
    return out


def run(judgments, max_steps: int = DEFAULT_MAX_STEPS) -> Report:
    rep = Report()
    for name, j in judgments:
        rep.instances.extend(run_theorem(name, j, max_steps))
    return rep

