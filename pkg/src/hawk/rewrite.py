"""Reduction of System T terms and the congruences on terms and formulas.

``step_term`` contracts the leftmost-outermost redex and is what traces are
built from.  ``normalize_term`` reaches the same normal form with a
normal-order evaluator (weak-head first, then under binders), which avoids
re-scanning the whole term after each contraction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from hawk.syntax import (
    App, And, Bot, Eq, Exists, Forall, Formula, Imp, Lam, Null, Rec, Succ,
    Term, Zero, alpha_eq, alpha_key, subst_term,
)

DEFAULT_STEP_BUDGET = 10**6


class StepBudgetExceeded(RuntimeError):
    """Normalization ran past its step budget; a defect on well-typed input."""


def step_budget() -> int:
    return int(os.environ.get("HAWK_STEP_BUDGET", DEFAULT_STEP_BUDGET))


# ---------------------------------------------------------------- small steps


@dataclass(frozen=True)
class Step:
    position: tuple
    rule: str
    before: Term
    after: Term


def _contract(t: Term):
    match t:
        case App(Lam(x, _, b), a):
            return "beta", subst_term(b, {x: a})
        case Rec(_, b, _, Zero()):
            return "rec-zero", b
        case Rec(s, b, st, Succ(v)):
            return "rec-succ", App(App(st, Rec(s, b, st, v)), v)
    return None


def _step_at(t: Term, pos: tuple):
    hit = _contract(t)
    if hit is not None:
        return pos, hit[0], hit[1]
    match t:
        case Lam(x, s, b):
            r = _step_at(b, pos + (0,))
            return r and (r[0], r[1], Lam(x, s, r[2]))
        case App(f, a):
            r = _step_at(f, pos + (0,))
            if r:
                return r[0], r[1], App(r[2], a)
            r = _step_at(a, pos + (1,))
            return r and (r[0], r[1], App(f, r[2]))
        case Succ(a):
            r = _step_at(a, pos + (0,))
            return r and (r[0], r[1], Succ(r[2]))
        case Rec(s, b, st, n):
            kids = [b, st, n]
            for i, k in enumerate(kids):
                r = _step_at(k, pos + (i,))
                if r:
                    kids[i] = r[2]
                    return r[0], r[1], Rec(s, *kids)
    return None


def step_term(t: Term) -> Term | None:
    """Contract the leftmost-outermost redex; None when `t` is normal."""
    r = _step_at(t, ())
    return None if r is None else r[2]


def trace_term(t: Term, budget: int | None = None) -> list[Step]:
    """The leftmost-outermost reduction sequence of `t` to normal form."""
    budget = step_budget() if budget is None else budget
    steps = []
    while True:
        r = _step_at(t, ())
        if r is None:
            return steps
        if len(steps) >= budget:
            raise StepBudgetExceeded(f"more than {budget} steps")
        pos, rule, after = r
        steps.append(Step(pos, rule, t, after))
        t = after


def redexes(t: Term, pos: tuple = ()):
    """Positions of every redex in `t`, outermost-leftmost first."""
    if _contract(t) is not None:
        yield pos
    match t:
        case Lam(_, _, b) | Succ(b):
            yield from redexes(b, pos + (0,))
        case App(f, a):
            yield from redexes(f, pos + (0,))
            yield from redexes(a, pos + (1,))
        case Rec(_, b, st, n):
            for i, k in enumerate((b, st, n)):
                yield from redexes(k, pos + (i,))


def contract_at(t: Term, pos: tuple) -> Term:
    """Contract the redex at `pos` (as produced by :func:`redexes`)."""
    if not pos:
        hit = _contract(t)
        if hit is None:
            raise ValueError("no redex at position")
        return hit[1]
    i, rest = pos[0], pos[1:]
    match t:
        case Lam(x, s, b):
            return Lam(x, s, contract_at(b, rest))
        case Succ(a):
            return Succ(contract_at(a, rest))
        case App(f, a):
            return App(contract_at(f, rest), a) if i == 0 else App(f, contract_at(a, rest))
        case Rec(s, b, st, n):
            kids = [b, st, n]
            kids[i] = contract_at(kids[i], rest)
            return Rec(s, *kids)
    raise ValueError("bad position")


# ---------------------------------------------------------------- normalization


class _Fuel:
    def __init__(self, budget):
        self.left = budget

    def burn(self):
        self.left -= 1
        if self.left < 0:
            raise StepBudgetExceeded("rewrite step budget exhausted")


def _whnf(t: Term, fuel: _Fuel) -> Term:
    while True:
        match t:
            case App(f, a):
                f2 = _whnf(f, fuel)
                if isinstance(f2, Lam):
                    fuel.burn()
                    t = subst_term(f2.body, {f2.var: a})
                    continue
                return App(f2, a) if f2 is not f else t
            case Rec(s, b, st, n):
                n2 = _whnf(n, fuel)
                if isinstance(n2, Zero):
                    fuel.burn()
                    t = b
                    continue
                if isinstance(n2, Succ):
                    fuel.burn()
                    t = App(App(st, Rec(s, b, st, n2.arg)), n2.arg)
                    continue
                return Rec(s, b, st, n2) if n2 is not n else t
        return t


@lru_cache(maxsize=1 << 15)
def _nf(t: Term, budget: int) -> Term:
    fuel = _Fuel(budget)
    return _nf_inner(t, fuel)


def _nf_inner(t: Term, fuel: _Fuel) -> Term:
    t = _whnf(t, fuel)
    match t:
        case Lam(x, s, b):
            return Lam(x, s, _nf_inner(b, fuel))
        case App(f, a):
            return App(_nf_inner(f, fuel), _nf_inner(a, fuel))
        case Succ(a):
            return Succ(_nf_inner(a, fuel))
        case Rec(s, b, st, n):
            return Rec(s, _nf_inner(b, fuel), _nf_inner(st, fuel), _nf_inner(n, fuel))
    return t


def normalize_term(t: Term, budget: int | None = None) -> Term:
    """The normal form of a well-typed term.

    Raises StepBudgetExceeded when more than `budget` contractions are
    needed (HAWK_STEP_BUDGET, default one million).
    """
    return _nf(t, step_budget() if budget is None else budget)


def term_congruent(t: Term, u: Term) -> bool:
    if alpha_eq(t, u):
        return True
    return alpha_key(normalize_term(t)) == alpha_key(normalize_term(u))


# ---------------------------------------------------------------- formulas


@lru_cache(maxsize=1 << 15)
def normalize_formula(f: Formula) -> Formula:
    """Normalize embedded terms, then rewrite null(0) to bot->bot and
    null(S t) to bot everywhere."""
    match f:
        case Eq(s, l, r):
            return Eq(s, normalize_term(l), normalize_term(r))
        case Bot():
            return f
        case Null(a):
            a = normalize_term(a)
            if isinstance(a, Zero):
                return Imp(Bot(), Bot())
            if isinstance(a, Succ):
                return Bot()
            return Null(a)
        case Imp(a, b):
            return Imp(normalize_formula(a), normalize_formula(b))
        case And(a, b):
            return And(normalize_formula(a), normalize_formula(b))
        case Forall(x, s, b) | Exists(x, s, b):
            return type(f)(x, s, normalize_formula(b))
    raise TypeError(f"not a formula: {f!r}")


def formula_congruent(a: Formula, b: Formula) -> bool:
    if alpha_eq(a, b):
        return True
    return alpha_key(normalize_formula(a)) == alpha_key(normalize_formula(b))


def is_normal(t: Term) -> bool:
    return step_term(t) is None
