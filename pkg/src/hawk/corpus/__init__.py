"""The bundled corpus: every item is checked by the kernel, and every
translated artifact is checked again in LHAw."""

from __future__ import annotations

import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from hawk.kernel import check_proof, infer_sort
from hawk.surface import SourceFile, parse, parse_formula, parse_term, show_sort
from hawk.syntax import (
    LEHAW, LHAW, N, And, Arrow, Eq, Exists, Forall, Imp, Lam, Null, Succ, Var,
    Zero, apps, sorts_up_to_depth, subst_term,
)
from hawk.translate import (
    collaps, collaps_formula, elim_formula, elim_formula_statement, eqpm, equiv,
    equiv_statement, per_formula, per_witness, pm_signature, translate_proof,
    translate_term,
)

THEOREM_FILES = ("lhaw.haw", "lehaw.haw")

PRELUDE = """
def add : N -> N -> N := fun (a b : N) => rec[N] a (fun (r k : N) => S r) b
def mult : N -> N -> N := fun (a b : N) => rec[N] 0 (fun (r k : N) => add r a) b
def pred : N -> N := fun (n : N) => rec[N] 0 (fun (r k : N) => k) n
"""

TERMS = {
    "zero": "0",
    "one": "1",
    "two": "2",
    "three": "3",
    "four": "4",
    "five": "5",
    "succ": "fun (x : N) => S x",
    "id": "fun (x : N) => x",
    "const": "fun (x y : N) => x",
    "add": "add",
    "mult": "mult",
    "pred": "pred",
    "add_2_3": "add 2 3",
    "mult_2_2": "mult 2 2",
    "pred_4": "pred 4",
    "compose": "fun (f g : N -> N) (x : N) => f (g x)",
    "iterate": "fun (f : N -> N) (x n : N) => rec[N] x (fun (r k : N) => f r) n",
    "twice": "fun (f : N -> N) (x : N) => f (f x)",
    "apply_zero": "fun (F : (N -> N) -> N) => F (fun (x : N) => x)",
    "rec_arrow": "rec[N -> N] (fun (x : N) => x) (fun (r : N -> N) (k : N) (x : N) => S (r x)) 3",
    "ackermann": "fun (m : N) => rec[N -> N] (fun (n : N) => S n) "
                 "(fun (a : N -> N) (k n : N) => rec[N] (a 1) (fun (r j : N) => a r) n) m",
}

EQUIV_FORMULAS = {
    "eq_nat": "0 = 0",
    "eq_arrow": "(fun (x : N) => x) =[N -> N] (fun (x : N) => x)",
    "imp": "bot -> bot",
    "and": "0 = 0 /\\ 1 = 1",
    "forall": "forall x:N. x = x",
    "exists": "exists x:N. x = 1",
    "forall_arrow": "forall f:N -> N. f =[N -> N] f",
    "null": "null 0",
    "forall_exists": "forall x:N. exists y:N. y = S x",
    "exists_arrow": "exists f:N -> N. forall x:N. f x = x",
    "higher": "forall F:(N -> N) -> N. forall f:N -> N. F f = F f",
    "or": "0 = 0 \\/ bot",
}


def read(name: str) -> str:
    return (resources.files("hawk") / "corpus" / name).read_text(encoding="utf-8")


def load(name: str) -> SourceFile:
    return parse(read(name))


def prelude_term(src: str):
    """Parse `src` against the arithmetic prelude, definitions expanded."""
    defs = parse(PRELUDE).expanded_defs()
    return subst_term(parse_term(src), {k: v for k, (_, v) in defs.items()})


# ---------------------------------------------------------------- items


@dataclass
class Outcome:
    check: str  # ok | fail | n/a
    translate: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.check in ("ok", "n/a") and self.translate in ("ok", "n/a")


@dataclass
class Item:
    name: str
    logic: str
    suite: str
    run: Callable[[], Outcome]
    required: bool = True


def _verdict(rep) -> str:
    return "ok" if rep.accepted else "fail"


def theorem_item(sf: SourceFile, thm, suite: str) -> Item:
    def run():
        j = sf.judgment(thm)
        rep = check_proof(j.logic, j.sig, j.ctx, j.proof, j.goal)
        if not rep.accepted:
            return Outcome("fail", "n/a", rep.describe())
        unit = translate_proof(j.logic, j.sig, j.ctx, j.proof, j.goal)
        out = unit.check()
        return Outcome("ok", _verdict(out), "" if out.accepted else out.describe())
    return Item(thm.name, sf.logic, suite, run)


def term_item(name: str, src: str) -> Item:
    def run():
        t = prelude_term(src)
        s = infer_sort([], t)
        rep = check_proof(LHAW, [], [], translate_term([], t, s), eqpm(s, t, t))
        return Outcome("ok", _verdict(rep), "" if rep.accepted else rep.describe())
    return Item(f"term:{name}", "T", "terms", run)


def _closed(s):
    if s == N:
        return Zero()
    return Lam("u", s.dom, _closed(s.cod))


def probe(x, s):
    """x applied to canonical closed arguments until it reaches N."""
    args = []
    while isinstance(s, Arrow):
        args.append(_closed(s.dom))
        s = s.cod
    return apps(x, *args)


def elim_family(s):
    """Formulas over x:s (plus a:N) covering every connective."""
    x, a = Var("x"), Var("a")
    p = probe(x, s)
    return [
        Eq(N, p, Zero()),
        Null(p),
        Imp(Eq(N, p, a), Eq(N, a, p)),
        And(Eq(N, p, p), Null(a)),
        Forall("z", N, Eq(N, p, Var("z"))),
        Exists("z", N, Eq(N, Succ(p), Var("z"))),
        Eq(s, x, _closed(s)),
        Forall("w", s, Imp(Eq(s, Var("w"), x), Exists("v", s, Eq(s, Var("v"), x)))),
    ]


def witness_item(s) -> Item:
    def run():
        bad = []
        for kind in ("sympm", "transpm", "reflpm"):
            if not check_proof(LHAW, [], [], per_witness(kind, s), per_formula(kind, s)).accepted:
                bad.append(kind)
        if not check_proof(LEHAW, [], [], collaps(s), collaps_formula(s)).accepted:
            bad.append("collaps")
        sig = [("a", N)]
        psig, pctx = pm_signature(sig)
        for i, phi in enumerate(elim_family(s)):
            el = elim_formula(sig, "x", s, phi)
            if not check_proof(LHAW, psig, pctx, el, elim_formula_statement("x", s, phi)).accepted:
                bad.append(f"elim{i}")
        return Outcome("ok" if not bad else "fail", "n/a", ",".join(bad))
    return Item(f"witness:{show_sort(s).replace(' ', '')}", LHAW, "witnesses", run)


def equiv_item(name: str, src: str) -> Item:
    def run():
        phi = parse_formula(src)
        reps = [check_proof(LEHAW, [], [], equiv(i, [], phi), equiv_statement(i, phi)) for i in (1, 2)]
        bad = [r.describe() for r in reps if not r.accepted]
        return Outcome("fail" if bad else "ok", "n/a", "; ".join(bad))
    return Item(f"equiv:{name}", LEHAW, "equiv", run)


def items() -> list[Item]:
    out = [term_item(k, v) for k, v in TERMS.items()]
    for fn in THEOREM_FILES:
        sf = load(fn)
        out += [theorem_item(sf, t, sf.logic) for t in sf.theorems]
    out += [witness_item(s) for s in sorts_up_to_depth(3)]
    out += [equiv_item(k, v) for k, v in EQUIV_FORMULAS.items()]
    return out


def timed(item: Item):
    start = time.perf_counter()
    try:
        res = item.run()
    except Exception as e:  # reported as a failed item, never swallowed silently
        res = Outcome("fail", "fail", f"{type(e).__name__}: {e}")
    return res, (time.perf_counter() - start) * 1000
