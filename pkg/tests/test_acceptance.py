"""Acceptance criteria, one test and one printed PASS/FAIL line each.

Run directly (`python tests/test_acceptance.py`) or under pytest; the
verdict lines are printed with capture disabled so they land in the log.
"""

import dataclasses
import time

import pytest

from hawk import corpus
from hawk.conjecture import DEFAULT_MAX_STEPS, run as run_conjecture
from hawk.kernel import check_proof, infer_sort
from hawk.syntax import (
    LEHAW, LHAW, N, PROOF_TYPES, And, AppPm, Arrow, Bot, Efq, Eq, ExElim,
    ExIntro, Exists, ExtIntro, Forall, Imp, Ind, Node, Null, Pair, Peel, Refl,
    iff, sorts_up_to_depth,
)
from hawk.surface import parse_formula
from hawk.translate import equiv, translate_formula

LINES = []


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    return line


@pytest.fixture
def emit(capsys):
    def go(n, ok, detail):
        with capsys.disabled():
            print("\n" + report(n, ok, detail))
        return ok
    return go


def run_items(items):
    start = time.perf_counter()
    results = [(i, *corpus.timed(i)) for i in items]
    return results, time.perf_counter() - start


def failures(results):
    return [f"{i.name}: {r.detail or (r.check, r.translate)}" for i, r, _ in results if not r.passed]


def nodes(m):
    yield m
    if isinstance(m, Node):
        for f in dataclasses.fields(m):
            v = getattr(m, f.name)
            if isinstance(v, PROOF_TYPES):
                yield from nodes(v)


def examples(fn):
    return fn._hypothesis_internal_use_settings.max_examples


def theorems(fname):
    sf = corpus.load(fname)
    return sf, {t.name: sf.judgment(t) for t in sf.theorems}


# ---------------------------------------------------------------- 1


def test_criterion_1_term_suite(emit):
    items = [i for i in corpus.items() if i.suite == "terms"]
    results, secs = run_items(items)
    sorts = {k: infer_sort([], corpus.prelude_term(v)) for k, v in corpus.TERMS.items()}
    required = {f"term:{n}" for n in ("zero", "one", "two", "three", "four", "five", "add", "mult",
                                      "pred", "compose", "iterate", "rec_arrow")}
    iterate_ok = sorts["iterate"] == Arrow(Arrow(N, N), Arrow(N, Arrow(N, N)))
    bad = failures(results)
    ok = len(items) >= 15 and required <= {i.name for i in items} and iterate_ok and not bad and secs < 10
    emit(1, ok, f"closed terms={len(items)} pass={len(items) - len(bad)} time={secs:.2f}s (limit 10s) {bad}")
    assert ok


# ---------------------------------------------------------------- 2


def test_criterion_2_lhaw_suite(emit):
    items = [i for i in corpus.items() if i.suite == LHAW]
    results, secs = run_items(items)
    _, js = theorems("lhaw.haw")
    kinds = {type(n) for j in js.values() for n in nodes(j.proof)}
    required = {"refl_all", "sym", "trans", "peano4", "add_zero_right", "add_zero_left", "efq_succ"}
    cover = {Peel, Ind, ExIntro, ExElim, Efq} <= kinds
    bad = failures(results)
    ok = len(items) >= 10 and required <= set(js) and cover and not bad and secs < 30
    emit(2, ok, f"lhaw theorems={len(items)} translated+rechecked={len(items) - len(bad)} "
                f"time={secs:.2f}s (limit 30s) {bad}")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_lehaw_suite(emit):
    items = [i for i in corpus.items() if i.suite == LEHAW]
    results, secs = run_items(items)
    _, js = theorems("lehaw.haw")
    arrow = lambda s: isinstance(s, Arrow)  # noqa: E731
    all_nodes = {name: list(nodes(j.proof)) for name, j in js.items()}
    flat = [n for ns in all_nodes.values() for n in ns]
    checks = {
        "refl at arrow sort": any(isinstance(n, Refl) and arrow(n.sort) for n in flat),
        "peel at arrow sort": any(isinstance(n, Peel) and arrow(n.sort) for n in flat),
        "ext": any(isinstance(n, ExtIntro) for n in flat),
        "apppm": any(isinstance(n, AppPm) for n in flat),
        "ind with arrow equality": any(
            any(isinstance(n, Ind) and isinstance(n.motive, Eq) and arrow(n.motive.sort) for n in ns)
            for ns in all_nodes.values()),
    }
    missing = [k for k, v in checks.items() if not v]
    bad = failures(results)
    ok = len(items) >= 8 and not missing and not bad and secs < 30
    emit(3, ok, f"lehaw theorems={len(items)} translated into lhaw and rechecked={len(items) - len(bad)} "
                f"rules missing={missing} time={secs:.2f}s (limit 30s) {bad}")
    assert ok


# ---------------------------------------------------------------- 4


def test_criterion_4_witness_suite(emit):
    items = [i for i in corpus.items() if i.suite == "witnesses"]
    results, secs = run_items(items)
    bad = failures(results)
    n_sorts = len(sorts_up_to_depth(3))
    ok = len(items) == n_sorts and not bad and secs < 60
    emit(4, ok, f"sorts of depth<=3={n_sorts} (sympm, transpm, reflpm, collaps, 8 elim formulas each) "
                f"pass={len(items) - len(bad)} time={secs:.2f}s (limit 60s) {bad}")
    assert ok


# ---------------------------------------------------------------- 5


def connectives(f):
    yield type(f)
    match f:
        case Imp(a, b) | And(a, b):
            yield from connectives(a)
            yield from connectives(b)
        case Forall(_, _, b) | Exists(_, _, b):
            yield from connectives(b)


def test_criterion_5_equiv_suite(emit):
    start = time.perf_counter()
    bad, seen = [], set()
    for name, src in corpus.EQUIV_FORMULAS.items():
        phi = parse_formula(src)
        seen |= set(connectives(phi))
        proof = Pair(equiv(1, [], phi), equiv(2, [], phi))
        rep = check_proof(LEHAW, [], [], proof, iff(phi, translate_formula(phi)))
        if not rep.accepted:
            bad.append(f"{name}: {rep.describe()}")
    secs = time.perf_counter() - start
    every = {Eq, Bot, Null, Imp, And, Forall, Exists} <= seen
    n = len(corpus.EQUIV_FORMULAS)
    ok = n >= 6 and every and not bad
    emit(5, ok, f"closed formulas={n} every connective={every} pass={n - len(bad)} time={secs:.2f}s {bad}")
    assert ok


# ---------------------------------------------------------------- 6


def _properties():
    import test_kernel as k
    import test_rewrite as r
    import test_syntax as s
    import test_translate as t
    return [
        ("duplication preserves congruence", t.test_lemma_1_duplication_preserves_congruence),
        ("duplication commutes with substitution", t.test_lemma_2_duplication_commutes_with_substitution),
        ("translation commutes with substitution", t.test_lemma_3_translation_commutes_with_substitution),
        ("term weakening", k.test_term_weakening),
        ("congruence under substitution", r.test_congruence_is_stable_under_substitution),
        ("derivations accepted with declared goal variables", k.test_generated_derivations_are_accepted_and_closed),
        ("weakening", k.test_weakening),
        ("substitution", k.test_substitution_of_signature_variables),
        ("cut", k.test_cut),
        ("alpha oracle", s.test_alpha_eq_agrees_with_nameless_oracle),
        ("alpha equivalence", s.test_alpha_eq_is_an_equivalence),
        ("subst respects alpha", s.test_subst_respects_alpha),
        ("subst composition", s.test_substitution_composition),
        ("subst free variables", s.test_free_vars_after_substitution),
        ("subst oracle", s.test_substitution_matches_nameless_oracle),
        ("normal form shapes", r.test_closed_normal_forms_have_canonical_shape),
    ]


def test_criterion_6_lemma_suite(emit):
    start = time.perf_counter()
    bad = []
    props = _properties()
    for name, fn in props:
        n = examples(fn)
        if n < 500:
            bad.append(f"{name}: only {n} cases")
            continue
        try:
            fn()
        except Exception as e:
            bad.append(f"{name}: {type(e).__name__}: {str(e)[:200]}")
    secs = time.perf_counter() - start
    ok = not bad
    emit(6, ok, f"properties={len(props)} at >=500 cases each failures={len(bad)} time={secs:.1f}s {bad}")
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_7_negative_suite(emit):
    from test_kernel import NEGATIVE
    bad = []
    for label, logic, sig, ctx, proof, goal, rule in NEGATIVE:
        rep = check_proof(logic, sig, ctx, proof, goal)
        if rep.accepted or rep.rule != rule:
            bad.append(f"{label}: expected [{rule}] got {rep.describe()}")
    required = {"refl at arrow sort in lhaw", "eigenvariable capture in forall-intro", "motive mismatch in peel",
                "efq with free variables outside the signature", "ill-sorted rec"}
    have = {n[0] for n in NEGATIVE}
    ok = len(NEGATIVE) >= 10 and required <= have and not bad
    emit(7, ok, f"broken inputs={len(NEGATIVE)} rejected with the named diagnostic={len(NEGATIVE) - len(bad)} {bad}")
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_round_trip(emit):
    import test_surface as s
    start = time.perf_counter()
    props = [("sorts", s.test_sort_round_trip), ("terms", s.test_term_round_trip),
             ("formulas", s.test_formula_round_trip), ("proofs", s.test_proof_round_trip)]
    bad, total = [], 0
    for name, fn in props:
        n = examples(fn)
        total += n
        try:
            fn()
        except Exception as e:
            bad.append(f"{name}: {type(e).__name__}: {str(e)[:200]}")
    secs = time.perf_counter() - start
    ok = not bad and all(examples(fn) >= 1000 for _, fn in props)
    emit(8, ok, f"generated ASTs={total} (>=1000 per kind) failures={len(bad)} time={secs:.1f}s {bad}")
    assert ok


# ---------------------------------------------------------------- 9


def test_criterion_9_conjecture_harness(emit):
    """Exploratory: the joinable rate is recorded, not asserted."""
    sf = corpus.load("conjecture.haw")
    rep = run_conjecture([(t.name, sf.judgment(t)) for t in sf.theorems], DEFAULT_MAX_STEPS)
    n = len(rep.considered)
    j = rep.count("joinable")
    rate = j / n if n else 0.0
    ok = n >= 20 and rep.count("error") == 0 and rate >= 0.8
    emit(9, ok, f"(non-gating) {rep.summary()} max_steps={DEFAULT_MAX_STEPS}")
    assert n >= 20 and rep.count("error") == 0


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
