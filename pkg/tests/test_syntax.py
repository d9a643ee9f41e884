from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hawk.syntax import (
    N, And, App, Arrow, Bot, Eq, Exists, Forall, Imp, Lam, Null, Peel, PVar,
    Rec, Refl, Succ, Var, Zero, alpha_eq, expand_derived, free_vars, fresh,
    rename_term_var, subst_formula, subst_proof, subst_term, term_fv, formula_fv,
    NameSupply, is_reserved,
)
from strategies import NAMES, formulas, terms

PROPS = settings(max_examples=500, deadline=None, suppress_health_check=list(HealthCheck))

x, y, z = Var("x"), Var("y"), Var("z")


# ---------------------------------------------------------------- an independent nameless oracle


def db(a, env=()):
    """de Bruijn form: bound variables become indices counted from the innermost binder."""
    match a:
        case Var(n):
            return ("bvar", env.index(n)) if n in env else ("fvar", n)
        case Lam(v, s, b):
            return ("lam", s, db(b, (v,) + env))
        case App(f, u):
            return ("app", db(f, env), db(u, env))
        case Zero():
            return ("zero",)
        case Succ(u):
            return ("succ", db(u, env))
        case Rec(s, b, st_, n):
            return ("rec", s, db(b, env), db(st_, env), db(n, env))
        case Eq(s, l, r):
            return ("eq", s, db(l, env), db(r, env))
        case Bot():
            return ("bot",)
        case Null(u):
            return ("null", db(u, env))
        case Imp(p, q) | And(p, q):
            return (type(a).__name__, db(p, env), db(q, env))
        case Forall(v, s, b) | Exists(v, s, b):
            return (type(a).__name__, s, db(b, (v,) + env))
    raise TypeError(a)


def rename_bound(a, names):
    """An alpha-variant: every binder renamed to a name drawn from `names`,
    keeping the meaning by renaming occurrences too (capture checked by db)."""
    match a:
        case Lam(v, s, b) | Forall(v, s, b) | Exists(v, s, b):
            w = names.pop() if names else v
            if w != v and w in free_vars(b):
                w = v
            nb = rename_term_var(b, v, w) if w != v else b
            return type(a)(w, s, rename_bound(nb, names))
        case App(f, u):
            return App(rename_bound(f, names), rename_bound(u, names))
        case Succ(u):
            return Succ(rename_bound(u, names))
        case Rec(s, b, st_, n):
            return Rec(s, rename_bound(b, names), rename_bound(st_, names), rename_bound(n, names))
        case Eq(s, l, r):
            return Eq(s, rename_bound(l, names), rename_bound(r, names))
        case Null(u):
            return Null(rename_bound(u, names))
        case Imp(p, q) | And(p, q):
            return type(a)(rename_bound(p, names), rename_bound(q, names))
    return a


def db_subst(d, x, du):
    """Substitution on nameless forms; free variables stay named, so no shifting."""
    if d == ("fvar", x):
        return du
    if isinstance(d, tuple):
        return tuple(db_subst(c, x, du) for c in d)
    return d


# ---------------------------------------------------------------- oracle examples


def test_alpha_eq_renamed_lambda():
    assert alpha_eq(Lam("x", N, x), Lam("y", N, y))


def test_alpha_eq_distinct_bodies():
    assert not alpha_eq(Lam("x", N, x), Lam("x", N, Zero()))


def test_alpha_eq_renamed_forall():
    assert alpha_eq(Forall("x", N, Eq(N, x, x)), Forall("y", N, Eq(N, y, y)))


def test_alpha_eq_shadowing():
    # forall x. forall x. x = x  is  forall a. forall b. b = b
    a = Forall("x", N, Forall("x", N, Eq(N, x, x)))
    b = Forall("a", N, Forall("b", N, Eq(N, Var("b"), Var("b"))))
    c = Forall("a", N, Forall("b", N, Eq(N, Var("a"), Var("a"))))
    assert alpha_eq(a, b)
    assert not alpha_eq(a, c)


def test_subst_var():
    assert subst_term(x, {"x": Zero()}) == Zero()


def test_subst_bound_untouched():
    assert subst_term(Lam("x", N, x), {"x": Zero()}) == Lam("x", N, x)


def test_subst_capture_avoiding_lambda():
    out = subst_term(Lam("y", N, x), {"x": y})
    assert isinstance(out, Lam) and out.var != "y"
    assert db(out) == db(Lam("w", N, y))


def test_subst_formula_simple():
    assert subst_formula(Eq(N, x, Zero()), {"x": Succ(y)}) == Eq(N, Succ(y), Zero())


def test_subst_formula_capture_avoiding():
    out = subst_formula(Forall("x", N, Eq(N, x, y)), {"y": x})
    assert out.var != "x"
    assert db(out) == db(Forall("w", N, Eq(N, Var("w"), x)))


def test_subst_proof_refl():
    assert subst_proof(Refl(N, x), {"x": Zero()}) == Refl(N, Zero())


def test_free_vars_examples():
    assert free_vars(Lam("x", N, x)) == frozenset()
    assert free_vars(Forall("x", N, Eq(N, x, y))) == {"y"}
    p = Peel(N, Zero(), Zero(), PVar("h"), "x", Eq(N, x, z), Refl(N, Zero()))
    assert "z" in free_vars(p) and "x" not in free_vars(p)


def test_expand_derived():
    assert expand_derived("top") == Imp(Bot(), Bot())
    assert expand_derived("neq", x, y) == Imp(Eq(N, x, y), Bot())
    phi, psi = Eq(N, x, x), Eq(N, y, y)
    out = expand_derived("or", phi, psi)
    zv = Var(out.var)
    assert isinstance(out, Exists) and out.sort == N
    assert out.body == And(Imp(Eq(N, zv, Zero()), phi), Imp(Imp(Eq(N, zv, Zero()), Bot()), psi))


def test_or_binder_avoids_disjunct_variables():
    out = expand_derived("or", Eq(N, z, z), Bot())
    assert out.var != "z"


def test_fresh_and_reserved():
    assert fresh("x", {"x"}) != "x"
    assert not is_reserved(fresh("x", {"x"}))
    s = NameSupply()
    a, b = s("x"), s("x")
    assert a != b and is_reserved(a)


def test_arrow_helper_is_right_nested():
    from hawk.syntax import arrow
    assert arrow(N, N, N) == Arrow(N, Arrow(N, N))


# ---------------------------------------------------------------- properties


@PROPS
@given(formulas(fuel=3), st.lists(st.sampled_from(NAMES + ("u", "w")), max_size=8))
def test_alpha_eq_agrees_with_nameless_oracle(f, names):
    g = rename_bound(f, list(names))
    assert alpha_eq(f, g) == (db(f) == db(g))
    assert alpha_eq(f, g)


@PROPS
@given(formulas(fuel=2), formulas(fuel=2))
def test_alpha_eq_decides_oracle_equality(f, g):
    assert alpha_eq(f, g) == (db(f) == db(g))


@PROPS
@given(formulas(fuel=2), st.lists(st.sampled_from(NAMES), max_size=6), st.lists(st.sampled_from(NAMES), max_size=6))
def test_alpha_eq_is_an_equivalence(f, n1, n2):
    g, h = rename_bound(f, list(n1)), rename_bound(f, list(n2))
    assert alpha_eq(f, f)
    assert alpha_eq(f, g) == alpha_eq(g, f)
    if alpha_eq(f, g) and alpha_eq(g, h):
        assert alpha_eq(f, h)


@PROPS
@given(st.data())
def test_subst_respects_alpha(data):
    sig = {n: N for n in NAMES}
    f = data.draw(formulas(sig, fuel=3))
    g = rename_bound(f, data.draw(st.lists(st.sampled_from(NAMES), max_size=6)))
    v = data.draw(st.sampled_from(NAMES))
    t, _ = data.draw(terms(sig, N, fuel=2))
    assert alpha_eq(subst_formula(f, {v: t}), subst_formula(g, {v: t}))


@PROPS
@given(st.data())
def test_substitution_composition(data):
    sig = {n: N for n in NAMES}
    t, _ = data.draw(terms(sig, N))
    xn = data.draw(st.sampled_from(NAMES))
    yn = data.draw(st.sampled_from([n for n in NAMES if n != xn]))
    u, _ = data.draw(terms(sig, N, fuel=2))
    v, _ = data.draw(terms({k: s for k, s in sig.items() if k != xn}, N, fuel=2))
    lhs = subst_term(subst_term(t, {xn: u}), {yn: v})
    rhs = subst_term(subst_term(t, {yn: v}), {xn: subst_term(u, {yn: v})})
    assert db(lhs) == db(rhs)


@PROPS
@given(st.data())
def test_free_vars_after_substitution(data):
    sig = {n: N for n in NAMES}
    f = data.draw(formulas(sig, fuel=3))
    xn = data.draw(st.sampled_from(NAMES))
    u, _ = data.draw(terms(sig, N, fuel=2))
    out = subst_formula(f, {xn: u})
    assert formula_fv(out) <= (formula_fv(f) - {xn}) | term_fv(u)


@PROPS
@given(st.data())
def test_substitution_matches_nameless_oracle(data):
    sig = {n: N for n in NAMES}
    f = data.draw(formulas(sig, fuel=3))
    xn = data.draw(st.sampled_from(NAMES))
    u, _ = data.draw(terms(sig, N, fuel=2))
    assert db(subst_formula(f, {xn: u})) == db_subst(db(f), xn, db(u))
