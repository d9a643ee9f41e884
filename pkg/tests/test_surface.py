import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hawk.surface import (
    DefDecl, ParseError, SourceFile, TheoremDecl, parse, parse_formula,
    parse_proof, parse_sort, parse_term, show, show_file, show_formula,
    show_sort, show_term,
)
from hawk.syntax import (
    LEHAW, LHAW, N, App, Arrow, Bot, Eq, Forall, Imp, Lam, Rec, Succ, Var, Zero,
    alpha_eq, numeral,
)
from strategies import formulas, proofs, sorts, terms

ROUND = settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))
TOTAL = settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))

x, y = Var("x"), Var("y")


# ---------------------------------------------------------------- examples


def test_parse_lambda():
    assert parse_term("fun (x : N) => x") == Lam("x", N, x)


def test_parse_rec():
    t = parse_term("rec[N] 0 (fun (a:N)(b:N) => S a) y")
    assert t == Rec(N, Zero(), Lam("a", N, Lam("b", N, Succ(Var("a")))), y)


def test_parse_neq():
    f = parse_formula("forall x:N. S x != 0")
    assert f == Forall("x", N, Imp(Eq(N, Succ(x), Zero()), Bot()))


def test_print_equation():
    assert show(parse_formula("0 = 0")) == "0 = 0"


def test_arrow_is_right_associative():
    assert parse_sort("N -> N -> N") == Arrow(N, Arrow(N, N))
    assert show_sort(Arrow(Arrow(N, N), N)) == "(N -> N) -> N"


def test_numerals():
    assert parse_term("3") == numeral(3)
    assert show_term(numeral(2)) == "S (S 0)"


def test_application_is_left_associative():
    assert parse_term("f x y") == App(App(Var("f"), x), y)


def test_top_and_or_expand():
    assert parse_formula("top") == Imp(Bot(), Bot())
    f = parse_formula("0 = 0 \\/ bot")
    assert f.__class__.__name__ == "Exists"


def test_equation_at_arrow_sort():
    f = parse_formula("f =[N -> N] g")
    assert f == Eq(Arrow(N, N), Var("f"), Var("g"))
    assert show_formula(f) == "f =[N -> N] g"


def test_file_with_defs_and_theorems():
    sf = parse("""
        logic lehaw
        -- a comment
        def two : N := S (S 0)
        theorem t (x : N) [h : x = two] : two = x := peel[N, x, two](h, z. z = x, refl x)
    """)
    assert sf.logic == LEHAW
    assert isinstance(sf.decls[0], DefDecl) and isinstance(sf.decls[1], TheoremDecl)
    j = sf.judgment(sf.theorems[0])
    assert j.goal == Eq(N, numeral(2), x)


def test_defs_shadowed_by_binders_are_not_expanded():
    sf = parse("logic lhaw\ndef x : N := 0\ntheorem t (x : N) : x = x := refl x\n")
    j = sf.judgment(sf.theorems[0])
    assert j.goal == Eq(N, x, x)


def test_empty_file():
    sf = parse("")
    assert sf.logic == LHAW and sf.decls == []


def test_reserved_names_need_the_generated_pragma():
    with pytest.raises(ParseError):
        parse("logic lhaw\ntheorem t (x#1 : N) : x#1 = x#1 := refl x#1\n")
    sf = parse("logic lhaw generated\ntheorem t (x#1 : N) : x#1 = x#1 := refl x#1\n")
    assert sf.generated


def test_duplicate_declaration_is_an_error():
    with pytest.raises(ParseError) as e:
        parse("theorem t : 0 = 0 := refl 0\ntheorem t : 0 = 0 := refl 0\n")
    assert e.value.line == 2


@pytest.mark.parametrize("src, line, col", [
    ("theorem t : 0 = := refl 0", 1, 17),
    ("logic lhaw\ntheorem t : 0 = 0 := refl (", 2, 28),
    ("def x : N := $", 1, 14),
])
def test_errors_are_positioned(src, line, col):
    with pytest.raises(ParseError) as e:
        parse(src)
    assert (e.value.line, e.value.col) == (line, col)


def test_deep_nesting_is_an_error_not_a_crash():
    with pytest.raises(ParseError):
        parse_term("(" * 5000 + "0" + ")" * 5000)


def test_invalid_utf8_is_an_error():
    with pytest.raises(ParseError):
        parse(b"theorem t : 0 = 0 := refl \xff")


def test_show_file_round_trip():
    sf = SourceFile(LHAW, False, [DefDecl("two", N, numeral(2)),
                                  TheoremDecl("t", (("x", N),), (), Eq(N, x, x), parse_proof("refl x"))])
    back = parse(show_file(sf))
    assert [d.name for d in back.decls] == ["two", "t"]
    assert alpha_eq(back.theorems[0].goal, Eq(N, x, x))


# ---------------------------------------------------------------- properties


@ROUND
@given(sorts)
def test_sort_round_trip(s):
    assert parse_sort(show_sort(s)) == s


@ROUND
@given(terms(sig={"x": N, "f": Arrow(N, N), "g": Arrow(Arrow(N, N), N)}, fuel=4))
def test_term_round_trip(ts):
    t, _ = ts
    assert alpha_eq(parse_term(show_term(t)), t)


@ROUND
@given(formulas(sig={"x": N, "f": Arrow(N, N)}, fuel=4, ext=True))
def test_formula_round_trip(f):
    assert alpha_eq(parse_formula(show_formula(f)), f)


@ROUND
@given(proofs(fuel=4))
def test_proof_round_trip(m):
    assert alpha_eq(parse_proof(show(m)), m)


@TOTAL
@given(st.binary(max_size=200))
def test_parser_total_on_bytes(data):
    try:
        parse(data)
    except ParseError as e:
        assert e.line >= 1 and e.col >= 1


TOKENS = ["logic", "lhaw", "theorem", "def", "t", ":", ":=", "(", ")", "[", "]", "N", "->", "=>",
          "fun", "x", "0", "S", "=", "refl", "peel", "forall", ".", ",", "bot", "@", "unpack", "in",
          "/\\", "\\/", "!=", "rec", "ind", "wit", "ext", "apppm", "efq", "1", "2", "-- c\n", "\n", "#"]


@TOTAL
@given(st.lists(st.sampled_from(TOKENS), max_size=40))
def test_parser_total_on_token_soup(toks):
    try:
        parse(" ".join(toks))
    except ParseError as e:
        assert e.line >= 1 and e.col >= 1
