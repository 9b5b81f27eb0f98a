import pytest
from hypothesis import given, strategies as st

from hoopkit.algebra import FiniteAlgebra
from hoopkit.parsing import (ParseError, format_algebra, format_term, format_theory, parse_algebra,
                             parse_document, parse_term, parse_theory)
from hoopkit.terms import App, Var
from hoopkit.theories import CATALOG, HOOP, MV, boolean_cube, integers_mod, lukasiewicz_chain

HOOPS_TEXT = """
# the hoop axioms, one per line
theory hoops {
  op dot/2, imp/2, one/0;
  point one;
  eq dot(x, y) = dot(y, x);
  eq dot(dot(x, y), z) = dot(x, dot(y, z));
  eq dot(x, one) = x;
  eq imp(x, x) = one;
  eq dot(x, imp(x, y)) = dot(y, imp(y, x));
  eq imp(dot(x, y), z) = imp(x, imp(y, z));
}
"""


def test_hoops_text_matches_builtin():
    th = parse_theory(HOOPS_TEXT)
    assert th.signature == HOOP.signature
    assert th.point_constant == "one"
    assert set(th.equations) == set(HOOP.equations)
    assert any(eq.lhs == App("imp", (Var(0), Var(0))) and eq.rhs == App("one") for eq in th.equations)


def test_constant_only_theory():
    th = parse_theory("theory t { op c/0; point c; }")
    assert th.equations == () and th.signature.constants == ("c",)


def test_arity_mismatch_is_reported_with_position():
    with pytest.raises(ParseError) as info:
        parse_theory("theory bad { op f/1; eq f(x,y)=x; }")
    assert info.value.line == 1 and "arity" in str(info.value)


@pytest.mark.parametrize("text", [
    "theory t { op f/1 }",
    "theory t { op f/1; eq g(x) = x; }",
    "theory t { op f/1; eq f(x2) = x2; }",
    "theory t { op f/1; point f; }",
    "theory { }",
])
def test_malformed_theories(text):
    with pytest.raises(ParseError):
        parse_theory(text)


def test_builtin_theories_round_trip():
    for th in CATALOG.values():
        again = parse_theory(format_theory(th))
        assert again.signature == th.signature
        assert again.equations == th.equations
        assert again.point_constant == th.point_constant


@pytest.mark.parametrize("alg", [lukasiewicz_chain(4), boolean_cube(2), integers_mod(3)], ids=lambda a: a.name)
def test_algebra_round_trip(alg):
    again = parse_algebra(format_algebra(alg))
    assert again == alg
    assert again.name == alg.name and again.theory == alg.theory


@pytest.mark.parametrize("text, msg", [
    ("algebra A : mv { size 2; op oplus = [[0,1],[1,5]]; op neg = [1,0]; op zero = 0; }", "outside"),
    ("algebra A : mv { size 2; op oplus = [[0,1],[1,1]]; op neg = [1,0]; }", "missing"),
    ("algebra A : nosuch { size 2; }", "unknown theory"),
    ("algebra A : mv { size 2; op oplus = [0, 1]; op neg = [1,0]; op zero = 0; }", ""),
    ("nonsense", "expected"),
])
def test_malformed_algebras(text, msg):
    with pytest.raises(ParseError) as info:
        parse_document(text)
    assert msg in str(info.value)


def test_algebra_may_use_theory_declared_earlier():
    text = "theory t { op c/0; point c; }\nalgebra A : t { size 1; op c = 0; }"
    declared, algs = parse_document(text)
    assert "t" in declared and algs[0].size == 1


def test_parse_algebra_wants_exactly_one():
    text = format_algebra(lukasiewicz_chain(2)) + format_algebra(lukasiewicz_chain(3))
    with pytest.raises(ParseError):
        parse_algebra(text)


def test_json_round_trip():
    L = lukasiewicz_chain(3)
    assert FiniteAlgebra.from_json(L.to_json(), MV.signature) == L


def terms(depth):
    leaves = st.one_of(st.integers(0, 4).map(Var), st.just(App("one")))
    return st.recursive(leaves, lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda ab: App("dot", ab)),
        st.tuples(sub, sub).map(lambda ab: App("imp", ab))), max_leaves=depth)


@given(terms(12))
def test_term_print_parse_round_trip(t):
    assert parse_term(format_term(t), HOOP.signature) == t


def test_parse_term_rejects_trailing_input():
    with pytest.raises(ParseError):
        parse_term("imp(x, y) y", HOOP.signature)


def test_derived_names_still_parse():
    from hoopkit.unitalisation import mv_closure
    from hoopkit.theories import idempotent_two_chain
    M = mv_closure(idempotent_two_chain()).output
    assert parse_algebra(format_algebra(M)).name == "M_C2"
