import functools

import pytest
from hypothesis import given, strategies as st

from mdprolog import BudgetExceeded, Engine, PrologThrow
from mdprolog.terms import compare_terms


@pytest.fixture
def engine():
    return Engine(prelude=False)


def answers(engine, text, var):
    return [sol.render(var) for sol in engine.solutions(text)]


class TestResolution:
    def test_facts_in_order(self, engine):
        engine.consult_text("p(a). p(b). p(c).")
        assert answers(engine, "p(X)", "X") == ["a", "b", "c"]

    def test_conjunction_backtracks(self, engine):
        engine.consult_text("p(a). p(b). q(b).")
        assert answers(engine, "p(X), q(X)", "X") == ["b"]

    def test_disjunction(self, engine):
        assert answers(Engine(prelude=False), "(X = 1 ; X = 2)", "X") == ["1", "2"]

    def test_undefined_predicate_is_an_error(self, engine):
        with pytest.raises(PrologThrow) as e:
            engine.query("no_such_thing(1)")
        assert "existence_error" in str(e.value)

    def test_dynamic_predicate_may_be_empty(self, engine):
        engine.consult_text(":- dynamic maybe/1.")
        assert engine.query("maybe(X)") == []


class TestCut:
    def test_cut_commits_to_clause(self, engine):
        engine.consult_text("""
            first(X) :- member(X, [a, b, c]), !.
        """)
        assert answers(engine, "first(X)", "X") == ["a"]

    def test_cut_is_local_to_the_clause(self, engine):
        engine.consult_text("""
            p(1). p(2).
            q(X) :- p(X), !.
            r(X, Y) :- q(X), p(Y).
        """)
        assert [(s.render("X"), s.render("Y")) for s in engine.solutions("r(X, Y)")] \
            == [("1", "1"), ("1", "2")]

    def test_cut_inside_call_is_opaque(self, engine):
        engine.consult_text("p(1). p(2).")
        assert answers(engine, "p(X), call((! ; true))", "X") == ["1", "2"]

    def test_if_then_else(self, engine):
        assert answers(engine, "(1 > 0 -> X = yes ; X = no)", "X") == ["yes"]
        assert answers(engine, "(0 > 1 -> X = yes ; X = no)", "X") == ["no"]

    def test_condition_commits_to_first_solution(self, engine):
        engine.consult_text("p(1). p(2).")
        assert answers(engine, "(p(X) -> true ; fail)", "X") == ["1"]


class TestNegationAndAll:
    def test_negation_as_failure(self, engine):
        engine.consult_text("p(a).")
        assert engine.run("\\+ p(b)")
        assert not engine.run("\\+ p(a)")

    def test_findall_collects_in_order(self, engine):
        engine.consult_text("p(3). p(1). p(2).")
        assert answers(engine, "findall(X, p(X), L)", "L") == ["[3, 1, 2]"]

    def test_findall_of_nothing_is_nil(self, engine):
        engine.consult_text(":- dynamic p/1.")
        assert answers(engine, "findall(X, p(X), L)", "L") == ["[]"]

    def test_forall(self, engine):
        engine.consult_text("p(2). p(4).")
        assert engine.run("forall(p(X), 0 is X mod 2)")
        engine.consult_text("p(2). p(3).", filename="<text2>")
        assert not engine.run("forall(p(X), 0 is X mod 2)")


class TestArithmetic:
    def test_basics(self, engine):
        assert answers(engine, "X is 2 + 3 * 4", "X") == ["14"]
        assert answers(engine, "X is 7 mod 3", "X") == ["1"]
        assert answers(engine, "X is floor(sqrt(17))", "X") == ["4"]

    def test_division_stays_exact_when_possible(self, engine):
        assert answers(engine, "X is 6 / 3", "X") == ["2"]
        assert answers(engine, "X is 7 / 2", "X") == ["3.5"]

    def test_comparisons(self, engine):
        assert engine.run("1 < 2, 2 =< 2, 3 > 2, 2 >= 2, 2 =:= 2.0, 1 =\\= 2")

    def test_zero_divisor(self, engine):
        with pytest.raises(PrologThrow) as e:
            engine.run("X is 1 / 0")
        assert "zero_divisor" in str(e.value)

    def test_overflow_is_an_error(self, engine):
        with pytest.raises(PrologThrow) as e:
            engine.run("X is 9223372036854775807 + 1")
        assert "int_overflow" in str(e.value)

    def test_unbound_expression(self, engine):
        with pytest.raises(PrologThrow) as e:
            engine.run("X is Y + 1")
        assert "instantiation_error" in str(e.value)


class TestExceptions:
    def test_catch_matching_ball(self, engine):
        assert answers(engine, "catch(throw(oops), E, true)", "E") == ["oops"]

    def test_catch_rethrows_mismatch(self, engine):
        with pytest.raises(PrologThrow):
            engine.run("catch(throw(oops), different(_), true)")

    def test_catch_restores_bindings(self, engine):
        assert answers(
            engine, "catch((X = 1, throw(oops)), oops, (var(X), X = 2))", "X") == ["2"]

    def test_budget_is_not_catchable(self):
        engine = Engine(prelude=False, budget=100)
        engine.consult_text("loop :- loop.")
        with pytest.raises(BudgetExceeded):
            engine.run("catch(loop, _, true)")


class TestDatabase:
    def test_assert_retract_cycle(self, engine):
        engine.consult_text(":- dynamic fact/1.")
        engine.run("assertz(fact(1)), assertz(fact(2))")
        assert answers(engine, "fact(X)", "X") == ["1", "2"]
        engine.run("retractall(fact(1))")
        assert answers(engine, "fact(X)", "X") == ["2"]

    def test_assertz_copies_bindings(self, engine):
        engine.consult_text(":- dynamic fact/1.")
        engine.run("X = 7, assertz(fact(X))")
        assert answers(engine, "fact(Y)", "Y") == ["7"]


class TestTermInspection:
    def test_functor_and_univ(self, engine):
        assert answers(engine, "functor(foo(a, b), N, _)", "N") == ["foo"]
        assert answers(engine, "foo(a, b) =.. L", "L") == ["[foo, a, b]"]
        assert answers(engine, "T =.. [foo, x]", "T") == ["foo(x)"]

    def test_copy_term(self, engine):
        assert engine.run("copy_term(f(X, X), f(Y, Z)), Y == Z")

    def test_between_and_length(self, engine):
        assert answers(engine, "findall(X, between(1, 4, X), L)", "L") == ["[1, 2, 3, 4]"]
        assert answers(engine, "length([a, b, c], N)", "N") == ["3"]


class TestSorting:
    def test_msort_keeps_duplicates(self, engine):
        assert answers(engine, "msort([b, a, b], L)", "L") == ["[a, b, b]"]

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 100)), max_size=20))
    def test_keysort_is_stable(self, pairs):
        engine = Engine(prelude=False)
        text = "[%s]" % ", ".join("%d-%d" % p for p in pairs)
        got = engine.query("keysort(%s, L)" % text)[0]["L"]
        expected = sorted(pairs, key=lambda p: p[0])  # Python sort is stable
        rendered = engine.query("X = [%s]" % ", ".join(
            "%d-%d" % p for p in expected))[0]["X"]
        assert compare_terms(got, rendered) == 0
