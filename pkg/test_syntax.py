"""
項の表現・自由変数・置換・α同値・部分文法のテスト
"""

import hypothesis as hyp
import pytest

from poslam.errors import TermError
from poslam.syntax import (
    Abs, App, ES, FV_ALL, FV_APPLIED, FV_OPEN, FreshSupply, Renaming, Step, Var,
    alpha_eq, alpha_key, classify_term, decompose_positive, evaluation_context, format_path,
    free_vars, fresh_name, plug, rename, subst_value, uniquify_binders,
)
from term_strategies import positive_terms, vsc_terms, xpositive_terms


class TestFreeVars:
    def test_variable(self, P):
        assert free_vars(P("x"), FV_ALL) == {'x'}

    def test_open_ignores_abstractions(self, P):
        assert free_vars(P("(\\x. x) y"), FV_OPEN) == {'y'}
        assert free_vars(P("\\x. y"), FV_OPEN) == set()
        assert free_vars(P("\\x. y"), FV_ALL) == {'y'}

    def test_applied_open(self, P):
        assert free_vars(P("x y"), FV_APPLIED) == {'x'}
        assert free_vars(P("(\\z. z) y"), FV_APPLIED) == set()
        assert free_vars(P("x[x <- y] z"), FV_APPLIED) == set()
        assert free_vars(P("x[w <- y] z"), FV_APPLIED) == {'x'}

    def test_unknown_mode(self, P):
        with pytest.raises(ValueError):
            free_vars(P("x"), 'closed')

    @hyp.given(vsc_terms)
    def test_inclusions(self, t):
        assert free_vars(t, FV_APPLIED) <= free_vars(t, FV_OPEN) <= free_vars(t, FV_ALL)


class TestRename:
    def test_plain(self, P):
        assert rename(P("x z"), 'x', 'y') == P("y z")

    def test_capture_forces_fresh_binder(self, P):
        result = rename(P("\\y. x"), 'x', 'y')
        assert alpha_eq(result, P("\\q. y"))
        assert result.binder != 'y'

    def test_bound_variable_untouched(self, P):
        t = P("x[x <- y z]")
        assert alpha_eq(rename(t, 'x', 'w'), t)

    @hyp.given(vsc_terms)
    def test_congruence_for_alpha(self, t):
        u = uniquify_binders(t)
        assert alpha_eq(t, u)
        assert alpha_eq(rename(t, 'x', 'y'), rename(u, 'x', 'y'))


class TestSubstValue:
    def test_duplicates(self, P):
        assert subst_value(P("x x"), 'x', P("\\y. y")) == P("(\\y. y) (\\y. y)")

    def test_no_free_occurrence(self, P):
        assert subst_value(P("\\x. x"), 'x', P("\\y. y")) == P("\\x. x")

    def test_through_explicit_substitution(self, P):
        result = subst_value(P("x[w <- x z]"), 'x', P("\\y. y"))
        assert alpha_eq(result, P("(\\y. y)[w <- (\\y. y) z]"))

    def test_rejects_non_value(self, P):
        with pytest.raises(TermError):
            subst_value(P("x"), 'x', P("y z"))


class TestAlphaEq:
    def test_examples(self, P):
        assert alpha_eq(P("\\x. x"), P("\\y. y"))
        assert not alpha_eq(P("x"), P("y"))
        assert alpha_eq(P("z[z <- \\x. x]"), P("w[w <- \\y. y]"))

    def test_es_binder_scopes_body_only(self, P):
        assert not alpha_eq(P("x[x <- x]"), P("y[y <- y]"))
        assert alpha_eq(P("x[x <- z]"), P("y[y <- z]"))

    @hyp.given(vsc_terms, vsc_terms)
    def test_key_is_equality(self, t, u):
        assert alpha_eq(t, u) == (alpha_key(t) == alpha_key(u))
        assert alpha_eq(t, t)


class TestFreshNames:
    def test_fresh_name_strips_suffix(self):
        assert fresh_name('x', {'x'}) == 'x1'
        assert fresh_name('x1', {'x', 'x1'}) == 'x2'
        assert fresh_name("y'", {"y'"}) == 'y1'

    def test_supply_is_deterministic(self):
        a = FreshSupply({'p1', 'x'})
        b = FreshSupply({'p1', 'x'})
        assert [a.fresh() for _ in range(3)] == [b.fresh() for _ in range(3)] == ['p2', 'p3', 'p4']


class TestRenaming:
    def test_then_collapses_chains(self):
        sigma = Renaming.from_dict({'a': 'b'}).then('b', 'c')
        assert sigma.as_dict() == {'a': 'c', 'b': 'c'}
        assert sigma.is_idempotent()

    def test_apply(self, P):
        sigma = Renaming.from_dict({'w': 'z'})
        assert sigma.apply(P("w y")) == P("z y")
        assert sigma('q') == 'q'


class TestClassify:
    def test_answer(self, P):
        assert classify_term(P("(\\x. x)[y <- \\z. z]")).is_answer

    def test_almost_answer(self, P):
        flags = classify_term(P("y[y <- \\z. z]"))
        assert not flags.is_answer
        assert flags.is_almost_answer

    def test_positive(self, P):
        flags = classify_term(P("x[x <- y z]"))
        assert flags.is_positive
        assert flags.is_explicit_positive
        assert not flags.is_almost_answer

    def test_explicit_positive_only(self, P):
        flags = classify_term(P("w[w <- (\\y. y) z]"))
        assert not flags.is_positive
        assert flags.is_explicit_positive

    def test_value(self, P):
        assert classify_term(P("\\x. x x")).is_value
        assert not classify_term(P("x y")).is_value

    @hyp.given(positive_terms)
    def test_positive_is_explicit_positive(self, t):
        flags = classify_term(t)
        assert flags.is_positive and flags.is_explicit_positive

    @hyp.given(vsc_terms)
    def test_answer_implies_almost_answer(self, t):
        flags = classify_term(t)
        assert not flags.is_answer or flags.is_almost_answer
        assert not flags.is_positive or flags.is_explicit_positive


class TestDecompose:
    def test_variable(self, P):
        assert decompose_positive(P("x")) == ((), 'x')

    def test_single_frame(self, P):
        assert decompose_positive(P("x[x <- y z]")) == ((Step.ES_BODY,), 'x')

    def test_two_frames(self, P):
        path, head = decompose_positive(P("w[w <- (\\y. y) z][z' <- \\q. q]"))
        assert head == 'w'
        assert path == (Step.ES_BODY, Step.ES_BODY)

    def test_rejects_non_positive(self, P):
        with pytest.raises(TermError):
            decompose_positive(P("x y"))

    @hyp.given(xpositive_terms)
    def test_plug_inverts_decompose(self, t):
        ctx, head = evaluation_context(t)
        assert alpha_eq(plug(ctx, Var(head)), t)


def test_format_path():
    assert format_path(()) == '.'
    assert format_path((Step.ES_BODY, Step.APP_FUN)) == 'es-body/app-fun'


def test_terms_are_hashable_values():
    t = ES(App(Var('x'), Var('y')), 'x', Abs('z', Var('z')))
    assert t == ES(App(Var('x'), Var('y')), 'x', Abs('z', Var('z')))
    assert len({t, ES(App(Var('x'), Var('y')), 'x', Abs('z', Var('z')))}) == 1
    assert t.fv == {'y'}
