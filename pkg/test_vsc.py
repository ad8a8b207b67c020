"""
VSC エンジン (列挙・適用・有用性・コア正規形) のテスト
"""

import hypothesis as hyp
import pytest

from poslam.errors import StaleRedexError, TermError
from poslam.syntax import Step, alpha_eq, alpha_key, open_subterms
from poslam.vsc import (
    E_ABS, E_U1, E_U2, E_VAR, GC_ABS, M, VSC, VSC_CORE, Redex, Usefulness,
    apply_redex, classify_usefulness, context_class, context_class_structural,
    enumerate_redexes, enumerate_useful_alt, is_core_normal,
)
from term_strategies import vsc_terms

OMEGA = "(\\x. x x) (\\x. x x)"


def _e_abs_on(t, occurrence):
    return next(r for r in enumerate_redexes(t) if r.label == E_ABS and r.occurrence == occurrence)


class TestEnumerate:
    def test_omega_has_one_root_m(self, P):
        assert enumerate_redexes(P(OMEGA)) == [Redex(M, ())]

    def test_variable_is_normal(self, P):
        assert enumerate_redexes(P("x")) == []

    def test_nondiamond_witness(self, P):
        redexes = enumerate_redexes(P("(x z)[x <- y][y <- \\w. w]"))
        assert [r.label for r in redexes] == [E_VAR, E_ABS]
        assert redexes[0].occurrence == (Step.ES_BODY, Step.ES_BODY, Step.APP_FUN)
        assert redexes[1].occurrence == (Step.ES_BODY, Step.ES_CONTENT)

    def test_no_var_values_suppresses_variable_rules(self, P):
        t = P("(x z)[x <- y][y <- \\w. w]")
        assert [r.label for r in enumerate_redexes(t, VSC, vars_are_values=False)] == [E_ABS]

    def test_gc_comes_last(self, P):
        redexes = enumerate_redexes(P("((\\y. y) z)[w <- \\q. q]"))
        assert [r.label for r in redexes] == [M, GC_ABS]

    def test_core_filters_nonuseful(self, P):
        t = P("(x t)[x <- y][y <- \\z. u]")
        assert [r.label for r in enumerate_redexes(t, VSC_CORE)] == [E_VAR]

    def test_unknown_calculus(self, P):
        with pytest.raises(ValueError):
            enumerate_redexes(P("x"), 'oxpos')

    @hyp.given(vsc_terms)
    def test_deterministic_up_to_alpha(self, t):
        from poslam.syntax import uniquify_binders
        assert enumerate_redexes(t) == enumerate_redexes(uniquify_binders(t))

    @hyp.given(vsc_terms)
    def test_redexes_stay_out_of_abstractions(self, t):
        for r in enumerate_redexes(t):
            assert Step.ABS_BODY not in r.focus


class TestApply:
    def test_m_on_omega(self, P):
        t = P(OMEGA)
        assert apply_redex(t, Redex(M, ())) == P("(x1 x1)[x1 <- \\x. x x]")

    def test_e_abs_left_occurrence(self, P):
        t = P("(x1 x1)[x1 <- \\x. x x]")
        r = _e_abs_on(t, (Step.ES_BODY, Step.APP_FUN))
        assert apply_redex(t, r) == P("((\\x. x x) x1)[x1 <- \\x. x x]")

    def test_gc_hoists_substitution_context(self, P):
        t = P("z[x <- (\\y. y)[w <- \\q. q]]")
        assert alpha_eq(apply_redex(t, Redex(GC_ABS, ())), P("z[w <- \\q. q]"))

    def test_m_hoists_substitution_context(self, P):
        t = P("(\\x. x)[y <- z] w")
        assert alpha_eq(apply_redex(t, Redex(M, ())), P("x[x <- w][y <- z]"))

    def test_e_hoist_avoids_capture(self, P):
        t = P("(x y)[x <- (\\a. a)[y <- z]]")
        r = _e_abs_on(t, (Step.ES_BODY, Step.APP_FUN))
        result = apply_redex(t, r)
        # 持ち上げた [y <- z] が本体の自由な y を捕獲しない
        assert 'y' in result.fv
        assert alpha_eq(result, P("((\\a. a) y)[x <- \\a. a][y1 <- z]"))

    def test_stale_redex(self, P):
        with pytest.raises(StaleRedexError):
            apply_redex(P("x"), Redex(M, ()))

    @hyp.given(vsc_terms)
    def test_every_enumerated_redex_applies(self, t):
        for r in enumerate_redexes(t):
            apply_redex(t, r)


class TestUsefulness:
    def test_hole_in_function_position(self, P):
        t = P("x t")
        assert context_class(t, (Step.APP_FUN,)).useful

    def test_hole_over_es_body(self, P):
        cls = context_class(P("x[x <- u]"), (Step.ES_BODY,))
        assert not cls.useful
        assert cls.sub

    def test_hole_in_argument(self, P):
        assert not context_class(P("t x"), (Step.APP_ARG,)).useful

    def test_rejects_positions_under_abstraction(self, P):
        with pytest.raises(TermError):
            context_class(P("\\x. x"), (Step.ABS_BODY,))

    def test_directly_useful(self, P):
        t = P("(x t)[x <- \\y. u]")
        assert classify_usefulness(t, _e_abs_on(t, (Step.ES_BODY, Step.APP_FUN))) is Usefulness.USEFUL

    def test_directly_nonuseful(self, P):
        t = P("(t x)[x <- \\y. u]")
        assert classify_usefulness(t, _e_abs_on(t, (Step.ES_BODY, Step.APP_ARG))) is Usefulness.NONUSEFUL
        t = P("x[x <- \\y. u]")
        assert classify_usefulness(t, _e_abs_on(t, (Step.ES_BODY,))) is Usefulness.NONUSEFUL

    def test_indirect_is_nonuseful(self, P):
        t = P("(x t)[x <- z][z <- \\y. u]")
        r = _e_abs_on(t, (Step.ES_BODY, Step.ES_CONTENT))
        assert classify_usefulness(t, r) is Usefulness.NONUSEFUL

    def test_useful_through_outer_application(self, P):
        t = P("x[x <- \\y. u] t")
        r = _e_abs_on(t, (Step.APP_FUN, Step.ES_BODY))
        assert classify_usefulness(t, r) is Usefulness.USEFUL

    def test_variable_steps_unclassified(self, P):
        t = P("(x z)[x <- y]")
        r = enumerate_redexes(t)[0]
        assert r.label == E_VAR
        assert classify_usefulness(t, r) is Usefulness.UNCLASSIFIED

    @hyp.given(vsc_terms)
    def test_classifiers_agree(self, t):
        for path, _ in open_subterms(t):
            assert context_class(t, path) == context_class_structural(t, path)

    @hyp.given(vsc_terms)
    def test_partition(self, t):
        for r in enumerate_redexes(t):
            verdict = classify_usefulness(t, r)
            if r.label == E_ABS:
                assert verdict is not Usefulness.UNCLASSIFIED
            else:
                assert verdict is Usefulness.UNCLASSIFIED


class TestUsefulAlt:
    def test_argument_from_context(self, P):
        assert [r.label for r in enumerate_useful_alt(P("x[x <- \\y. u] t"))] == [E_U2]

    def test_direct(self, P):
        assert [r.label for r in enumerate_useful_alt(P("(x t)[x <- \\y. u]"))] == [E_U1]

    def test_no_application(self, P):
        assert enumerate_useful_alt(P("x[x <- \\y. u]")) == []

    @hyp.given(vsc_terms)
    def test_agrees_with_classifier(self, t):
        by_class = {
            alpha_key(apply_redex(t, r)) for r in enumerate_redexes(t)
            if r.label == E_ABS and classify_usefulness(t, r) is Usefulness.USEFUL
        }
        by_rules = {alpha_key(apply_redex(t, r)) for r in enumerate_useful_alt(t)}
        assert by_class == by_rules


class TestCoreNormal:
    def test_unapplied_abstraction(self, P):
        assert is_core_normal(P("x[x <- \\y. y]"))

    def test_applied_abstraction(self, P):
        assert not is_core_normal(P("(x z)[x <- \\y. y]"))

    def test_variable_substitution(self, P):
        assert not is_core_normal(P("x[x <- y]"))

    def test_nonuseful_redex_left(self, P):
        assert is_core_normal(P("(z x)[x <- \\y. y]"))

    @hyp.given(vsc_terms)
    def test_characterization(self, t):
        assert is_core_normal(t) == (not enumerate_redexes(t, VSC_CORE))
