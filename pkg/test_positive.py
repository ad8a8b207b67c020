"""
正の計算と明示的な正の計算のエンジンのテスト
"""

from itertools import combinations

import hypothesis as hyp
import pytest
from hypothesis import strategies as st

from poslam.errors import StaleRedexError, TermError
from poslam.positive import (
    E_PLUS, EME_PLUS, GC_PLUS, M_PLUS,
    apply_opos_redex, apply_oxpos_redex, enumerate_opos_redexes, enumerate_oxpos_redexes,
)
from poslam.syntax import alpha_eq, alpha_key, is_explicit_positive, is_positive, uniquify_binders
from poslam.vsc import Redex
from term_strategies import positive_terms, shadowed_positive_terms, shadowed_xpositive_terms, xpositive_terms

SELF_LOOP = "x[x <- y y][y <- \\z. w[w <- z z]]"
SHADOWED = "c[c <- b x][b <- \\a. b[c <- y a]][b <- x x]"
UNSHADOWED = "c[c <- d x][d <- \\a. b[c <- y a]][b <- x x]"
OMEGA_OXPOS = "w[w <- (\\x. y[y <- x x]) z][z <- \\x. y[y <- x x]]"


class TestOpos:
    def test_self_application_redex(self, P):
        redexes = enumerate_opos_redexes(P(SELF_LOOP))
        assert [r.label for r in redexes] == [EME_PLUS]

    def test_self_application_loops(self, P):
        t = P(SELF_LOOP)
        u = apply_opos_redex(t, enumerate_opos_redexes(t)[0])
        assert alpha_eq(u, t)
        assert is_positive(u)

    def test_variable_is_normal(self, P):
        assert enumerate_opos_redexes(P("x")) == []

    def test_gc(self, P):
        t = P("t[z <- \\y. y]")
        redexes = enumerate_opos_redexes(t)
        assert redexes == [Redex(GC_PLUS, ())]
        assert apply_opos_redex(t, redexes[0]) == P("t")

    def test_used_abstraction_is_not_garbage(self, P):
        assert enumerate_opos_redexes(P("x[x <- \\y. y]")) == []

    def test_rejects_non_positive(self, P):
        with pytest.raises(TermError):
            enumerate_opos_redexes(P("x y"))

    def test_stale_redex(self, P):
        with pytest.raises(StaleRedexError):
            apply_opos_redex(P("x"), Redex(GC_PLUS, ()))

    def test_copy_gets_fresh_binders(self, P):
        t = P("x[x <- y a][y <- \\z. w[w <- z a]]")
        u = apply_opos_redex(t, enumerate_opos_redexes(t)[0])
        assert alpha_eq(u, P("w1[w1 <- a a][y <- \\z. w[w <- z a]]"))

    def test_shadowed_binder_keeps_outer_reference(self, P):
        t = P(SHADOWED)
        redexes = enumerate_opos_redexes(t)
        assert [r.label for r in redexes] == [EME_PLUS]
        expected = P("b[c1 <- y x][d <- \\a. b[c <- y a]][b <- x x]")
        assert alpha_eq(apply_opos_redex(t, redexes[0]), expected)

    def test_alpha_equivalent_inputs(self, P):
        t, u = P(SHADOWED), P(UNSHADOWED)
        assert alpha_eq(t, u)
        [r] = enumerate_opos_redexes(t)
        assert enumerate_opos_redexes(u) == [r]
        assert alpha_eq(apply_opos_redex(t, r), apply_opos_redex(u, r))

    @hyp.given(st.one_of(positive_terms, shadowed_positive_terms))
    def test_grammar_preserved(self, t):
        for r in enumerate_opos_redexes(t):
            assert is_positive(apply_opos_redex(t, r))

    @hyp.given(st.one_of(positive_terms, shadowed_positive_terms))
    def test_alpha_stable(self, t):
        u = uniquify_binders(t)
        redexes = enumerate_opos_redexes(t)
        assert enumerate_opos_redexes(u) == redexes
        for r in redexes:
            assert alpha_eq(apply_opos_redex(t, r), apply_opos_redex(u, r))


class TestOxpos:
    def test_omega_m_plus(self, P):
        assert [r.label for r in enumerate_oxpos_redexes(P(OMEGA_OXPOS))] == [M_PLUS]

    def test_omega_e_plus(self, P):
        t = P("w[w <- z z][z <- \\x. y[y <- x x]]")
        redexes = enumerate_oxpos_redexes(t)
        assert [r.label for r in redexes] == [E_PLUS]
        assert apply_oxpos_redex(t, redexes[0]) == P(OMEGA_OXPOS)

    def test_variable_is_normal(self, P):
        assert enumerate_oxpos_redexes(P("x")) == []

    def test_rejects_non_explicit_positive(self, P):
        with pytest.raises(TermError):
            enumerate_oxpos_redexes(P("(\\x. x) y"))

    def test_m_e_gc_sequence(self, P):
        t = P("x'[x' <- y' w][y' <- (\\x. z'[z' <- \\y. y]) z]")
        r = enumerate_oxpos_redexes(t)
        assert [x.label for x in r] == [M_PLUS]
        t1 = apply_oxpos_redex(t, r[0])
        assert alpha_eq(t1, P("x'[x' <- z' w][z' <- \\y. y]"))

        r = enumerate_oxpos_redexes(t1)
        assert [x.label for x in r] == [E_PLUS]
        t2 = apply_oxpos_redex(t1, r[0])
        assert alpha_eq(t2, P("x'[x' <- (\\y. y) w][z' <- \\y. y]"))

        r = [x for x in enumerate_oxpos_redexes(t2) if x.label == GC_PLUS]
        assert len(r) == 1
        assert alpha_eq(apply_oxpos_redex(t2, r[0]), P("x'[x' <- (\\y. y) w]"))

    def test_m_plus_renames_argument(self, P):
        t = P("x[x <- (\\y. y) z]")
        u = apply_oxpos_redex(t, enumerate_oxpos_redexes(t)[0])
        assert u == P("z")

    def test_e_plus_shadowed_binder(self, P):
        t = P(SHADOWED)
        redexes = enumerate_oxpos_redexes(t)
        assert [r.label for r in redexes] == [E_PLUS]
        expected = P("c[c <- (\\a. b[c <- y a]) x][d <- \\a. b[c <- y a]][b <- x x]")
        assert alpha_eq(apply_oxpos_redex(t, redexes[0]), expected)

    def test_alpha_equivalent_inputs(self, P):
        t, u = P(SHADOWED), P(UNSHADOWED)
        [r] = enumerate_oxpos_redexes(t)
        assert enumerate_oxpos_redexes(u) == [r]
        assert alpha_eq(apply_oxpos_redex(t, r), apply_oxpos_redex(u, r))

    @hyp.given(st.one_of(xpositive_terms, shadowed_xpositive_terms))
    def test_grammar_preserved(self, t):
        for r in enumerate_oxpos_redexes(t):
            assert is_explicit_positive(apply_oxpos_redex(t, r))

    @hyp.given(st.one_of(xpositive_terms, shadowed_xpositive_terms))
    def test_alpha_stable(self, t):
        u = uniquify_binders(t)
        redexes = enumerate_oxpos_redexes(t)
        assert enumerate_oxpos_redexes(u) == redexes
        for r in redexes:
            assert alpha_eq(apply_oxpos_redex(t, r), apply_oxpos_redex(u, r))

    @hyp.given(st.one_of(xpositive_terms, shadowed_xpositive_terms))
    def test_diamond(self, t):
        reducts = {alpha_key(u): u for u in (apply_oxpos_redex(t, r) for r in enumerate_oxpos_redexes(t))}
        joins = {
            key: {alpha_key(apply_oxpos_redex(u, r)) for r in enumerate_oxpos_redexes(u)}
            for key, u in reducts.items()
        }
        for k1, k2 in combinations(sorted(reducts), 2):
            assert joins[k1] & joins[k2]

    @hyp.given(positive_terms)
    def test_eme_factors_through_explicit_steps(self, t):
        for r in enumerate_opos_redexes(t):
            if r.label != EME_PLUS:
                continue
            u = apply_opos_redex(t, r)
            found = any(
                alpha_eq(apply_oxpos_redex(s, r2), u)
                for r1 in enumerate_oxpos_redexes(t) if r1.label == E_PLUS
                for s in [apply_oxpos_redex(t, r1)]
                for r2 in enumerate_oxpos_redexes(s) if r2.label == M_PLUS
            )
            assert found
