"""
単純型の推論のテスト
"""

import hypothesis as hyp
import pytest

from poslam.errors import TermError
from poslam.simple_types import (
    TArrow, TAtom, TMeta, canonical_type, infer_type_positive, infer_type_vsc, type_to_str,
)
from poslam.translate import translate
from term_strategies import positive_terms


def test_type_to_str_is_right_associative():
    a, b = TAtom('a'), TAtom('b')
    assert type_to_str(TArrow(a, TArrow(b, a))) == "a => b => a"
    assert type_to_str(TArrow(TArrow(a, b), a)) == "(a => b) => a"


def test_canonical_type():
    ty = TArrow(TMeta(4), TArrow(TAtom('q'), TMeta(4)))
    assert canonical_type(ty) == TArrow(TAtom('a'), TArrow(TAtom('b'), TAtom('a')))


class TestPositive:
    def test_variable_from_environment(self, P):
        result = infer_type_positive(P("x"), {'x': TAtom('A')})
        assert result.type == TAtom('A')

    def test_identity(self, P):
        result = infer_type_positive(P("z[z <- \\y. y]"))
        assert result.typable
        assert type_to_str(result.type) == "a => a"

    def test_self_application(self, P):
        result = infer_type_positive(P("w[w <- x x]"))
        assert not result.typable
        assert result.error.startswith("出現検査に失敗しました")

    def test_application_rule(self, P):
        result = infer_type_positive(P("x[x <- y z]"), {'y': TArrow(TAtom('B'), TAtom('C'))})
        assert result.type == TAtom('C')

    def test_clash(self, P):
        result = infer_type_positive(P("x[x <- y z]"), {'y': TAtom('A')})
        assert not result.typable
        assert result.error.startswith("型が衝突しました")

    def test_explicit_redex(self, P):
        result = infer_type_positive(P("w[w <- (\\y. y) z]"), {'z': TAtom('B')})
        assert result.type == TAtom('B')

    def test_rejects_non_positive(self, P):
        with pytest.raises(TermError):
            infer_type_positive(P("x y"))

    @hyp.given(positive_terms)
    def test_result_has_no_metavariables(self, t):
        result = infer_type_positive(t)
        if result.typable:
            assert '?' not in type_to_str(result.type)


class TestSource:
    def test_identity(self, P):
        assert type_to_str(infer_type_vsc(P("\\x. x")).type) == "a => a"

    def test_constant(self, P):
        assert type_to_str(infer_type_vsc(P("\\x. \\y. x")).type) == "a => b => a"

    def test_omega_untypable(self, P):
        assert not infer_type_vsc(P("(\\x. x x) (\\x. x x)")).typable

    def test_explicit_substitution_is_let(self, P):
        result = infer_type_vsc(P("(f y)[f <- \\x. x]"), {'y': TAtom('B')})
        assert result.type == TAtom('B')

    def test_free_parameters_avoid_environment_atoms(self, P):
        result = infer_type_vsc(P("\\x. y"), {'y': TAtom('a')})
        assert type_to_str(result.type) == "b => a"

    @pytest.mark.parametrize("text", [
        "\\x. x",
        "\\x. \\y. x y",
        "(\\f. \\x. f x) (\\z. z)",
        "(\\x. x)[y <- \\z. z]",
        "\\f. (f x)[x <- \\a. a]",
    ])
    def test_translation_preserves_types(self, P, text):
        t = P(text)
        source = infer_type_vsc(t)
        target = infer_type_positive(translate(t))
        assert source.typable and target.typable
        assert canonical_type(target.type) == canonical_type(source.type)
