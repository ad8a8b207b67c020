"""
Term Parser - 具象構文から項への構文解析 (Lark, LALR)
"""

import os
from functools import lru_cache

from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput

from ..errors import ParseError
from ..syntax import Abs, App, ES, Term, Var


class TermTransformer(Transformer):
    """構文木から Term を組み立てる"""

    def var(self, items):
        return Var(str(items[0]))

    def lam(self, items):
        return Abs(str(items[0]), items[1])

    def application(self, items):
        return App(items[0], items[1])

    def app_lam(self, items):
        return App(items[0], items[1])

    def es(self, items):
        return ES(items[0], str(items[1]), items[2])


def read_grammar() -> str:
    grammar_path = os.path.join(os.path.dirname(os.path.realpath(__file__)), "term.lark")
    with open(grammar_path, "r", encoding="utf-8") as grammar_file:
        return grammar_file.read()


@lru_cache(maxsize=1)
def get_parser() -> Lark:
    return Lark(read_grammar(), start='term', parser='lalr', transformer=TermTransformer())


def parse_term(text: str) -> Term:
    """
    文字列を項に変換する

    Args:
        text: 例 "(\\x. x x) (\\x. x x)"、"w[w <- z z]"

    Returns:
        Term

    Raises:
        ParseError: 行・列と期待される字句の集合を持つ
    """
    try:
        return get_parser().parse(text)
    except UnexpectedInput as e:
        expected = getattr(e, 'expected', None) or getattr(e, 'allowed', None) or ()
        raise ParseError("構文解析に失敗しました", getattr(e, 'line', None), getattr(e, 'column', None), expected)
