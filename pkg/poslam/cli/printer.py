"""
Term Printer - 項の具象構文への出力
"""

from ..syntax import Abs, App, Term, Var


def print_term(t: Term) -> str:
    """parse_term で読み戻せる表記 (例: (x1 x1)[x1 <- \\x. x x])"""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Abs):
        return f"\\{t.binder}. {print_term(t.body)}"
    if isinstance(t, App):
        fun = print_term(t.fun)
        if isinstance(t.fun, Abs):
            fun = f"({fun})"
        arg = print_term(t.arg)
        if isinstance(t.arg, (App, Abs)):
            arg = f"({arg})"
        return f"{fun} {arg}"
    body = print_term(t.body)
    if isinstance(t.body, (App, Abs)):
        body = f"({body})"
    return f"{body}[{t.binder} <- {print_term(t.content)}]"
