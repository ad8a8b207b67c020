"""
Positive Translation - VSC の項から明示的な正の項への変換

すべての適用と抽象を置換で共有し、変数の置換は名前の付け替えに吸収する。
新しい変数名は FreshSupply から取る (既定の接頭辞 p)。
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import TermError
from .syntax import (
    Abs, App, ES, HOLE, HOLE_NAME, FreshSupply, Path, Renaming, Step, Term, Var,
    all_names, is_answer, plug, rename, replace_at, spine, subterm_at, uniquify_binders,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CtxTranslation:
    """置換文脈の変換結果 (評価文脈の骨格と付け替え)"""
    ctx: Term
    renaming: Renaming

    def plug(self, t: Term) -> Term:
        """ctx<t σ>"""
        return plug(self.ctx, self.renaming.apply(t))


def _head(t: Term) -> Tuple[Path, str]:
    path, head = spine(t)
    return path, head.name


def _bind_head(tc: Term, x: str) -> Tuple[Term, Path, Optional[str]]:
    """
    E<y> の y が E で束縛されていればその束縛子を x に付け替える

    Returns:
        (付け替え後の項, 穴のパス, 自由な先頭変数 (束縛されていれば None))
    """
    path, y = _head(tc)
    for i in range(len(path) - 1, -1, -1):
        site = subterm_at(tc, path[:i])
        if site.binder == y:
            if y != x:
                tc = replace_at(tc, path[:i], ES(rename(site.body, y, x), x, site.content))
            return tc, path, None
    return tc, path, y


def _translate(t: Term, fresh: FreshSupply) -> Term:
    if isinstance(t, Var):
        return t

    if isinstance(t, Abs):
        y = fresh.fresh()
        return ES(Var(y), y, Abs(t.binder, _translate(t.body, fresh)))

    if isinstance(t, ES):
        # 内容の先頭変数に束縛子を合わせる
        tc, path, free_head = _bind_head(_translate(t.content, fresh), t.binder)
        body = _translate(t.body, fresh)
        if free_head is not None:
            body = rename(body, t.binder, free_head)
        return replace_at(tc, path, body)

    if is_answer(t.fun):
        # L<\x.t> u
        lam_path, lam = spine(t.fun)
        ct = translate_subst_ctx(replace_at(t.fun, lam_path, HOLE), fresh)
        inner = ct.renaming.apply(Abs(lam.binder, _translate(lam.body, fresh)))
        tu = _translate(t.arg, fresh)
        arg_path, z = _head(tu)
        y = fresh.fresh()
        return plug(ct.ctx, replace_at(tu, arg_path, ES(Var(y), y, App(inner, Var(z)))))

    tf = _translate(t.fun, fresh)
    fun_path, x = _head(tf)
    tu = _translate(t.arg, fresh)
    arg_path, z = _head(tu)
    y = fresh.fresh()
    return replace_at(tf, fun_path, replace_at(tu, arg_path, ES(Var(y), y, App(Var(x), Var(z)))))


def translate(t: Term, fresh: Optional[FreshSupply] = None, uniquify: bool = True) -> Term:
    """
    VSC の項を明示的な正の項に変換する

    Args:
        t: VSC の項
        fresh: 新変数名の供給 (省略時は t の名前を避ける新しい供給)
        uniquify: 先に束縛子を互いに異なる名前にする

    Returns:
        明示的な正の項
    """
    if uniquify:
        t = uniquify_binders(t)
    if fresh is None:
        fresh = FreshSupply(all_names(t))
    else:
        fresh.reserve(all_names(t))
    return _translate(t, fresh)


def translate_subst_ctx(ctx: Term, fresh: Optional[FreshSupply] = None) -> CtxTranslation:
    """
    置換文脈 L を (評価文脈, 付け替え) に変換する

    変数の置換 [x<-y] は文脈から消えて付け替え x->y になる。
    """
    if fresh is None:
        fresh = FreshSupply(all_names(ctx))

    def walk(node: Term) -> CtxTranslation:
        if isinstance(node, Var) and node.name == HOLE_NAME:
            return CtxTranslation(HOLE, Renaming())
        if not isinstance(node, ES):
            raise TermError("置換文脈ではありません")
        inner = walk(node.body)
        tc, path, free_head = _bind_head(_translate(node.content, fresh), node.binder)
        if free_head is None:
            return CtxTranslation(replace_at(tc, path, inner.ctx), inner.renaming)
        return CtxTranslation(
            replace_at(tc, path, rename(inner.ctx, node.binder, free_head)),
            inner.renaming.then(node.binder, free_head),
        )

    return walk(ctx)


def subst_ctx_of(t: Term, path: Path) -> Tuple[Term, Term]:
    """
    本体側だけを辿るパスで t を L<u> に分ける

    Returns:
        (穴付きの置換文脈 L, u)
    """
    if any(step is not Step.ES_BODY for step in path):
        raise TermError("置換の本体だけを辿るパスではありません")
    return replace_at(t, path, HOLE), subterm_at(t, path)
