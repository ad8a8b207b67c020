"""
Term Syntax - 項の表現・束縛・部分文法判定

三つの計算体系 (VSC, 正の計算, 明示的な正の計算) で共有する項を定義する。
項は不変値であり、すべての操作は純粋関数。
"""

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .errors import TermError


class Term:
    """項の基底クラス"""

    @cached_property
    def fv(self) -> FrozenSet[str]:
        """自由変数の集合"""
        return self._free_vars()

    def _free_vars(self) -> FrozenSet[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Term):
    name: str

    def _free_vars(self) -> FrozenSet[str]:
        return frozenset((self.name,))


@dataclass(frozen=True)
class Abs(Term):
    binder: str
    body: Term

    def _free_vars(self) -> FrozenSet[str]:
        return self.body.fv - {self.binder}


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term

    def _free_vars(self) -> FrozenSet[str]:
        return self.fun.fv | self.arg.fv


@dataclass(frozen=True)
class ES(Term):
    """明示的置換 body[binder <- content]"""
    body: Term
    binder: str
    content: Term

    def _free_vars(self) -> FrozenSet[str]:
        return (self.body.fv - {self.binder}) | self.content.fv


class Step(Enum):
    """パスの1段"""
    ABS_BODY = 'abs-body'
    APP_FUN = 'app-fun'
    APP_ARG = 'app-arg'
    ES_BODY = 'es-body'
    ES_CONTENT = 'es-content'


Path = Tuple[Step, ...]

# 兄弟間の順序: 関数部 < 引数部, 本体 < 内容
_STEP_RANK = {
    Step.ABS_BODY: 0,
    Step.APP_FUN: 0,
    Step.APP_ARG: 1,
    Step.ES_BODY: 0,
    Step.ES_CONTENT: 1,
}

# 文脈の穴を表す予約変数 (構文上は書けない名前)
HOLE_NAME = '<.>'
HOLE = Var(HOLE_NAME)

FV_ALL = 'all'
FV_OPEN = 'open'
FV_APPLIED = 'applied-open'


def path_order(path: Path) -> Tuple[int, ...]:
    """前順走査での位置を比較するためのキー"""
    return tuple(_STEP_RANK[step] for step in path)


def format_path(path: Path) -> str:
    """パスを表示用文字列に変換"""
    return '/'.join(step.value for step in path) or '.'


# ---------------------------------------------------------------------------
# 位置操作
# ---------------------------------------------------------------------------

def child(t: Term, step: Step) -> Term:
    """1段だけ部分項に降りる"""
    if step is Step.ABS_BODY and isinstance(t, Abs):
        return t.body
    if step is Step.APP_FUN and isinstance(t, App):
        return t.fun
    if step is Step.APP_ARG and isinstance(t, App):
        return t.arg
    if step is Step.ES_BODY and isinstance(t, ES):
        return t.body
    if step is Step.ES_CONTENT and isinstance(t, ES):
        return t.content
    raise TermError(f"パス {step.value} は {type(t).__name__} に存在しません")


def subterm_at(t: Term, path: Path) -> Term:
    """パスが指す部分項を取得"""
    for step in path:
        t = child(t, step)
    return t


def replace_at(t: Term, path: Path, new: Term) -> Term:
    """パスが指す部分項を置き換える (捕獲は起こり得る)"""
    if not path:
        return new
    step, rest = path[0], path[1:]
    sub = replace_at(child(t, step), rest, new)
    if step is Step.ABS_BODY:
        return Abs(t.binder, sub)
    if step is Step.APP_FUN:
        return App(sub, t.arg)
    if step is Step.APP_ARG:
        return App(t.fun, sub)
    if step is Step.ES_BODY:
        return ES(sub, t.binder, t.content)
    return ES(t.body, t.binder, sub)


def open_subterms(t: Term, prefix: Path = ()) -> Iterator[Tuple[Path, Term]]:
    """抽象の外にある部分項を前順で列挙"""
    yield prefix, t
    if isinstance(t, App):
        yield from open_subterms(t.fun, prefix + (Step.APP_FUN,))
        yield from open_subterms(t.arg, prefix + (Step.APP_ARG,))
    elif isinstance(t, ES):
        yield from open_subterms(t.body, prefix + (Step.ES_BODY,))
        yield from open_subterms(t.content, prefix + (Step.ES_CONTENT,))


def is_open_path(path: Path) -> bool:
    """抽象の下を通らないパスか"""
    return Step.ABS_BODY not in path


def spine(t: Term) -> Tuple[Path, Term]:
    """置換の本体側を辿り、置換文脈 L の穴の位置と中身を返す"""
    path: List[Step] = []
    while isinstance(t, ES):
        path.append(Step.ES_BODY)
        t = t.body
    return tuple(path), t


def spine_head(t: Term) -> Optional[str]:
    """t = L<<x>> (x が L に捕獲されない) なら x を返す"""
    binders = set()
    while isinstance(t, ES):
        binders.add(t.binder)
        t = t.body
    if isinstance(t, Var) and t.name not in binders:
        return t.name
    return None


def hole_path(ctx: Term) -> Path:
    """文脈の穴の位置"""
    for path, node in open_subterms(ctx):
        if isinstance(node, Var) and node.name == HOLE_NAME:
            return path
    raise TermError("文脈に穴がありません")


def plug(ctx: Term, t: Term) -> Term:
    """文脈の穴に項を埋める (束縛子による捕獲あり)"""
    return replace_at(ctx, hole_path(ctx), t)


# ---------------------------------------------------------------------------
# 変数
# ---------------------------------------------------------------------------

def all_names(t: Term) -> Set[str]:
    """項に現れるすべての名前 (束縛子を含む)"""
    names: Set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Abs):
            names.add(node.binder)
            stack.append(node.body)
        elif isinstance(node, App):
            stack.extend((node.fun, node.arg))
        else:
            names.add(node.binder)
            stack.extend((node.body, node.content))
    return names


def _open_free(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return frozenset()
    if isinstance(t, App):
        return _open_free(t.fun) | _open_free(t.arg)
    return (_open_free(t.body) - {t.binder}) | _open_free(t.content)


def _applied_open_free(t: Term) -> FrozenSet[str]:
    if isinstance(t, (Var, Abs)):
        return frozenset()
    if isinstance(t, App):
        result = _applied_open_free(t.fun) | _applied_open_free(t.arg)
        head = spine_head(t.fun)
        if head is not None:
            result = result | {head}
        return result
    return (_applied_open_free(t.body) - {t.binder}) | _applied_open_free(t.content)


def free_vars(t: Term, mode: str = FV_ALL) -> FrozenSet[str]:
    """
    自由変数の集合を計算

    Args:
        t: 対象の項
        mode: 'all' (通常の自由変数), 'open' (抽象の外の出現),
              'applied-open' (抽象の外で関数位置にある出現)

    Returns:
        変数名の集合
    """
    if mode == FV_ALL:
        return t.fv
    if mode == FV_OPEN:
        return _open_free(t)
    if mode == FV_APPLIED:
        return _applied_open_free(t)
    raise ValueError(f"未知のモードです: {mode}")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """base の語幹に最小の番号を付けた未使用の名前"""
    avoid = set(avoid)
    root = re.sub(r"[0-9']+$", "", base) or base
    k = 1
    while f"{root}{k}" in avoid:
        k += 1
    return f"{root}{k}"


class FreshSupply:
    """決定的な新変数名の供給 (カウンタを明示的に受け渡す)"""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = 'p'):
        self.avoid: Set[str] = set(avoid)
        self.prefix = prefix
        self.counter = 0

    def reserve(self, names: Iterable[str]):
        """使用済みの名前を登録"""
        self.avoid.update(names)

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


# ---------------------------------------------------------------------------
# 置換
# ---------------------------------------------------------------------------

def _range_vars(mapping: Dict[str, Term]) -> Set[str]:
    result: Set[str] = set()
    for value in mapping.values():
        result |= value.fv
    return result


def _under_binder(binder: str, body: Term, mapping: Dict[str, Term]) -> Tuple[str, Term]:
    """束縛子の下に置換を進める。捕獲が起こる場合は束縛子を付け替える"""
    inner = {k: v for k, v in mapping.items() if k != binder and k in body.fv}
    if not inner:
        return binder, body
    if binder in _range_vars(inner):
        avoid = all_names(body) | _range_vars(inner) | set(inner)
        renamed = fresh_name(binder, avoid)
        body = substitute(body, {binder: Var(renamed)})
        binder = renamed
    return binder, substitute(body, inner)


def substitute(t: Term, mapping: Dict[str, Term]) -> Term:
    """捕獲回避の同時置換 t{x1<-u1, ..., xn<-un}"""
    mapping = {k: v for k, v in mapping.items() if k in t.fv}
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(substitute(t.fun, mapping), substitute(t.arg, mapping))
    if isinstance(t, Abs):
        binder, body = _under_binder(t.binder, t.body, mapping)
        return Abs(binder, body)
    binder, body = _under_binder(t.binder, t.body, mapping)
    return ES(body, binder, substitute(t.content, mapping))


def rename(t: Term, x: str, y: str) -> Term:
    """変数の付け替え t{x<-y}"""
    if x == y:
        return t
    return substitute(t, {x: Var(y)})


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Abs))


def subst_value(t: Term, x: str, v: Term) -> Term:
    """値による捕獲回避の置換 t{x<-v}"""
    if not is_value(v):
        raise TermError("値でない項は代入できません")
    return substitute(t, {x: v})


def freshen_along(t: Term, path: Path, bad: Iterable[str], avoid: Set[str]) -> Term:
    """
    パス上で穴を覆う束縛子のうち bad に含まれるものを新しい名前に付け替える

    avoid は生成した名前で更新される。付け替えは形を変えないので path は有効なまま。
    """
    bad = set(bad)
    if not bad or not path:
        return t
    step, rest = path[0], path[1:]
    if step is Step.ABS_BODY and t.binder in bad:
        new = fresh_name(t.binder, avoid)
        avoid.add(new)
        t = Abs(new, rename(t.body, t.binder, new))
    elif step is Step.ES_BODY and t.binder in bad:
        new = fresh_name(t.binder, avoid)
        avoid.add(new)
        t = ES(rename(t.body, t.binder, new), new, t.content)
    return replace_at(t, (step,), freshen_along(child(t, step), rest, bad, avoid))


def uniquify_binders(t: Term) -> Term:
    """束縛子を互いに、また自由変数とも異なる名前にする (α同値)"""
    avoid = all_names(t)
    seen = set(t.fv)

    def walk(node: Term) -> Term:
        if isinstance(node, Var):
            return node
        if isinstance(node, App):
            return App(walk(node.fun), walk(node.arg))
        if isinstance(node, Abs):
            binder, body = node.binder, node.body
            if binder in seen:
                new = fresh_name(binder, avoid)
                avoid.add(new)
                body = rename(body, binder, new)
                binder = new
            seen.add(binder)
            return Abs(binder, walk(body))
        content = walk(node.content)
        binder, body = node.binder, node.body
        if binder in seen:
            new = fresh_name(binder, avoid)
            avoid.add(new)
            body = rename(body, binder, new)
            binder = new
        seen.add(binder)
        return ES(walk(body), binder, content)

    return walk(t)


@dataclass(frozen=True)
class Renaming:
    """変数から変数への有限写像 (同時適用)"""
    pairs: Tuple[Tuple[str, str], ...] = ()

    @classmethod
    def from_dict(cls, mapping: Dict[str, str]) -> 'Renaming':
        return cls(tuple(sorted((k, v) for k, v in mapping.items() if k != v)))

    def as_dict(self) -> Dict[str, str]:
        return dict(self.pairs)

    def __call__(self, name: str) -> str:
        return self.as_dict().get(name, name)

    def then(self, x: str, y: str) -> 'Renaming':
        """合成 σ{x<-y}: σ を適用した後に x を y に付け替える"""
        composed = {}
        for source, target in self.pairs:
            composed[source] = y if target == x else target
        if x not in composed:
            composed[x] = y
        return Renaming.from_dict(composed)

    def is_idempotent(self) -> bool:
        """連鎖 x->y, y->z が残っていないか"""
        domain = {source for source, _ in self.pairs}
        return all(target not in domain for _, target in self.pairs)

    def apply(self, t: Term) -> Term:
        return substitute(t, {k: Var(v) for k, v in self.pairs})


# ---------------------------------------------------------------------------
# α同値
# ---------------------------------------------------------------------------

def alpha_key(t: Term) -> str:
    """束縛変数を番号で置き換えた正準形 (等しいこと ⇔ α同値)"""
    out: List[str] = []

    def walk(node: Term, env: Tuple[str, ...]):
        if isinstance(node, Var):
            for depth in range(len(env) - 1, -1, -1):
                if env[depth] == node.name:
                    out.append(f"#{depth}")
                    return
            out.append(f"'{node.name}")
        elif isinstance(node, Abs):
            out.append("(L ")
            walk(node.body, env + (node.binder,))
            out.append(")")
        elif isinstance(node, App):
            out.append("(A ")
            walk(node.fun, env)
            out.append(" ")
            walk(node.arg, env)
            out.append(")")
        else:
            out.append("(S ")
            walk(node.body, env + (node.binder,))
            out.append(" ")
            walk(node.content, env)
            out.append(")")

    walk(t, ())
    return ''.join(out)


def alpha_eq(t: Term, u: Term) -> bool:
    """α同値判定"""
    return alpha_key(t) == alpha_key(u)


# ---------------------------------------------------------------------------
# 部分文法
# ---------------------------------------------------------------------------

def is_answer(t: Term) -> bool:
    """a ::= L<\\x.t>"""
    return isinstance(spine(t)[1], Abs)


def is_almost_answer(t: Term) -> bool:
    """答え、または L<L'<x>[x<-a]> (a は答え)"""
    if is_answer(t):
        return True
    while isinstance(t, ES):
        if is_answer(t.content) and spine_head(t.body) == t.binder:
            return True
        t = t.body
    return False


def _is_var_app(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Var) and isinstance(t.arg, Var)


def is_positive(t: Term) -> bool:
    """t ::= x | t[x<-yz] | t[x<-\\y.u]"""
    while isinstance(t, ES):
        content = t.content
        if isinstance(content, Abs):
            if not is_positive(content.body):
                return False
        elif not _is_var_app(content):
            return False
        t = t.body
    return isinstance(t, Var)


def is_explicit_positive(t: Term) -> bool:
    """正の項に明示的なリデックス [x<-(\\y.u)z] を加えた文法"""
    while isinstance(t, ES):
        content = t.content
        if isinstance(content, Abs):
            if not is_explicit_positive(content.body):
                return False
        elif isinstance(content, App) and isinstance(content.fun, Abs) and isinstance(content.arg, Var):
            if not is_explicit_positive(content.fun.body):
                return False
        elif not _is_var_app(content):
            return False
        t = t.body
    return isinstance(t, Var)


@dataclass(frozen=True)
class TermFlags:
    is_value: bool
    is_answer: bool
    is_almost_answer: bool
    is_positive: bool
    is_explicit_positive: bool


def classify_term(t: Term) -> TermFlags:
    """各文法への所属を判定"""
    return TermFlags(
        is_value=is_value(t),
        is_answer=is_answer(t),
        is_almost_answer=is_almost_answer(t),
        is_positive=is_positive(t),
        is_explicit_positive=is_explicit_positive(t),
    )


def decompose_positive(t: Term) -> Tuple[Path, str]:
    """
    明示的な正の項を E<x> に一意分解する

    Returns:
        (E の穴のパス, 先頭変数)
    """
    if not is_explicit_positive(t):
        raise TermError("明示的な正の項ではありません")
    path, head = spine(t)
    return path, head.name


def evaluation_context(t: Term) -> Tuple[Term, str]:
    """E<x> を (穴付きの E, x) に分解"""
    path, head = decompose_positive(t)
    return replace_at(t, path, HOLE), head
