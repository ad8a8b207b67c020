"""
VSC Engine - 開いた値置換計算の簡約と有用性の分類

距離付きの規則 m / e / gc を開いた文脈の下で列挙・適用する。
e と gc は置換内容が抽象か変数かで abs / var に分かれる。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional

from .errors import StaleRedexError, TermError
from .syntax import (
    Abs, App, ES, FV_APPLIED, FV_OPEN, Path, Step, Term, Var,
    all_names, format_path, free_vars, freshen_along, fresh_name, is_almost_answer,
    is_open_path, open_subterms, path_order, rename, replace_at, spine, subterm_at,
)

logger = logging.getLogger(__name__)

M = 'm'
E_ABS = 'e_abs'
E_VAR = 'e_var'
GC_ABS = 'gc_abs'
GC_VAR = 'gc_var'
E_U1 = 'e_u1'
E_U2 = 'e_u2'

VSC = 'vsc'
VSC_CORE = 'vsc-core'

EXPONENTIAL_LABELS = (E_ABS, E_VAR, E_U1, E_U2)
GC_LABELS = (GC_ABS, GC_VAR)


@dataclass(frozen=True)
class Redex:
    """規則ラベル・根の位置・置き換える出現の位置"""
    label: str
    anchor: Path
    occurrence: Optional[Path] = None

    @property
    def focus(self) -> Path:
        """列挙順を決める位置 (指数規則は出現、それ以外は根)"""
        return self.occurrence if self.occurrence is not None else self.anchor

    def describe(self) -> str:
        text = f"{self.label} @ {format_path(self.anchor)}"
        if self.occurrence is not None:
            text += f" (occurrence {format_path(self.occurrence)})"
        return text


class Usefulness(Enum):
    USEFUL = 'useful'
    NONUSEFUL = 'nonuseful'
    UNCLASSIFIED = 'unclassified'


@dataclass(frozen=True)
class ContextClass:
    useful: bool
    sub: bool

    @property
    def verdict(self) -> Usefulness:
        return Usefulness.USEFUL if self.useful else Usefulness.NONUSEFUL


def _open_occurrences(t: Term, x: str, prefix: Path = ()) -> Iterator[Path]:
    """抽象の外にある x の自由な出現"""
    if isinstance(t, Var):
        if t.name == x:
            yield prefix
    elif isinstance(t, App):
        yield from _open_occurrences(t.fun, x, prefix + (Step.APP_FUN,))
        yield from _open_occurrences(t.arg, x, prefix + (Step.APP_ARG,))
    elif isinstance(t, ES):
        if t.binder != x:
            yield from _open_occurrences(t.body, x, prefix + (Step.ES_BODY,))
        yield from _open_occurrences(t.content, x, prefix + (Step.ES_CONTENT,))


def _value_kind(t: Term, vars_are_values: bool) -> Optional[str]:
    """置換内容 L<v> の値の種類"""
    value = spine(t)[1]
    if isinstance(value, Abs):
        return 'abs'
    if isinstance(value, Var) and vars_are_values:
        return 'var'
    return None


def binding_site(t: Term, occurrence: Path) -> Path:
    """出現を束縛する明示的置換の位置"""
    name = subterm_at(t, occurrence).name
    for i in range(len(occurrence) - 1, -1, -1):
        if occurrence[i] is Step.ES_BODY:
            node = subterm_at(t, occurrence[:i])
            if node.binder == name:
                return occurrence[:i]
    raise StaleRedexError(f"出現 {name} を束縛する置換がありません")


# ---------------------------------------------------------------------------
# 有用な文脈
# ---------------------------------------------------------------------------

def _is_sub(path: Path) -> bool:
    return all(step is Step.ES_BODY for step in path)


def _useful_by_grammar(path: Path) -> bool:
    """U ::= O<L t> : 最後の非本体ステップが関数位置"""
    for step in reversed(path):
        if step is not Step.ES_BODY:
            return step is Step.APP_FUN
    return False


def _useful_by_structure(path: Path) -> bool:
    """外側の枠から順に分解する再帰的な判定"""
    if not path:
        return False
    first, rest = path[0], path[1:]
    if first is Step.APP_FUN:
        return _useful_by_structure(rest) or _is_sub(rest)
    return _useful_by_structure(rest)


def _check_open_position(t: Term, hole: Path):
    if not is_open_path(hole):
        raise TermError("抽象の下の位置は開いた文脈ではありません")
    subterm_at(t, hole)


def context_class(t: Term, hole: Path) -> ContextClass:
    """文法による文脈の分類"""
    _check_open_position(t, hole)
    return ContextClass(useful=_useful_by_grammar(hole), sub=_is_sub(hole))


def context_class_structural(t: Term, hole: Path) -> ContextClass:
    """部分文脈の再帰による文脈の分類 (文法版と一致すべき)"""
    _check_open_position(t, hole)
    return ContextClass(useful=_useful_by_structure(hole), sub=_is_sub(hole))


def classify_usefulness(t: Term, r: Redex) -> Usefulness:
    """
    指数ステップの有用性を判定

    e_abs は外側の文脈と出現を切り出す文脈の合成 O1<O2> で決まる。
    作用する置換自体は判定に影響しない。
    """
    if r.label != E_ABS:
        return Usefulness.UNCLASSIFIED
    outer = r.anchor
    inner = r.occurrence[len(outer) + 1:]
    useful = _useful_by_structure(inner) or (_is_sub(inner) and _useful_by_structure(outer))
    return Usefulness.USEFUL if useful else Usefulness.NONUSEFUL


def is_core_redex(t: Term, r: Redex) -> bool:
    """m, 有用な e_abs, e_var"""
    if r.label in (M, E_VAR):
        return True
    return r.label == E_ABS and classify_usefulness(t, r) is Usefulness.USEFUL


# ---------------------------------------------------------------------------
# 列挙
# ---------------------------------------------------------------------------

def enumerate_redexes(t: Term, calculus: str = VSC, vars_are_values: bool = True) -> List[Redex]:
    """
    開いた文脈の下のリデックスをすべて列挙

    Args:
        t: VSC の項
        calculus: 'vsc' または 'vsc-core'
        vars_are_values: False のとき変数の複製・回収 (e_var, gc_var) を除く

    Returns:
        焦点位置の前順で並べたリデックス (gc は最後)
    """
    if calculus not in (VSC, VSC_CORE):
        raise ValueError(f"未知の計算体系です: {calculus}")

    redexes: List[Redex] = []
    garbage: List[Redex] = []
    for path, node in open_subterms(t):
        if isinstance(node, App):
            if isinstance(spine(node.fun)[1], Abs):
                redexes.append(Redex(M, path))
        elif isinstance(node, ES):
            kind = _value_kind(node.content, vars_are_values)
            if kind is None:
                continue
            for q in _open_occurrences(node.body, node.binder):
                redexes.append(Redex(f"e_{kind}", path, path + (Step.ES_BODY,) + q))
            if node.binder not in node.body.fv:
                garbage.append(Redex(f"gc_{kind}", path))

    redexes.sort(key=lambda r: path_order(r.focus))
    if calculus == VSC_CORE:
        return [r for r in redexes if is_core_redex(t, r)]
    return redexes + garbage


def enumerate_useful_alt(t: Term) -> List[Redex]:
    """
    二つの根規則による有用な指数リデックスの列挙

    e_u1: 有用な文脈 U<<x>>[x<-L<\\y.t>]
    e_u2: L1<L2<<x>>[x<-L3<\\y.t>]> u (引数を外側の適用が与える)
    """
    redexes: List[Redex] = []
    for path, node in open_subterms(t):
        if isinstance(node, ES) and isinstance(spine(node.content)[1], Abs):
            for q in _open_occurrences(node.body, node.binder):
                if _useful_by_grammar(q):
                    redexes.append(Redex(E_U1, path, path + (Step.ES_BODY,) + q))
        elif isinstance(node, App):
            spine_path, head = spine(node.fun)
            if not isinstance(head, Var):
                continue
            # 先頭変数を束縛する最も内側の置換
            for i in range(len(spine_path) - 1, -1, -1):
                site = subterm_at(node.fun, spine_path[:i])
                if site.binder == head.name:
                    if isinstance(spine(site.content)[1], Abs):
                        redexes.append(Redex(E_U2, path, path + (Step.APP_FUN,) + spine_path))
                    break
    redexes.sort(key=lambda r: path_order(r.focus))
    return redexes


# ---------------------------------------------------------------------------
# 適用
# ---------------------------------------------------------------------------

def _apply_m(t: Term, anchor: Path) -> Term:
    node = subterm_at(t, anchor)
    lam_path, _ = spine(node.fun)
    avoid = all_names(t)
    fun = freshen_along(node.fun, lam_path, node.arg.fv, avoid)
    lam = subterm_at(fun, lam_path)
    binder, body = lam.binder, lam.body

    # 束縛子名が他で使われていれば番号付きの名前にする (x -> x1, x2, ...)
    outside = all_names(replace_at(t, anchor + (Step.APP_FUN,) + lam_path, Var('')))
    if binder in outside:
        renamed = fresh_name(binder, avoid)
        avoid.add(renamed)
        body = rename(body, binder, renamed)
        binder = renamed

    return replace_at(t, anchor, replace_at(fun, lam_path, ES(body, binder, node.arg)))


def _apply_e(t: Term, site: Path, occurrence: Path) -> Term:
    node = subterm_at(t, site)
    q = occurrence[len(site) + 1:]
    binder = node.binder
    value_path, _ = spine(node.content)
    avoid = all_names(t)

    # L を外へ持ち上げるので本体の自由変数と衝突する束縛子を付け替える
    content = freshen_along(node.content, value_path, node.body.fv - {binder}, avoid)
    value = subterm_at(content, value_path)

    body = node.body
    if binder in value.fv:
        renamed = fresh_name(binder, avoid)
        avoid.add(renamed)
        body = rename(body, binder, renamed)
        binder = renamed
    body = freshen_along(body, q, value.fv, avoid)
    body = replace_at(body, q, value)

    return replace_at(t, site, replace_at(content, value_path, ES(body, binder, value)))


def _apply_gc(t: Term, site: Path) -> Term:
    node = subterm_at(t, site)
    value_path, _ = spine(node.content)
    content = freshen_along(node.content, value_path, node.body.fv, all_names(t))
    return replace_at(t, site, replace_at(content, value_path, node.body))


def apply_redex(t: Term, r: Redex) -> Term:
    """
    リデックスを縮約する

    Args:
        t: リデックスを列挙した元の項
        r: 適用するリデックス

    Returns:
        縮約後の項
    """
    if r.label in (E_U1, E_U2):
        if r not in enumerate_useful_alt(t):
            raise StaleRedexError(f"リデックスが項と一致しません: {r.describe()}")
        return _apply_e(t, binding_site(t, r.occurrence), r.occurrence)

    if r not in enumerate_redexes(t, VSC, vars_are_values=True):
        raise StaleRedexError(f"リデックスが項と一致しません: {r.describe()}")

    logger.debug("apply %s", r.describe())
    if r.label == M:
        return _apply_m(t, r.anchor)
    if r.label in (E_ABS, E_VAR):
        return _apply_e(t, r.anchor, r.occurrence)
    return _apply_gc(t, r.anchor)


# ---------------------------------------------------------------------------
# コア正規形
# ---------------------------------------------------------------------------

def is_core_normal(t: Term) -> bool:
    """コア正規形の文法による判定"""
    if isinstance(t, (Var, Abs)):
        return True
    if isinstance(t, App):
        return is_core_normal(t.fun) and is_core_normal(t.arg) and not is_almost_answer(t.fun)
    if not (is_core_normal(t.body) and is_core_normal(t.content)):
        return False
    value = spine(t.content)[1]
    if isinstance(value, Abs):
        return t.binder not in free_vars(t.body, FV_APPLIED)
    if isinstance(value, Var):
        return t.binder not in free_vars(t.body, FV_OPEN)
    return True
