"""
Positive Engines - 正の計算とその明示的な変種の簡約

評価文脈 E は置換の本体側を辿る位置だけなので、リデックスはすべて
項の背骨 (ES の本体の列) 上にある。
"""

import logging
from typing import Iterator, List, Tuple

from .errors import StaleRedexError, TermError
from .syntax import (
    Abs, App, ES, Path, Step, Term, Var,
    all_names, fresh_name, freshen_along, is_explicit_positive, is_positive,
    path_order, rename, replace_at, spine, subterm_at,
)
from .vsc import Redex

logger = logging.getLogger(__name__)

EME_PLUS = 'eme_plus'
GC_PLUS = 'gc_plus'
M_PLUS = 'm_plus'
E_PLUS = 'e_plus'

OPOS = 'opos'
OXPOS = 'oxpos'


def _spine_sites(t: Term, prefix: Path = ()) -> Iterator[Tuple[Path, ES]]:
    """背骨上の明示的置換を外側から順に"""
    path = prefix
    while isinstance(t, ES):
        yield path, t
        t = t.body
        path = path + (Step.ES_BODY,)


def _applied_targets(site_path: Path, site: ES) -> Iterator[Path]:
    """[y<-\\w.u] の本体の背骨にある [x<-yz] (y が捕獲されないもの)"""
    y = site.binder
    for rel, target in _spine_sites(site.body):
        content = target.content
        if isinstance(content, App) and isinstance(content.fun, Var) and content.fun.name == y:
            yield site_path + (Step.ES_BODY,) + rel + (Step.ES_CONTENT, Step.APP_FUN)
        if target.binder == y:
            break


def _target_rel(r: Redex) -> Path:
    """出現の位置から作用される置換までの相対パス"""
    return r.occurrence[len(r.anchor) + 1:-2]


def _sorted(redexes: List[Redex], garbage: List[Redex]) -> List[Redex]:
    redexes.sort(key=lambda r: path_order(r.focus))
    return redexes + garbage


# ---------------------------------------------------------------------------
# 正の計算
# ---------------------------------------------------------------------------

def enumerate_opos_redexes(t: Term) -> List[Redex]:
    """eme_plus と gc_plus の列挙"""
    if not is_positive(t):
        raise TermError("正の項ではありません")
    redexes: List[Redex] = []
    garbage: List[Redex] = []
    for path, site in _spine_sites(t):
        if not isinstance(site.content, Abs):
            continue
        for occurrence in _applied_targets(path, site):
            redexes.append(Redex(EME_PLUS, path, occurrence))
        if site.binder not in site.body.fv:
            garbage.append(Redex(GC_PLUS, path))
    return _sorted(redexes, garbage)


def _unshadowed_site(t: Term, r: Redex) -> Tuple[ES, Path, set]:
    """作用する置換とその本体の束縛子のうち、複製される抽象の自由変数と衝突するものを付け替える"""
    avoid = all_names(t)
    rel = _target_rel(r)
    site = subterm_at(t, r.anchor)
    site = freshen_along(site, (Step.ES_BODY,) + rel, site.content.fv, avoid)
    return site, rel, avoid


def _copy_with_fresh_binders(lam: Abs, avoid: set) -> Tuple[str, Term, Path]:
    """\\w.E'<w'> の複製。w と E' の束縛子をすべて新しい名前にする"""
    w = fresh_name(lam.binder, avoid)
    avoid.add(w)
    body = rename(lam.body, lam.binder, w)
    head_path, _ = spine(body)
    binders = {subterm_at(body, head_path[:i]).binder for i in range(len(head_path))}
    body = freshen_along(body, head_path, binders, avoid)
    return w, body, head_path


def _apply_eme(t: Term, r: Redex) -> Term:
    site, rel, avoid = _unshadowed_site(t, r)
    lam, body = site.content, site.body
    target = subterm_at(body, rel)
    z = target.content.arg.name

    w, copy, head_path = _copy_with_fresh_binders(lam, avoid)
    head = subterm_at(copy, head_path).name
    inner = replace_at(copy, head_path, rename(target.body, target.binder, head))
    inner = rename(inner, w, z)

    # 作用した置換は E の外側に残す
    return replace_at(t, r.anchor, ES(replace_at(body, rel, inner), site.binder, lam))


def apply_opos_redex(t: Term, r: Redex) -> Term:
    """
    正の計算のリデックスを縮約する

    eme_plus の結果は E<(E'<t{x<-w'}>){w<-z}>[y<-\\w.E'<w'>]。
    複製された E' の束縛子は新しい名前に付け替える。
    """
    if r not in enumerate_opos_redexes(t):
        raise StaleRedexError(f"リデックスが項と一致しません: {r.describe()}")
    logger.debug("apply %s", r.describe())
    if r.label == EME_PLUS:
        return _apply_eme(t, r)
    return replace_at(t, r.anchor, subterm_at(t, r.anchor).body)


# ---------------------------------------------------------------------------
# 明示的な正の計算
# ---------------------------------------------------------------------------

def enumerate_oxpos_redexes(t: Term) -> List[Redex]:
    """m_plus, e_plus, gc_plus の列挙"""
    if not is_explicit_positive(t):
        raise TermError("明示的な正の項ではありません")
    redexes: List[Redex] = []
    garbage: List[Redex] = []
    for path, site in _spine_sites(t):
        content = site.content
        if isinstance(content, App) and isinstance(content.fun, Abs):
            redexes.append(Redex(M_PLUS, path))
        elif isinstance(content, Abs):
            for occurrence in _applied_targets(path, site):
                redexes.append(Redex(E_PLUS, path, occurrence))
            if site.binder not in site.body.fv:
                garbage.append(Redex(GC_PLUS, path))
    return _sorted(redexes, garbage)


def _apply_m_plus(t: Term, anchor: Path) -> Term:
    site = subterm_at(t, anchor)
    body, x = site.body, site.binder
    lam, w = site.content.fun, site.content.arg.name
    avoid = all_names(t)

    y, inner = lam.binder, lam.body
    if y in body.fv:
        renamed = fresh_name(y, avoid)
        avoid.add(renamed)
        inner = rename(inner, y, renamed)
        y = renamed

    # E<z> の E に t を埋める。z の捕獲は意図どおりで、他の衝突だけ避ける
    head_path, _ = spine(inner)
    inner = freshen_along(inner, head_path, body.fv - {x}, avoid)
    z = subterm_at(inner, head_path).name
    result = replace_at(inner, head_path, rename(body, x, z))
    return replace_at(t, anchor, rename(result, y, w))


def _apply_e_plus(t: Term, r: Redex) -> Term:
    site, rel, _ = _unshadowed_site(t, r)
    lam, body = site.content, site.body
    target = subterm_at(body, rel)
    explicit = ES(target.body, target.binder, App(lam, target.content.arg))
    return replace_at(t, r.anchor, ES(replace_at(body, rel, explicit), site.binder, lam))


def apply_oxpos_redex(t: Term, r: Redex) -> Term:
    """明示的な正の計算のリデックスを縮約する"""
    if r not in enumerate_oxpos_redexes(t):
        raise StaleRedexError(f"リデックスが項と一致しません: {r.describe()}")
    logger.debug("apply %s", r.describe())
    if r.label == M_PLUS:
        return _apply_m_plus(t, r.anchor)
    if r.label == E_PLUS:
        return _apply_e_plus(t, r)
    return replace_at(t, r.anchor, subterm_at(t, r.anchor).body)
