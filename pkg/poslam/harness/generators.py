"""
Term Generators - 検査用の項の網羅列挙と乱数生成

束縛子は深さで a, b, c, ... と名付け、自由変数は初出順に x, y, z, ... と名付ける。
影になる束縛が起きないので、網羅列挙は α同値類と自由変数の名前替えの類を
ちょうど一度ずつ生成する。
"""

import random
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

from ..syntax import Abs, App, ES, Term, Var

VSC = 'vsc'
CLOSED_VSC = 'closed-vsc'
POSITIVE = 'positive'
XPOSITIVE = 'xpositive'
GRAMMARS = (VSC, CLOSED_VSC, POSITIVE, XPOSITIVE)

ENUMERATE = 'enumerate'
RANDOM = 'random'

_BINDERS = 'abcdefgh'
_FREE = 'xyzwvuts'


def binder_name(depth: int) -> str:
    if depth < len(_BINDERS):
        return _BINDERS[depth]
    return f"a{depth}"


def free_name(index: int) -> str:
    if index < len(_FREE):
        return _FREE[index]
    return f"x{index}"


Generated = Tuple[Tuple[Term, int], ...]


def _variables(depth: int, nfree: int, allow_free: bool) -> List[Tuple[Term, int]]:
    result = [(Var(binder_name(i)), nfree) for i in range(depth)]
    if allow_free:
        for j in range(nfree + 1):
            result.append((Var(free_name(j)), max(nfree, j + 1)))
    return result


@lru_cache(maxsize=None)
def _vsc(size: int, depth: int, nfree: int, allow_free: bool) -> Generated:
    """ちょうど size 個の節点を持つ VSC の項 (と使用後の自由変数数)"""
    if size == 1:
        return tuple(_variables(depth, nfree, allow_free))
    result: List[Tuple[Term, int]] = []
    for body, n in _vsc(size - 1, depth + 1, nfree, allow_free):
        result.append((Abs(binder_name(depth), body), n))
    for k in range(1, size - 1):
        for fun, n1 in _vsc(k, depth, nfree, allow_free):
            for arg, n2 in _vsc(size - 1 - k, depth, n1, allow_free):
                result.append((App(fun, arg), n2))
    for k in range(1, size - 1):
        for body, n1 in _vsc(k, depth + 1, nfree, allow_free):
            for content, n2 in _vsc(size - 1 - k, depth, n1, allow_free):
                result.append((ES(body, binder_name(depth), content), n2))
    return tuple(result)


@lru_cache(maxsize=None)
def _positive(size: int, depth: int, nfree: int, explicit: bool) -> Generated:
    """正の項。[x<-yz] は 1+|t|、[x<-\\y.u] と [x<-(\\y.u)z] は 1+|t|+|u| と数える"""
    if size == 1:
        return tuple(_variables(depth, nfree, True))
    result: List[Tuple[Term, int]] = []
    x = binder_name(depth)
    for body, n1 in _positive(size - 1, depth + 1, nfree, explicit):
        for y, n2 in _variables(depth, n1, True):
            for z, n3 in _variables(depth, n2, True):
                result.append((ES(body, x, App(y, z)), n3))
    for k in range(1, size - 1):
        for body, n1 in _positive(k, depth + 1, nfree, explicit):
            for inner, n2 in _positive(size - 1 - k, depth + 1, n1, explicit):
                lam = Abs(binder_name(depth), inner)
                result.append((ES(body, x, lam), n2))
                if explicit:
                    for z, n3 in _variables(depth, n2, True):
                        result.append((ES(body, x, App(lam, z)), n3))
    return tuple(result)


def enumerate_terms(grammar: str, size: int) -> Iterator[Term]:
    """節点数 1..size の項をすべて列挙"""
    for n in range(1, size + 1):
        if grammar in (VSC, CLOSED_VSC):
            generated = _vsc(n, 0, 0, grammar == VSC)
        else:
            generated = _positive(n, 0, 0, grammar == XPOSITIVE)
        for term, _ in generated:
            yield term


class RandomTermGenerator:
    """乱数シードから再現可能な項の生成"""

    def __init__(self, grammar: str, seed: int):
        if grammar not in GRAMMARS:
            raise ValueError(f"未知の文法です: {grammar}")
        self.grammar = grammar
        self.rng = random.Random(seed)

    def generate(self, max_size: int) -> Term:
        size = self.rng.randint(1, max_size)
        if self.grammar in (VSC, CLOSED_VSC):
            term, nfree = self._vsc(size, 0, 0)
            if self.grammar == CLOSED_VSC:
                # 自由変数を抽象で閉じる
                for j in range(nfree - 1, -1, -1):
                    term = Abs(free_name(j), term)
            return term
        return self._positive(size, 0, 0)[0]

    def _variable(self, depth: int, nfree: int) -> Tuple[Term, int]:
        choice = self.rng.randrange(depth + nfree + 1)
        if choice < depth:
            return Var(binder_name(choice)), nfree
        j = choice - depth
        return Var(free_name(j)), max(nfree, j + 1)

    def _vsc(self, size: int, depth: int, nfree: int) -> Tuple[Term, int]:
        if size == 1:
            return self._variable(depth, nfree)
        kinds = ['abs'] if size == 2 else ['abs', 'app', 'es']
        kind = self.rng.choice(kinds)
        if kind == 'abs':
            body, n = self._vsc(size - 1, depth + 1, nfree)
            return Abs(binder_name(depth), body), n
        k = self.rng.randint(1, size - 2)
        if kind == 'app':
            fun, n1 = self._vsc(k, depth, nfree)
            arg, n2 = self._vsc(size - 1 - k, depth, n1)
            return App(fun, arg), n2
        body, n1 = self._vsc(k, depth + 1, nfree)
        content, n2 = self._vsc(size - 1 - k, depth, n1)
        return ES(body, binder_name(depth), content), n2

    def _positive(self, size: int, depth: int, nfree: int) -> Tuple[Term, int]:
        if size == 1:
            return self._variable(depth, nfree)
        x = binder_name(depth)
        kinds = ['app'] if size == 2 else ['app', 'abs']
        if size > 2 and self.grammar == XPOSITIVE:
            kinds.append('redex')
        kind = self.rng.choice(kinds)
        if kind == 'app':
            body, n = self._positive(size - 1, depth + 1, nfree)
            y, n = self._variable(depth, n)
            z, n = self._variable(depth, n)
            return ES(body, x, App(y, z)), n
        k = self.rng.randint(1, size - 2)
        body, n = self._positive(k, depth + 1, nfree)
        inner, n = self._positive(size - 1 - k, depth + 1, n)
        lam = Abs(binder_name(depth), inner)
        if kind == 'abs':
            return ES(body, x, lam), n
        z, n = self._variable(depth, n)
        return ES(body, x, App(lam, z)), n


def gen_terms(mode: str, grammar: str, size: int,
              seed: Optional[int] = None, count: Optional[int] = None) -> Iterator[Term]:
    """
    検査用の項の列

    Args:
        mode: 'enumerate' (節点数 size 以下を網羅) または 'random'
        grammar: 'vsc' / 'closed-vsc' / 'positive' / 'xpositive'
        size: 最大節点数
        seed: random のときの乱数シード
        count: random のときの生成数
    """
    if size < 1:
        raise ValueError("size は 1 以上である必要があります")
    if grammar not in GRAMMARS:
        raise ValueError(f"未知の文法です: {grammar}")
    if mode == ENUMERATE:
        yield from enumerate_terms(grammar, size)
    elif mode == RANDOM:
        generator = RandomTermGenerator(grammar, seed if seed is not None else 0)
        for _ in range(count if count is not None else 100):
            yield generator.generate(size)
    else:
        raise ValueError(f"未知の生成モードです: {mode}")
