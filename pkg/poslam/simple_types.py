"""
Simple Types - 正の項と VSC の項に対する単純型の推論

一階の単一化 (出現検査つき) で主要型を求める。
型が付かないことは例外ではなく TypeResult.error で返す。
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Union

from .errors import TermError
from .syntax import Abs, App, ES, Term, Var, is_explicit_positive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TAtom:
    name: str


@dataclass(frozen=True)
class TArrow:
    left: 'SimpleType'
    right: 'SimpleType'


@dataclass(frozen=True)
class TMeta:
    """単一化変数"""
    ident: int


SimpleType = Union[TAtom, TArrow, TMeta]


@dataclass(frozen=True)
class TypeResult:
    """推論結果。type が None のとき error に失敗した制約が入る"""
    type: Optional[SimpleType]
    error: Optional[str] = None

    @property
    def typable(self) -> bool:
        return self.type is not None


class UnificationError(Exception):
    """推論内部でのみ使う"""


def type_to_str(ty: SimpleType) -> str:
    """右結合の A => B 表記"""
    if isinstance(ty, TAtom):
        return ty.name
    if isinstance(ty, TMeta):
        return f"?{ty.ident}"
    left = type_to_str(ty.left)
    if isinstance(ty.left, TArrow):
        left = f"({left})"
    return f"{left} => {type_to_str(ty.right)}"


def _atom_names() -> Iterator[str]:
    for n in itertools.count():
        for letter in 'abcdefgh':
            yield letter if n == 0 else f"{letter}{n}"


def canonical_type(ty: SimpleType) -> SimpleType:
    """原子型と単一化変数を出現順に a, b, ... と付け直す (型変数の名前替えの同値類の代表)"""
    names: Dict[SimpleType, TAtom] = {}
    supply = _atom_names()

    def walk(node: SimpleType) -> SimpleType:
        if isinstance(node, TArrow):
            return TArrow(walk(node.left), walk(node.right))
        if node not in names:
            names[node] = TAtom(next(supply))
        return names[node]

    return walk(ty)


@dataclass
class Unifier:
    """単一化変数の代入を保持する"""
    bindings: Dict[int, SimpleType] = field(default_factory=dict)
    counter: int = 0

    def fresh(self) -> TMeta:
        self.counter += 1
        return TMeta(self.counter)

    def resolve(self, ty: SimpleType) -> SimpleType:
        while isinstance(ty, TMeta) and ty.ident in self.bindings:
            ty = self.bindings[ty.ident]
        return ty

    def zonk(self, ty: SimpleType) -> SimpleType:
        """代入を完全に適用"""
        ty = self.resolve(ty)
        if isinstance(ty, TArrow):
            return TArrow(self.zonk(ty.left), self.zonk(ty.right))
        return ty

    def occurs(self, meta: TMeta, ty: SimpleType) -> bool:
        ty = self.resolve(ty)
        if ty == meta:
            return True
        if isinstance(ty, TArrow):
            return self.occurs(meta, ty.left) or self.occurs(meta, ty.right)
        return False

    def unify(self, a: SimpleType, b: SimpleType):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, TMeta) or isinstance(b, TMeta):
            meta, other = (a, b) if isinstance(a, TMeta) else (b, a)
            if self.occurs(meta, other):
                raise UnificationError(
                    f"出現検査に失敗しました: {type_to_str(self.zonk(meta))} = {type_to_str(self.zonk(other))}"
                )
            self.bindings[meta.ident] = other
            return
        if isinstance(a, TArrow) and isinstance(b, TArrow):
            self.unify(a.left, b.left)
            self.unify(a.right, b.right)
            return
        raise UnificationError(f"型が衝突しました: {type_to_str(self.zonk(a))} = {type_to_str(self.zonk(b))}")


class _Inference:
    """一回の問い合わせに閉じた推論状態"""

    def __init__(self, env: Optional[Mapping[str, SimpleType]]):
        self.unifier = Unifier()
        self.free: Dict[str, SimpleType] = dict(env or {})

    def lookup(self, name: str, gamma: Dict[str, SimpleType]) -> SimpleType:
        if name in gamma:
            return gamma[name]
        if name not in self.free:
            self.free[name] = self.unifier.fresh()
        return self.free[name]

    def positive(self, t: Term, gamma: Dict[str, SimpleType]) -> SimpleType:
        """左側の規則だけで型 A は変わらず、置換が文脈を広げる"""
        while isinstance(t, ES):
            content = t.content
            if isinstance(content, Abs):
                b = self.unifier.fresh()
                c = self.positive(content.body, {**gamma, content.binder: b})
                assigned = TArrow(b, c)
            elif isinstance(content.fun, Abs):
                # [x<-(\y.u)z] : y は z の型を受け取る
                lam = content.fun
                b = self.lookup(content.arg.name, gamma)
                assigned = self.positive(lam.body, {**gamma, lam.binder: b})
            else:
                c = self.unifier.fresh()
                self.unifier.unify(
                    self.lookup(content.fun.name, gamma),
                    TArrow(self.lookup(content.arg.name, gamma), c),
                )
                assigned = c
            gamma = {**gamma, t.binder: assigned}
            t = t.body
        return self.lookup(t.name, gamma)

    def source(self, t: Term, gamma: Dict[str, SimpleType]) -> SimpleType:
        """自然演繹の規則。明示的置換は単相の let として扱う"""
        if isinstance(t, Var):
            return self.lookup(t.name, gamma)
        if isinstance(t, Abs):
            b = self.unifier.fresh()
            return TArrow(b, self.source(t.body, {**gamma, t.binder: b}))
        if isinstance(t, App):
            fun = self.source(t.fun, gamma)
            arg = self.source(t.arg, gamma)
            result = self.unifier.fresh()
            self.unifier.unify(fun, TArrow(arg, result))
            return result
        content = self.source(t.content, gamma)
        return self.source(t.body, {**gamma, t.binder: content})

    def finish(self, ty: SimpleType) -> TypeResult:
        """残った単一化変数を型パラメータ名に置き換える"""
        ty = self.unifier.zonk(ty)
        taken = set()

        def atoms(node: SimpleType):
            if isinstance(node, TAtom):
                taken.add(node.name)
            elif isinstance(node, TArrow):
                atoms(node.left)
                atoms(node.right)

        for value in self.free.values():
            atoms(self.unifier.zonk(value))
        atoms(ty)
        supply = (name for name in _atom_names() if name not in taken)
        params: Dict[int, TAtom] = {}

        def close(node: SimpleType) -> SimpleType:
            if isinstance(node, TMeta):
                if node.ident not in params:
                    params[node.ident] = TAtom(next(supply))
                return params[node.ident]
            if isinstance(node, TArrow):
                return TArrow(close(node.left), close(node.right))
            return node

        return TypeResult(close(ty))


def infer_type_positive(t: Term, env: Optional[Mapping[str, SimpleType]] = None) -> TypeResult:
    """
    正の項 (明示的なリデックスを含んでもよい) の主要型を推論

    Args:
        t: 正の項
        env: 自由変数の型 (含まれない変数には新しい型変数を割り当てる)

    Returns:
        TypeResult (型が付かない場合は error に失敗した制約)
    """
    if not is_explicit_positive(t):
        raise TermError("正の項ではありません")
    state = _Inference(env)
    try:
        return state.finish(state.positive(t, {}))
    except UnificationError as e:
        logger.debug("untypable: %s", e)
        return TypeResult(None, str(e))


def infer_type_vsc(t: Term, env: Optional[Mapping[str, SimpleType]] = None) -> TypeResult:
    """VSC の項の主要型を標準の単純型の規則で推論"""
    state = _Inference(env)
    try:
        return state.finish(state.source(t, {}))
    except UnificationError as e:
        logger.debug("untypable: %s", e)
        return TypeResult(None, str(e))
