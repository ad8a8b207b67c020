"""
Strategy Runner - 計算体系ごとの簡約器と戦略による簡約列の生成
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import TermError
from ..positive import (
    OPOS, OXPOS, apply_opos_redex, apply_oxpos_redex,
    enumerate_opos_redexes, enumerate_oxpos_redexes,
)
from ..syntax import Term, alpha_eq
from ..vsc import VSC, VSC_CORE, Redex, apply_redex, enumerate_redexes

logger = logging.getLogger(__name__)

CALCULI = (VSC, VSC_CORE, OPOS, OXPOS)


class Reducer:
    """計算体系の列挙と適用をまとめたもの"""

    def __init__(self, calculus: str, vars_are_values: bool = True,
                 labels: Optional[Sequence[str]] = None):
        if calculus not in CALCULI:
            raise ValueError(f"未知の計算体系です: {calculus}")
        self.calculus = calculus
        self.vars_are_values = vars_are_values
        self.labels = frozenset(labels) if labels else None

    def redexes(self, t: Term) -> List[Redex]:
        if self.calculus in (VSC, VSC_CORE):
            found = enumerate_redexes(t, self.calculus, self.vars_are_values)
        elif self.calculus == OPOS:
            found = enumerate_opos_redexes(t)
        else:
            found = enumerate_oxpos_redexes(t)
        if self.labels is not None:
            found = [r for r in found if r.label in self.labels]
        return found

    def apply(self, t: Term, r: Redex) -> Term:
        if self.calculus in (VSC, VSC_CORE):
            return apply_redex(t, r)
        if self.calculus == OPOS:
            return apply_opos_redex(t, r)
        return apply_oxpos_redex(t, r)

    def reducts(self, t: Term) -> List[Tuple[Redex, Term]]:
        return [(r, self.apply(t, r)) for r in self.redexes(t)]

    def is_normal(self, t: Term) -> bool:
        return not self.redexes(t)


@dataclass(frozen=True)
class TraceStep:
    redex: Redex
    term: Term


@dataclass
class Trace:
    """開始項と (リデックス, 縮約後の項) の列"""
    start: Term
    steps: List[TraceStep] = field(default_factory=list)
    calculus: str = VSC
    normal: bool = False
    out_of_fuel: bool = False

    @property
    def end(self) -> Term:
        return self.steps[-1].term if self.steps else self.start

    @property
    def terms(self) -> List[Term]:
        return [self.start] + [s.term for s in self.steps]

    @property
    def labels(self) -> List[str]:
        return [s.redex.label for s in self.steps]

    @property
    def counters(self) -> Dict[str, int]:
        """ラベルごとのステップ数"""
        return dict(Counter(self.labels))

    def count(self, *labels: str) -> int:
        return sum(1 for s in self.steps if s.redex.label in labels)

    def __len__(self) -> int:
        return len(self.steps)

    def append(self, redex: Redex, term: Term):
        self.steps.append(TraceStep(redex, term))

    def extended(self, other: 'Trace') -> 'Trace':
        """続けて other を実行した列 (other.start は self.end と同じ項であること)"""
        return Trace(self.start, self.steps + other.steps, self.calculus, other.normal, other.out_of_fuel)


@dataclass(frozen=True)
class Strategy:
    """lo / random:SEED / priority:a,b,..."""
    kind: str
    seed: int = 0
    priority: Tuple[str, ...] = ()

    @classmethod
    def parse(cls, text: str) -> 'Strategy':
        if text == 'lo':
            return cls('lo')
        name, _, arg = text.partition(':')
        if name == 'random':
            try:
                return cls('random', seed=int(arg))
            except ValueError:
                raise ValueError(f"乱数シードは整数である必要があります: {arg!r}")
        if name == 'priority' and arg:
            return cls('priority', priority=tuple(a.strip() for a in arg.split(',') if a.strip()))
        raise ValueError(f"未知の戦略です: {text}")


def run_strategy(t: Term, reducer: Reducer, strategy: Strategy, fuel: int,
                 until: Optional[Callable[[Trace], bool]] = None) -> Trace:
    """
    戦略に従って正規形か燃料切れまで簡約する

    Args:
        t: 開始項
        reducer: 計算体系
        strategy: lo は列挙順の最初、random はシード付き一様選択、
                  priority はラベルの優先順 (同順位は列挙順)
        fuel: 最大ステップ数
        until: 各ステップの後に呼ぶ停止条件 (True で打ち切り、燃料切れとはしない)

    Returns:
        Trace (燃料切れは out_of_fuel で示す)
    """
    rng = random.Random(strategy.seed)
    trace = Trace(t, calculus=reducer.calculus)
    current = t
    for _ in range(fuel):
        redexes = reducer.redexes(current)
        if not redexes:
            trace.normal = True
            return trace
        if strategy.kind == 'random':
            redex = rng.choice(redexes)
        elif strategy.kind == 'priority':
            rank = {label: i for i, label in enumerate(strategy.priority)}
            redex = min(redexes, key=lambda r: rank.get(r.label, len(rank)))
        else:
            redex = redexes[0]
        current = reducer.apply(current, redex)
        trace.append(redex, current)
        if until is not None and until(trace):
            trace.normal = reducer.is_normal(current)
            return trace
    trace.normal = reducer.is_normal(current)
    trace.out_of_fuel = not trace.normal
    if trace.out_of_fuel:
        logger.debug("fuel exhausted after %d steps", fuel)
    return trace


def validate_trace(trace: Trace, reducer: Reducer):
    """各ステップのリデックスが直前の項で有効で、結果が α同値で一致するか"""
    current = trace.start
    for i, step in enumerate(trace.steps):
        if step.redex not in reducer.redexes(current):
            raise TermError(f"ステップ {i} のリデックスが無効です: {step.redex.describe()}")
        if not alpha_eq(reducer.apply(current, step.redex), step.term):
            raise TermError(f"ステップ {i} の結果が一致しません")
        current = step.term
