"""
Trace Transforms - 簡約列の構成的な並べ替えとシミュレーション

局所図式は定理が示す形 (一歩・二歩) に限った探索で見つける。
見つからなければ TransformError を送出する (エンジンの不具合を示す)。
"""

import logging
from typing import Iterable, List, Optional, Tuple

from ..errors import TransformError
from ..positive import E_PLUS, GC_PLUS, M_PLUS, OXPOS
from ..syntax import Term, alpha_eq, is_answer, subterm_at
from ..translate import translate
from ..vsc import (
    E_ABS, E_VAR, GC_LABELS, M, VSC, Redex, Usefulness,
    classify_usefulness, context_class, is_core_redex,
)
from .strategies import Reducer, Trace, TraceStep

logger = logging.getLogger(__name__)

GC_ALL = GC_LABELS + (GC_PLUS,)
_M_FAMILY = (M, M_PLUS)


def _is_gc(label: str) -> bool:
    return label in GC_ALL


def _family(label: str) -> str:
    return 'm' if label in _M_FAMILY else 'e'


def _reducer_for(trace: Trace) -> Reducer:
    return Reducer(OXPOS if trace.calculus == OXPOS else VSC)


def _candidates(reducer: Reducer, t: Term, labels: Iterable[str]) -> List[Tuple[Redex, Term]]:
    labels = set(labels)
    return [(r, reducer.apply(t, r)) for r in reducer.redexes(t) if r.label in labels]


# ---------------------------------------------------------------------------
# gc の後回し
# ---------------------------------------------------------------------------

def _swap_gc(reducer: Reducer, t0: Term, gc: TraceStep, step: TraceStep) -> Tuple[TraceStep, TraceStep]:
    """t0 ->gc t1 ->a t2 を t0 ->a s ->gc t2 に組み替える"""
    target = step.term
    label = step.redex.label
    family_labels = [l for l in _labels_of(reducer) if not _is_gc(l) and _family(l) == _family(label)]
    ordered = [label] + [l for l in family_labels if l != label]
    for wanted in ordered:
        for r, s in _candidates(reducer, t0, [wanted]):
            for g, u in _candidates(reducer, s, [gc.redex.label]):
                if alpha_eq(u, target):
                    return TraceStep(r, s), TraceStep(g, target)
    raise TransformError(f"gc を後回しにできません: {gc.redex.describe()} の後の {step.redex.describe()}")


def _labels_of(reducer: Reducer) -> Tuple[str, ...]:
    if reducer.calculus == OXPOS:
        return (M_PLUS, E_PLUS, GC_PLUS)
    return (M, E_ABS, E_VAR) + GC_LABELS


def postpone_gc(d: Trace) -> Tuple[Trace, Trace]:
    """
    gc ステップをすべて後ろへ移す

    Args:
        d: vsc または oxpos の簡約列

    Returns:
        (gc を含まない列 e, gc だけの列 f)。f の終点は d の終点と α同値
    """
    reducer = _reducer_for(d)
    steps = list(d.steps)
    guard = len(steps) * len(steps) + 1
    for _ in range(guard):
        index = next(
            (i for i in range(len(steps) - 1)
             if _is_gc(steps[i].redex.label) and not _is_gc(steps[i + 1].redex.label)),
            None,
        )
        if index is None:
            break
        t0 = d.start if index == 0 else steps[index - 1].term
        steps[index], steps[index + 1] = _swap_gc(reducer, t0, steps[index], steps[index + 1])
    else:
        raise TransformError("gc の後回しが収束しません")

    split = next((i for i, s in enumerate(steps) if _is_gc(s.redex.label)), len(steps))
    e = Trace(d.start, steps[:split], d.calculus)
    f = Trace(e.end, steps[split:], d.calculus, d.normal, d.out_of_fuel)
    return e, f


# ---------------------------------------------------------------------------
# コアの因子分解
# ---------------------------------------------------------------------------

def _is_nonuseful(t: Term, r: Redex) -> bool:
    return r.label == E_ABS and classify_usefulness(t, r) is Usefulness.NONUSEFUL


def _nonuseful_reducts(reducer: Reducer, t: Term) -> List[Tuple[Redex, Term]]:
    return [(r, u) for r, u in _candidates(reducer, t, [E_ABS]) if _is_nonuseful(t, r)]


def _swap_nonuseful(reducer: Reducer, t0: Term, nu: TraceStep, core: TraceStep) -> List[TraceStep]:
    """t0 ->nu t1 ->core t2 を core を先にした列へ組み替える"""
    target = core.term
    label = core.redex.label

    for r, s in _candidates(reducer, t0, [label]):
        if not is_core_redex(t0, r):
            continue
        for n, u in _nonuseful_reducts(reducer, s):
            if alpha_eq(u, target):
                return [TraceStep(r, s), TraceStep(n, target)]

    # 非有用ステップが有用なリデックスを作っていた場合: e_var を一つ挟む
    for v, s1 in _candidates(reducer, t0, [E_VAR]):
        for r, s2 in _candidates(reducer, s1, [label]):
            if not is_core_redex(s1, r):
                continue
            for n, u in _nonuseful_reducts(reducer, s2):
                if alpha_eq(u, target):
                    return [TraceStep(v, s1), TraceStep(r, s2), TraceStep(n, target)]

    raise TransformError(f"非有用ステップを後回しにできません: {nu.redex.describe()} の後の {core.redex.describe()}")


def factorize_core(d: Trace, max_swaps: Optional[int] = None) -> Trace:
    """
    gc を含まない vsc の簡約列をコア部分と非有用部分に分ける

    Returns:
        コアステップ (m, 有用な e_abs, e_var) の後に非有用な e_abs だけが続く列。
        m の数と終点 (α同値) は入力と同じ
    """
    if any(_is_gc(label) for label in d.labels):
        raise TransformError("gc を含む列は先に postpone_gc で分けてください")
    reducer = Reducer(VSC)
    steps = list(d.steps)
    limit = max_swaps if max_swaps is not None else 50 * (len(steps) + 1) ** 2

    def source(i: int) -> Term:
        return d.start if i == 0 else steps[i - 1].term

    for _ in range(limit):
        index = next(
            (i for i in range(len(steps) - 1)
             if _is_nonuseful(source(i), steps[i].redex)
             and is_core_redex(source(i + 1), steps[i + 1].redex)),
            None,
        )
        if index is None:
            break
        steps[index:index + 2] = _swap_nonuseful(reducer, source(index), steps[index], steps[index + 1])
    else:
        raise TransformError("コアの因子分解が収束しません")

    result = Trace(d.start, steps, VSC, d.normal, d.out_of_fuel)
    core_len = core_prefix_length(result)
    for i in range(core_len, len(steps)):
        if not _is_nonuseful(source(i), steps[i].redex):
            raise TransformError(f"接尾辞に非有用でないステップがあります: {steps[i].redex.describe()}")
    return result


def core_prefix_length(trace: Trace) -> int:
    """先頭から続くコアステップの数"""
    current = trace.start
    for i, step in enumerate(trace.steps):
        if not is_core_redex(current, step.redex):
            return i
        current = step.term
    return len(trace.steps)


# ---------------------------------------------------------------------------
# コア列のシミュレーション
# ---------------------------------------------------------------------------

def _creates_useful_answer(before: Term, after: Term, r: Redex) -> bool:
    """m の結果が答えで、その位置が有用な文脈か"""
    return is_answer(subterm_at(after, r.anchor)) and context_class(before, r.anchor).useful


def _simulate_m(reducer: Reducer, current: Term, target: Term, three_steps: bool) -> List[TraceStep]:
    for r1, s1 in _candidates(reducer, current, [M_PLUS]):
        if not three_steps:
            if alpha_eq(s1, target):
                return [TraceStep(r1, s1)]
            continue
        for r2, s2 in _candidates(reducer, s1, [E_PLUS]):
            for r3, s3 in _candidates(reducer, s2, [GC_PLUS]):
                if alpha_eq(s3, target):
                    return [TraceStep(r1, s1), TraceStep(r2, s2), TraceStep(r3, s3)]
    shape = "m_plus e_plus gc_plus" if three_steps else "m_plus"
    raise TransformError(f"m ステップを {shape} でシミュレートできません")


def simulate_core(d: Trace) -> Trace:
    """
    vsc のコア列を oxpos の列でシミュレートする

    e_var は 0 歩、有用な e_abs は e_plus 一歩、m は m_plus 一歩か
    (有用な位置に答えを作る場合) m_plus e_plus gc_plus の三歩に対応する。

    Returns:
        translate(d.start) から translate(d.end) と α同値な項への oxpos の列
    """
    reducer = Reducer(OXPOS)
    current = translate(d.start)
    result = Trace(current, calculus=OXPOS)
    before = d.start

    for i, step in enumerate(d.steps):
        if not is_core_redex(before, step.redex):
            raise TransformError(f"ステップ {i} はコアステップではありません: {step.redex.describe()}")
        target = translate(step.term)
        label = step.redex.label

        if label == E_VAR:
            if not alpha_eq(current, target):
                raise TransformError(f"ステップ {i}: 変数の複製が変換で吸収されません")
            simulated: List[TraceStep] = []
        elif label == E_ABS:
            simulated = next(
                ([TraceStep(r, u)] for r, u in _candidates(reducer, current, [E_PLUS]) if alpha_eq(u, target)),
                None,
            )
            if simulated is None:
                raise TransformError(f"ステップ {i}: 有用な e_abs を e_plus でシミュレートできません")
        else:
            three = _creates_useful_answer(before, step.term, step.redex)
            simulated = _simulate_m(reducer, current, target, three)

        for s in simulated:
            result.append(s.redex, s.term)
        # 変換後の終点に揃える (α同値)
        current = result.end
        before = step.term

    result.normal = reducer.is_normal(result.end)
    return result
