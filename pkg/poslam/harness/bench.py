"""
Omega Bench - Ω の簡約における指数ステップの数の計測
"""

from typing import Any, Dict, List

from ..positive import E_PLUS, GC_PLUS, M_PLUS, OXPOS
from ..syntax import Abs, App, Term, Var
from ..translate import translate
from ..vsc import E_ABS, E_VAR, GC_ABS, GC_VAR, M, VSC
from .strategies import Reducer, Strategy, Trace, run_strategy

VARS_AS_VALUES = 'vars-as-values'
NO_VAR_VALUES = 'no-var-values'
VARIANTS = (VARS_AS_VALUES, NO_VAR_VALUES, OXPOS)


def omega() -> Term:
    """(\\x.xx)(\\x.xx)"""
    delta = Abs('x', App(Var('x'), Var('x')))
    return App(delta, delta)


def bench_omega(n_m_steps: int, variant: str = VARS_AS_VALUES, fuel: int = 100000) -> Dict[str, Any]:
    """
    lo 戦略で n 回目の乗法ステップまで Ω を簡約し、累積のステップ数を返す

    Args:
        n_m_steps: 乗法ステップ (m または m_plus) の回数
        variant: 'vars-as-values' / 'no-var-values' / 'oxpos'
        fuel: 総ステップ数の上限

    Returns:
        variant, m_steps, exp_steps, gc_steps, total_steps の辞書
    """
    if n_m_steps < 1:
        raise ValueError("n_m_steps は 1 以上である必要があります")
    if variant not in VARIANTS:
        raise ValueError(f"未知の変種です: {variant}")

    if variant == OXPOS:
        reducer = Reducer(OXPOS)
        term = translate(omega())
        m_labels, e_labels, gc_labels = (M_PLUS,), (E_PLUS,), (GC_PLUS,)
    else:
        reducer = Reducer(VSC, vars_are_values=(variant == VARS_AS_VALUES))
        term = omega()
        m_labels, e_labels, gc_labels = (M,), (E_ABS, E_VAR), (GC_ABS, GC_VAR)

    def reached(trace: Trace) -> bool:
        return trace.steps[-1].redex.label in m_labels and trace.count(*m_labels) >= n_m_steps

    trace = run_strategy(term, reducer, Strategy('lo'), fuel, until=reached)
    return {
        'variant': variant,
        'm_steps': trace.count(*m_labels),
        'exp_steps': trace.count(*e_labels),
        'gc_steps': trace.count(*gc_labels),
        'total_steps': len(trace),
    }


def bench_table(max_m_steps: int) -> List[Dict[str, Any]]:
    """三つの変種について n = 1..max_m_steps の計測結果"""
    return [bench_omega(n, variant) for variant in VARIANTS for n in range(1, max_m_steps + 1)]
