"""
Positive Lambda Lab - 開いた値置換計算と正の計算の簡約・変換・検査
"""

from .positive import apply_opos_redex, apply_oxpos_redex, enumerate_opos_redexes, enumerate_oxpos_redexes
from .simple_types import infer_type_positive, infer_type_vsc
from .syntax import Abs, App, ES, Term, Var, alpha_eq, classify_term
from .translate import translate, translate_subst_ctx
from .vsc import apply_redex, classify_usefulness, enumerate_redexes, is_core_normal

__all__ = [
    'Term', 'Var', 'Abs', 'App', 'ES', 'alpha_eq', 'classify_term',
    'enumerate_redexes', 'apply_redex', 'classify_usefulness', 'is_core_normal',
    'enumerate_opos_redexes', 'apply_opos_redex', 'enumerate_oxpos_redexes', 'apply_oxpos_redex',
    'infer_type_positive', 'infer_type_vsc',
    'translate', 'translate_subst_ctx',
]
__version__ = '0.1.0'
