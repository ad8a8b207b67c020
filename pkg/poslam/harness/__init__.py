"""
Harness - 項の生成、戦略、簡約グラフ、メタ定理の構成的な検査
"""

from .bench import bench_omega, omega
from .checks import SUITES, CheckRunner
from .generators import gen_terms
from .graph import ReductionGraph, reduction_graph
from .report import CheckReport
from .strategies import Reducer, Strategy, Trace, run_strategy
from .transforms import factorize_core, postpone_gc, simulate_core

__all__ = [
    'bench_omega', 'omega',
    'SUITES', 'CheckRunner',
    'gen_terms',
    'ReductionGraph', 'reduction_graph',
    'CheckReport',
    'Reducer', 'Strategy', 'Trace', 'run_strategy',
    'factorize_core', 'postpone_gc', 'simulate_core',
]
