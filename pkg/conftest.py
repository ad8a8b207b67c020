"""
pytest 共通設定 - フィクスチャ
"""

import hypothesis as hyp
import pytest

from poslam.cli.parser import parse_term
from poslam.config import DEFAULT_CONFIG

hyp.settings.register_profile("default", max_examples=60, deadline=None)
hyp.settings.load_profile("default")


@pytest.fixture
def P():
    """具象構文から項を作る"""
    return parse_term


@pytest.fixture
def omega_text():
    return "(\\x. x x) (\\x. x x)"


@pytest.fixture
def small_config():
    """小さなコーパスで動く検査設定"""
    return {
        **DEFAULT_CONFIG,
        'check': {**DEFAULT_CONFIG['check'], 'size': 3, 'count': 10, 'random_size': 8,
                  'trace_length': 8, 'core_trace_length': 8},
        'graph': {**DEFAULT_CONFIG['graph'], 'node_cap': 300, 'depth_cap': 40, 'check_cap': 100},
    }
