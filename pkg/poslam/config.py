"""
Config Loader - config.yaml の読み込みとログ設定
"""

import copy
import logging
import os
from typing import Any, Dict, Optional

import yaml

from .errors import ConfigError

DEFAULT_CONFIG_FILE = "config.yaml"

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    'engine': {
        'vars_are_values': True,
        'fuel': 10000,
    },
    'graph': {
        'node_cap': 10000,
        'depth_cap': 200,
        'check_cap': 500,
    },
    'check': {
        'size': 6,
        'seed': 7,
        'count': 200,
        'random_size': 20,
        'positive_enum_size': 4,
        'skip_limit': 0.01,
        'trace_length': 30,
        'core_trace_length': 50,
        'workers': 1,
    },
    'output': {
        'trace_format': 'text',
        'report_format': 'jsonl',
    },
    'debug': {
        'verbose_logging': False,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """セクション単位で上書きマージ"""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    設定ファイルを読み込み、デフォルト設定にマージする

    Args:
        path: YAMLファイルパス（省略時は POSLAM_CONFIG か ./config.yaml）

    Returns:
        マージ済みの設定辞書
    """
    path = path or os.environ.get('POSLAM_CONFIG') or DEFAULT_CONFIG_FILE
    loaded: Dict[str, Any] = {}
    if os.path.exists(path):
        try:
            with open(path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"設定ファイルの読み込みに失敗しました: {path}: {e}")
        if not isinstance(loaded, dict):
            raise ConfigError(f"設定ファイルの形式が不正です: {path}")

    config = _merge(DEFAULT_CONFIG, loaded)

    # 環境変数による乱数シードの上書き
    seed = os.environ.get('POSLAM_SEED')
    if seed:
        try:
            config['check']['seed'] = int(seed)
        except ValueError:
            raise ConfigError(f"POSLAM_SEED は整数である必要があります: {seed!r}")

    return config


def setup_logging(config: Dict[str, Any], verbose: bool = False):
    """debug.verbose_logging に従ってルートロガーを設定"""
    level = logging.DEBUG if verbose or config.get('debug', {}).get('verbose_logging') else logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    logging.getLogger().setLevel(level)
