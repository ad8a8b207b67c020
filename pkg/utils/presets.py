"""
Preset Manager - 検査プリセット管理
"""

import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

QUICK_SUITES = ['syntax', 'roundtrip', 'usefulness', 'nondiamond', 'normal-forms', 'typing']
ALL_SUITES = [
    'syntax', 'roundtrip', 'usefulness', 'alt-useful', 'nondiamond', 'local-termination',
    'normal-forms', 'preservation', 'termination', 'diamond', 'renaming-stability',
    'opos-simulation', 'gc-postponement', 'factorization', 'simulation', 'translation', 'typing',
]


class PresetManager:
    """検査プリセット (スイートの組とコーパスの大きさ) の管理クラス"""

    def __init__(self, presets_file: str = "check_presets.json"):
        self.presets_file = presets_file
        self.presets = self._load_presets()

    def _load_presets(self) -> Dict[str, Any]:
        """プリセットファイルを読み込む"""
        if os.path.exists(self.presets_file):
            try:
                with open(self.presets_file, 'r', encoding='utf-8') as f:
                    return json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning("プリセットの読み込みエラー: %s", e)
        return self._get_default_presets()

    def _get_default_presets(self) -> Dict[str, Any]:
        """デフォルトプリセットを取得"""
        return {
            "quick": {
                "suites": QUICK_SUITES,
                "size": 5,
                "seed": 7,
                "count": 50,
                "description": "数秒で終わる基本検査",
            },
            "standard": {
                "suites": ALL_SUITES,
                "size": 6,
                "seed": 7,
                "count": 200,
                "description": "全スイートを標準の大きさで実行",
            },
            "acceptance": {
                "suites": ALL_SUITES,
                "size": 8,
                "seed": 7,
                "count": 1000,
                "description": "受け入れ基準の大きさ (時間がかかる)",
            },
        }

    def save_presets(self):
        """プリセットをファイルに保存"""
        try:
            with open(self.presets_file, 'w', encoding='utf-8') as f:
                json.dump(self.presets, f, ensure_ascii=False, indent=2)
        except OSError as e:
            raise IOError(f"プリセットの保存に失敗しました: {e}")

    def get_preset(self, name: str) -> Dict[str, Any]:
        """指定されたプリセットを取得"""
        if name in self.presets:
            return dict(self.presets[name])
        raise ValueError(f"プリセット '{name}' が見つかりません")

    def get_preset_names(self) -> List[str]:
        return list(self.presets.keys())

    def add_preset(self, name: str, settings: Dict[str, Any], description: str = ""):
        """新しいプリセットを追加"""
        if not settings.get('suites'):
            raise ValueError("プリセットには suites が必要です")
        self.presets[name] = dict(settings)
        self.presets[name]["description"] = description
        self.presets[name]["created_at"] = datetime.now().isoformat()
        self.save_presets()

    def delete_preset(self, name: str):
        """プリセットを削除"""
        if name not in self.presets:
            raise ValueError(f"プリセット '{name}' が見つかりません")
        del self.presets[name]
        self.save_presets()

    def update_preset(self, name: str, settings: Dict[str, Any], description: str = None):
        """既存のプリセットを更新"""
        if name not in self.presets:
            raise ValueError(f"プリセット '{name}' が見つかりません")

        self.presets[name].update(settings)
        if description is not None:
            self.presets[name]["description"] = description
        self.presets[name]["updated_at"] = datetime.now().isoformat()
        self.save_presets()
