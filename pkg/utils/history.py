"""
Check History Manager - 検査履歴管理
"""

import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

MAX_RECORDS = 100


class HistoryManager:
    """検査実行の履歴管理クラス"""

    def __init__(self, history_file: str = "check_history.json"):
        self.history_file = history_file
        self.history = self._load_history()

    def _load_history(self) -> List[Dict[str, Any]]:
        """履歴ファイルを読み込む"""
        if os.path.exists(self.history_file):
            try:
                with open(self.history_file, 'r', encoding='utf-8') as f:
                    return json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning("履歴の読み込みエラー: %s", e)
        return []

    def save_history(self):
        """履歴をファイルに保存"""
        try:
            with open(self.history_file, 'w', encoding='utf-8') as f:
                json.dump(self.history, f, ensure_ascii=False, indent=2)
        except OSError as e:
            raise IOError(f"履歴の保存に失敗しました: {e}")

    def add_record(self, record: Dict[str, Any]):
        """
        履歴レコードを追加

        Args:
            record: suite, parameters, instances, violations を含む辞書
        """
        record = dict(record)
        record['timestamp'] = datetime.now().isoformat()
        record['id'] = max((r.get('id', 0) for r in self.history), default=0) + 1

        # 最新を先頭に
        self.history.insert(0, record)
        if len(self.history) > MAX_RECORDS:
            self.history = self.history[:MAX_RECORDS]

        self.save_history()

    def get_recent(self, limit: int = 10) -> List[Dict[str, Any]]:
        return self.history[:limit]

    def search(self, keyword: str) -> List[Dict[str, Any]]:
        """スイート名か性質名で履歴を検索"""
        keyword = keyword.lower()
        results = []
        for record in self.history:
            if keyword in record.get('suite', '').lower():
                results.append(record)
            elif any(keyword in p.lower() for p in record.get('properties', [])):
                results.append(record)
        return results

    def delete_record(self, record_id: int):
        if not any(r.get('id') == record_id for r in self.history):
            raise ValueError(f"履歴 {record_id} が見つかりません")
        self.history = [r for r in self.history if r.get('id') != record_id]
        self.save_history()

    def clear_all(self):
        self.history = []
        self.save_history()

    def get_statistics(self) -> Dict[str, Any]:
        """履歴の統計情報を取得"""
        if not self.history:
            return {
                'total_runs': 0,
                'failed_runs': 0,
                'total_instances': 0,
                'total_violations': 0,
                'average_instances': 0,
            }

        count = len(self.history)
        total_instances = sum(r.get('instances', 0) for r in self.history)
        total_violations = sum(r.get('violations', 0) for r in self.history)

        return {
            'total_runs': count,
            'failed_runs': sum(1 for r in self.history if r.get('violations', 0) > 0),
            'total_instances': total_instances,
            'total_violations': total_violations,
            'average_instances': round(total_instances / count, 2),
        }
