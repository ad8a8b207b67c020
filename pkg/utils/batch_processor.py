"""
Batch Processor - コーパスを分割した検査の一括実行
"""

import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Tuple

# 親ディレクトリをパスに追加
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from poslam.harness.checks import CheckRunner, merge_reports, run_slice
from poslam.harness.report import CheckReport


class BatchProcessor:
    """バッチ処理クラス"""

    def __init__(self, **default_config):
        """
        Args:
            **default_config: CheckRunner に渡す設定 (config.yaml と同じ形)
        """
        self.default_config = default_config
        self.runner = CheckRunner(default_config)
        self.results: List[Dict[str, Any]] = []

    def slices(self, total: int, slice_size: int) -> List[Tuple[int, int]]:
        """コーパスの決定的な分割 [start, stop)"""
        if slice_size < 1:
            raise ValueError("slice_size は 1 以上である必要があります")
        return [(start, min(start + slice_size, total)) for start in range(0, total, slice_size)]

    def process_suite(self, suite: str, slice_size: int = 100, workers: int = 1,
                      progress_callback: Optional[Callable] = None) -> List[CheckReport]:
        """
        スイートをスライスごとに実行し、コーパス順に統合する

        Args:
            suite: スイート名
            slice_size: 一つのスライスの項数
            workers: 2 以上ならプロセスプールで並列実行
            progress_callback: 進捗コールバック関数 (current, total, suite)

        Returns:
            性質ごとに統合した CheckReport のリスト
        """
        total = len(self.runner.corpus(suite))
        ranges = self.slices(total, slice_size)
        batches: List[List[CheckReport]] = []

        if workers > 1 and len(ranges) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(run_slice, suite, self.runner.config, start, stop) for start, stop in ranges]
                # 投入順に受け取るのでコーパス順が保たれる
                for idx, future in enumerate(futures, 1):
                    batches.append(self._collect(suite, idx, future.result))
                    if progress_callback:
                        progress_callback(idx, len(ranges), suite)
        else:
            for idx, (start, stop) in enumerate(ranges, 1):
                batches.append(self._collect(suite, idx, lambda: self.runner.run_suite(suite, start, stop)))
                if progress_callback:
                    progress_callback(idx, len(ranges), suite)

        return merge_reports(batches)

    def _collect(self, suite: str, idx: int, fetch: Callable[[], List[CheckReport]]) -> List[CheckReport]:
        try:
            reports = fetch()
            self.results.append({
                'suite': suite,
                'slice': idx,
                'status': 'success',
                'instances': sum(r.instances for r in reports),
                'violations': sum(r.violations for r in reports),
            })
            return reports
        except Exception as e:
            self.results.append({
                'suite': suite,
                'slice': idx,
                'status': 'error',
                'error_message': str(e),
            })
            return [CheckReport(f"{suite}-error", suite, instances=1, violations=1, witnesses=[str(e)])]

    def get_summary(self) -> Dict[str, Any]:
        """処理結果のサマリーを取得"""
        if not self.results:
            return {'total': 0, 'success': 0, 'failed': 0, 'instances': 0, 'violations': 0}

        success = [r for r in self.results if r.get('status') == 'success']
        return {
            'total': len(self.results),
            'success': len(success),
            'failed': len(self.results) - len(success),
            'instances': sum(r.get('instances', 0) for r in success),
            'violations': sum(r.get('violations', 0) for r in success),
            'results': self.results,
        }
