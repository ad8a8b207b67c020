"""
プリセット・履歴・バッチ処理のテスト
"""

import json

import pytest

from poslam.harness.checks import SUITES
from utils.batch_processor import BatchProcessor
from utils.history import MAX_RECORDS, HistoryManager
from utils.presets import ALL_SUITES, QUICK_SUITES, PresetManager


class TestPresetManager:
    def test_defaults(self, tmp_path):
        manager = PresetManager(str(tmp_path / "presets.json"))
        assert manager.get_preset_names() == ['quick', 'standard', 'acceptance']
        assert manager.get_preset('quick')['suites'] == QUICK_SUITES

    def test_suite_names_exist(self):
        assert set(ALL_SUITES) == set(SUITES)

    def test_add_update_delete(self, tmp_path):
        path = tmp_path / "presets.json"
        manager = PresetManager(str(path))
        manager.add_preset('mine', {'suites': ['syntax'], 'size': 3}, "小さい")
        manager.update_preset('mine', {'size': 4})
        assert PresetManager(str(path)).get_preset('mine')['size'] == 4

        manager.delete_preset('mine')
        with pytest.raises(ValueError):
            manager.get_preset('mine')

    def test_add_requires_suites(self, tmp_path):
        with pytest.raises(ValueError):
            PresetManager(str(tmp_path / "p.json")).add_preset('empty', {'size': 3})

    def test_broken_file_falls_back(self, tmp_path):
        path = tmp_path / "presets.json"
        path.write_text("{not json", encoding='utf-8')
        assert 'quick' in PresetManager(str(path)).get_preset_names()


class TestHistoryManager:
    def _record(self, suite, violations=0):
        return {'suite': suite, 'parameters': {'size': 3}, 'properties': [f"{suite}-prop"],
                'instances': 10, 'violations': violations}

    def test_records_newest_first(self, tmp_path):
        manager = HistoryManager(str(tmp_path / "history.json"))
        manager.add_record(self._record('syntax'))
        manager.add_record(self._record('typing', violations=2))
        recent = manager.get_recent()
        assert [r['suite'] for r in recent] == ['typing', 'syntax']
        assert [r['id'] for r in recent] == [2, 1]

    def test_persisted(self, tmp_path):
        path = tmp_path / "history.json"
        HistoryManager(str(path)).add_record(self._record('syntax'))
        assert json.loads(path.read_text(encoding='utf-8'))[0]['suite'] == 'syntax'
        assert len(HistoryManager(str(path)).history) == 1

    def test_search_and_delete(self, tmp_path):
        manager = HistoryManager(str(tmp_path / "history.json"))
        manager.add_record(self._record('syntax'))
        manager.add_record(self._record('typing'))
        assert [r['suite'] for r in manager.search('TYPING-PROP')] == ['typing']
        manager.delete_record(1)
        assert [r['suite'] for r in manager.history] == ['typing']

    def test_capped(self, tmp_path):
        manager = HistoryManager(str(tmp_path / "history.json"))
        for _ in range(MAX_RECORDS + 2):
            manager.history.insert(0, {'suite': 'x', 'id': len(manager.history) + 1})
        manager.add_record(self._record('syntax'))
        assert len(manager.history) == MAX_RECORDS

    def test_statistics(self, tmp_path):
        manager = HistoryManager(str(tmp_path / "history.json"))
        assert manager.get_statistics()['total_runs'] == 0
        manager.add_record(self._record('syntax'))
        manager.add_record(self._record('typing', violations=2))
        stats = manager.get_statistics()
        assert stats == {'total_runs': 2, 'failed_runs': 1, 'total_instances': 20,
                         'total_violations': 2, 'average_instances': 10.0}
        manager.clear_all()
        assert manager.get_recent() == []


class TestBatchProcessor:
    def test_slices(self, small_config):
        processor = BatchProcessor(**small_config)
        assert processor.slices(5, 2) == [(0, 2), (2, 4), (4, 5)]
        assert processor.slices(0, 3) == []
        with pytest.raises(ValueError):
            processor.slices(5, 0)

    def test_process_suite(self, small_config):
        processor = BatchProcessor(**small_config)
        calls = []
        reports = processor.process_suite('syntax', slice_size=4,
                                          progress_callback=lambda c, t, s: calls.append((c, t, s)))
        assert all(r.ok for r in reports)
        total = len(processor.runner.corpus('syntax'))
        assert len(calls) == len(processor.slices(total, 4))
        summary = processor.get_summary()
        assert summary['failed'] == 0
        assert summary['instances'] == sum(r.instances for r in reports)

    def test_errors_become_reports(self, small_config):
        processor = BatchProcessor(**small_config)

        def boom():
            raise RuntimeError("壊れた")

        [report] = processor._collect('syntax', 1, boom)
        assert report.property == 'syntax-error'
        assert not report.ok
        assert processor.get_summary()['failed'] == 1
