"""
設定の読み込みのテスト
"""

import os

import pytest

from poslam.config import DEFAULT_CONFIG, load_config
from poslam.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv('POSLAM_SEED', raising=False)
    monkeypatch.delenv('POSLAM_CONFIG', raising=False)


def test_missing_file_gives_defaults(tmp_path):
    assert load_config(str(tmp_path / "none.yaml")) == DEFAULT_CONFIG


def test_bundled_config_matches_defaults():
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.yaml")
    assert load_config(path) == DEFAULT_CONFIG


def test_sections_are_merged(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("engine:\n  fuel: 50\ncheck:\n  size: 4\n", encoding='utf-8')
    config = load_config(str(path))
    assert config['engine'] == {'vars_are_values': True, 'fuel': 50}
    assert config['check']['size'] == 4
    assert config['check']['seed'] == DEFAULT_CONFIG['check']['seed']
    assert DEFAULT_CONFIG['engine']['fuel'] == 10000


def test_env_path(tmp_path, monkeypatch):
    path = tmp_path / "other.yaml"
    path.write_text("graph:\n  node_cap: 12\n", encoding='utf-8')
    monkeypatch.setenv('POSLAM_CONFIG', str(path))
    assert load_config()['graph']['node_cap'] == 12


def test_seed_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv('POSLAM_SEED', '42')
    assert load_config(str(tmp_path / "none.yaml"))['check']['seed'] == 42


@pytest.mark.parametrize("text", ["engine: [1, 2", "- just\n- a list\n"])
def test_bad_yaml(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text, encoding='utf-8')
    with pytest.raises(ConfigError, match='設定ファイル'):
        load_config(str(path))


def test_bad_seed(tmp_path, monkeypatch):
    monkeypatch.setenv('POSLAM_SEED', 'seven')
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "none.yaml"))
