"""
Errors - 例外クラス定義
"""

from typing import Iterable, Optional


class PoslamError(Exception):
    """poslam の基底例外"""


class TermError(PoslamError):
    """操作の前提条件を満たさない項・文脈"""


class StaleRedexError(TermError):
    """列挙元と一致しないリデックスの適用"""


class TransformError(PoslamError):
    """局所図式が見つからない (エンジンの不具合を示す)"""


class ConfigError(PoslamError):
    """設定ファイルの読み込み失敗"""


class ParseError(PoslamError):
    """位置情報付きの構文エラー"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))
        location = f"{line}:{column}: " if line is not None else ""
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{location}{message}{hint}")
