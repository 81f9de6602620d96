"""
Grundy Toolkitで使用する例外定義
"""

from typing import Any, Optional, Tuple


class GrundyToolkitError(Exception):
    """ツールキット共通の基底例外"""


class GraphArgumentError(GrundyToolkitError, ValueError):
    """引数エラー（範囲外の頂点、存在しない辺、前提を満たさないグラフなど）"""


class GraphParseError(GrundyToolkitError, ValueError):
    """グラフファイルの解析エラー"""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<string>"):
        self.message = message
        self.line = line
        self.source = source
        location = f"{source}:{line}" if line is not None else source
        super().__init__(f"{location}: {message}")

    def __reduce__(self) -> Tuple[Any, ...]:
        # ワーカープロセスから戻すときに行番号を保つ
        return (self.__class__, (self.message, self.line, self.source))


class CapacityError(GrundyToolkitError, ValueError):
    """設定された頂点数上限を超えた"""


class PreconditionError(GrundyToolkitError, ValueError):
    """定理の前提条件を満たさない入力（例: 最大でない正当列）"""


class InvariantViolation(GrundyToolkitError, RuntimeError):
    """
    不変条件違反
    定理と矛盾する結果が観測された場合に送出する
    """
