"""
ロギング設定ユーティリティ
"""

import logging
import os
from logging.handlers import RotatingFileHandler
from typing import Optional

from .config import LOG_BACKUP_COUNT, LOG_DIR, LOG_FILE, LOG_LEVEL, LOG_MAX_BYTES, LOG_TO_FILE

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

_configured = False


def setup_logging(level: Optional[str] = None, log_to_file: Optional[bool] = None) -> None:
    """
    ロギング設定
    ルートロガーにコンソール（stderr）と任意の回転ファイルハンドラを追加する
    2回目以降の呼び出しはレベルの更新のみ行う

    Args:
        level: ログレベル名（省略時は設定値）
        log_to_file: ファイル出力の有無（省略時は設定値）
    """
    global _configured

    root_logger = logging.getLogger()
    try:
        root_logger.setLevel(getattr(logging, str(level or LOG_LEVEL).upper()))
    except AttributeError:
        root_logger.setLevel(logging.WARNING)

    if _configured:
        return
    _configured = True

    if LOG_TO_FILE if log_to_file is None else log_to_file:
        try:
            os.makedirs(LOG_DIR, exist_ok=True)
            file_handler = RotatingFileHandler(
                LOG_FILE,
                maxBytes=LOG_MAX_BYTES,
                backupCount=LOG_BACKUP_COUNT,
                encoding="utf-8",
            )
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
            root_logger.addHandler(file_handler)
        except OSError as e:
            # ファイルハンドラ追加に失敗した場合はコンソールのみにフォールバック
            logger.warning(f"File logging disabled due to error: {e}")

    # コンソールハンドラ（レポートは stdout なのでログは stderr）
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    root_logger.addHandler(console_handler)

    # モジュール別ロガー設定
    logging.getLogger("asyncio").setLevel(logging.WARNING)
    logging.getLogger("networkx").setLevel(logging.WARNING)
