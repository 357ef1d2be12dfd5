"""
コマンド基底コントローラー
"""

import argparse
import sys
from abc import ABC, abstractmethod
from typing import Optional, TextIO

from ..core.config_manager import WorkbenchConfig, config_manager
from ..core.exceptions import WorkbenchError
from ..utils.logging_config import logger
from .report_formatter import ReportFormatter

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DATA = 3


class BaseCommandController(ABC):
    """サブコマンド基底クラス

    標準出力はレポート専用。ログは logger 経由で標準エラーに出す。
    """

    name: str = ""

    def __init__(self, args: argparse.Namespace, out: Optional[TextIO] = None,
                 config: Optional[WorkbenchConfig] = None):
        self.args = args
        self.out = out
        self.config = config or config_manager.get_config()
        self.logger = logger
        self.formatter = ReportFormatter()

    @abstractmethod
    def run(self) -> int:
        """コマンド本体。終了コードを返す"""

    def emit(self, text: str):
        """レポートを標準出力へ"""
        stream = self.out or sys.stdout
        stream.write(text if text.endswith("\n") else text + "\n")

    def show_error(self, message: str, error: Optional[Exception] = None):
        self.logger.error(message, error)

    def show_success(self, message: str):
        self.logger.success(message)

    def show_warning(self, message: str):
        self.logger.warning(message)

    def run_with_error_handling(self) -> int:
        """例外を終了コードに変換して実行"""
        try:
            return self.run()
        except WorkbenchError as e:
            self.show_error(f"{self.name} でエラーが発生", e)
            return e.exit_code
        except OSError as e:
            self.show_error(f"{self.name} でファイル操作に失敗", e)
            return EXIT_DATA
