"""
メインコントローラー
"""

import logging
import sys
from typing import List, Optional, TextIO

from ..core.config_manager import config_manager
from ..utils.logging_config import logger
from .argument_controller import ArgumentController
from .commands import COMMANDS


class MainController:
    """引数を解釈してサブコマンドに振り分ける"""

    def __init__(self, out: Optional[TextIO] = None):
        self.out = out
        self.arguments = ArgumentController()

    def run(self, argv: Optional[List[str]] = None) -> int:
        # argparse の誤りは SystemExit(2)
        args = self.arguments.parse(argv)
        self._setup_logging(args)

        config = config_manager.get_config()
        command = COMMANDS[args.command](args, out=self.out, config=config)
        logger.debug(f"コマンド開始: {args.command}")
        code = command.run_with_error_handling()
        logger.debug(f"コマンド終了: {args.command} (exit {code})")
        return code

    @staticmethod
    def _setup_logging(args):
        if args.verbose:
            logger.set_level(logging.DEBUG)
        elif args.quiet:
            logger.set_level(logging.WARNING)


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """メイン関数"""
    try:
        return MainController(out).run(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2


def cli():
    """コンソールスクリプト用"""
    sys.exit(main(sys.argv[1:]))
