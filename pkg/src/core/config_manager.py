"""
設定管理システム
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, Optional

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from ..utils.logging_config import logger


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


@dataclass
class WorkbenchConfig:
    """ワークベンチ設定"""
    debug_mode: bool = False
    workers: int = 1
    trial_budget_bits: int = 1 << 16
    alpha: float = 0.01
    block_size: int = 128
    equivalence_bits: int = 1 << 16

    @classmethod
    def from_env(cls) -> 'WorkbenchConfig':
        """環境変数から設定を読み込み"""
        defaults = cls()
        debug_mode = _env_bool("LILI_DEBUG_MODE", "false")

        workers = cls._read_number("LILI_WORKERS", int, defaults.workers)
        trial_budget_bits = cls._read_number(
            "LILI_TRIAL_BUDGET_BITS", int, defaults.trial_budget_bits
        )
        alpha = cls._read_number("LILI_ALPHA", float, defaults.alpha)
        block_size = cls._read_number("LILI_BLOCK_SIZE", int, defaults.block_size)
        equivalence_bits = cls._read_number(
            "LILI_EQUIVALENCE_BITS", int, defaults.equivalence_bits
        )

        config = cls(
            debug_mode=debug_mode,
            workers=workers,
            trial_budget_bits=trial_budget_bits,
            alpha=alpha,
            block_size=block_size,
            equivalence_bits=equivalence_bits,
        )

        # 範囲外の値はデフォルトに戻す
        if not config.validate():
            logger.warning("無効な設定値があるため、該当項目をデフォルト値に戻します")
            config = config._with_defaults_for_invalid(defaults)
        return config

    @staticmethod
    def _read_number(name: str, kind: type, default: Any) -> Any:
        raw = os.getenv(name)
        if raw is None or raw == "":
            return default
        try:
            return kind(raw)
        except ValueError:
            logger.warning(f"{name}の値が無効です。デフォルト値({default})を使用します")
            return default

    def _problems(self) -> Dict[str, str]:
        problems = {}
        if self.workers < 1:
            problems["workers"] = "LILI_WORKERS は 1 以上である必要があります"
        if self.trial_budget_bits < 1:
            problems["trial_budget_bits"] = "LILI_TRIAL_BUDGET_BITS は 1 以上である必要があります"
        if not 0.0 < self.alpha < 1.0:
            problems["alpha"] = "LILI_ALPHA は 0 と 1 の間である必要があります"
        if self.block_size < 2:
            problems["block_size"] = "LILI_BLOCK_SIZE は 2 以上である必要があります"
        if self.equivalence_bits < 1:
            problems["equivalence_bits"] = "LILI_EQUIVALENCE_BITS は 1 以上である必要があります"
        return problems

    def validate(self) -> bool:
        """設定の検証"""
        problems = self._problems()
        for message in problems.values():
            logger.error(message)
        if not problems:
            logger.debug("設定の検証が完了しました")
        return not problems

    def _with_defaults_for_invalid(self,
                                   defaults: 'WorkbenchConfig') -> 'WorkbenchConfig':
        values = self.to_dict()
        for name in self._problems():
            values[name] = getattr(defaults, name)
        return WorkbenchConfig(**values)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式での出力（デバッグ用）"""
        return {
            "debug_mode": self.debug_mode,
            "workers": self.workers,
            "trial_budget_bits": self.trial_budget_bits,
            "alpha": self.alpha,
            "block_size": self.block_size,
            "equivalence_bits": self.equivalence_bits,
        }


class ConfigManager:
    """設定管理クラス"""

    _instance: Optional['ConfigManager'] = None
    _config: Optional[WorkbenchConfig] = None

    def __new__(cls) -> 'ConfigManager':
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def get_config(self) -> WorkbenchConfig:
        """設定の取得"""
        if self._config is None:
            self._config = WorkbenchConfig.from_env()

            if self._config.debug_mode:
                logger.debug(f"設定情報: {self._config.to_dict()}")

        return self._config

    def reload_config(self) -> WorkbenchConfig:
        """設定の再読み込み"""
        self._config = None
        return self.get_config()


# グローバル設定管理インスタンス
config_manager = ConfigManager()
