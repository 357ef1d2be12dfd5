"""
共通フィクスチャ
"""

import pytest

from src.cipher import presets
from src.cipher.boolfn import AnfPolynomial, parse_anf
from src.cipher.lili import GeneratorConfig, KeyMaterial
from src.core.config_manager import config_manager


@pytest.fixture
def eq4() -> AnfPolynomial:
    return parse_anf(presets.FILTER_ANF_TEXT, presets.FILTER_VARIABLES)


@pytest.fixture
def full_state_filter() -> AnfPolynomial:
    return parse_anf(presets.FULL_STATE_FILTER_ANF_TEXT, presets.LFSR_D_LENGTH)


@pytest.fixture
def default_config() -> GeneratorConfig:
    return GeneratorConfig()


@pytest.fixture
def key_y() -> KeyMaterial:
    return KeyMaterial.from_ascii("yyyyyyyyyyyyyyyy")


@pytest.fixture(params=presets.VERIFICATION_KEYS)
def verification_key(request) -> KeyMaterial:
    return KeyMaterial.from_ascii(request.param)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """テストごとに環境変数由来の設定をリセット"""
    for name in ("LILI_DEBUG_MODE", "LILI_WORKERS", "LILI_TRIAL_BUDGET_BITS",
                 "LILI_ALPHA", "LILI_BLOCK_SIZE", "LILI_EQUIVALENCE_BITS"):
        monkeypatch.delenv(name, raising=False)
    config_manager.reload_config()
    yield
    config_manager.reload_config()
