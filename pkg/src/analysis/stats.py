"""
キーストリームの統計検定

0/1 の分布に関する基本的な検定（monobit・runs・block frequency）と、
線形複雑度プロファイルが n/2 付近に留まるかの確認を行う。
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ..cipher.gf2poly import berlekamp_massey
from ..core.exceptions import InvalidSpecError, PrecheckFailedError, TooFewBitsError
from ..utils.logging_config import logger

DEFAULT_ALPHA = 0.01
DEFAULT_BLOCK_SIZE = 128
MIN_BITS = 100
BAND_START = 1024
BAND_WIDTH = 4.0

_IGAMC_EPS = 1e-15
_IGAMC_MAX_ITER = 10_000
_TINY = 1e-300


class TestReport(BaseModel):
    """1つの検定結果"""
    __test__ = False

    name: str
    n: int = Field(description="検定したビット数")
    statistic: float
    p_value: float = Field(ge=0.0, le=1.0)
    passed: bool
    alpha: float = DEFAULT_ALPHA


class ComplexityBandReport(BaseModel):
    """線形複雑度プロファイルの帯域チェック"""
    n: int
    linear_complexity: int
    start: int = BAND_START
    max_deviation: float = Field(description="max |L_k - k/2| / sqrt(k)（k >= start）")
    first_violation: Optional[int] = None
    passed: bool


def _as_array(bits: Sequence[int]) -> np.ndarray:
    return np.asarray(bits, dtype=np.uint8) & 1


def _report(name: str, n: int, statistic: float, p_value: float,
            alpha: float) -> TestReport:
    p_value = min(max(p_value, 0.0), 1.0)
    return TestReport(name=name, n=n, statistic=statistic, p_value=p_value,
                      passed=p_value >= alpha, alpha=alpha)


def igamc(a: float, x: float) -> float:
    """正則化上側不完全ガンマ関数 Q(a, x)

    x < a+1 では級数で P を求めて 1-P、それ以外は連分数（Lentz 法）。
    """
    if a <= 0:
        raise InvalidSpecError("igamc needs a > 0")
    if x <= 0:
        return 1.0
    log_prefix = a * math.log(x) - x - math.lgamma(a)

    if x < a + 1:
        term = total = 1.0 / a
        ap = a
        for _ in range(_IGAMC_MAX_ITER):
            ap += 1
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _IGAMC_EPS:
                break
        return max(0.0, 1.0 - total * math.exp(log_prefix))

    b = x + 1 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _IGAMC_MAX_ITER):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        d = _TINY if abs(d) < _TINY else d
        c = b + an / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _IGAMC_EPS:
            break
    return math.exp(log_prefix) * h


def monobit(bits: Sequence[int], alpha: float = DEFAULT_ALPHA) -> TestReport:
    """|#1 - #0| / sqrt(n) と erfc(s / sqrt(2))"""
    arr = _as_array(bits)
    n = arr.size
    if n < MIN_BITS:
        raise TooFewBitsError(f"monobit needs >= {MIN_BITS} bits, got {n}")
    ones = int(np.count_nonzero(arr))
    statistic = abs(2 * ones - n) / math.sqrt(n)
    return _report("monobit", n, statistic, math.erfc(statistic / math.sqrt(2)), alpha)


def runs_test(bits: Sequence[int], alpha: float = DEFAULT_ALPHA) -> TestReport:
    """ラン（同じビットの連続）の総数を期待値 2nπ(1-π) と比較する"""
    arr = _as_array(bits)
    n = arr.size
    if n < MIN_BITS:
        raise TooFewBitsError(f"runs test needs >= {MIN_BITS} bits, got {n}")
    pi = np.count_nonzero(arr) / n
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        raise PrecheckFailedError(
            f"ones proportion {pi:.6g} fails the runs-test precheck"
        )

    runs = int(np.count_nonzero(np.diff(arr))) + 1
    spread = 2 * pi * (1 - pi)
    p_value = math.erfc(abs(runs - n * spread) / (spread * math.sqrt(2 * n)))
    return _report("runs", n, float(runs), p_value, alpha)


def block_frequency(bits: Sequence[int], block_size: int = DEFAULT_BLOCK_SIZE,
                    alpha: float = DEFAULT_ALPHA) -> TestReport:
    """ブロックごとの 1 の割合に対するカイ二乗検定"""
    if block_size < 2:
        raise InvalidSpecError(f"block size must be >= 2, got {block_size}")
    arr = _as_array(bits)
    n = arr.size
    if n < MIN_BITS * block_size:
        raise TooFewBitsError(
            f"block frequency needs >= {MIN_BITS * block_size} bits, got {n}"
        )

    blocks = n // block_size
    proportions = arr[: blocks * block_size].reshape(blocks, block_size).mean(axis=1)
    chi_square = float(4.0 * block_size * np.square(proportions - 0.5).sum())
    p_value = igamc(blocks / 2, chi_square / 2)
    return _report("block-frequency", n, chi_square, p_value, alpha)


def complexity_band(bits: Sequence[int], start: int = BAND_START,
                    width: float = BAND_WIDTH) -> ComplexityBandReport:
    """k >= start の全接頭辞で |L_k - k/2| <= width·sqrt(k) か"""
    if len(bits) < start:
        raise TooFewBitsError(f"complexity band needs >= {start} bits, got {len(bits)}")
    profile = berlekamp_massey(bits).complexities

    worst = 0.0
    first_violation = None
    for k in range(start, len(profile) + 1):
        deviation = abs(profile[k - 1] - k / 2) / math.sqrt(k)
        worst = max(worst, deviation)
        if first_violation is None and deviation > width:
            first_violation = k
    return ComplexityBandReport(
        n=len(bits),
        linear_complexity=profile[-1],
        start=start,
        max_deviation=worst,
        first_violation=first_violation,
        passed=first_violation is None,
    )


def run_battery(bits: Sequence[int], alpha: float = DEFAULT_ALPHA,
                block_size: int = DEFAULT_BLOCK_SIZE) -> List[TestReport]:
    """monobit・runs・block frequency をまとめて実行する

    runs の事前条件を満たさない場合は p = 0 の FAIL として記録する。
    ビット数が block frequency に足りない場合はその検定を省く。
    """
    reports = [monobit(bits, alpha)]
    try:
        reports.append(runs_test(bits, alpha))
    except PrecheckFailedError as e:
        logger.warning(f"runs 検定: {e}")
        reports.append(TestReport(name="runs", n=len(bits), statistic=0.0, p_value=0.0,
                                  passed=False, alpha=alpha))
    if len(bits) >= MIN_BITS * block_size:
        reports.append(block_frequency(bits, block_size, alpha))
    else:
        logger.warning(f"ビット数 {len(bits)} が block frequency に不足しているため省略します")
    return reports


def format_report(report: TestReport) -> str:
    verdict = "PASS" if report.passed else "FAIL"
    return (
        f"{report.name} n={report.n} statistic={report.statistic:.6g} "
        f"p-value={report.p_value:.6g} {verdict}"
    )
