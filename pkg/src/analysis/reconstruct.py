"""
フィルタ関数 f_d の再構成

既知初期状態モデル：鍵から LFSR_d の動きを再現し、各出力ビットを
(10ビット入力語, 出力) の組として真理値表に書き込む。1024 通りすべての入力が
揃った時点で Möbius 変換により ANF を厳密に復元する。
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import median
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ..cipher import presets
from ..cipher.boolfn import (
    AnfPolynomial,
    TruthTable,
    anf_to_truth_table,
    truth_table_to_anf,
)
from ..cipher.lili import (
    GeneratorConfig,
    KeyMaterial,
    KeystreamGenerator,
    ObservationSet,
    load_key,
    replay,
)
from ..core.exceptions import (
    ConflictedError,
    InvalidSpecError,
    ObservationFormatError,
    TrialBudgetExceededError,
    UnderdeterminedError,
    ZeroRegisterError,
)
from ..utils.bit_utils import BitUtils
from ..utils.logging_config import logger

DEFAULT_TRIAL_BUDGET = 1 << 16


class CoverageReport(BaseModel):
    """入力空間の被覆状況"""
    size: int = Field(description="入力語の総数 2^n")
    observations: int = Field(description="処理した観測数")
    distinct_inputs_seen: int = Field(description="観測済みの異なる入力語の数")
    first_full_coverage_index: Optional[int] = Field(
        default=None, description="全入力が揃った時点の観測数（1始まり）"
    )
    conflicts: List[int] = Field(default_factory=list, description="出力が矛盾した入力語")

    @property
    def full_coverage(self) -> bool:
        return self.distinct_inputs_seen == self.size


@dataclass(frozen=True)
class ReconstructionResult:
    """再構成の結果"""
    anf: AnfPolynomial
    coverage: CoverageReport


class TrialResult(BaseModel):
    """min-bits 実験の1試行"""
    trial: int
    key_hex: str
    first_full_coverage_index: Optional[int] = None
    distinct_inputs_seen: int
    budget_exceeded: bool = False


class ExperimentSummary(BaseModel):
    """min-bits 実験の集計"""
    trials: int
    rng_seed: int
    budget: int
    completed: int
    failures: int
    minimum: Optional[int] = None
    median: Optional[float] = None
    mean: Optional[float] = None
    maximum: Optional[int] = None
    fraction_in_reference_range: float = Field(description="[2^12, 2^13] に入った試行の割合")
    fraction_within_budget_range: float = Field(description="[2^12, 2^16] に入った試行の割合")
    expected_coverage_draws: float = Field(description="一様独立抽出時の期待抽出数 N·H_N")
    results: List[TrialResult] = Field(default_factory=list)


def expected_coverage_draws(size: int = 1 << presets.FILTER_VARIABLES) -> float:
    """クーポン収集問題の期待値 N·H_N"""
    if size < 1:
        raise InvalidSpecError("coverage size must be >= 1")
    return size * sum(1.0 / k for k in range(1, size + 1))


# --- 集積・補間 ------------------------------------------------------------

def accumulate(obs: ObservationSet) -> Tuple[TruthTable, CoverageReport]:
    """観測を部分真理値表にまとめる（矛盾はデータとして記録）"""
    table = TruthTable.empty(obs.width)
    size = 1 << obs.width
    outputs, defined = table.outputs, table.defined
    conflicts = set()
    distinct = 0
    first_full: Optional[int] = None

    for index, (word, bit) in enumerate(obs.pairs, start=1):
        if defined[word]:
            if outputs[word] != bit:
                conflicts.add(word)
            continue
        defined[word] = True
        outputs[word] = bit
        distinct += 1
        if distinct == size:
            first_full = index

    if conflicts:
        logger.warning(f"矛盾する観測: {len(conflicts)} 語（初期状態または規約の誤り）")
    table.conflicts = frozenset(conflicts)
    report = CoverageReport(
        size=size,
        observations=len(obs),
        distinct_inputs_seen=distinct,
        first_full_coverage_index=first_full,
        conflicts=sorted(conflicts),
    )
    return table, report


def interpolate(t: TruthTable,
                coverage: Optional[CoverageReport] = None) -> AnfPolynomial:
    if t.conflicts:
        raise ConflictedError(t.conflicts)
    if not t.is_complete:
        raise UnderdeterminedError(t.missing_words(), coverage)
    return truth_table_to_anf(t)


def inconsistent_observations(anf: AnfPolynomial, obs: ObservationSet) -> List[int]:
    """復元した ANF と食い違う観測の位置（0始まり）"""
    outputs = anf_to_truth_table(anf).outputs
    return [i for i, (word, bit) in enumerate(obs.pairs) if outputs[word] != bit]


def reconstruct_filter(obs: ObservationSet) -> ReconstructionResult:
    """観測集合から ANF を復元し、全観測との整合を確認する"""
    table, report = accumulate(obs)
    anf = interpolate(table, report)
    bad = inconsistent_observations(anf, obs)
    if bad:
        raise ConflictedError(obs.pairs[i][0] for i in bad)
    logger.info(
        f"再構成完了: {anf.term_count} 項, 次数 {anf.degree}, "
        f"被覆完了 {report.first_full_coverage_index} ビット目"
    )
    return ReconstructionResult(anf, report)


def end_to_end_attack(key: KeyMaterial, budget: int,
                      config: Optional[GeneratorConfig] = None) -> AnfPolynomial:
    """replay → accumulate → interpolate"""
    if budget < 1:
        raise InvalidSpecError(f"budget must be >= 1, got {budget}")
    return reconstruct_filter(replay(key, budget, config)).anf


def observations_from_keystream(
    key: KeyMaterial, bits: Sequence[int], config: Optional[GeneratorConfig] = None
) -> ObservationSet:
    """外部から与えられたキーストリームを、鍵から再現した入力語と対にする

    フィルタ自体は未知でよい（レジスタの動きだけを使う）。
    """
    if not bits:
        raise InvalidSpecError("keystream is empty")
    config = config or GeneratorConfig()
    generator = KeystreamGenerator(load_key(key, config))
    pairs = []
    for bit in bits:
        pairs.append((generator.input_word(), 1 if bit else 0))
        generator.next_bit()
    return ObservationSet(tuple(pairs), key.key_id, len(config.data_positions))


# --- 観測ファイル ----------------------------------------------------------

def format_observations(obs: ObservationSet) -> str:
    """1行1組 'wwwwwwwwww b'（x1 が右端）"""
    lines = [f"{BitUtils.word_to_binary(w, obs.width)} {b}" for w, b in obs.pairs]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_observations(text: str, width: int = presets.FILTER_VARIABLES,
                       key_id: str = "") -> ObservationSet:
    pairs = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if (len(parts) != 2 or len(parts[0]) != width
                or set(parts[0]) - {"0", "1"} or parts[1] not in ("0", "1")):
            raise ObservationFormatError(
                f"observation line {number}: expected '{'w' * width} b'"
            )
        pairs.append((int(parts[0], 2), int(parts[1])))
    return ObservationSet(tuple(pairs), key_id, width)


def write_observations(path: Union[str, Path], obs: ObservationSet):
    Path(path).write_text(format_observations(obs), encoding="utf-8")


def read_observations(path: Union[str, Path],
                      width: int = presets.FILTER_VARIABLES) -> ObservationSet:
    text = Path(path).read_text(encoding="utf-8")
    return parse_observations(text, width, key_id=str(path))


# --- 最小ビット数の実験 ----------------------------------------------------

def random_key(rng: np.random.Generator, config: GeneratorConfig) -> KeyMaterial:
    """両レジスタが非零になる鍵を引くまで繰り返す"""
    while True:
        key = KeyMaterial.from_bytes(rng.bytes(presets.KEY_BITS // 8))
        try:
            load_key(key, config)
        except ZeroRegisterError:
            continue
        return key


def coverage_walk(key: KeyMaterial, budget: int,
                  config: GeneratorConfig) -> Tuple[int, int]:
    """全入力が揃うまで出力を進める。(被覆完了位置, 異なる入力語の数)

    予算内に揃わなければ TrialBudgetExceededError。
    """
    generator = KeystreamGenerator(load_key(key, config))
    size = 1 << len(config.data_positions)
    seen = bytearray(size)
    distinct = 0
    for index in range(1, budget + 1):
        word = generator.input_word()
        generator.next_bit()
        if not seen[word]:
            seen[word] = 1
            distinct += 1
            if distinct == size:
                return index, distinct
    raise TrialBudgetExceededError(budget, distinct)


_TrialJob = Tuple[int, np.random.SeedSequence, int, GeneratorConfig]


def _run_trial(args: _TrialJob) -> TrialResult:
    trial, seed_sequence, budget, config = args
    key = random_key(np.random.default_rng(seed_sequence), config)
    try:
        index, distinct = coverage_walk(key, budget, config)
    except TrialBudgetExceededError as e:
        logger.warning(f"試行 {trial}: {e}")
        return TrialResult(trial=trial, key_hex=key.to_hex(),
                           distinct_inputs_seen=e.distinct, budget_exceeded=True)
    return TrialResult(trial=trial, key_hex=key.to_hex(),
                       first_full_coverage_index=index, distinct_inputs_seen=distinct)


def _fraction(values: Sequence[int], low: int, high: int, total: int) -> float:
    return sum(1 for v in values if low <= v <= high) / total


def summarize(results: Sequence[TrialResult], rng_seed: int, budget: int,
              size: int = 1 << presets.FILTER_VARIABLES) -> ExperimentSummary:
    ordered = sorted(results, key=lambda r: r.trial)
    indices = [
        r.first_full_coverage_index
        for r in ordered
        if r.first_full_coverage_index is not None
    ]
    total = len(ordered)
    low, high = presets.REFERENCE_BITS_RANGE
    return ExperimentSummary(
        trials=total,
        rng_seed=rng_seed,
        budget=budget,
        completed=len(indices),
        failures=total - len(indices),
        minimum=min(indices) if indices else None,
        median=float(median(indices)) if indices else None,
        mean=sum(indices) / len(indices) if indices else None,
        maximum=max(indices) if indices else None,
        fraction_in_reference_range=_fraction(indices, low, high, total),
        fraction_within_budget_range=_fraction(
            indices, low, DEFAULT_TRIAL_BUDGET, total
        ),
        expected_coverage_draws=expected_coverage_draws(size),
        results=ordered,
    )


def min_bits_experiment(trials: int, rng_seed: int,
                        config: Optional[GeneratorConfig] = None,
                        budget: int = DEFAULT_TRIAL_BUDGET,
                        workers: int = 1) -> ExperimentSummary:
    """ランダム鍵ごとに全入力被覆までのビット数を測る

    各試行の乱数は SeedSequence(rng_seed).spawn で独立に決まるため、
    workers の数によらず結果は同じ。
    """
    if trials < 1:
        raise InvalidSpecError(f"trials must be >= 1, got {trials}")
    if budget < 1:
        raise InvalidSpecError(f"budget must be >= 1, got {budget}")
    config = config or GeneratorConfig()
    seeds = np.random.SeedSequence(rng_seed).spawn(trials)
    jobs = [(i, seeds[i], budget, config) for i in range(trials)]

    logger.info(f"min-bits 実験開始: {trials} 試行, seed={rng_seed}, workers={workers}")
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_trial, jobs))
    else:
        results = [_run_trial(job) for job in jobs]

    summary = summarize(results, rng_seed, budget, 1 << len(config.data_positions))
    logger.info(f"min-bits 実験完了: 完了 {summary.completed} / 失敗 {summary.failures}")
    return summary
