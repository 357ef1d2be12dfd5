"""
LFSR エンジン

ステージ s[1..N] を左から右に並べ、1回のステップで
  w = XOR(帰還タップ) を計算 → s[i] ← s[i+1] (i=1..N-1) → s[N] ← w
とする。内部表現は int で、ビット i-1 がステージ s[i]。
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import FrozenSet, List, Sequence, Tuple, Union

from ..core.exceptions import (
    DataFormatError,
    InvalidSpecError,
    LengthMismatchError,
    PositionOutOfRangeError,
)
from ..utils.logging_config import logger
from . import presets
from .gf2poly import FeedbackPolynomial, poly_from_exponents


@dataclass(frozen=True)
class LfsrSpec:
    """LFSR の構成（長さ・帰還タップ・ラベル）"""
    length: int
    feedback_taps: FrozenSet[int]
    label: str = "lfsr"

    def __post_init__(self):
        object.__setattr__(self, "feedback_taps", frozenset(self.feedback_taps))
        if self.length < 1:
            raise InvalidSpecError("register length must be >= 1")
        for t in self.feedback_taps:
            if not 1 <= t <= self.length:
                raise InvalidSpecError(
                    f"{self.label}: tap {t} outside 1..{self.length}"
                )
        # タップ1が無いと s[1] が捨てられ、状態遷移が全単射にならない
        if 1 not in self.feedback_taps:
            raise InvalidSpecError(f"{self.label}: tap 1 must be present")

    @cached_property
    def tap_mask(self) -> int:
        return sum(1 << (t - 1) for t in self.feedback_taps)

    @property
    def top_shift(self) -> int:
        return self.length - 1

    def step_bits(self, bits: int) -> int:
        """1ステップ（int 表現）"""
        w = (bits & self.tap_mask).bit_count() & 1
        return (bits >> 1) | (w << self.top_shift)

    def step_bits_n(self, bits: int, k: int) -> int:
        mask, top = self.tap_mask, self.top_shift
        for _ in range(k):
            bits = (bits >> 1) | (((bits & mask).bit_count() & 1) << top)
        return bits

    @classmethod
    def from_polynomial(cls, poly: FeedbackPolynomial,
                        label: str = "lfsr") -> 'LfsrSpec':
        """タップ t ↔ 多項式の指数 N+1-t（相反多項式の指数 t-1）"""
        poly.require_feedback()
        n = poly.degree
        taps = frozenset(n + 1 - e for e in poly.exponents if e > 0)
        return cls(length=n, feedback_taps=taps, label=label)

    def polynomial(self) -> FeedbackPolynomial:
        """このタップ集合に対応する帰還多項式"""
        exponents = [self.length + 1 - t for t in self.feedback_taps]
        return poly_from_exponents(exponents + [0])


LFSR_C_SPEC = LfsrSpec(presets.LFSR_C_LENGTH, presets.LFSR_C_TAPS, "c")
LFSR_D_SPEC = LfsrSpec(presets.LFSR_D_LENGTH, presets.LFSR_D_TAPS, "d")


@dataclass(frozen=True)
class LfsrState:
    """LFSR の状態（値オブジェクト）"""
    spec: LfsrSpec
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 1 << self.spec.length:
            raise InvalidSpecError(f"state wider than {self.spec.length} stages")

    @classmethod
    def from_stages(cls, spec: LfsrSpec, stages: Sequence[int]) -> 'LfsrState':
        """s[1]..s[N] の順のビット列から構築"""
        if len(stages) != spec.length:
            raise LengthMismatchError(
                f"{spec.label}: expected {spec.length} stages, got {len(stages)}"
            )
        return cls(spec, sum(1 << i for i, bit in enumerate(stages) if bit))

    @property
    def stages(self) -> Tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.spec.length))

    @property
    def degenerate(self) -> bool:
        """全ゼロ状態（不動点）"""
        return self.bits == 0

    def stage(self, index: int) -> int:
        if not 1 <= index <= self.spec.length:
            raise PositionOutOfRangeError(index, self.spec.length)
        return (self.bits >> (index - 1)) & 1


def step(state: LfsrState) -> LfsrState:
    if state.degenerate:
        logger.debug(f"LFSR_{state.spec.label}: 全ゼロ状態をステップ")
    return LfsrState(state.spec, state.spec.step_bits(state.bits))


def step_n(state: LfsrState, k: int) -> LfsrState:
    if k < 1:
        raise InvalidSpecError(f"step count must be >= 1, got {k}")
    return LfsrState(state.spec, state.spec.step_bits_n(state.bits, k))


def extract_bits(bits: int, positions: Sequence[int]) -> int:
    """j 番目の位置のステージをワードのビット j-1 に置く"""
    word = 0
    for j, p in enumerate(positions):
        word |= ((bits >> (p - 1)) & 1) << j
    return word


def extract(state: LfsrState, positions: Sequence[int]) -> int:
    for p in positions:
        if not 1 <= p <= state.spec.length:
            raise PositionOutOfRangeError(p, state.spec.length)
    return extract_bits(state.bits, positions)


def emitted_bits(state: LfsrState, count: int) -> List[int]:
    """各シフト前の s[1] を出力列として count ビット取り出す"""
    out = []
    bits, spec = state.bits, state.spec
    for _ in range(count):
        out.append(bits & 1)
        bits = spec.step_bits(bits)
    return out


def consistency_check(spec: LfsrSpec, poly: FeedbackPolynomial,
                      sample_bits: int = 4096, strict: bool = False) -> bool:
    """タップ式と帰還多項式の対応を、指数の対応と出力列の漸化式の両方で確認"""
    if spec.length != poly.degree:
        if strict:
            raise LengthMismatchError(
                f"{spec.label}: length {spec.length} vs polynomial degree {poly.degree}"
            )
        logger.debug(f"LFSR_{spec.label}: 長さ {spec.length} と次数 {poly.degree} が不一致")
        return False
    if not poly.has_constant_term:
        return False

    if spec.polynomial() != poly:
        return False

    # 非零の種から出力列を作り、a_n = Σ_{e>0} a_{n-e} を全位置で確認
    seed = LfsrState(spec, (1 << spec.length) - 1)
    sequence = emitted_bits(seed, sample_bits)
    lags = [e for e in poly.exponents if e > 0]
    for n in range(poly.degree, len(sequence)):
        bit = 0
        for e in lags:
            bit ^= sequence[n - e]
        if bit != sequence[n]:
            logger.debug(f"LFSR_{spec.label}: 位置 {n} で漸化式が不成立")
            return False
    return True


# --- 状態ダンプ ------------------------------------------------------------

def format_state_dump(states: Sequence[LfsrState]) -> str:
    """1行1レジスタ: ラベル, N, s[1]→s[N] の '0'/'1' 文字列"""
    lines = []
    for state in states:
        stage_text = "".join(str(b) for b in state.stages)
        lines.append(f"{state.spec.label} {state.spec.length} {stage_text}")
    return "\n".join(lines) + "\n"


def parse_state_dump(text: str, specs: Sequence[LfsrSpec]) -> List[LfsrState]:
    """状態ダンプを読み込む（ラベルで spec を対応付ける）"""
    by_label = {spec.label: spec for spec in specs}
    states = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in by_label:
            raise DataFormatError(f"state dump line {number}: malformed")
        spec = by_label[parts[0]]
        try:
            length = int(parts[1])
        except ValueError as e:
            raise DataFormatError(
                f"state dump line {number}: bad register length {parts[1]!r}"
            ) from e
        stages = parts[2]
        if (length != spec.length or len(stages) != spec.length
                or set(stages) - {"0", "1"}):
            raise DataFormatError(
                f"state dump line {number}: stage string does not match N={spec.length}"
            )
        states.append(LfsrState.from_stages(spec, [int(ch) for ch in stages]))
    return states


def read_state_dump(path: Union[str, Path],
                    specs: Sequence[LfsrSpec]) -> List[LfsrState]:
    return parse_state_dump(Path(path).read_text(encoding="utf-8"), specs)
