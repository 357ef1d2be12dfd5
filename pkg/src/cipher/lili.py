"""
LILI-128 キーストリーム生成器

クロック制御系（LFSR_c + f_c）とデータ生成系（LFSR_d + f_d）からなる。
1ビットごとに「出力 → c = f_c(y1, y2) → LFSR_c を1回、LFSR_d を c 回ステップ」の順で進む。
"""

import hashlib
import string
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from ..core.exceptions import (
    BadKeyLengthError,
    DegenerateStateError,
    InvalidSpecError,
    KeystreamFormatError,
    PositionOutOfRangeError,
    WidthMismatchError,
    ZeroRegisterError,
)
from ..utils.bit_utils import BitUtils
from ..utils.logging_config import logger
from . import presets
from .boolfn import AnfPolynomial, anf_to_truth_table, parse_anf, print_anf, relabel
from .lfsr import LFSR_C_SPEC, LFSR_D_SPEC, LfsrSpec, LfsrState, extract_bits

FORM_PROJECTED = "projected"
FORM_FULL_STATE = "full-state"


def default_filter() -> AnfPolynomial:
    return parse_anf(presets.FILTER_ANF_TEXT, presets.FILTER_VARIABLES)


def default_full_state_filter() -> AnfPolynomial:
    return parse_anf(presets.FULL_STATE_FILTER_ANF_TEXT, presets.LFSR_D_LENGTH)


@dataclass(frozen=True)
class GeneratorConfig:
    """生成器の構成

    filter_form が projected のときは filter を data_positions で取り出した10ビット語に適用し、
    full-state のときは filter を LFSR_d の全段（89変数）に直接適用する。
    """
    clock_positions: Tuple[int, int] = presets.CLOCK_POSITIONS
    data_positions: Tuple[int, ...] = presets.DATA_POSITIONS
    filter: AnfPolynomial = field(default_factory=default_filter)
    lfsr_c_spec: LfsrSpec = LFSR_C_SPEC
    lfsr_d_spec: LfsrSpec = LFSR_D_SPEC
    filter_form: str = FORM_PROJECTED

    def __post_init__(self):
        object.__setattr__(self, "clock_positions", tuple(self.clock_positions))
        object.__setattr__(self, "data_positions", tuple(self.data_positions))
        if len(self.clock_positions) != 2:
            raise InvalidSpecError("clock control needs exactly two positions")
        for p in self.clock_positions:
            if not 1 <= p <= self.lfsr_c_spec.length:
                raise PositionOutOfRangeError(p, self.lfsr_c_spec.length)
        for p in self.data_positions:
            if not 1 <= p <= self.lfsr_d_spec.length:
                raise PositionOutOfRangeError(p, self.lfsr_d_spec.length)
        if len(set(self.data_positions)) != len(self.data_positions):
            raise InvalidSpecError("data positions must be distinct")

        if self.filter_form == FORM_PROJECTED:
            if self.filter.n != len(self.data_positions):
                raise WidthMismatchError(
                    f"filter has {self.filter.n} variables for "
                    f"{len(self.data_positions)} data positions"
                )
        elif self.filter_form == FORM_FULL_STATE:
            if self.filter.n != self.lfsr_d_spec.length:
                raise WidthMismatchError(
                    f"full-state filter needs {self.lfsr_d_spec.length} variables, "
                    f"got {self.filter.n}"
                )
        else:
            raise InvalidSpecError(f"unknown filter form {self.filter_form!r}")

    @cached_property
    def _table(self) -> Tuple[int, ...]:
        return tuple(int(b) for b in anf_to_truth_table(self.filter).outputs)

    @cached_property
    def _monomials(self) -> Tuple[int, ...]:
        return tuple(self.filter.monomials)

    def output_bit(self, d_bits: int) -> int:
        """LFSR_d の状態から出力ビットを計算"""
        if self.filter_form == FORM_PROJECTED:
            return self._table[extract_bits(d_bits, self.data_positions)]
        bit = 0
        for m in self._monomials:
            if d_bits & m == m:
                bit ^= 1
        return bit

    def full_state(self,
                   filter_anf: Optional[AnfPolynomial] = None) -> 'GeneratorConfig':
        """同じ生成器を89変数のフィルタ表現で構成し直す"""
        if filter_anf is None:
            if self.filter_form == FORM_FULL_STATE:
                return self
            filter_anf = relabel(
                self.filter, self.data_positions, self.lfsr_d_spec.length
            )
        return replace(self, filter=filter_anf, filter_form=FORM_FULL_STATE)

    def fingerprint(self) -> str:
        """フィルタの標準形テキストの SHA-256 先頭16桁"""
        digest = hashlib.sha256(print_anf(self.filter).encode("utf-8")).hexdigest()
        return digest[:16]


@dataclass(frozen=True)
class KeyMaterial:
    """128ビット鍵（ASCII 16文字または16進32桁）"""
    bits: Tuple[int, ...]
    source: str = "hex"

    def __post_init__(self):
        if len(self.bits) != presets.KEY_BITS:
            raise BadKeyLengthError(
                f"key must have {presets.KEY_BITS} bits, got {len(self.bits)}"
            )

    @classmethod
    def from_ascii(cls, text: str) -> 'KeyMaterial':
        if len(text) != presets.KEY_BITS // 8:
            if text == presets.PRINTED_SECOND_KEY:
                logger.warning("17文字の 'g' 鍵は16文字に揃えて使用してください")
            raise BadKeyLengthError(f"ASCII key must be 16 characters, got {len(text)}")
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as e:
            raise BadKeyLengthError(
                "ASCII key must contain only ASCII characters"
            ) from e
        return cls(tuple(BitUtils.bytes_to_bits(data)), "ascii")

    @classmethod
    def from_hex(cls, text: str) -> 'KeyMaterial':
        cleaned = text.strip().lower()
        if (len(cleaned) != presets.KEY_BITS // 4
                or set(cleaned) - set(string.hexdigits.lower())):
            raise BadKeyLengthError("hex key must be exactly 32 hex digits")
        return cls(tuple(BitUtils.bytes_to_bits(bytes.fromhex(cleaned))), "hex")

    @classmethod
    def from_bytes(cls, data: bytes) -> 'KeyMaterial':
        return cls(tuple(BitUtils.bytes_to_bits(data)), "hex")

    def to_hex(self) -> str:
        return BitUtils.bits_to_hex(self.bits)

    @property
    def key_id(self) -> str:
        return f"{self.source}:{self.to_hex()}"


@dataclass(frozen=True)
class ClockSequence:
    """クロック値 c_k の列（各値は 1..4）"""
    values: Tuple[int, ...]

    def __post_init__(self):
        for v in self.values:
            if v not in (1, 2, 3, 4):
                raise InvalidSpecError(f"clock value {v} outside 1..4")

    @property
    def total_steps(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class GeneratorState:
    """生成器の状態（値オブジェクト）"""
    config: GeneratorConfig
    c_state: LfsrState
    d_state: LfsrState
    bits_emitted: int = 0


def f_c(y1: int, y2: int) -> int:
    """c_k = 2*y1 + y2 + 1"""
    return 2 * (y1 & 1) + (y2 & 1) + 1


def load_key(key: KeyMaterial,
             config: Optional[GeneratorConfig] = None) -> GeneratorState:
    """鍵ビット 1..39 を s[1..39]、40..128 を u[1..89] に載せる"""
    config = config or GeneratorConfig()
    n_c = config.lfsr_c_spec.length
    n_d = config.lfsr_d_spec.length
    if n_c + n_d != len(key.bits):
        raise BadKeyLengthError(
            f"registers need {n_c + n_d} key bits, key has {len(key.bits)}"
        )

    c_state = LfsrState.from_stages(config.lfsr_c_spec, key.bits[:n_c])
    d_state = LfsrState.from_stages(config.lfsr_d_spec, key.bits[n_c:])
    if c_state.degenerate:
        raise ZeroRegisterError("c")
    if d_state.degenerate:
        raise ZeroRegisterError("d")

    logger.debug(f"鍵をロード: {key.key_id}")
    return GeneratorState(config, c_state, d_state)


def _clock_once(config: GeneratorConfig, c_bits: int,
                d_bits: int) -> Tuple[int, int, int, int]:
    """出力ビット・クロック値・次の状態を返す"""
    z = config.output_bit(d_bits)
    y1, y2 = config.clock_positions
    c = f_c((c_bits >> (y1 - 1)) & 1, (c_bits >> (y2 - 1)) & 1)
    c_bits = config.lfsr_c_spec.step_bits(c_bits)
    d_bits = config.lfsr_d_spec.step_bits_n(d_bits, c)
    return z, c, c_bits, d_bits


def next_bit(state: GeneratorState) -> Tuple[int, GeneratorState]:
    if state.c_state.degenerate or state.d_state.degenerate:
        raise DegenerateStateError("generator has an all-zero register")
    z, _, c_bits, d_bits = _clock_once(
        state.config, state.c_state.bits, state.d_state.bits
    )
    return z, GeneratorState(
        state.config,
        LfsrState(state.c_state.spec, c_bits),
        LfsrState(state.d_state.spec, d_bits),
        state.bits_emitted + 1,
    )


class KeystreamGenerator:
    """高速な逐次生成（内部状態を int で保持）"""

    def __init__(self, state: GeneratorState):
        if state.c_state.degenerate or state.d_state.degenerate:
            raise DegenerateStateError("generator has an all-zero register")
        self.config = state.config
        self._c = state.c_state.bits
        self._d = state.d_state.bits
        self.bits_emitted = state.bits_emitted
        self.d_steps = 0

    @property
    def state(self) -> GeneratorState:
        return GeneratorState(
            self.config,
            LfsrState(self.config.lfsr_c_spec, self._c),
            LfsrState(self.config.lfsr_d_spec, self._d),
            self.bits_emitted,
        )

    def input_word(self) -> int:
        """現在の LFSR_d から取り出したフィルタ入力語"""
        return extract_bits(self._d, self.config.data_positions)

    def next_bit(self) -> int:
        z, c, self._c, self._d = _clock_once(self.config, self._c, self._d)
        self.bits_emitted += 1
        self.d_steps += c
        return z

    def next_clocked(self) -> Tuple[int, int]:
        """(出力ビット, クロック値)"""
        z, c, self._c, self._d = _clock_once(self.config, self._c, self._d)
        self.bits_emitted += 1
        self.d_steps += c
        return z, c

    def next_observation(self) -> Tuple[int, int]:
        """(フィルタ入力語, 出力ビット)"""
        word = self.input_word()
        return word, self.next_bit()

    def take(self, n: int) -> List[int]:
        return [self.next_bit() for _ in range(n)]

    def __iter__(self) -> Iterator[int]:
        while True:
            yield self.next_bit()


def keystream(key: KeyMaterial, n: int,
              config: Optional[GeneratorConfig] = None) -> List[int]:
    if n < 1:
        raise InvalidSpecError(f"keystream length must be >= 1, got {n}")
    return KeystreamGenerator(load_key(key, config)).take(n)


def clock_sequence(key: KeyMaterial, n: int,
                   config: Optional[GeneratorConfig] = None) -> ClockSequence:
    generator = KeystreamGenerator(load_key(key, config))
    return ClockSequence(tuple(generator.next_clocked()[1] for _ in range(n)))


def first_mismatch(key: KeyMaterial, n: int, config_a: GeneratorConfig,
                   config_b: GeneratorConfig) -> Optional[int]:
    """2つの構成のキーストリームが最初に食い違う位置（0始まり）"""
    gen_a = KeystreamGenerator(load_key(key, config_a))
    gen_b = KeystreamGenerator(load_key(key, config_b))
    for i in range(n):
        if gen_a.next_bit() != gen_b.next_bit():
            return i
    return None


def equivalence_check(key: KeyMaterial, n: int,
                      config: Optional[GeneratorConfig] = None,
                      full_state_config: Optional[GeneratorConfig] = None) -> bool:
    """10変数形 (A) と全段形 (B) の生成器がビット単位で一致するか"""
    if n < 1:
        raise InvalidSpecError(f"comparison length must be >= 1, got {n}")
    config_a = config or GeneratorConfig()
    config_b = full_state_config or config_a.full_state()
    mismatch = first_mismatch(key, n, config_a, config_b)
    if mismatch is not None:
        logger.warning(f"キーストリームが位置 {mismatch} で不一致")
    return mismatch is None


@dataclass(frozen=True)
class ObservationSet:
    """(フィルタ入力語, 出力ビット) の観測列"""
    pairs: Tuple[Tuple[int, int], ...]
    key_id: str = ""
    width: int = presets.FILTER_VARIABLES

    def __post_init__(self):
        pairs = tuple((int(w), int(b)) for w, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        limit = 1 << self.width
        for word, bit in self.pairs:
            if not 0 <= word < limit:
                raise WidthMismatchError(
                    f"observed word {word} wider than {self.width} bits"
                )
            if bit not in (0, 1):
                raise InvalidSpecError(f"observed bit {bit} is not 0/1")

    def __len__(self) -> int:
        return len(self.pairs)

    def prefix(self, n: int) -> 'ObservationSet':
        return ObservationSet(self.pairs[:n], self.key_id, self.width)


def replay(key: KeyMaterial, n: int,
           config: Optional[GeneratorConfig] = None) -> ObservationSet:
    """既知初期状態から n ビット分の (入力語, 出力ビット) を記録する"""
    if n < 1:
        raise InvalidSpecError(f"replay length must be >= 1, got {n}")
    config = config or GeneratorConfig()
    generator = KeystreamGenerator(load_key(key, config))
    pairs = tuple(generator.next_observation() for _ in range(n))
    return ObservationSet(pairs, key.key_id, len(config.data_positions))


# --- キーストリームファイル ------------------------------------------------

FORMAT_HEX = "hex"
FORMAT_BITS = "bits"


def format_keystream(bits: Sequence[int], fmt: str = FORMAT_HEX) -> str:
    if fmt == FORMAT_HEX:
        return BitUtils.bits_to_hex(bits)
    if fmt == FORMAT_BITS:
        return BitUtils.bits_to_text(bits)
    raise KeystreamFormatError(f"unknown keystream format {fmt!r}")


def parse_keystream(text: str, fmt: str = FORMAT_HEX) -> List[int]:
    """'#' 行はコメント。'# bits=N' があれば長さを N に切り詰める"""
    count = -1
    payload = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("bits="):
                try:
                    count = int(body[len("bits="):])
                except ValueError as e:
                    raise KeystreamFormatError(
                        f"bad bit count line {stripped!r}"
                    ) from e
            continue
        payload.append(stripped)
    data = "".join(payload)

    try:
        if fmt == FORMAT_HEX:
            bits = BitUtils.hex_to_bits(data, count)
        elif fmt == FORMAT_BITS:
            bits = BitUtils.text_to_bits(data)
            bits = bits if count < 0 else bits[:count]
        else:
            raise KeystreamFormatError(f"unknown keystream format {fmt!r}")
    except ValueError as e:
        raise KeystreamFormatError(f"malformed {fmt} keystream: {e}") from e

    if count >= 0 and len(bits) < count:
        raise KeystreamFormatError(
            f"header declares {count} bits, data holds {len(bits)}"
        )
    if not bits:
        raise KeystreamFormatError("keystream holds no data bits")
    return bits


def read_keystream_file(path: Union[str, Path], fmt: str = FORMAT_HEX) -> List[int]:
    return parse_keystream(Path(path).read_text(encoding="utf-8"), fmt)


def render_keystream_file(bits: Sequence[int], fmt: str = FORMAT_HEX) -> str:
    """'# bits=N' 行 + 本体"""
    return f"# bits={len(bits)}\n{format_keystream(bits, fmt)}\n"


def write_keystream_file(path: Union[str, Path], bits: Sequence[int],
                         fmt: str = FORMAT_HEX):
    Path(path).write_text(render_keystream_file(bits, fmt), encoding="utf-8")
