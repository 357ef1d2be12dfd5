"""
ブール関数の代数

単項式は n ビットのマスク（ビット i-1 が変数 x_i）で表し、ANF は単項式集合の XOR 和とする。
真理値表の添字は Σ x_i·2^(i-1)（x_1 が LSB）で、全モジュールでこの符号化を共有する。
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ..core.exceptions import (
    AnfSyntaxError,
    DataFormatError,
    IncompleteTableError,
    NonInjectiveMapError,
    TargetOutOfRangeError,
    TooManyVariablesError,
    VariableOutOfRangeError,
    WidthMismatchError,
)

MAX_TABLE_VARIABLES = 24

Monomial = int


def monomial_variables(mask: Monomial) -> Tuple[int, ...]:
    """単項式に含まれる変数番号（降順）"""
    return tuple(i + 1 for i in range(mask.bit_length() - 1, -1, -1) if (mask >> i) & 1)


def monomial_from_variables(variables: Iterable[int]) -> Monomial:
    mask = 0
    for v in variables:
        mask |= 1 << (v - 1)
    return mask


@dataclass(frozen=True)
class AnfPolynomial:
    """代数的標準形（GF(2) 係数の単項式集合）"""
    n: int
    monomials: FrozenSet[Monomial] = frozenset()

    def __post_init__(self):
        limit = 1 << self.n
        for m in self.monomials:
            if not 0 <= m < limit:
                raise VariableOutOfRangeError(m.bit_length(), self.n)

    @property
    def degree(self) -> int:
        """次数（零関数は 0）"""
        return max((bin(m).count("1") for m in self.monomials), default=0)

    @property
    def term_count(self) -> int:
        return len(self.monomials)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def degree_profile(self) -> Dict[int, int]:
        profile: Dict[int, int] = {}
        for m in self.monomials:
            d = bin(m).count("1")
            profile[d] = profile.get(d, 0) + 1
        return dict(sorted(profile.items()))

    def __str__(self) -> str:
        return print_anf(self)


@dataclass(eq=False)
class TruthTable:
    """真理値表（部分表も可。defined が既知の入力を示す）"""
    n: int
    outputs: np.ndarray
    defined: np.ndarray
    conflicts: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def empty(cls, n: int) -> 'TruthTable':
        size = 1 << n
        return cls(n, np.zeros(size, dtype=np.uint8), np.zeros(size, dtype=bool))

    @classmethod
    def complete(cls, n: int, outputs: Sequence[int]) -> 'TruthTable':
        values = np.asarray(outputs, dtype=np.uint8) & 1
        if values.size != 1 << n:
            raise WidthMismatchError(f"expected {1 << n} outputs, got {values.size}")
        return cls(n, values.copy(), np.ones(values.size, dtype=bool))

    @property
    def is_complete(self) -> bool:
        return bool(self.defined.all())

    @property
    def defined_count(self) -> int:
        return int(self.defined.sum())

    def missing_words(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(~self.defined)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.outputs, other.outputs)
            and np.array_equal(self.defined, other.defined)
            and self.conflicts == other.conflicts
        )


@dataclass(frozen=True)
class WalshSpectrum:
    """Walsh 係数 W(a) = Σ_x (-1)^(f(x) ⊕ a·x)"""
    n: int
    coefficients: np.ndarray

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.coefficients).max())

    def satisfies_parseval(self) -> bool:
        energy = int(np.square(self.coefficients.astype(np.int64)).sum())
        return energy == 1 << (2 * self.n)


class FunctionMetrics(BaseModel):
    """ブール関数の指標"""
    n: int = Field(description="変数の数")
    degree: int = Field(description="代数次数（零関数は 0）")
    term_count: int = Field(description="ANF の項数")
    is_zero: bool = Field(description="零関数かどうか")
    weight: int = Field(description="真理値表の 1 の個数")
    is_balanced: bool = Field(description="weight = 2^(n-1)")
    nonlinearity: int = Field(description="2^(n-1) - max|W|/2")
    degree_profile: Dict[int, int] = Field(default_factory=dict, description="次数ごとの項数")


# --- 構文解析・出力 --------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<var>[xX]\^?\{?(?P<index>\d+)\}?)|(?P<lit>[01])|(?P<op>[+*]))"
)


def parse_anf(text: str, n: int) -> AnfPolynomial:
    """ANF テキストを解析する

    文法: 項を '+' で、因子を '*' で結ぶ。因子は x<k>（x^k, X^{k} も可）または 0/1。
    同じ項内の重複変数は1つにまとまり、重複した項は対で打ち消し合う。
    """
    monomials: set = set()
    pos = 0
    end = len(text.rstrip())
    if not text.strip():
        raise AnfSyntaxError("empty expression", 0)

    while True:
        # 1項を読む
        term: Optional[int] = 0
        while True:
            match = _TOKEN.match(text, pos)
            if not match or match.group("op"):
                at = match.start("op") if match else pos
                raise AnfSyntaxError("expected a variable or literal", at)
            if match.group("var"):
                k = int(match.group("index"))
                if not 1 <= k <= n:
                    raise VariableOutOfRangeError(k, n)
                if term is not None:
                    term |= 1 << (k - 1)
            elif match.group("lit") == "0":
                term = None
            pos = match.end()

            nxt = _TOKEN.match(text, pos)
            if nxt and nxt.group("op") == "*":
                pos = nxt.end()
                continue
            break

        if term is not None:
            monomials ^= {term}

        if pos >= end:
            break
        nxt = _TOKEN.match(text, pos)
        if not nxt or nxt.group("op") != "+":
            raise AnfSyntaxError("expected '+'", len(text) - len(text[pos:].lstrip()))
        pos = nxt.end()
        if pos >= end:
            raise AnfSyntaxError("dangling '+'", pos)

    return AnfPolynomial(n, frozenset(monomials))


def _canonical_key(mask: Monomial) -> Tuple[int, Tuple[int, ...]]:
    variables = monomial_variables(mask)
    return len(variables), tuple(-v for v in variables)


def sorted_monomials(f: AnfPolynomial) -> List[Monomial]:
    """次数の昇順、同次数内は変数番号の降順辞書式"""
    return sorted(f.monomials, key=_canonical_key)


def format_monomial(mask: Monomial) -> str:
    if mask == 0:
        return "1"
    return "*".join(f"x{v}" for v in monomial_variables(mask))


def print_anf(f: AnfPolynomial) -> str:
    """標準形テキスト"""
    if f.is_zero:
        return "0"
    return " + ".join(format_monomial(m) for m in sorted_monomials(f))


# --- 評価・変換 ------------------------------------------------------------

def _input_word(f: AnfPolynomial, assignment: Union[int, Sequence[int]]) -> int:
    if isinstance(assignment, (int, np.integer)):
        word = int(assignment)
        if not 0 <= word < 1 << f.n:
            raise WidthMismatchError(f"input word {word} wider than {f.n} bits")
        return word
    if len(assignment) != f.n:
        raise WidthMismatchError(f"expected {f.n} input bits, got {len(assignment)}")
    return sum((1 << i) for i, bit in enumerate(assignment) if bit)


def evaluate(f: AnfPolynomial, assignment: Union[int, Sequence[int]]) -> int:
    """単項式ごとの AND を XOR する"""
    word = _input_word(f, assignment)
    bit = 0
    for m in f.monomials:
        if word & m == m:
            bit ^= 1
    return bit


def _check_table_size(n: int):
    if n > MAX_TABLE_VARIABLES:
        raise TooManyVariablesError(
            f"{n} variables exceed the {MAX_TABLE_VARIABLES}-variable table limit"
        )


def _mobius(values: np.ndarray, n: int) -> np.ndarray:
    """GF(2) 上の Möbius 変換（自己逆）"""
    a = values.astype(np.uint8, copy=True)
    for i in range(n):
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] ^= view[:, 0, :]
    return a


def anf_to_truth_table(f: AnfPolynomial) -> TruthTable:
    _check_table_size(f.n)
    coefficients = np.zeros(1 << f.n, dtype=np.uint8)
    if f.monomials:
        coefficients[list(f.monomials)] = 1
    return TruthTable.complete(f.n, _mobius(coefficients, f.n))


def truth_table_to_anf(t: TruthTable) -> AnfPolynomial:
    _check_table_size(t.n)
    if not t.is_complete:
        raise IncompleteTableError(int((~t.defined).sum()))
    coefficients = _mobius(t.outputs, t.n)
    return AnfPolynomial(t.n, frozenset(int(i) for i in np.flatnonzero(coefficients)))


def walsh_spectrum(t: TruthTable) -> WalshSpectrum:
    """高速 Walsh–Hadamard 変換"""
    if not t.is_complete:
        raise IncompleteTableError(int((~t.defined).sum()))
    w = 1 - 2 * t.outputs.astype(np.int64)
    for i in range(t.n):
        view = w.reshape(-1, 2, 1 << i)
        upper = view[:, 0, :].copy()
        lower = view[:, 1, :]
        view[:, 0, :] = upper + lower
        view[:, 1, :] = upper - lower
    return WalshSpectrum(t.n, w)


def relabel(f: AnfPolynomial, mapping: Sequence[int],
            m: Optional[int] = None) -> AnfPolynomial:
    """変数 x_j を x_mapping[j] に置き換える（mapping は1始まりの単射）"""
    if len(mapping) != f.n:
        raise WidthMismatchError(f"map has {len(mapping)} entries for {f.n} variables")
    if len(set(mapping)) != len(mapping):
        raise NonInjectiveMapError(f"map {tuple(mapping)} is not injective")
    target = max(mapping, default=f.n) if m is None else m
    for t in mapping:
        if not 1 <= t <= target:
            raise TargetOutOfRangeError(f"target {t} outside 1..{target}")

    relabeled = set()
    for mono in f.monomials:
        targets = (mapping[v - 1] for v in monomial_variables(mono))
        relabeled.add(monomial_from_variables(targets))
    return AnfPolynomial(target, frozenset(relabeled))


def metrics(f: AnfPolynomial) -> FunctionMetrics:
    """次数・項数・重み・均衡性・非線形性"""
    table = anf_to_truth_table(f)
    spectrum = walsh_spectrum(table)
    weight = int(table.outputs.sum())
    half = 1 << (f.n - 1) if f.n else 0
    return FunctionMetrics(
        n=f.n,
        degree=f.degree,
        term_count=f.term_count,
        is_zero=f.is_zero,
        weight=weight,
        is_balanced=f.n > 0 and weight == half,
        nonlinearity=half - spectrum.max_abs // 2,
        degree_profile=f.degree_profile(),
    )


# --- ファイル入出力 --------------------------------------------------------

_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)")


def read_anf_file(path: Union[str, Path], n: Optional[int] = None) -> AnfPolynomial:
    """ANF ファイル（先頭行に '# n=10' 形式のコメント可）を読む"""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    declared = None
    if lines and lines[0].lstrip().startswith("#"):
        header = _HEADER.search(lines[0])
        if header:
            declared = int(header.group(1))
        lines = lines[1:]
    variables = n if n is not None else declared
    if variables is None:
        raise DataFormatError(
            f"{path}: variable count missing (add '# n=...' or pass n)"
        )
    return parse_anf(" ".join(line.strip() for line in lines), variables)


def write_anf_file(path: Union[str, Path], f: AnfPolynomial):
    Path(path).write_text(f"# n={f.n}\n{print_anf(f)}\n", encoding="utf-8")
