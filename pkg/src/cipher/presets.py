"""
LILI-128 の公開定数
"""

from typing import FrozenSet, Tuple

# 帰還多項式の指数集合
G_C_EXPONENTS: FrozenSet[int] = frozenset({39, 35, 33, 31, 17, 15, 14, 2, 0})
G_D_EXPONENTS: FrozenSet[int] = frozenset({89, 83, 80, 55, 53, 42, 39, 1, 0})

# ビット単位の帰還式（ステージ番号は1始まり）
LFSR_C_LENGTH = 39
LFSR_C_TAPS: FrozenSet[int] = frozenset({38, 26, 25, 23, 9, 7, 5, 1})
LFSR_D_LENGTH = 89
LFSR_D_TAPS: FrozenSet[int] = frozenset({89, 51, 48, 37, 35, 10, 7, 1})

# フィルタ入力位置：完全差集合 (0,1,3,7,12,20,30,44,65,80) を1始まりにずらしたもの
DIFFERENCE_SET: Tuple[int, ...] = (0, 1, 3, 7, 12, 20, 30, 44, 65, 80)
DATA_POSITIONS: Tuple[int, ...] = tuple(p + 1 for p in DIFFERENCE_SET)

# クロック制御入力 (y1, y2)。公開式が空欄のため設定で差し替え可能
CLOCK_POSITIONS: Tuple[int, int] = (13, 21)

FILTER_VARIABLES = 10
KEY_BITS = 128

# f_d（10変数形）
FILTER_ANF_TEXT = (
    "x5 + x4 + x3 + x2"
    " + x10*x6 + x10*x4 + x9*x3 + x9*x1 + x8*x2 + x8*x1 + x7*x6"
    " + x10*x9*x5 + x10*x9*x4 + x10*x9*x3 + x10*x9*x2 + x10*x8*x4 + x10*x8*x3"
    " + x10*x7*x6 + x10*x7*x5 + x10*x7*x4 + x9*x8*x6 + x9*x8*x3 + x9*x7*x6"
    " + x9*x7*x4 + x9*x7*x3"
    " + x10*x9*x8*x6 + x10*x9*x8*x4 + x10*x9*x8*x3 + x10*x9*x8*x1"
    " + x10*x9*x7*x6 + x10*x9*x7*x4 + x10*x9*x7*x2 + x10*x8*x7*x5"
    " + x10*x8*x7*x3 + x9*x8*x7*x4 + x9*x8*x7*x2 + x9*x7*x6*x5 + x9*x7*x6*x4"
    " + x10*x9*x8*x7*x4 + x10*x9*x8*x7*x3 + x10*x9*x7*x6*x5 + x10*x9*x7*x6*x4"
    " + x9*x8*x7*x6*x5 + x9*x8*x7*x6*x4"
    " + x10*x9*x8*x7*x6*x5 + x10*x9*x8*x7*x6*x4"
)

# f_d（LFSR_d 全89段に直接作用する形）
FULL_STATE_FILTER_ANF_TEXT = (
    "X13 + X8 + X4 + X2 + X81*X21 + X81*X8 + X66*X4 + X66*X1 + X45*X2 + X45*X1"
    " + X31*X21 + X81*X66*X13 + X81*X66*X8 + X81*X66*X4 + X81*X66*X2 + X81*X45*X8"
    " + X81*X45*X4 + X81*X31*X21 + X81*X31*X13 + X81*X31*X8 + X66*X45*X21"
    " + X66*X45*X4 + X66*X31*X21 + X66*X31*X8 + X66*X31*X4 + X81*X66*X45*X21"
    " + X81*X66*X45*X8 + X81*X66*X45*X4 + X81*X66*X45*X1 + X81*X66*X31*X21"
    " + X81*X66*X31*X8 + X81*X66*X31*X2 + X81*X45*X31*X13 + X81*X45*X31*X4"
    " + X66*X45*X31*X8 + X66*X45*X31*X2 + X66*X31*X21*X13 + X66*X31*X21*X8"
    " + X81*X66*X45*X31*X8 + X81*X66*X45*X31*X4 + X81*X66*X31*X21*X13"
    " + X81*X66*X31*X21*X8 + X66*X45*X31*X21*X13 + X66*X45*X31*X21*X8"
    " + X81*X66*X45*X31*X21*X13 + X81*X66*X45*X31*X21*X8"
)

FILTER_TERM_COUNT = 46
FILTER_DEGREE_PROFILE = {1: 4, 2: 7, 3: 14, 4: 13, 5: 6, 6: 2}

# 検証に使われた初期値。2番目は原文で17文字だが、16文字に揃えている
VERIFICATION_KEYS: Tuple[str, ...] = (
    "yyyyyyyyyyyyyyyy",
    "gggggggggggggggg",
    "123456789abcdefg",
)
PRINTED_SECOND_KEY = "ggggggggggggggggg"

# 2^39-1 = 7 * 79 * 8191 * 121369
MERSENNE_39_FACTORS: Tuple[int, ...] = (7, 79, 8191, 121369)

# 再構成に必要なビット量の目安 2^12 ~ 2^13
REFERENCE_BITS_RANGE: Tuple[int, int] = (1 << 12, 1 << 13)
