"""
例外クラス階層

各例外は CLI の終了コードを持つ（0 成功 / 1 検証・攻撃失敗 / 2 使い方の誤り / 3 データ・形式エラー）。
"""

from typing import Iterable, List, Optional


class WorkbenchError(Exception):
    """ワークベンチ例外の基底クラス"""
    exit_code: int = 1


class UsageError(WorkbenchError, ValueError):
    """引数・前提条件の誤り"""
    exit_code = 2


class DataFormatError(WorkbenchError, ValueError):
    """入力データ・ファイル形式の誤り"""
    exit_code = 3


class VerificationFailure(WorkbenchError):
    """検証・攻撃が成立しなかった"""
    exit_code = 1


# --- gf2poly ---------------------------------------------------------------

class EmptyExponentSetError(UsageError):
    pass


class DuplicateExponentError(UsageError):
    def __init__(self, exponent: int):
        super().__init__(f"duplicate exponent {exponent}")
        self.exponent = exponent


class InvalidExponentError(UsageError):
    pass


class NotIrreducibleError(UsageError):
    pass


class WrongFactorTargetError(UsageError):
    pass


class FactorTargetError(UsageError):
    """factorize の対象が範囲外（2 未満または 96 ビット超）"""


class PolynomialSyntaxError(DataFormatError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EmptyInputError(DataFormatError):
    pass


# --- boolfn ----------------------------------------------------------------

class AnfSyntaxError(DataFormatError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class VariableOutOfRangeError(DataFormatError):
    def __init__(self, index: int, n: int):
        super().__init__(f"variable x{index} outside 1..{n}")
        self.index = index


class WidthMismatchError(UsageError):
    pass


class IncompleteTableError(DataFormatError):
    def __init__(self, missing: int):
        super().__init__(f"truth table has {missing} undefined entries")
        self.missing = missing


class NonInjectiveMapError(UsageError):
    pass


class TargetOutOfRangeError(UsageError):
    pass


class TooManyVariablesError(UsageError):
    pass


# --- lfsr ------------------------------------------------------------------

class InvalidSpecError(UsageError):
    pass


class PositionOutOfRangeError(UsageError):
    def __init__(self, position: int, length: int):
        super().__init__(f"stage {position} outside 1..{length}")
        self.position = position


class LengthMismatchError(UsageError):
    pass


# --- lili ------------------------------------------------------------------

class BadKeyLengthError(UsageError):
    pass


class ZeroRegisterError(DataFormatError):
    def __init__(self, register: str):
        super().__init__(f"key loads an all-zero LFSR_{register}")
        self.register = register


class DegenerateStateError(DataFormatError):
    pass


class KeystreamFormatError(DataFormatError):
    pass


class EquivalenceMismatch(VerificationFailure):
    def __init__(self, index: int):
        super().__init__(f"keystreams differ first at bit {index}")
        self.index = index


# --- reconstruct -----------------------------------------------------------

class UnderdeterminedError(VerificationFailure):
    def __init__(self, missing: Iterable[int], coverage: Optional[object] = None):
        self.missing: List[int] = sorted(missing)
        self.coverage = coverage
        super().__init__(f"{len(self.missing)} filter inputs never observed")


class ConflictedError(VerificationFailure):
    def __init__(self, words: Iterable[int]):
        self.words: List[int] = sorted(words)
        super().__init__(f"contradictory observations for inputs {self.words}")


class TrialBudgetExceededError(VerificationFailure):
    def __init__(self, budget: int, distinct: int):
        super().__init__(f"coverage {distinct} not complete within {budget} bits")
        self.budget = budget
        self.distinct = distinct


class ObservationFormatError(DataFormatError):
    pass


# --- stats -----------------------------------------------------------------

class TooFewBitsError(DataFormatError):
    pass


class PrecheckFailedError(VerificationFailure):
    pass
