"""
GF(2) 上の多項式演算

係数は Python の int をビット集合として保持する（ビット i が x^i の係数）。
既約性・原始性判定、96ビットまでの素因数分解、Berlekamp–Massey を提供する。
"""

import re
from dataclasses import dataclass
from functools import reduce
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import gmpy2

from ..core.exceptions import (
    DuplicateExponentError,
    EmptyExponentSetError,
    EmptyInputError,
    FactorTargetError,
    InvalidExponentError,
    NotIrreducibleError,
    PolynomialSyntaxError,
    UsageError,
    WrongFactorTargetError,
)
from ..utils.logging_config import logger

MAX_FACTOR_BITS = 96

# 最初の13個の素数を底とする Miller–Rabin は n < 3.317e24 で決定的
_MR_BASES: Tuple[int, ...] = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981
_TRIAL_DIVISION_LIMIT = 1 << 16


@dataclass(frozen=True)
class FeedbackPolynomial:
    """GF(2)[x] の多項式（係数ビット集合）"""
    coefficients: int

    def __post_init__(self):
        if self.coefficients < 0:
            raise InvalidExponentError("coefficient bitset must be non-negative")

    @property
    def exponents(self) -> FrozenSet[int]:
        bits = self.coefficients
        return frozenset(i for i in range(bits.bit_length()) if (bits >> i) & 1)

    @property
    def degree(self) -> int:
        """次数（零多項式は -1）"""
        return self.coefficients.bit_length() - 1

    @property
    def is_zero(self) -> bool:
        return self.coefficients == 0

    @property
    def has_constant_term(self) -> bool:
        return bool(self.coefficients & 1)

    def reciprocal(self) -> 'FeedbackPolynomial':
        """相反多項式 x^N f(1/x)"""
        n = self.degree
        return FeedbackPolynomial(
            sum(1 << (n - e) for e in self.exponents)
        )

    def require_feedback(self) -> 'FeedbackPolynomial':
        """LFSR の帰還多項式として使えることを確認"""
        if self.degree < 1:
            raise InvalidExponentError("feedback polynomial needs degree >= 1")
        if not self.has_constant_term:
            raise InvalidExponentError("feedback polynomial needs constant term 1")
        return self

    def __str__(self) -> str:
        return format_polynomial(self)


@dataclass(frozen=True)
class FactorSet:
    """正整数の素因数分解（重複あり）"""
    value: int
    primes: Tuple[int, ...]

    def __post_init__(self):
        if self.value < 1:
            raise FactorTargetError("factored value must be positive")
        product = reduce(lambda a, b: a * b, self.primes, 1)
        if product != self.value:
            raise FactorTargetError(f"factors multiply to {product}, not {self.value}")
        for p in self.primes:
            if not is_probable_prime(p):
                raise FactorTargetError(f"listed factor {p} is not prime")

    @property
    def distinct_primes(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.primes)))

    def __str__(self) -> str:
        return " * ".join(str(p) for p in self.primes) if self.primes else "1"


@dataclass(frozen=True)
class LinearComplexityProfile:
    """線形複雑度プロファイル"""
    complexities: Tuple[int, ...]
    final_connection: FeedbackPolynomial

    def __post_init__(self):
        previous = 0
        for i, value in enumerate(self.complexities, start=1):
            if value < previous or not 0 <= value <= i:
                raise UsageError(f"invalid complexity {value} at prefix length {i}")
            previous = value

    @property
    def linear_complexity(self) -> int:
        return self.complexities[-1] if self.complexities else 0


# --- 構築・入出力 ----------------------------------------------------------

def poly_from_exponents(exps: Iterable[int]) -> FeedbackPolynomial:
    """指数集合から多項式を構築"""
    exponents = list(exps)
    if not exponents:
        raise EmptyExponentSetError("exponent set is empty")

    bits = 0
    for e in exponents:
        if e < 0:
            raise InvalidExponentError(f"negative exponent {e}")
        if (bits >> e) & 1:
            raise DuplicateExponentError(e)
        bits |= 1 << e
    return FeedbackPolynomial(bits)


def format_polynomial(f: FeedbackPolynomial) -> str:
    """標準形 'x^39+x^35+...+x^2+1' で出力"""
    if f.is_zero:
        return "0"
    terms = []
    for e in sorted(f.exponents, reverse=True):
        if e == 0:
            terms.append("1")
        elif e == 1:
            terms.append("x")
        else:
            terms.append(f"x^{e}")
    return "+".join(terms)


_TERM_PATTERN = re.compile(r"x(?:\^\{?(\d+)\}?)?|(\d+)", re.IGNORECASE)


def parse_polynomial(text: str) -> FeedbackPolynomial:
    """多項式テキストを解析（項の順序・空白は自由）"""
    exponents: List[int] = []
    pos = 0
    stripped = text.strip()
    if not stripped:
        raise PolynomialSyntaxError("empty polynomial", 0)

    expect_term = True
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if expect_term:
            match = _TERM_PATTERN.match(text, pos)
            if not match:
                raise PolynomialSyntaxError(f"unexpected {ch!r}", pos)
            if match.group(2) is not None:
                constant = int(match.group(2))
                if constant not in (0, 1):
                    raise PolynomialSyntaxError(
                        f"coefficient {constant} is not in GF(2)", pos
                    )
                if constant == 1:
                    exponents.append(0)
            else:
                exponents.append(int(match.group(1)) if match.group(1) else 1)
            pos = match.end()
            expect_term = False
        else:
            if ch != "+":
                raise PolynomialSyntaxError(f"expected '+' but found {ch!r}", pos)
            pos += 1
            expect_term = True

    if expect_term:
        raise PolynomialSyntaxError("dangling '+'", len(text))
    if not exponents:
        return FeedbackPolynomial(0)
    return poly_from_exponents(exponents)


# --- 基本演算 --------------------------------------------------------------

def _clmul(a: int, b: int) -> int:
    """繰り上がりなし乗算"""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return _mod(_clmul(a, b), m)


def _powmod(base: int, exponent: int, m: int) -> int:
    result = _mod(1, m)
    base = _mod(base, m)
    while exponent:
        if exponent & 1:
            result = _mulmod(result, base, m)
        base = _mulmod(base, base, m)
        exponent >>= 1
    return result


def _x_pow_2k(k: int, m: int) -> int:
    """x^(2^k) mod m を k 回の二乗で計算"""
    value = _mod(0b10, m)
    for _ in range(k):
        value = _mulmod(value, value, m)
    return value


def polymul_mod(a: FeedbackPolynomial, b: FeedbackPolynomial,
                m: FeedbackPolynomial) -> FeedbackPolynomial:
    """(a*b) mod m"""
    if m.degree < 1:
        raise UsageError("modulus must have degree >= 1")
    return FeedbackPolynomial(_mulmod(a.coefficients, b.coefficients, m.coefficients))


def poly_mod(a: FeedbackPolynomial, m: FeedbackPolynomial) -> FeedbackPolynomial:
    if m.degree < 1:
        raise UsageError("modulus must have degree >= 1")
    return FeedbackPolynomial(_mod(a.coefficients, m.coefficients))


def poly_gcd(a: FeedbackPolynomial, b: FeedbackPolynomial) -> FeedbackPolynomial:
    return FeedbackPolynomial(_gcd(a.coefficients, b.coefficients))


# --- 既約性・原始性 --------------------------------------------------------

def is_irreducible(f: FeedbackPolynomial) -> bool:
    """Rabin の判定: x^(2^n) ≡ x かつ各素数 p|n で gcd(x^(2^(n/p)) - x, f) = 1"""
    n = f.degree
    if n < 1:
        raise UsageError("irreducibility needs degree >= 1")
    m = f.coefficients
    x = _mod(0b10, m)

    if _x_pow_2k(n, m) != x:
        return False
    if n == 1:
        return True
    for p in factorize(n).distinct_primes:
        if _gcd(_x_pow_2k(n // p, m) ^ x, m) != 1:
            return False
    return True


def is_primitive(f: FeedbackPolynomial, factors: Optional[FactorSet] = None) -> bool:
    """x mod f の位数が 2^n - 1 であるか"""
    if not is_irreducible(f):
        raise NotIrreducibleError(f"{format_polynomial(f)} is reducible")

    n = f.degree
    order = (1 << n) - 1
    if factors is None:
        factors = factorize(order) if order > 1 else FactorSet(1, ())
    if factors.value != order:
        raise WrongFactorTargetError(
            f"factors describe {factors.value}, expected 2^{n}-1 = {order}"
        )

    m = f.coefficients
    if _powmod(0b10, order, m) != 1:
        return False
    for p in factors.distinct_primes:
        if _powmod(0b10, order // p, m) == 1:
            return False
    return True


# --- 素因数分解 ------------------------------------------------------------

def is_probable_prime(n: int) -> bool:
    """96ビットまで決定的に使える素数判定"""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False

    if n >= _MR_PROVEN_BOUND:
        return bool(gmpy2.is_strong_bpsw_prp(n))
    return True


def _pollard_rho(n: int) -> int:
    """Brent 版 Pollard rho（c = 1, 2, ... と決定的に試す）"""
    if n % 2 == 0:
        return 2
    for c in range(1, 1 << 16):
        y, r, q = 2, 1, 1
        x = ys = 2
        g = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = int(gmpy2.gcd(q, n))
                k += 128
            r *= 2
        if g == n:
            # バッチ内で一気に n になった場合は1歩ずつ戻る
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = int(gmpy2.gcd(abs(x - ys), n))
        if g != n:
            return g
        logger.debug(f"Pollard rho: c={c} で失敗、次の定数で再試行")
    raise FactorTargetError(f"Pollard rho could not split {n}")


def factorize(n: int) -> FactorSet:
    """試し割り + Pollard rho による完全な素因数分解"""
    if n < 2:
        raise FactorTargetError(f"cannot factor {n}: need n >= 2")
    if n.bit_length() > MAX_FACTOR_BITS:
        raise FactorTargetError(f"{n} exceeds {MAX_FACTOR_BITS} bits")

    primes: List[int] = []
    remaining = n
    for p in (2, 3):
        while remaining % p == 0:
            primes.append(p)
            remaining //= p
    candidate = 5
    while candidate < _TRIAL_DIVISION_LIMIT and candidate * candidate <= remaining:
        for p in (candidate, candidate + 2):
            while remaining % p == 0:
                primes.append(p)
                remaining //= p
        candidate += 6

    stack = [remaining] if remaining > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            primes.append(m)
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))

    return FactorSet(value=n, primes=tuple(sorted(primes)))


# --- Berlekamp–Massey -----------------------------------------------------

def berlekamp_massey(bits: Sequence[int]) -> LinearComplexityProfile:
    """最短 LFSR の長さを各接頭辞について求める"""
    if len(bits) == 0:
        raise EmptyInputError("Berlekamp-Massey needs a non-empty sequence")

    connection = 1      # C(x)
    previous = 1        # B(x)
    length = 0
    last_change = -1
    window = 0          # ビット i = s_{n-i}
    complexities: List[int] = []

    for n, bit in enumerate(bits):
        window = (window << 1) | (1 if bit else 0)
        discrepancy = (connection & window).bit_count() & 1
        if discrepancy:
            saved = connection
            connection ^= previous << (n - last_change)
            if 2 * length <= n:
                length = n + 1 - length
                previous = saved
                last_change = n
        complexities.append(length)

    return LinearComplexityProfile(
        complexities=tuple(complexities),
        final_connection=FeedbackPolynomial(connection),
    )


def regenerate(connection: FeedbackPolynomial, length: int,
               seed: Sequence[int], count: int) -> List[int]:
    """接続多項式と先頭 length ビットから count ビットを再生成"""
    if len(seed) < length:
        raise UsageError(f"need {length} seed bits, got {len(seed)}")
    taps = [i for i in connection.exponents if 1 <= i <= length]
    out = [1 if b else 0 for b in seed[:length]]
    while len(out) < count:
        n = len(out)
        bit = 0
        for i in taps:
            bit ^= out[n - i]
        out.append(bit)
    return out[:count]
