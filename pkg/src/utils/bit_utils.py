"""
ビット列関連のユーティリティ
"""

from typing import Iterable, List, Sequence, Tuple

from bitarray import bitarray


class BitUtils:
    """ビット列・ワード変換のユーティリティ"""

    @staticmethod
    def bits_to_hex(bits: Sequence[int]) -> str:
        """ビット列を MSB ファーストでバイトに詰め、小文字16進で返す（端数は0埋め）"""
        packed = bitarray(list(bits), endian='big')
        return packed.tobytes().hex()

    @staticmethod
    def hex_to_bits(text: str, count: int = -1) -> List[int]:
        """16進文字列をビット列に戻す（count 指定時はその長さに切り詰め）"""
        unpacked = bitarray(endian='big')
        unpacked.frombytes(bytes.fromhex(text))
        bits = unpacked.tolist()
        return bits if count < 0 else bits[:count]

    @staticmethod
    def bits_to_text(bits: Iterable[int]) -> str:
        """'0'/'1' 文字列に変換"""
        return "".join("1" if bit else "0" for bit in bits)

    @staticmethod
    def text_to_bits(text: str) -> List[int]:
        """'0'/'1' 文字列をビット列に変換"""
        return bitarray(text).tolist()

    @staticmethod
    def bytes_to_bits(data: bytes) -> List[int]:
        """各バイトを MSB ファーストで展開"""
        unpacked = bitarray(endian='big')
        unpacked.frombytes(data)
        return unpacked.tolist()

    @staticmethod
    def word_to_binary(word: int, width: int) -> str:
        """ワードを2進表記に（x1 = LSB が右端）"""
        return format(word, f"0{width}b")

    @staticmethod
    def parse_positions(text: str) -> Tuple[int, ...]:
        """'1,2,4,8' 形式の位置リストを解析"""
        return tuple(int(part) for part in text.replace(" ", "").split(",") if part)

    @staticmethod
    def format_positions(positions: Iterable[int]) -> str:
        return ",".join(str(p) for p in positions)
