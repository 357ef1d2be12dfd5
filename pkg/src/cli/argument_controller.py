"""
コマンドライン引数の定義と解釈
"""

import argparse
from typing import List, Optional

from ..cipher import presets
from ..cipher.boolfn import read_anf_file
from ..cipher.lili import FORMAT_BITS, FORMAT_HEX, GeneratorConfig, KeyMaterial
from ..core.exceptions import UsageError
from ..utils.bit_utils import BitUtils

PROG = "lili-workbench"


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {value}")
    return value

def position_list(text: str):
    try:
        positions = BitUtils.parse_positions(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        )
    if not positions:
        raise argparse.ArgumentTypeError("position list is empty")
    return positions


class ArgumentController:
    """サブコマンドと共通フラグを定義する"""

    def __init__(self):
        self.parser = self._build_parser()

    def parse(self, argv: Optional[List[str]] = None) -> argparse.Namespace:
        return self.parser.parse_args(argv)

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog=PROG,
            description=(
                "LILI-128 keystream generator and filter-reconstruction workbench"
            ),
        )
        parser.add_argument("-v", "--verbose", action="store_true",
                            help="debug logging")
        parser.add_argument("-q", "--quiet", action="store_true",
                            help="warnings and errors only")
        sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

        keystream = sub.add_parser("keystream", help="generate keystream bits")
        self._add_key_flags(keystream)
        self._add_config_flags(keystream)
        keystream.add_argument("--bits", type=positive_int, required=True,
                               help="number of bits")
        self._add_format_flag(keystream)
        keystream.add_argument("--out",
                               help="write the keystream file here instead of stdout")
        keystream.add_argument("--dump-state", action="store_true",
                               help="print the loaded register states")

        verify = sub.add_parser(
            "verify-equivalence",
            help="compare the 10-variable and full-state filter generators",
        )
        self._add_key_flags(verify)
        self._add_config_flags(verify)
        verify.add_argument("--bits", type=positive_int, help="bits to compare")
        verify.add_argument("--full-state-filter-file",
                            help="89-variable ANF file for the full-state generator")

        reconstruct = sub.add_parser("reconstruct",
                                     help="recover the filter ANF from a known key")
        self._add_key_flags(reconstruct)
        self._add_config_flags(reconstruct)
        reconstruct.add_argument("--budget", type=positive_int,
                                 help="keystream bits to use (default 8192)")
        reconstruct.add_argument(
            "--keystream-file",
            help="pair an external keystream with the replayed inputs",
        )
        self._add_format_flag(reconstruct)
        reconstruct.add_argument("--anf-out", help="write the recovered ANF file here")
        reconstruct.add_argument("--observations-out",
                                 help="write the observation pairs here")

        min_bits = sub.add_parser(
            "min-bits", help="bits needed for full input coverage over random keys"
        )
        self._add_config_flags(min_bits)
        min_bits.add_argument("--trials", type=positive_int, default=100)
        min_bits.add_argument("--seed", type=int, required=True)
        min_bits.add_argument("--workers", type=positive_int)
        min_bits.add_argument("--budget", type=positive_int,
                              help="per-trial bit budget")

        polycheck = sub.add_parser(
            "polycheck", help="irreducibility and primitivity of a GF(2) polynomial"
        )
        source = polycheck.add_mutually_exclusive_group(required=True)
        source.add_argument("--poly", help="polynomial text, e.g. 'x^39+x^35+...+1'")
        source.add_argument("--poly-file", help="file holding the polynomial text")
        source.add_argument("--preset", choices=["c", "d"], help="G_c or G_d")
        polycheck.add_argument("--require-primitive", action="store_true",
                               help="exit 1 unless the polynomial is primitive")

        boolfn = sub.add_parser("boolfn", help="metrics of a Boolean function in ANF")
        anf_source = boolfn.add_mutually_exclusive_group(required=True)
        anf_source.add_argument("--anf-file", help="ANF file ('# n=...' header)")
        anf_source.add_argument("--anf", help="ANF text")
        boolfn.add_argument("--variables", type=positive_int,
                            help="variable count (required with --anf)")

        stats = sub.add_parser("stats", help="statistical tests on a keystream file")
        stats.add_argument("--keystream-file", required=True)
        self._add_format_flag(stats)
        stats.add_argument("--alpha", type=probability)
        stats.add_argument("--block-size", type=positive_int)
        stats.add_argument("--complexity-prefix", type=positive_int, default=1 << 14,
                           help="prefix length for the linear-complexity band")

        return parser

    @staticmethod
    def _add_key_flags(parser: argparse.ArgumentParser):
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--key-ascii", help="16 ASCII characters")
        group.add_argument("--key-hex", help="32 hex digits")

    @staticmethod
    def _add_config_flags(parser: argparse.ArgumentParser):
        parser.add_argument("--clock-positions", type=position_list,
                            help="LFSR_c stages feeding f_c (default 13,21)")
        parser.add_argument(
            "--data-positions", type=position_list,
            help="LFSR_d stages feeding f_d (default 1,2,4,8,13,21,31,45,66,81)",
        )
        parser.add_argument("--filter-file",
                            help="filter ANF file over the data positions")

    @staticmethod
    def _add_format_flag(parser: argparse.ArgumentParser):
        parser.add_argument("--format", choices=[FORMAT_HEX, FORMAT_BITS],
                            default=FORMAT_HEX, help="keystream file format")


def key_from_args(args: argparse.Namespace) -> KeyMaterial:
    if getattr(args, "key_ascii", None) is not None:
        return KeyMaterial.from_ascii(args.key_ascii)
    if getattr(args, "key_hex", None) is not None:
        return KeyMaterial.from_hex(args.key_hex)
    raise UsageError("a key is required (--key-ascii or --key-hex)")


def generator_config_from_args(args: argparse.Namespace) -> GeneratorConfig:
    """構成フラグを既定値に重ねる"""
    clock_positions = getattr(args, "clock_positions", None) or presets.CLOCK_POSITIONS
    data_positions = getattr(args, "data_positions", None) or presets.DATA_POSITIONS
    filter_file = getattr(args, "filter_file", None)
    if filter_file:
        return GeneratorConfig(
            clock_positions=clock_positions,
            data_positions=data_positions,
            filter=read_anf_file(filter_file, len(data_positions)),
        )
    return GeneratorConfig(clock_positions=clock_positions,
                           data_positions=data_positions)
