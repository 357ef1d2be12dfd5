"""
サブコマンドのコントローラー
"""

from pathlib import Path

from ..analysis.reconstruct import (
    min_bits_experiment,
    observations_from_keystream,
    reconstruct_filter,
    write_observations,
)
from ..analysis.stats import complexity_band, run_battery
from ..cipher import presets
from ..cipher.boolfn import metrics, parse_anf, read_anf_file, write_anf_file
from ..cipher.gf2poly import (
    factorize,
    is_irreducible,
    is_primitive,
    parse_polynomial,
    poly_from_exponents,
)
from ..cipher.lfsr import format_state_dump
from ..cipher.lili import (
    FORMAT_HEX,
    KeystreamGenerator,
    first_mismatch,
    load_key,
    read_keystream_file,
    render_keystream_file,
    replay,
    write_keystream_file,
)
from ..core.exceptions import (
    TooManyVariablesError,
    UnderdeterminedError,
    UsageError,
)
from .argument_controller import generator_config_from_args, key_from_args
from .base_controller import EXIT_FAILURE, EXIT_OK, BaseCommandController

DEFAULT_RECONSTRUCT_BUDGET = 1 << 13


def _as_comments(text: str) -> str:
    return "".join(f"# {line}\n" for line in text.splitlines())


class KeystreamCommand(BaseCommandController):
    """キーストリームを生成する"""

    name = "keystream"

    def run(self) -> int:
        key = key_from_args(self.args)
        config = generator_config_from_args(self.args)
        state = load_key(key, config)

        # 本体以外はすべて '#' 行（標準出力がそのままキーストリームファイルになる）
        self.emit(self.formatter.config_summary(config))
        if self.args.dump_state:
            self.emit(_as_comments(format_state_dump([state.c_state, state.d_state])))

        bits = KeystreamGenerator(state).take(self.args.bits)
        if self.args.out:
            write_keystream_file(self.args.out, bits, self.args.format)
            self.emit(f"# written: {self.args.out} ({len(bits)} bits)")
        else:
            self.emit(render_keystream_file(bits, self.args.format))
        self.show_success(f"{len(bits)} ビットのキーストリームを生成しました")
        return EXIT_OK


class VerifyEquivalenceCommand(BaseCommandController):
    """10変数形と全段形のフィルタで同じキーストリームになるかを確認する"""

    name = "verify-equivalence"

    def run(self) -> int:
        key = key_from_args(self.args)
        config = generator_config_from_args(self.args)
        if self.args.full_state_filter_file:
            full_state_anf = read_anf_file(
                self.args.full_state_filter_file, config.lfsr_d_spec.length
            )
            full_state = config.full_state(full_state_anf)
        else:
            full_state = config.full_state()
        n = self.args.bits or self.config.equivalence_bits

        index = first_mismatch(key, n, config, full_state)
        if index is not None:
            self.emit(f"MISMATCH n={n} first-mismatch={index}")
            self.show_warning(f"位置 {index} で不一致")
            return EXIT_FAILURE

        self.emit(f"EQUIVALENT n={n}")
        return EXIT_OK


class ReconstructCommand(BaseCommandController):
    """既知の鍵からフィルタ ANF を復元する"""

    name = "reconstruct"

    def run(self) -> int:
        key = key_from_args(self.args)
        config = generator_config_from_args(self.args)

        if self.args.keystream_file:
            bits = read_keystream_file(self.args.keystream_file, self.args.format)
            if self.args.budget:
                bits = bits[: self.args.budget]
            observations = observations_from_keystream(key, bits, config)
        else:
            budget = self.args.budget or DEFAULT_RECONSTRUCT_BUDGET
            observations = replay(key, budget, config)

        if self.args.observations_out:
            write_observations(self.args.observations_out, observations)

        try:
            result = reconstruct_filter(observations)
        except UnderdeterminedError as e:
            if e.coverage is not None:
                self.emit(self.formatter.coverage(e.coverage))
            self.emit(f"UNDERDETERMINED missing={len(e.missing)}")
            self.show_warning(str(e))
            return EXIT_FAILURE

        # 既知フィルタで生成した観測なら構成と一致するはず
        matches = None if self.args.keystream_file else result.anf == config.filter
        self.emit(self.formatter.coverage(result.coverage))
        self.emit(self.formatter.reconstruction(result.anf, matches))
        if self.args.anf_out:
            write_anf_file(self.args.anf_out, result.anf)
        return EXIT_OK


class MinBitsCommand(BaseCommandController):
    """ランダム鍵ごとの必要ビット数を測る"""

    name = "min-bits"

    def run(self) -> int:
        config = generator_config_from_args(self.args)
        summary = min_bits_experiment(
            trials=self.args.trials,
            rng_seed=self.args.seed,
            config=config,
            budget=self.args.budget or self.config.trial_budget_bits,
            workers=self.args.workers or self.config.workers,
        )
        self.emit(self.formatter.min_bits(summary))
        return EXIT_OK


class PolycheckCommand(BaseCommandController):
    """GF(2) 多項式の既約性・原始性を判定する"""

    name = "polycheck"

    def run(self) -> int:
        if self.args.preset:
            if self.args.preset == "c":
                poly = poly_from_exponents(presets.G_C_EXPONENTS)
            else:
                poly = poly_from_exponents(presets.G_D_EXPONENTS)
        elif self.args.poly_file:
            text = Path(self.args.poly_file).read_text(encoding="utf-8")
            poly = parse_polynomial(text)
        else:
            poly = parse_polynomial(self.args.poly)

        irreducible = is_irreducible(poly)
        factors = None
        primitive = False
        if irreducible:
            factors = factorize((1 << poly.degree) - 1) if poly.degree > 1 else None
            primitive = is_primitive(poly, factors)

        self.emit(self.formatter.polycheck(poly, irreducible, primitive, factors))
        if self.args.require_primitive and not primitive:
            return EXIT_FAILURE
        return EXIT_OK


class BoolfnCommand(BaseCommandController):
    """ANF の指標を表示する"""

    name = "boolfn"

    def run(self) -> int:
        if self.args.anf_file:
            anf = read_anf_file(self.args.anf_file, self.args.variables)
        else:
            if not self.args.variables:
                raise UsageError("--variables is required with --anf")
            anf = parse_anf(self.args.anf, self.args.variables)

        try:
            function_metrics = metrics(anf)
        except TooManyVariablesError as e:
            self.show_warning(f"真理値表の指標を省略: {e}")
            function_metrics = None

        self.emit(self.formatter.function_metrics(anf, function_metrics))
        return EXIT_OK


class StatsCommand(BaseCommandController):
    """キーストリームファイルに統計検定をかける"""

    name = "stats"

    def run(self) -> int:
        fmt = self.args.format or FORMAT_HEX
        bits = read_keystream_file(self.args.keystream_file, fmt)
        alpha = self.args.alpha or self.config.alpha
        block_size = self.args.block_size or self.config.block_size

        reports = run_battery(bits, alpha, block_size)
        prefix = bits[: self.args.complexity_prefix]
        band = complexity_band(prefix) if len(prefix) >= 1024 else None

        self.emit(self.formatter.battery(reports, band))
        passed = all(r.passed for r in reports) and (band is None or band.passed)
        return EXIT_OK if passed else EXIT_FAILURE


COMMANDS = {
    command.name: command
    for command in (
        KeystreamCommand,
        VerifyEquivalenceCommand,
        ReconstructCommand,
        MinBitsCommand,
        PolycheckCommand,
        BoolfnCommand,
        StatsCommand,
    )
}
