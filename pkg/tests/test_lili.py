"""
LILI-128 キーストリーム生成器のテスト
"""

import pytest

from src.analysis.stats import monobit
from src.cipher import presets
from src.cipher.boolfn import AnfPolynomial, evaluate, parse_anf
from src.cipher.lili import (
    FORM_FULL_STATE,
    FORMAT_BITS,
    FORMAT_HEX,
    ClockSequence,
    GeneratorConfig,
    GeneratorState,
    KeyMaterial,
    KeystreamGenerator,
    clock_sequence,
    default_full_state_filter,
    equivalence_check,
    f_c,
    first_mismatch,
    format_keystream,
    keystream,
    load_key,
    next_bit,
    parse_keystream,
    read_keystream_file,
    render_keystream_file,
    replay,
    write_keystream_file,
)
from src.cipher.lfsr import LfsrState
from src.core.exceptions import (
    BadKeyLengthError,
    DegenerateStateError,
    InvalidSpecError,
    KeystreamFormatError,
    PositionOutOfRangeError,
    WidthMismatchError,
    ZeroRegisterError,
)
from tests.reference_generator import reference_keystream


@pytest.mark.unit
class TestKeyMaterial:
    def test_ascii_key_bits(self, key_y):
        assert key_y.bits[:8] == (0, 1, 1, 1, 1, 0, 0, 1)
        assert key_y.to_hex() == "79" * 16
        assert key_y.key_id == "ascii:" + "79" * 16

    def test_hex_key(self, key_y):
        assert KeyMaterial.from_hex("79" * 16).bits == key_y.bits
        assert KeyMaterial.from_hex(" " + "AB" * 16 + "\n").to_hex() == "ab" * 16
        data = bytes(range(16))
        assert KeyMaterial.from_bytes(data).to_hex() == data.hex()

    @pytest.mark.parametrize("text", [presets.PRINTED_SECOND_KEY, "short", "é" * 16])
    def test_bad_ascii_key(self, text):
        with pytest.raises(BadKeyLengthError):
            KeyMaterial.from_ascii(text)

    @pytest.mark.parametrize("text", ["0" * 31, "0" * 33, "zz" * 16])
    def test_bad_hex_key(self, text):
        with pytest.raises(BadKeyLengthError):
            KeyMaterial.from_hex(text)


@pytest.mark.unit
class TestLoading:
    def test_register_split(self, key_y):
        state = load_key(key_y)
        assert state.c_state.stages[:8] == (0, 1, 1, 1, 1, 0, 0, 1)
        assert state.c_state.stages == key_y.bits[:39]
        assert state.d_state.stages == key_y.bits[39:]
        assert state.bits_emitted == 0

    def test_zero_registers(self):
        with pytest.raises(ZeroRegisterError) as excinfo:
            load_key(KeyMaterial.from_hex("00" * 16))
        assert excinfo.value.register == "c"
        with pytest.raises(ZeroRegisterError) as excinfo:
            load_key(KeyMaterial.from_hex("ff" + "00" * 15))
        assert excinfo.value.register == "d"


@pytest.mark.unit
class TestGeneration:
    def test_clock_function(self):
        assert [f_c(y1, y2) for y1 in (0, 1) for y2 in (0, 1)] == [1, 2, 3, 4]

    def test_first_step_of_key_y(self, key_y):
        state = load_key(key_y)
        z, after = next_bit(state)
        assert z == 1
        assert after.bits_emitted == 1
        assert clock_sequence(key_y, 1).values == (4,)

    def test_next_bit_is_pure(self, key_y):
        state = load_key(key_y)
        first = next_bit(state)
        second = next_bit(state)
        assert first == second
        assert state.bits_emitted == 0

    def test_functional_and_fast_paths_agree(self, key_y):
        state = load_key(key_y)
        generator = KeystreamGenerator(state)
        for _ in range(300):
            z, state = next_bit(state)
            assert generator.next_bit() == z
        assert generator.state == state

    @pytest.mark.parametrize("text", presets.VERIFICATION_KEYS)
    def test_matches_reference(self, text):
        expected = reference_keystream(text, 2048, presets.FILTER_ANF_TEXT)
        assert keystream(KeyMaterial.from_ascii(text), 2048) == expected

    def test_zero_filter_gives_zero_stream(self, key_y):
        config = GeneratorConfig(filter=AnfPolynomial(10))
        assert keystream(key_y, 500, config) == [0] * 500

    def test_length_must_be_positive(self, key_y):
        with pytest.raises(InvalidSpecError):
            keystream(key_y, 0)

    def test_degenerate_state(self, default_config, key_y):
        state = load_key(key_y)
        zero_d = LfsrState(state.d_state.spec, 0)
        with pytest.raises(DegenerateStateError):
            next_bit(GeneratorState(default_config, state.c_state, zero_d))
        with pytest.raises(DegenerateStateError):
            KeystreamGenerator(GeneratorState(default_config, state.c_state, zero_d))

    def test_clock_sequence_bounds(self, key_y):
        sequence = clock_sequence(key_y, 4096)
        assert set(sequence.values) <= {1, 2, 3, 4}
        assert 4096 <= sequence.total_steps <= 4 * 4096
        with pytest.raises(InvalidSpecError):
            ClockSequence((1, 5))

    def test_d_steps_match_clock_total(self, key_y):
        generator = KeystreamGenerator(load_key(key_y))
        generator.take(1000)
        assert generator.d_steps == clock_sequence(key_y, 1000).total_steps

    @pytest.mark.slow
    def test_mean_clock_value(self, key_y):
        values = clock_sequence(key_y, 1 << 16).values
        assert abs(sum(values) / len(values) - 2.5) < 0.05

    @pytest.mark.slow
    def test_keystream_is_balanced(self, verification_key):
        assert monobit(keystream(verification_key, 100_000), alpha=1e-6).passed


@pytest.mark.unit
class TestEquivalence:
    def test_full_state_forms_agree(self, verification_key):
        assert equivalence_check(verification_key, 4096)

    def test_default_full_state_filter(self, default_config):
        assert default_config.full_state().filter == default_full_state_filter()
        assert default_config.full_state().filter_form == FORM_FULL_STATE

    @pytest.mark.slow
    def test_long_equivalence(self, verification_key):
        assert equivalence_check(verification_key, 1 << 16)

    def test_perturbed_full_state_filter(self, key_y, default_config):
        text = presets.FULL_STATE_FILTER_ANF_TEXT.replace("X13 + ", "", 1)
        perturbed = parse_anf(text, 89)
        broken = default_config.full_state(perturbed)
        assert not equivalence_check(key_y, 4096, default_config, broken)
        assert first_mismatch(key_y, 4096, default_config, broken) is not None

    def test_reversed_data_positions(self, key_y, default_config):
        positions = tuple(reversed(presets.DATA_POSITIONS))
        reversed_config = GeneratorConfig(data_positions=positions)
        assert first_mismatch(key_y, 4096, default_config, reversed_config) is not None


@pytest.mark.unit
class TestConfig:
    @pytest.mark.parametrize("kwargs, error", [
        ({"clock_positions": (13,)}, InvalidSpecError),
        ({"clock_positions": (40, 1)}, PositionOutOfRangeError),
        ({"data_positions": (1, 2, 3, 4, 5, 6, 7, 8, 9, 90)}, PositionOutOfRangeError),
        ({"data_positions": (1, 1, 3, 4, 5, 6, 7, 8, 9, 10)}, InvalidSpecError),
        ({"filter": AnfPolynomial(9)}, WidthMismatchError),
        ({"filter_form": "other"}, InvalidSpecError),
        ({"filter_form": FORM_FULL_STATE}, WidthMismatchError),
    ])
    def test_invalid_configs(self, kwargs, error):
        with pytest.raises(error):
            GeneratorConfig(**kwargs)

    def test_fingerprint(self, default_config):
        fingerprint = default_config.fingerprint()
        assert len(fingerprint) == 16
        assert fingerprint == GeneratorConfig().fingerprint()
        assert fingerprint != GeneratorConfig(filter=AnfPolynomial(10)).fingerprint()


@pytest.mark.unit
class TestReplay:
    def test_observed_bits_follow_filter(self, key_y, eq4):
        obs = replay(key_y, 500)
        assert len(obs) == 500
        assert obs.pairs[0] == (693, 1)
        assert obs.key_id == key_y.key_id
        assert all(evaluate(eq4, word) == bit for word, bit in obs.pairs)
        assert [bit for _, bit in obs.pairs] == keystream(key_y, 500)
        assert obs.prefix(10).pairs == obs.pairs[:10]

    def test_replay_length(self, key_y):
        with pytest.raises(InvalidSpecError):
            replay(key_y, 0)


@pytest.mark.unit
class TestKeystreamFiles:
    def test_format(self):
        bits = [1, 0, 1, 0, 1, 1, 1, 1, 0, 1]
        assert format_keystream(bits, FORMAT_HEX) == "af40"
        assert format_keystream(bits, FORMAT_BITS) == "1010111101"
        assert render_keystream_file(bits) == "# bits=10\naf40\n"

    def test_parse(self):
        assert parse_keystream("# bits=10\naf40\n") == [1, 0, 1, 0, 1, 1, 1, 1, 0, 1]
        assert parse_keystream("# comment\n1011\n0", FORMAT_BITS) == [1, 0, 1, 1, 0]
        assert parse_keystream("ff") == [1] * 8
        commented = "# filter: 0a1b (projected, 46 terms)\n# c 39 0110\n# bits=4\nf0\n"
        assert parse_keystream(commented) == [1] * 4

    @pytest.mark.parametrize("text, fmt", [
        ("# bits=x\nff", FORMAT_HEX),
        ("# bits=20\nff", FORMAT_HEX),
        ("zz", FORMAT_HEX),
        ("0120", FORMAT_BITS),
        ("ff", "base64"),
        ("# bits=0\n", FORMAT_HEX),
        ("# bits=0\n0110", FORMAT_BITS),
        ("# comments only\n", FORMAT_BITS),
        ("", FORMAT_HEX),
    ])
    def test_malformed(self, text, fmt):
        with pytest.raises(KeystreamFormatError):
            parse_keystream(text, fmt)

    @pytest.mark.parametrize("fmt", [FORMAT_HEX, FORMAT_BITS])
    def test_file_round_trip(self, tmp_path, key_y, fmt):
        bits = keystream(key_y, 77)
        path = tmp_path / "stream.txt"
        write_keystream_file(path, bits, fmt)
        assert read_keystream_file(path, fmt) == bits
