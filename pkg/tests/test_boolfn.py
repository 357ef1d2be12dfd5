"""
ブール関数（ANF・真理値表・Walsh スペクトル）のテスト
"""

from pathlib import Path

import numpy as np
import pytest

from src.cipher import presets
from src.cipher.boolfn import (
    AnfPolynomial,
    TruthTable,
    anf_to_truth_table,
    evaluate,
    metrics,
    monomial_from_variables,
    parse_anf,
    print_anf,
    read_anf_file,
    relabel,
    truth_table_to_anf,
    walsh_spectrum,
    write_anf_file,
)
from src.core.exceptions import (
    AnfSyntaxError,
    IncompleteTableError,
    NonInjectiveMapError,
    TargetOutOfRangeError,
    TooManyVariablesError,
    VariableOutOfRangeError,
    WidthMismatchError,
)

ROOT = Path(__file__).resolve().parent.parent


def _hadamard(n: int) -> np.ndarray:
    h = np.array([[1]], dtype=np.int64)
    for _ in range(n):
        h = np.block([[h, h], [h, -h]])
    return h


@pytest.mark.unit
class TestParsing:
    def test_filter_shape(self, eq4):
        assert eq4.term_count == presets.FILTER_TERM_COUNT
        assert eq4.degree == 6
        assert eq4.degree_profile() == presets.FILTER_DEGREE_PROFILE

    def test_canonical_print_reproduces_published_order(self, eq4):
        assert print_anf(eq4) == presets.FILTER_ANF_TEXT

    def test_duplicate_terms_cancel(self):
        f = parse_anf("x1*x2 + x3 + x2*x1", 3)
        assert f.monomials == frozenset({monomial_from_variables([3])})

    def test_constants_and_zero(self):
        assert parse_anf("0", 4).is_zero
        assert print_anf(parse_anf("0", 4)) == "0"
        assert print_anf(parse_anf("1 + x1", 4)) == "1 + x1"
        assert parse_anf("x1*0 + x2", 4) == parse_anf("x2", 4)

    def test_alternative_variable_notation(self):
        assert parse_anf("X^{3}*x1 + x^2", 3) == parse_anf("x3*x1 + x2", 3)

    @pytest.mark.parametrize("text", ["x1 + + x2", "x1 +", "x1 x2", "", "x1 * ", "y1"])
    def test_syntax_errors(self, text):
        with pytest.raises(AnfSyntaxError):
            parse_anf(text, 4)

    def test_variable_out_of_range(self):
        with pytest.raises(VariableOutOfRangeError) as excinfo:
            parse_anf("x1 + x11", 10)
        assert excinfo.value.index == 11


@pytest.mark.unit
class TestEvaluation:
    def test_known_points(self, eq4):
        assert evaluate(eq4, 0) == 0
        assert evaluate(eq4, (1 << 10) - 1) == 0
        assert evaluate(eq4, 1 << 4) == 1
        assert evaluate(eq4, [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]) == 1

    def test_width_checks(self, eq4):
        with pytest.raises(WidthMismatchError):
            evaluate(eq4, [1, 0, 1])
        with pytest.raises(WidthMismatchError):
            evaluate(eq4, 1 << 10)

    def test_truth_table_matches_direct_evaluation(self, eq4):
        table = anf_to_truth_table(eq4)
        assert table.is_complete
        expected = [evaluate(eq4, w) for w in range(1 << 10)]
        assert [int(v) for v in table.outputs] == expected


@pytest.mark.unit
class TestMobius:
    def test_round_trip_on_filter(self, eq4):
        assert truth_table_to_anf(anf_to_truth_table(eq4)) == eq4

    def test_round_trip_on_random_functions(self):
        rng = np.random.default_rng(20240601)
        for _ in range(1000):
            outputs = rng.integers(0, 2, size=1 << 10, dtype=np.uint8)
            table = TruthTable.complete(10, outputs)
            assert anf_to_truth_table(truth_table_to_anf(table)) == table

    def test_round_trip_on_random_polynomials(self):
        rng = np.random.default_rng(20240602)
        for _ in range(1000):
            monomials = rng.integers(0, 1 << 10, size=rng.integers(0, 80))
            f = AnfPolynomial(10, frozenset(int(m) for m in monomials))
            assert truth_table_to_anf(anf_to_truth_table(f)) == f

    def test_incomplete_table(self):
        table = TruthTable.empty(3)
        table.defined[:7] = True
        with pytest.raises(IncompleteTableError) as excinfo:
            truth_table_to_anf(table)
        assert excinfo.value.missing == 1
        assert table.missing_words() == [7]

    def test_too_many_variables(self):
        with pytest.raises(TooManyVariablesError):
            anf_to_truth_table(AnfPolynomial(25, frozenset({1})))


@pytest.mark.unit
class TestWalsh:
    def test_matches_hadamard_product(self, eq4):
        table = anf_to_truth_table(eq4)
        signs = 1 - 2 * table.outputs.astype(np.int64)
        spectrum = walsh_spectrum(table)
        assert np.array_equal(spectrum.coefficients, _hadamard(10) @ signs)
        assert spectrum.satisfies_parseval()

    def test_linear_function_spectrum(self):
        table = anf_to_truth_table(parse_anf("x1 + x3", 3))
        coefficients = walsh_spectrum(table).coefficients
        assert coefficients[0b101] == 8
        assert np.count_nonzero(coefficients) == 1

    def test_metrics_of_filter(self, eq4):
        m = metrics(eq4)
        table = anf_to_truth_table(eq4)
        signs = 1 - 2 * table.outputs.astype(np.int64)
        max_abs = int(np.abs(_hadamard(10) @ signs).max())
        assert m.term_count == 46
        assert m.degree == 6
        assert m.weight == int(table.outputs.sum()) == 512
        assert m.is_balanced
        assert m.nonlinearity == 512 - max_abs // 2 == 480
        assert m.degree_profile == presets.FILTER_DEGREE_PROFILE

    def test_metrics_of_affine_function(self):
        m = metrics(parse_anf("x1 + x2 + 1", 4))
        assert m.nonlinearity == 0
        assert m.is_balanced


@pytest.mark.unit
class TestRelabel:
    def test_full_state_form(self, eq4, full_state_filter):
        relabeled = relabel(eq4, presets.DATA_POSITIONS, presets.LFSR_D_LENGTH)
        assert relabeled == full_state_filter

    def test_identity(self, eq4):
        assert relabel(eq4, tuple(range(1, 11))) == eq4

    def test_composition(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            monomials = rng.integers(0, 1 << 6, size=12)
            f = AnfPolynomial(6, frozenset(int(m) for m in monomials))
            inner = [int(t) for t in rng.permutation(np.arange(1, 11))[:6]]
            outer = [int(t) for t in rng.permutation(np.arange(1, 17))[:10]]
            composed = [outer[t - 1] for t in inner]
            assert relabel(relabel(f, inner, 10), outer, 16) == relabel(f, composed, 16)
            assert relabel(f, composed, 16).degree_profile() == f.degree_profile()

    def test_errors(self, eq4):
        with pytest.raises(WidthMismatchError):
            relabel(eq4, (1, 2, 3))
        with pytest.raises(NonInjectiveMapError):
            relabel(eq4, (1, 1, 2, 3, 4, 5, 6, 7, 8, 9))
        with pytest.raises(TargetOutOfRangeError):
            relabel(eq4, presets.DATA_POSITIONS, 50)


@pytest.mark.unit
class TestFiles:
    def test_reference_files(self, eq4, full_state_filter):
        assert read_anf_file(ROOT / "lili128_filter.anf") == eq4
        full_state_path = ROOT / "lili128_filter_full_state.anf"
        assert read_anf_file(full_state_path) == full_state_filter

    def test_write_then_read(self, tmp_path, eq4):
        path = tmp_path / "f.anf"
        write_anf_file(path, eq4)
        assert path.read_text(encoding="utf-8").startswith("# n=10\n")
        assert read_anf_file(path) == eq4
