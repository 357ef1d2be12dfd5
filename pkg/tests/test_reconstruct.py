"""
フィルタ関数再構成のテスト
"""

import numpy as np
import pytest

from src.analysis.reconstruct import (
    DEFAULT_TRIAL_BUDGET,
    TrialResult,
    accumulate,
    coverage_walk,
    end_to_end_attack,
    expected_coverage_draws,
    format_observations,
    inconsistent_observations,
    interpolate,
    min_bits_experiment,
    observations_from_keystream,
    parse_observations,
    random_key,
    read_observations,
    reconstruct_filter,
    summarize,
    write_observations,
)
from src.cipher.boolfn import TruthTable, truth_table_to_anf
from src.cipher.lili import (
    GeneratorConfig,
    KeyMaterial,
    ObservationSet,
    keystream,
    replay,
)
from src.core.exceptions import (
    ConflictedError,
    InvalidSpecError,
    ObservationFormatError,
    TrialBudgetExceededError,
    UnderdeterminedError,
)


@pytest.fixture(scope="module")
def coverage_index_y() -> int:
    """鍵 'y'*16 で全1024入力が揃う位置"""
    key = KeyMaterial.from_ascii("y" * 16)
    index, distinct = coverage_walk(key, DEFAULT_TRIAL_BUDGET, GeneratorConfig())
    assert distinct == 1024
    assert index == 7497
    return index


def _all_words(bit_of) -> ObservationSet:
    return ObservationSet(tuple((w, bit_of(w)) for w in range(1024)))


@pytest.mark.unit
class TestAccumulate:
    def test_empty(self):
        table, report = accumulate(ObservationSet(()))
        assert report.distinct_inputs_seen == 0
        assert report.first_full_coverage_index is None
        assert not report.full_coverage
        assert table.defined_count == 0

    def test_zero_function(self):
        table, report = accumulate(_all_words(lambda w: 0))
        assert report.first_full_coverage_index == 1024
        assert report.full_coverage
        assert interpolate(table, report).is_zero

    def test_repeated_words_do_not_advance_coverage(self):
        obs = ObservationSet(((3, 1), (3, 1), (4, 0)), width=3)
        _, report = accumulate(obs)
        assert report.observations == 3
        assert report.distinct_inputs_seen == 2
        assert report.conflicts == []

    def test_conflict_is_recorded(self):
        obs = ObservationSet(((5, 1), (5, 0)))
        table, report = accumulate(obs)
        assert report.conflicts == [5]
        with pytest.raises(ConflictedError) as excinfo:
            interpolate(table, report)
        assert excinfo.value.words == [5]
        with pytest.raises(ConflictedError):
            reconstruct_filter(obs)

    def test_missing_word(self):
        obs = ObservationSet(tuple((w, w & 1) for w in range(1024) if w != 7))
        with pytest.raises(UnderdeterminedError) as excinfo:
            reconstruct_filter(obs)
        assert excinfo.value.missing == [7]
        assert excinfo.value.coverage.distinct_inputs_seen == 1023


@pytest.mark.unit
class TestReconstruction:
    def test_exact_coverage_boundary(self, key_y, eq4, coverage_index_y):
        result = reconstruct_filter(replay(key_y, coverage_index_y))
        assert result.anf == eq4
        assert result.coverage.first_full_coverage_index == coverage_index_y

        with pytest.raises(UnderdeterminedError) as excinfo:
            reconstruct_filter(replay(key_y, coverage_index_y - 1))
        assert len(excinfo.value.missing) == 1

    def test_full_budget_recovers_filter(self, verification_key, eq4):
        recovered = end_to_end_attack(verification_key, DEFAULT_TRIAL_BUDGET)
        assert recovered == eq4
        assert recovered.term_count == 46
        assert recovered.degree == 6

    def test_budget_of_8192_recovers_filter(self, key_y, eq4):
        assert end_to_end_attack(key_y, 1 << 13) == eq4

    def test_small_budget_is_underdetermined(self, key_y):
        with pytest.raises(UnderdeterminedError):
            end_to_end_attack(key_y, 1024)
        with pytest.raises(InvalidSpecError):
            end_to_end_attack(key_y, 0)

    def test_result_explains_every_observation(self, key_y, coverage_index_y):
        obs = replay(key_y, coverage_index_y + 2000)
        result = reconstruct_filter(obs)
        assert inconsistent_observations(result.anf, obs) == []

    def test_random_filters(self, key_y, coverage_index_y):
        rng = np.random.default_rng(7)
        for _ in range(50):
            table = TruthTable.complete(10, rng.integers(0, 2, size=1024))
            f = truth_table_to_anf(table)
            config = GeneratorConfig(filter=f)
            assert end_to_end_attack(key_y, coverage_index_y, config) == f


@pytest.mark.unit
class TestExternalKeystream:
    def test_pairs_match_replay(self, key_y):
        bits = keystream(key_y, 300)
        assert observations_from_keystream(key_y, bits) == replay(key_y, 300)

    def test_unknown_filter_from_keystream(self, key_y, coverage_index_y):
        rng = np.random.default_rng(11)
        table = TruthTable.complete(10, rng.integers(0, 2, size=1024))
        secret = truth_table_to_anf(table)
        bits = keystream(key_y, coverage_index_y, GeneratorConfig(filter=secret))
        observations = observations_from_keystream(key_y, bits)
        assert reconstruct_filter(observations).anf == secret

    def test_empty_keystream(self, key_y):
        with pytest.raises(InvalidSpecError):
            observations_from_keystream(key_y, [])


@pytest.mark.unit
class TestObservationFiles:
    def test_format(self):
        obs = ObservationSet(((693, 1), (0, 0)))
        assert format_observations(obs) == "1010110101 1\n0000000000 0\n"

    def test_parse_skips_comments(self):
        obs = parse_observations("# key\n1010110101 1\n\n0000000001 0\n")
        assert obs.pairs == ((693, 1), (1, 0))

    @pytest.mark.parametrize("text", [
        "101 1", "1010110101 2", "10101101x1 0", "1010110101",
    ])
    def test_malformed(self, text):
        with pytest.raises(ObservationFormatError):
            parse_observations(text)

    def test_file(self, tmp_path, key_y):
        obs = replay(key_y, 64)
        path = tmp_path / "obs.txt"
        write_observations(path, obs)
        assert read_observations(path).pairs == obs.pairs


@pytest.mark.unit
class TestMinBits:
    def test_expected_coverage_draws(self):
        assert expected_coverage_draws(1024) == pytest.approx(7689.4, abs=0.5)
        assert expected_coverage_draws(1) == 1.0
        with pytest.raises(InvalidSpecError):
            expected_coverage_draws(0)

    def test_coverage_walk_budget(self, key_y):
        with pytest.raises(TrialBudgetExceededError) as excinfo:
            coverage_walk(key_y, 500, GeneratorConfig())
        assert excinfo.value.distinct <= 500

    def test_deterministic(self):
        first = min_bits_experiment(3, 7)
        second = min_bits_experiment(3, 7)
        assert first == second
        assert [r.trial for r in first.results] == [0, 1, 2]
        assert first.completed == 3

    def test_single_trial_is_reproducible(self):
        summary = min_bits_experiment(1, 1)
        result = summary.results[0]
        rng = np.random.default_rng(np.random.SeedSequence(1).spawn(1)[0])
        key = random_key(rng, GeneratorConfig())
        assert result.key_hex == key.to_hex()
        index, distinct = coverage_walk(key, DEFAULT_TRIAL_BUDGET, GeneratorConfig())
        assert result.first_full_coverage_index == index <= DEFAULT_TRIAL_BUDGET
        assert result.distinct_inputs_seen == distinct == 1024
        assert summary.minimum == summary.maximum == index

    def test_budget_failures(self):
        summary = min_bits_experiment(3, 1, budget=100)
        assert summary.failures == 3
        assert summary.completed == 0
        assert summary.minimum is None
        assert summary.fraction_in_reference_range == 0.0
        assert all(r.budget_exceeded for r in summary.results)

    def test_invalid_arguments(self):
        with pytest.raises(InvalidSpecError):
            min_bits_experiment(0, 1)
        with pytest.raises(InvalidSpecError):
            min_bits_experiment(1, 1, budget=0)

    def test_summarize(self):
        results = [
            TrialResult(trial=2, key_hex="00", distinct_inputs_seen=900,
                        budget_exceeded=True),
            TrialResult(trial=0, key_hex="00", first_full_coverage_index=5000,
                        distinct_inputs_seen=1024),
            TrialResult(trial=1, key_hex="00", first_full_coverage_index=9000,
                        distinct_inputs_seen=1024),
        ]
        summary = summarize(results, rng_seed=0, budget=DEFAULT_TRIAL_BUDGET)
        assert [r.trial for r in summary.results] == [0, 1, 2]
        assert summary.median == 7000.0
        assert summary.fraction_in_reference_range == pytest.approx(1 / 3)
        assert summary.fraction_within_budget_range == pytest.approx(2 / 3)

    @pytest.mark.slow
    def test_workers_do_not_change_results(self):
        parallel = min_bits_experiment(4, 3, workers=2)
        assert parallel == min_bits_experiment(4, 3, workers=1)

    @pytest.mark.slow
    def test_median_in_reference_range(self):
        summary = min_bits_experiment(100, 2024)
        assert summary.failures == 0
        assert 4096 <= summary.median <= 8192
        assert summary.fraction_within_budget_range >= 0.8
