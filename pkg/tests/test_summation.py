"""Tests for summation methods, validation and spec parsing."""

import math
from fractions import Fraction

import pytest

from src.summation import (
    SummationMethod,
    WeightVector,
    cesaro,
    custom_matrix,
    even_indices,
    harmonic_weights,
    interleave,
    odd_indices,
    parse_method_spec,
    riesz,
    row_variation,
    subsequence,
    validate_method,
)
from src.summation.loader import split_top_level
from src.summation.validation import validation_indices
from src.utils.errors import (
    MatrixRowOutOfRange,
    NegativeWeight,
    NonIncreasingIndexMap,
    NonMonotoneWeights,
    NonPositiveWeight,
    UsageError,
)


class TestCesaro:
    def test_single_term_row(self):
        assert cesaro().row(0).weights == ((0, Fraction(1)),)

    def test_row_two(self):
        assert cesaro().row(2).weights == tuple((k, Fraction(1, 3)) for k in range(3))

    def test_variation_of_row_four(self):
        assert row_variation(cesaro().row(4)) == Fraction(1, 5)

    @pytest.mark.parametrize("n", [1, 7, 50, 333])
    def test_variation_times_length_is_one(self, n):
        assert row_variation(cesaro().row(n)) * (n + 1) == 1

    def test_float_rows_sum_to_one(self):
        assert cesaro(exact=False).row(999).total() == pytest.approx(1.0, abs=1e-12)

    def test_negative_row_rejected(self):
        with pytest.raises(ValueError):
            cesaro().row(-1)


class TestRiesz:
    def test_constant_weights_match_cesaro(self):
        m = riesz(lambda k: Fraction(1))
        for n in (0, 3, 10, 1000):
            assert m.row(n).weights == cesaro().row(n).weights

    def test_harmonic_row_two(self):
        row = riesz(harmonic_weights(exact=True)).row(2)
        assert row.weights == ((0, Fraction(6, 11)), (1, Fraction(3, 11)), (2, Fraction(2, 11)))

    @pytest.mark.parametrize("n", [1, 10, 100])
    def test_harmonic_variation_closed_form(self, n):
        v = row_variation(riesz(harmonic_weights(exact=True)).row(n))
        harmonic = sum(Fraction(1, k) for k in range(1, n + 2))
        assert v == (2 - Fraction(1, n + 1)) / harmonic

    def test_increasing_weights_rejected(self):
        with pytest.raises(NonMonotoneWeights):
            riesz(lambda k: k + 1).row(3)

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(NonPositiveWeight):
            riesz(lambda k: 1 - k).row(2)

    def test_rows_nonnegative_and_normalized(self):
        m = riesz(harmonic_weights())
        for n in (0, 10, 10_000):
            row = m.row(n)
            assert all(w >= 0 for _, w in row.weights)
            assert abs(row.total() - 1) <= 1e-12
            assert row.max_index == n


class TestCombinators:
    def test_interleave_odd_row(self):
        m = interleave(cesaro(), cesaro())
        assert m.row(3).weights == cesaro().row(2).weights

    def test_interleave_even_row_comes_from_second(self):
        m = interleave(cesaro(), riesz(harmonic_weights(exact=True)))
        assert m.row(4).weights == riesz(harmonic_weights(exact=True)).row(2).weights
        assert m.row(4).n == 4

    def test_interleave_row_zero(self):
        assert interleave(cesaro(), riesz(harmonic_weights())).row(0).weights == cesaro().row(0).weights

    def test_subsequence_even(self):
        assert subsequence(cesaro(), even_indices).row(1).weights == cesaro().row(2).weights

    def test_subsequence_identity(self):
        m = subsequence(cesaro(), lambda n: n)
        assert m.row(5).weights == cesaro().row(5).weights

    def test_odd_subsequence_recovers_first_method(self):
        a = riesz(harmonic_weights(exact=True))
        m = subsequence(interleave(a, cesaro()), odd_indices)
        for n in range(1, 12):
            assert m.row(n).weights == a.row(n).weights

    def test_non_increasing_index_map(self):
        m = subsequence(cesaro(), lambda n: 5)
        with pytest.raises(NonIncreasingIndexMap):
            m.row(1)


class TestCustomMatrix:
    def test_negative_entry(self):
        with pytest.raises(NegativeWeight):
            custom_matrix([[(0, Fraction(3, 2)), (1, Fraction(-1, 2))]])

    def test_row_beyond_end(self):
        m = custom_matrix([[(0, 1)]])
        with pytest.raises(MatrixRowOutOfRange):
            m.row(1)

    def test_defective_row_sum_fails_validation(self):
        m = custom_matrix([[(0, Fraction(1))], [(0, Fraction(9, 20)), (1, Fraction(9, 20))]])
        report = validate_method(m, max_n=1, threshold=1.0)
        assert report.row_sum_defect == Fraction(1, 10)
        assert report.passed is False

    def test_defect_between_sampled_rows_is_found(self):
        rows = [[(k, Fraction(1, n + 1)) for k in range(n + 1)] for n in range(1001)]
        rows[300] = [(0, Fraction(9, 10))]
        report = validate_method(custom_matrix(rows), max_n=1000, threshold=1.0)
        assert 300 not in report.variation
        assert report.rows_checked == 1001
        assert report.row_sum_defect == Fraction(1, 10)
        assert report.passed is False

    def test_sampled_rows_only_when_asked(self):
        rows = [[(0, Fraction(1))] for _ in range(1001)]
        rows[300] = [(0, Fraction(9, 10))]
        report = validate_method(custom_matrix(rows), max_n=1000, threshold=1.0, indices=[1000], all_rows=False)
        assert report.rows_checked == 1
        assert report.row_sum_defect == 0

    def test_negative_weight_fails_validation(self):
        def generator(n):
            if n == 2:
                return WeightVector(n=n, weights=((0, Fraction(-1, 2)), (1, Fraction(3, 2))))
            return WeightVector(n=n, weights=((0, Fraction(1)),))

        report = validate_method(SummationMethod("signed", "custom-matrix", generator), max_n=3, threshold=1.0)
        assert report.row_sum_defect == 0
        assert report.min_weight == Fraction(-1, 2)
        assert report.passed is False


class TestValidation:
    def test_cesaro_closed_form(self):
        report = validate_method(cesaro(), max_n=100, threshold=0.02)
        assert report.variation[100] == Fraction(1, 101)
        assert report.row_sum_defect == 0
        assert report.passed

    def test_riesz_log_at_ten_thousand(self):
        report = validate_method(
            riesz(harmonic_weights()), max_n=10_000, threshold=0.25, indices=[10_000], all_rows=False
        )
        harmonic = math.fsum(1.0 / k for k in range(1, 10_002))
        assert report.variation[10_000] == pytest.approx((2 - 1 / 10_001) / harmonic, abs=1e-12)

    def test_max_n_must_be_positive(self):
        with pytest.raises(ValueError):
            validate_method(cesaro(), max_n=0, threshold=1.0)

    def test_indices_dense_then_geometric(self):
        indices = validation_indices(10_000, dense_limit=16)
        assert indices[:17] == list(range(17))
        assert indices[-1] == 10_000
        assert all(b > a for a, b in zip(indices, indices[1:]))

    def test_report_dict_has_pass_flag(self):
        payload = validate_method(cesaro(), max_n=10, threshold=0.5).to_dict()
        assert payload["pass"] is True
        assert payload["v_max_n"] == Fraction(1, 11)


class TestMethodSpecs:
    def test_split_top_level(self):
        assert split_top_level("interleave(cesaro,riesz:log),even") == ["interleave(cesaro,riesz:log)", "even"]

    def test_parse_nested(self):
        m = parse_method_spec("subseq(interleave(cesaro,riesz:log-exact),odd)")
        assert m.row(3).weights == cesaro().row(3).weights

    def test_parse_matrix_file(self, store, write_json):
        path = write_json("m.json", {"rows": [[[0, "1"]], [[0, "1/2"], [1, "1/2"]]]})
        m = parse_method_spec(f"matrix:file={path}", store)
        assert m.row(1).weights == ((0, Fraction(1, 2)), (1, Fraction(1, 2)))

    def test_parse_riesz_file(self, store, write_json):
        path = write_json("p.json", {"p": ["1", "1/2", "1/3"]})
        m = parse_method_spec(f"riesz:file={path}", store)
        assert m.row(2).weights[0] == (0, Fraction(6, 11))

    @pytest.mark.parametrize("spec", ["abel", "interleave(cesaro)", "subseq(cesaro,squares)", "subseq(cesaro,even"])
    def test_bad_specs(self, spec):
        with pytest.raises(UsageError):
            parse_method_spec(spec)
