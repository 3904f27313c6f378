"""Tests for weighted averages, empirical measures and convergence verdicts."""

from fractions import Fraction

import numpy as np
import pytest

from src.averaging import (
    EmpiricalMeasure,
    describe_point,
    detect_convergence,
    empirical_measure,
    geometric_checkpoints,
    trace,
    weighted_average,
    weighted_sum,
)
from src.summation import cesaro, harmonic_weights, riesz, row_variation
from src.systems import (
    RationalVec,
    SymbolicPoint,
    bernoulli_shift,
    golden_alpha,
    iterate,
    rotation,
    vec,
)
from src.utils.errors import InvalidParameter, TooFewCheckpoints


def rational(*coords):
    return RationalVec(tuple(Fraction(c) for c in coords))


class TestWeightedSum:
    def test_exact_runs(self):
        assert weighted_sum([Fraction(1, 3)] * 3, [1, 2, 4]) == Fraction(7, 3)

    def test_mixed_falls_back_to_float(self):
        assert weighted_sum([0.5, 0.5], [Fraction(1), 3]) == pytest.approx(2.0)


class TestWeightedAverage:
    def test_fixed_point(self, square):
        assert weighted_average(square, cesaro(), rational(1), 10, square.observable("t")) == 1

    def test_doubling_seventh(self, doubling_map, seventh):
        value = weighted_average(doubling_map, cesaro(), seventh, 2, doubling_map.observable("t"))
        assert value == Fraction(1, 3)

    def test_riesz_weights(self, doubling_map, seventh):
        m = riesz(harmonic_weights(exact=True))
        value = weighted_average(doubling_map, m, seventh, 2, doubling_map.observable("t"))
        assert value == Fraction(6, 11) * Fraction(1, 7) + Fraction(3, 11) * Fraction(2, 7) + Fraction(2, 11) * Fraction(4, 7)


class TestEmpiricalMeasure:
    def test_merges_cycle_atoms(self, doubling_map, seventh):
        mu = empirical_measure(doubling_map, cesaro(), seventh, 5)
        assert dict(mu.atoms) == {
            rational(Fraction(1, 7)): Fraction(1, 3),
            rational(Fraction(2, 7)): Fraction(1, 3),
            rational(Fraction(4, 7)): Fraction(1, 3),
        }
        assert mu.normalization == 1

    def test_rotation_quarter_uniform(self):
        mu = empirical_measure(rotation(Fraction(1, 4)), cesaro(), rational(0), 3)
        assert len(mu.atoms) == 4
        assert all(w == Fraction(1, 4) for _, w in mu.atoms)

    def test_push_forward_of_cycle_measure(self, doubling_map, seventh):
        mu = empirical_measure(doubling_map, cesaro(), seventh, 2)
        assert dict(mu.push_forward(doubling_map.phi).atoms) == dict(mu.atoms)

    def test_dirac_pairing(self, square):
        assert EmpiricalMeasure.dirac(rational(Fraction(1, 2))).pair(square.observable("t2")) == Fraction(1, 4)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_pairing_is_linear(self, seed):
        s = rotation(golden_alpha())
        rng = np.random.default_rng(seed)
        mu = empirical_measure(s, riesz(harmonic_weights()), vec((rng.random(),)), 200)
        x, y = s.observable("cos1"), s.observable("sin2")
        a, b = rng.normal(size=2)
        combined = mu.pair(lambda p: a * x(p) + b * y(p))
        assert combined == pytest.approx(a * mu.pair(x) + b * mu.pair(y), abs=1e-12)

    def test_merging_keeps_pairings(self, doubling_map, seventh):
        points = iterate(doubling_map, seventh, 8).points
        raw = EmpiricalMeasure(tuple((p, Fraction(1, 9)) for p in points))
        assert len(raw.merged().atoms) == 3
        for x in doubling_map.dictionary:
            assert raw.merged().pair(x) == pytest.approx(raw.pair(x), abs=1e-12)
        assert raw.merged().pair(doubling_map.observable("t")) == raw.pair(doubling_map.observable("t"))

    def test_to_dict_truncates(self):
        mu = EmpiricalMeasure.uniform(rational(Fraction(k, 10)) for k in range(10))
        payload = mu.to_dict(max_atoms=3)
        assert payload["support_size"] == 10
        assert payload["truncated"] is True
        assert len(payload["atoms"]) == 3

    def test_describe_point(self):
        assert describe_point(rational(Fraction(1, 3))) == [Fraction(1, 3)]
        assert describe_point(SymbolicPoint("1", "0")) == "pre=1,per=0"
        assert describe_point(SymbolicPoint(rule="blocks4")) == "rule=blocks4,offset=0"


class TestCheckpoints:
    def test_geometric(self):
        assert geometric_checkpoints(10, 2.0) == [1, 2, 4, 8, 10]

    def test_geometric_ends_at_n(self):
        points = geometric_checkpoints(10_000, 1.5)
        assert points[-1] == 10_000
        assert all(b > a for a, b in zip(points, points[1:]))

    def test_bad_ratio(self):
        with pytest.raises(InvalidParameter):
            geometric_checkpoints(10, 1.0)

    def test_trace_rejects_unsorted_checkpoints(self, square):
        with pytest.raises(InvalidParameter):
            trace(square, cesaro(), rational(1), [4, 2])


class TestTrace:
    def test_residual_bound(self):
        s = rotation(golden_alpha())
        m = cesaro(exact=False)
        t = trace(s, m, vec((0.0,)), [10, 100, 1000])
        v = row_variation(m.row(1000))
        for name, series in t.residuals.items():
            assert series[-1] <= 2 * t.sup_norms[name] * v + 1e-12

    def test_restricted_observables(self, square):
        t = trace(square, cesaro(), rational(1), [1, 2], observables=[square.observable("t")])
        assert list(t.values) == ["t"]
        assert t.values["t"] == [1, 1]

    def test_to_dict(self, doubling_map, seventh):
        payload = trace(doubling_map, cesaro(), seventh, [2, 5]).to_dict()
        assert payload["cycle_info"] == (0, 3)
        assert payload["values"]["t"] == [Fraction(1, 3), Fraction(1, 3)]


class TestConvergence:
    def test_fixed_point_converges(self, square):
        t = trace(square, cesaro(), rational(1), [1, 2, 4, 8])
        verdict = detect_convergence(t)
        assert verdict.status == "converged"
        assert verdict.cauchy_gap == 0.0
        assert verdict.limit.atoms == ((rational(1), Fraction(1)),)

    def test_golden_rotation_converges(self):
        t = trace(rotation(golden_alpha()), cesaro(exact=False), vec((0.0,)), geometric_checkpoints(10_000))
        assert detect_convergence(t, tol=0.05, sep=0.4).status == "converged"

    def test_block_sequence_oscillates(self):
        s = bernoulli_shift()
        rule_point = SymbolicPoint(rule="blocks4")
        checkpoints = [83, 339, 1363, 5459]
        t = trace(s, cesaro(), rule_point, checkpoints, observables=[s.observable("x0")])
        verdict = detect_convergence(t)
        assert verdict.status == "oscillating"
        assert verdict.cauchy_gap >= 0.4
        assert verdict.limit is None
        assert verdict.evidence["observable"] == "x0"

    def test_too_few_checkpoints(self, square):
        t = trace(square, cesaro(), rational(1), [1, 2, 4])
        with pytest.raises(TooFewCheckpoints):
            detect_convergence(t)

    def test_tol_must_be_below_sep(self, square):
        t = trace(square, cesaro(), rational(1), [1, 2, 4, 8])
        with pytest.raises(InvalidParameter):
            detect_convergence(t, tol=0.5, sep=0.4)
