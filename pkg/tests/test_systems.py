"""Tests for phase points, the system catalog, orbits and spec parsing."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.systems import (
    PiecewiseLinear,
    RationalVec,
    RealVec,
    SymbolicPoint,
    affine_torus,
    bernoulli_shift,
    get_rule,
    golden_alpha,
    interval_map,
    iterate,
    is_exact,
    load_piecewise_observables,
    parse_point,
    parse_system_spec,
    projective_action,
    rotation,
    unit_vector,
    vec,
)
from src.systems.catalog import shift_distance, torus_distance
from src.utils.errors import (
    DimensionMismatch,
    InvalidParameter,
    InvalidPoint,
    RationalOverflow,
    SingularMatrix,
    UsageError,
)


def rational(*coords):
    return RationalVec(tuple(Fraction(c) for c in coords))


class TestPoints:
    def test_vec_picks_representation(self):
        assert isinstance(vec((Fraction(1, 3), 0)), RationalVec)
        assert isinstance(vec((0.5,)), RealVec)

    def test_rational_vec_rejects_floats(self):
        with pytest.raises(InvalidPoint):
            RationalVec((0.5,))

    def test_symbolic_canonical_form(self):
        assert SymbolicPoint("0", "10") == SymbolicPoint("", "01")
        assert SymbolicPoint("", "0101") == SymbolicPoint("", "01")

    def test_symbolic_shift(self):
        assert SymbolicPoint("1", "0").shifted() == SymbolicPoint("", "0")
        assert SymbolicPoint("", "01").shifted() == SymbolicPoint("", "10")

    def test_bad_symbols(self):
        with pytest.raises(InvalidPoint):
            SymbolicPoint("2", "0")

    def test_block_rule(self):
        rule = get_rule("blocks4")
        assert rule.boundary(3) == 84
        assert [rule.symbol(i) for i in (0, 3, 4, 19, 20)] == [1, 1, 0, 0, 1]

    def test_rule_point_offsets(self):
        p = SymbolicPoint(rule="blocks4")
        assert p.symbol(20) == 1
        assert p.shifted().symbol(19) == 1

    def test_unknown_rule(self):
        with pytest.raises(InvalidPoint):
            SymbolicPoint(rule="fibonacci")


class TestOrbits:
    def test_exactness_follows_the_point(self):
        assert is_exact(rational(Fraction(1, 3)))
        assert is_exact(SymbolicPoint("1", "0"))
        assert not is_exact(vec((0.5,)))

    def test_rotation_third(self):
        orbit = iterate(rotation(Fraction(1, 3)), rational(0), 10)
        assert orbit.cycle_info == (0, 3)
        assert orbit.points[4] == rational(Fraction(1, 3))
        assert len(orbit) == 11

    def test_rotation_quarter(self):
        assert iterate(rotation(Fraction(1, 4)), rational(Fraction(1, 8)), 6).cycle_info == (0, 4)

    def test_doubling_seventh(self, doubling_map, seventh):
        orbit = iterate(doubling_map, seventh, 5)
        assert orbit.cycle_info == (0, 3)
        assert orbit.points[1] == rational(Fraction(2, 7))

    def test_shear_period_two(self):
        shear = affine_torus([[1, 1], [0, 1]])
        orbit = iterate(shear, rational(0, Fraction(1, 2)), 4)
        assert orbit.cycle_info == (0, 2)
        assert orbit.points[1] == rational(Fraction(1, 2), Fraction(1, 2))

    def test_tent_fixed_point(self):
        assert iterate(interval_map("tent"), rational(Fraction(2, 3)), 3).cycle_info == (0, 1)

    def test_tent_preperiodic(self):
        assert iterate(interval_map("tent"), rational(Fraction(1, 4)), 5).cycle_info == (3, 1)

    def test_square_fixed_point(self, square):
        assert iterate(square, rational(1), 3).cycle_info == (0, 1)

    def test_float_orbit_has_no_cycle(self, square):
        orbit = iterate(square, vec((0.5,)), 5)
        assert orbit.cycle_info is None
        assert orbit.points[2].t == pytest.approx(0.0625)

    def test_shift_orbit(self):
        orbit = iterate(bernoulli_shift(), SymbolicPoint("1", "0"), 3)
        assert orbit.cycle_info == (1, 1)

    def test_projective_diagonal(self):
        s = projective_action([[2.0, 0.0], [0.0, 1.0]])
        orbit = iterate(s, unit_vector((1.0, 1.0)), 40)
        assert orbit.points[1].coords == pytest.approx((2 / math.sqrt(5), 1 / math.sqrt(5)))
        assert orbit.points[-1].coords[0] == pytest.approx(1.0, abs=1e-12)

    def test_rational_overflow(self):
        s = interval_map("logistic", r=Fraction(37, 10))
        with pytest.raises(RationalOverflow):
            iterate(s, rational(Fraction(1, 5)), 30, max_bits=64)

    def test_point_outside_phase_space(self, square):
        with pytest.raises(InvalidPoint):
            iterate(square, rational(Fraction(3, 2)), 1)

    def test_negative_length(self, square):
        with pytest.raises(ValueError):
            iterate(square, rational(0), -1)


class TestCatalog:
    def test_non_square_torus(self):
        with pytest.raises(DimensionMismatch):
            affine_torus([[1, 2]])

    def test_shift_vector_length(self):
        with pytest.raises(DimensionMismatch):
            affine_torus([[1, 0], [0, 1]], b=[Fraction(1, 2)])

    def test_singular_projective(self):
        with pytest.raises(SingularMatrix):
            projective_action([[1.0, 2.0], [2.0, 4.0]])

    def test_logistic_range(self):
        with pytest.raises(InvalidParameter):
            interval_map("logistic", r=5)

    def test_torus_distance_wraps(self):
        assert torus_distance(vec((0.05,)), vec((0.95,))) == pytest.approx(0.1)

    def test_shift_distance(self):
        assert shift_distance(SymbolicPoint("", "0"), SymbolicPoint("001", "0")) == pytest.approx(1 / 3)
        assert shift_distance(SymbolicPoint("", "01"), SymbolicPoint("0", "10")) == 0.0

    def test_observable_lookup(self):
        s = rotation(Fraction(1, 3))
        assert s.observable("cos1")(rational(0)) == pytest.approx(1.0)
        with pytest.raises(InvalidParameter):
            s.observable("tan")

    def test_with_observables_rejects_clash(self, square):
        with pytest.raises(InvalidParameter):
            square.with_observables([square.observable("t")])

    def test_piecewise_linear_exact(self):
        pl = PiecewiseLinear([[0, 0], [Fraction(1, 2), 1], [1, 0]])
        assert pl(Fraction(1, 4)) == Fraction(1, 2)
        assert pl(0.75) == pytest.approx(0.5)

    def test_load_piecewise_observables(self, store, write_json):
        path = write_json("obs.json", {"observables": [{"name": "hat", "breakpoints": [[0, 0], ["1/2", 1], [1, 0]]}]})
        (hat,) = load_piecewise_observables(path, store)
        assert hat.name == "hat"
        assert hat(rational(Fraction(1, 4))) == Fraction(1, 2)


class TestSpecParsing:
    def test_rotation_rational(self):
        s, point = parse_system_spec("rotation:alpha=1/3")
        assert s.params["alpha"] == Fraction(1, 3)
        assert point is None

    def test_torus_inline_with_shift(self):
        s, _ = parse_system_spec("torus:A=[[2,1],[1,1]],b=1/2,0")
        assert s.params["A"] == ((2, 1), (1, 1))
        assert s.params["b"] == (Fraction(1, 2), Fraction(0))

    def test_shift_with_point(self):
        s, point = parse_system_spec("shift:pre=0,per=1")
        assert s.kind == "shift"
        assert point == SymbolicPoint("0", "1")

    def test_logistic(self):
        s, _ = parse_system_spec("interval:logistic:r=3.7")
        assert s.params["r"] == pytest.approx(3.7)

    @pytest.mark.parametrize("spec", ["wormhole", "rotation:beta=1", "interval:cubic", "projective:X=1"])
    def test_unknown_specs(self, spec):
        with pytest.raises(UsageError):
            parse_system_spec(spec)

    def test_expanding_points_read_exactly(self, doubling_map):
        assert parse_point(doubling_map, "0.25") == rational(Fraction(1, 4))
        assert parse_point(doubling_map, "0.25", allow_float=True) == vec((0.25,))

    def test_rational_rotation_points_read_exactly(self):
        s, _ = parse_system_spec("rotation:alpha=1/3")
        assert parse_point(s, "0") == rational(Fraction(0))
        assert isinstance(parse_point(s, "0", allow_float=True), RealVec)
        assert isinstance(parse_point(parse_system_spec("rotation:alpha=golden")[0], "0"), RealVec)

    def test_projective_point_normalised(self):
        s, _ = parse_system_spec("projective:T=[[2,1],[1,1]]")
        p = parse_point(s, "3,4")
        assert p.coords == pytest.approx((0.6, 0.8))


def random_word(rng, length):
    return "".join(str(int(b)) for b in rng.integers(0, 2, size=length))


SAMPLERS = {
    "rotation": (lambda: rotation(golden_alpha()), lambda rng: vec((rng.random(),))),
    "torus": (lambda: affine_torus([[2, 1], [1, 1]]), lambda rng: vec((rng.random(), rng.random()))),
    "logistic": (lambda: interval_map("logistic", r=3.7), lambda rng: vec((rng.random(),))),
    "tent": (lambda: interval_map("tent"), lambda rng: rational(Fraction(int(rng.integers(0, 1001)), 1000))),
    "shift": (
        bernoulli_shift,
        lambda rng: SymbolicPoint(random_word(rng, int(rng.integers(0, 6))), random_word(rng, int(rng.integers(1, 5)))),
    ),
    "projective": (
        lambda: projective_action([[2.0, 1.0], [1.0, 1.0]]),
        lambda rng: unit_vector(rng.normal(size=2) + 1e-3),
    ),
}


@pytest.mark.parametrize("name", sorted(SAMPLERS))
class TestSampledInvariants:
    def test_metric_axioms(self, name):
        factory, sample = SAMPLERS[name]
        s = factory()
        rng = np.random.default_rng(7)
        for _ in range(50):
            p, q, r = sample(rng), sample(rng), sample(rng)
            assert s.metric(p, p) == 0
            assert s.metric(p, q) >= 0
            assert s.metric(p, q) == pytest.approx(s.metric(q, p), abs=1e-15)
            assert s.metric(p, r) <= s.metric(p, q) + s.metric(q, r) + 1e-12

    def test_observables_within_sup_norm(self, name):
        factory, sample = SAMPLERS[name]
        s = factory()
        rng = np.random.default_rng(11)
        for _ in range(50):
            p = sample(rng)
            for x in s.dictionary:
                assert abs(float(x(p))) <= x.sup_norm + 1e-12, x.name

    def test_iterate_is_deterministic(self, name):
        factory, sample = SAMPLERS[name]
        s = factory()
        rng = np.random.default_rng(3)
        for _ in range(5):
            p = sample(rng)
            first, second = iterate(s, p, 40), iterate(s, p, 40)
            assert first.points == second.points
            assert first.cycle_info == second.cycle_info


class TestShiftLipschitz:
    def test_shift_at_most_doubles_distance(self):
        s = bernoulli_shift()
        rng = np.random.default_rng(5)
        for _ in range(200):
            pre = random_word(rng, 8)
            j = int(rng.integers(0, 9))
            p = SymbolicPoint(pre, random_word(rng, int(rng.integers(1, 4))))
            q = SymbolicPoint(pre[:j] + random_word(rng, 8 - j), random_word(rng, int(rng.integers(1, 4))))
            assert s.metric(s.phi(p), s.phi(q)) <= 2 * s.metric(p, q) + 1e-15
