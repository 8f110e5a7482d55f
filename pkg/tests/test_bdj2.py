from itertools import product

import pytest

from serre_lab.bdj2 import (
    BdjCalculator,
    Gl2Ctx,
    Gl2TameType,
    Gl2Weight,
    Interval,
    IntervalSystem,
    RepresentationKind,
    digits,
    from_digits,
    interval_layouts,
)
from serre_lab.errors import IntervalSystemError, NonRegularWeightError, TameTypeError
from serre_lab.models import RExtMode, Side


def F(a: int, b: int, p: int = 5, f: int = 1) -> Gl2Weight:
    return Gl2Weight.from_ab(p, f, a, b)


@pytest.fixture
def calc() -> BdjCalculator:
    return BdjCalculator(Gl2Ctx(5, 1))


@pytest.fixture
def calc_f3() -> BdjCalculator:
    return BdjCalculator(Gl2Ctx(5, 3))


class TestWeightsAndTypes:
    def test_digits(self):
        assert digits(38, 5, 3) == (3, 2, 1)
        assert from_digits((3, 2, 1), 5) == 38

    def test_from_ab(self):
        weight = F(5, 3)
        assert weight.m == (2,)
        assert weight.b == 3
        assert weight.ab == (5, 3)
        assert str(weight) == "F(5,3)"
        assert weight.dimension == 3

    def test_twist_is_reduced(self):
        assert F(2, 0).twist(5) == F(3, 1)

    def test_regularity(self):
        assert F(3, 0).is_regular
        assert not F(4, 0).is_regular

    @pytest.mark.parametrize("args", [(5, 1, (5,), 0), (5, 1, (1,), 4), (5, 2, (1,), 0)])
    def test_weight_validation(self, args):
        with pytest.raises(ValueError):
            Gl2Weight(*args)

    def test_from_ab_needs_restricted_pair(self):
        with pytest.raises(ValueError):
            F(5, 0)

    def test_ctx_validation(self):
        with pytest.raises(ValueError):
            Gl2Ctx(9, 1)
        with pytest.raises(ValueError):
            Gl2Ctx(5, 0)

    def test_parse_types(self):
        assert Gl2TameType.parse("niv1:2,0", 5, 1) == Gl2TameType(5, 1, 1, (0, 2))
        assert Gl2TameType.parse("niv2:16", 5, 1) == Gl2TameType(5, 1, 2, (8,))
        assert str(Gl2TameType.parse("niv2:8", 5, 1)) == "niv2:8"

    @pytest.mark.parametrize("text", ["niv3:1", "niv1:0", "niv2:6", "2:8"])
    def test_parse_rejects(self, text):
        with pytest.raises(TameTypeError):
            Gl2TameType.parse(text, 5, 1)

    def test_type_twist(self):
        assert Gl2TameType.parse("niv1:0,2", 5, 1).twist(1) == Gl2TameType.parse("niv1:1,3", 5, 1)
        assert Gl2TameType.parse("niv2:8", 5, 1).twist(4) == Gl2TameType.parse("niv2:8", 5, 1)

    def test_all_types(self, calc):
        types = calc.all_types()
        assert len(types) == 20
        assert sum(1 for rho in types if rho.niveau == 2) == 10

    def test_v_p(self, calc):
        assert calc.v_p(Gl2TameType.parse("niv1:0,2", 5, 1)).dimension == 6
        label = calc.v_p(Gl2TameType.parse("niv2:8", 5, 1))
        assert label.kind is RepresentationKind.CUSPIDAL
        assert label.to_dict() == {"kind": "cuspidal", "exponents": [8], "dimension": 4}

    def test_type_over_wrong_field(self, calc):
        with pytest.raises(TameTypeError):
            calc.w_bdj(Gl2TameType.parse("niv1:0,2", 5, 2))


class TestWeightSets:
    def test_principal_series(self, calc):
        rho = Gl2TameType.parse("niv1:0,2", 5, 1)
        assert calc.w_bdj(rho) == {F(1, 0), F(3, 2)}
        assert calc.diamond_constituents(rho) == {F(2, 0), F(4, 2)}
        assert {calc.r_p(w) for w in calc.diamond_constituents(rho)} == calc.w_bdj(rho)

    def test_irregular_constituent(self, calc):
        rho = Gl2TameType.parse("niv1:0,1", 5, 1)
        assert calc.w_bdj(rho) == {F(0, 0), F(4, 0), F(3, 1)}
        assert calc.diamond_constituents(rho) == {F(1, 0), F(4, 1)}
        assert calc.r_ext(F(4, 1)) == {F(0, 0), F(4, 0)}

    def test_trivial_type(self, calc):
        rho = Gl2TameType.parse("niv1:0,0", 5, 1)
        assert calc.diamond_constituents(rho) == {F(0, 0), F(4, 0)}
        assert calc.w_bdj(rho) == {F(3, 0)}

    def test_cuspidal(self, calc):
        rho = Gl2TameType.parse("niv2:8", 5, 1)
        diamond = calc.diamond_constituents(rho)
        assert diamond == {F(2, 2), F(5, 3)}
        assert calc.w_bdj(rho) == {F(2, 1), F(5, 2)}
        assert {calc.r_p(w) for w in diamond} == calc.w_bdj(rho)

    @pytest.mark.parametrize("p, f", [(3, 1), (5, 1), (3, 2), (5, 2)])
    def test_diamond_formula(self, p, f):
        calc = BdjCalculator(Gl2Ctx(p, f))
        for rho in calc.all_types():
            if rho.niveau != 1:
                continue
            constituents = calc.diamond_formula(rho)
            assert sum(w.dimension for w in constituents) == calc.q + 1
            assert set(constituents) == calc.diamond_constituents(rho)

    def test_diamond_formula_is_niveau_one(self, calc):
        with pytest.raises(TameTypeError):
            calc.diamond_formula(Gl2TameType.parse("niv2:8", 5, 1))


class TestOperators:
    def test_r_p(self, calc):
        assert calc.r_p(F(2, 0)) == F(3, 2)
        assert calc.r_p(F(4, 2)) == F(1, 0)

    def test_r_p_needs_regular(self, calc):
        with pytest.raises(NonRegularWeightError):
            calc.r_p(F(4, 0))

    def test_ss_sets(self, calc, calc_f3):
        assert set(calc_f3.ss_sets(calc_f3.weight((4, 3, 3), 0))) == {
            frozenset(),
            frozenset({1}),
            frozenset({2}),
        }
        assert calc.ss_sets(calc.weight((4,), 0)) == [frozenset()]

    def test_r_ext_agrees_with_r_p_off_the_edge(self, calc):
        for weight in [F(2, 0), F(3, 1), F(1, 1)]:
            assert calc.r_ext(weight) == {calc.r_p(weight)}

    def test_weak_r_ext_contains_strict(self):
        calc = BdjCalculator(Gl2Ctx(3, 2))
        for m in product(range(3), repeat=2):
            weight = calc.weight(m, 1)
            assert calc.r_ext(weight, RExtMode.WEAK) >= calc.r_ext(weight)


class TestIntervalSystems:
    ALPHA = (0, 1, 4)

    def test_layouts(self):
        assert sorted(interval_layouts(1)) == [(), ((0, 1),)]
        assert ((0, 2),) in set(interval_layouts(2))

    def test_system_validation(self):
        with pytest.raises(IntervalSystemError):
            IntervalSystem((0, 0), (Interval(0, 2, 1), Interval(1, 1, -1)))
        with pytest.raises(IntervalSystemError):
            IntervalSystem((0, 0), (Interval(0, 1, 0),))
        with pytest.raises(IntervalSystemError):
            IntervalSystem((0, 0), (Interval(0, 3, 1),))

    def test_two_negative_intervals(self, calc_f3):
        system = IntervalSystem(self.ALPHA, (Interval(0, 1, -1), Interval(1, 1, -1)))
        assert calc_f3.check_interval_axioms(system, Side.L0)
        image = calc_f3.phi(system)
        assert image.base == (5, 5, 3)
        assert calc_f3.check_interval_axioms(image, Side.L1)
        assert calc_f3.phi_inverse(image) == system

    def test_positive_interval(self, calc_f3):
        system = IntervalSystem(self.ALPHA, (Interval(0, 1, 1),))
        assert calc_f3.phi(system).base == (5, 2, 4)
        assert calc_f3.phi_successors(system) == {1}

    def test_weak_axioms(self, calc_f3):
        system = IntervalSystem(self.ALPHA, (Interval(0, 1, -1), Interval(1, 1, 1)))
        assert not calc_f3.check_interval_axioms(system, Side.L0)
        assert calc_f3.check_interval_axioms(system, Side.L0, weak=True)
        with pytest.raises(IntervalSystemError):
            calc_f3.phi(system)

    def test_empty_system(self, calc_f3):
        assert not calc_f3.check_interval_axioms(IntervalSystem(self.ALPHA, ()), Side.L0)

    def test_to_dict(self):
        system = IntervalSystem((0, 1, 4), (Interval(2, 2, -1),))
        assert system.to_dict() == {"base": [0, 1, 4], "intervals": [[2, 0, -1]]}

    @pytest.mark.parametrize("p, f", [(3, 1), (5, 1), (3, 2)])
    def test_successors_equivalence(self, p, f):
        calc = BdjCalculator(Gl2Ctx(p, f))
        for alpha in product(range(p), repeat=f):
            assert calc.successors_equivalence(alpha) == any(alpha)

    @pytest.mark.parametrize("p, f", [(3, 1), (3, 2), (5, 1)])
    def test_phi_is_a_bijection(self, p, f):
        calc = BdjCalculator(Gl2Ctx(p, f))
        source = calc.enumerate_l0()
        images = [calc.phi(system) for system in source]
        assert len(set(images)) == len(source)
        assert set(images) == set(calc.enumerate_l1())


class TestTheorem:
    @pytest.mark.parametrize("p, f", [(3, 1), (5, 1), (3, 2)])
    def test_theorem_holds(self, p, f):
        report = BdjCalculator(Gl2Ctx(p, f)).verify_bdj_theorem()
        assert report.passed, report.counterexamples[:1]
        assert report.checked == len(BdjCalculator(Gl2Ctx(p, f)).all_types())

    @pytest.mark.slow
    @pytest.mark.parametrize("p, f", [(5, 2), (3, 3), (7, 2)])
    def test_theorem_holds_higher_degree(self, p, f):
        assert BdjCalculator(Gl2Ctx(p, f)).verify_bdj_theorem().passed

    def test_report_serializes(self, calc):
        report = calc.verify_bdj_theorem(types=[Gl2TameType.parse("niv1:0,1", 5, 1)])
        assert report.to_dict() == {"p": 5, "f": 1, "mode": "strict", "checked": 1, "counterexamples": []}
