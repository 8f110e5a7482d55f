"""Tests for weights, permutations, alcoves and the up-arrow order."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from serre_lab.errors import DegenerateCharacteristicError
from serre_lab.lattice import (
    AffineElem,
    Alcove,
    AlcoveGeometry,
    OnWall,
    RootCtx,
    WeylPerm,
    center_shift,
    dominance_leq,
    dot_action,
    epsilon_sigma,
    is_restricted,
    positive_roots,
    restricted_weights,
    rho_sigma,
    sub,
)

GL4_ALCOVES = {
    "C0": (0, 0, 0, 0, 0, 0),
    "C1": (0, 0, 1, 0, 0, 0),
    "C2": (0, 1, 1, 0, 0, 0),
    "C3": (0, 0, 1, 0, 1, 0),
    "C4": (0, 1, 1, 0, 1, 0),
    "C5": (0, 1, 2, 0, 1, 0),
}


def perms(n: int):
    return st.permutations(list(range(n))).map(lambda images: WeylPerm(tuple(images)))


def weights(n: int, bound: int = 12):
    return st.lists(st.integers(-bound, bound), min_size=n, max_size=n).map(tuple)


class TestWeylPerm:
    def test_parse_and_print_cycle_notation(self):
        cycle = WeylPerm.parse(3, "(1 2 3)")
        assert cycle.images == (1, 2, 0)
        assert str(cycle) == "(1 2 3)"
        assert WeylPerm.parse(4, "(1 2)(3 4)").images == (1, 0, 3, 2)
        assert WeylPerm.parse(3, "id") == WeylPerm.identity(3)
        assert str(WeylPerm.identity(3)) == "id"

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            WeylPerm.parse(3, "(1 2 4)")
        with pytest.raises(ValueError):
            WeylPerm.parse(3, "1 2")

    def test_linear_action_moves_coordinates(self):
        assert WeylPerm((1, 2, 0)).act((7, 8, 9)) == (9, 7, 8)
        assert WeylPerm.longest(3).act((4, 2, 0)) == (0, 2, 4)

    def test_sign_and_cycle_type(self):
        assert WeylPerm.simple(3, 0).sign == -1
        assert WeylPerm((1, 2, 0)).sign == 1
        assert WeylPerm((1, 2, 0)).cycle_type() == (3,)
        assert WeylPerm((0, 2, 1)).cycle_type() == (1, 2)

    def test_power_of_cycle(self):
        cycle = WeylPerm((1, 2, 0))
        assert cycle.power(3) == WeylPerm.identity(3)
        assert cycle.power(-1) == cycle.inverse()

    @given(perms(4), perms(4), weights(4))
    def test_composition_is_an_action(self, v, w, lam):
        assert (v * w).act(lam) == v.act(w.act(lam))
        assert w.inverse().act(w.act(lam)) == lam

    @given(perms(3), perms(3), weights(3))
    def test_dot_action_is_an_action(self, v, w, lam):
        assert dot_action(v * w, lam) == dot_action(v, dot_action(w, lam))


def test_dot_action_of_longest_element():
    rho = (2, 1, 0)
    moved = dot_action(WeylPerm.longest(3), sub((4, 2, 0), tuple(5 * r for r in rho)))
    assert moved == (-2, -3, -4)
    assert center_shift(moved, 5) == (2, 1, 0)


def test_rho_and_epsilon_sigma():
    assert rho_sigma(WeylPerm.longest(3)) == (2, 1, 0)
    assert rho_sigma(WeylPerm.identity(3)) == (0, 0, 0)
    assert rho_sigma(WeylPerm.simple(3, 0)) == (1, 0, 0)
    assert epsilon_sigma(WeylPerm.simple(3, 0)) == (0, 1, 0)
    assert epsilon_sigma(WeylPerm.longest(3)) == (0, 1, 2)


def test_dominance_and_restriction():
    assert dominance_leq((1, 1), (2, 0))
    assert not dominance_leq((2, 0), (1, 1))
    assert not dominance_leq((1, 0), (1, 1))
    assert is_restricted((4, 2, 0), 5)
    assert not is_restricted((5, 0, 0), 5)
    assert center_shift((9, 7), 5) == (5, 3)


def test_restricted_weights_box():
    box = list(restricted_weights(2, 3))
    assert len(box) == 6
    assert all(is_restricted(lam, 3) and 0 <= lam[-1] <= 1 for lam in box)


def test_root_ctx_validation():
    with pytest.raises(ValueError):
        RootCtx(2, 4)
    with pytest.raises(ValueError):
        RootCtx(2, 2)
    with pytest.raises(ValueError):
        RootCtx(1, 5)


class TestAlcoves:
    def test_degenerate_characteristic(self):
        with pytest.raises(DegenerateCharacteristicError):
            AlcoveGeometry(RootCtx(3, 3)).enumerate_restricted_alcoves()

    @pytest.mark.parametrize("n,p", [(2, 3), (3, 5), (4, 5), (4, 7), (5, 7)])
    def test_restricted_alcove_count_is_factorial(self, n, p):
        expected = {2: 1, 3: 2, 4: 6, 5: 24}[n]
        assert len(AlcoveGeometry(RootCtx(n, p)).enumerate_restricted_alcoves()) == expected

    def test_gl4_restricted_alcove_levels(self):
        alcoves = AlcoveGeometry(RootCtx(4, 7)).enumerate_restricted_alcoves()
        assert {a.levels for a in alcoves} == set(GL4_ALCOVES.values())

    def test_alcove_of_lowest_and_wall(self, geometry_gl3):
        assert geometry_gl3.alcove_of((0, 0, 0)) == Alcove.lowest(3, 5)
        wall = geometry_gl3.alcove_of((4, 0, 0))
        assert isinstance(wall, OnWall)
        assert wall.root == (0, 1)

    def test_lowest_alcove_is_restricted_and_dominant(self, geometry_gl3):
        predicates = geometry_gl3.alcove_predicates(Alcove.lowest(3, 5))
        assert predicates == {"restricted": True, "dominant": True, "is_C0": True}

    def test_inconsistent_levels_rejected(self):
        with pytest.raises(ValueError):
            Alcove(3, 5, (0, 2, 0))

    def test_alcove_point_lands_in_alcove(self):
        geometry = AlcoveGeometry(RootCtx(4, 7))
        for alcove in geometry.enumerate_restricted_alcoves():
            assert geometry.alcove_of(geometry.alcove_point(alcove)) == alcove

    def test_depth(self):
        geometry = AlcoveGeometry(RootCtx(3, 7))
        lowest = Alcove.lowest(3, 7)
        assert geometry.is_deep((0, 0, 0), 0, lowest)
        assert not geometry.is_deep((0, 0, 0), 1, lowest)
        assert geometry.is_deep((3, 2, 0), 1, lowest)

    def test_w1_subgroup(self, geometry_gl3):
        elements = geometry_gl3.w1_subgroup()
        assert len(elements) == 3
        assert WeylPerm.identity(3) in elements


class TestReflections:
    @given(weights(3), st.sampled_from(positive_roots(3)), st.integers(-2, 3))
    def test_affine_reflection_matches_geometry(self, lam, root, level):
        geometry = AlcoveGeometry(RootCtx(3, 5))
        reflection = AffineElem.reflection(3, 5, root, level)
        assert reflection.apply(lam) == geometry.reflect(lam, root, level)
        assert geometry.reflect(geometry.reflect(lam, root, level), root, level) == lam

    @given(perms(3), perms(3), weights(3, 3), weights(3, 3), weights(3))
    def test_affine_composition_law(self, w1, w2, nu1, nu2, lam):
        first = AffineElem(w1, nu1, 5)
        second = AffineElem(w2, nu2, 5)
        assert (first * second).apply(lam) == first.apply(second.apply(lam))


class TestUpArrow:
    def test_reflection_across_first_wall_goes_up(self):
        geometry = AlcoveGeometry(RootCtx(2, 5))
        assert geometry.up_arrow((0, 0), (4, -4))
        assert not geometry.up_arrow((4, -4), (0, 0))
        assert geometry.up_arrow((1, 0), (1, 0))

    def test_gl4_hasse_generators(self):
        geometry = AlcoveGeometry(RootCtx(4, 7))
        alcove = {name: Alcove(4, 7, levels) for name, levels in GL4_ALCOVES.items()}
        for lower, upper in [("C0", "C1"), ("C1", "C2"), ("C2", "C4"), ("C4", "C5"), ("C1", "C3"), ("C3", "C4")]:
            assert geometry.up_arrow_alcove(alcove[lower], alcove[upper]), (lower, upper)
        assert not geometry.up_arrow_alcove(alcove["C5"], alcove["C0"])

    def test_dominant_below(self):
        assert AlcoveGeometry(RootCtx(3, 5)).dominant_below((4, 2, 0)) == [(3, 2, 1), (4, 2, 0)]
        assert AlcoveGeometry(RootCtx(2, 5)).dominant_below((4, -3)) == [(1, 0), (4, -3)]

    def test_dominant_below_needs_dominant_weight(self, geometry_gl3):
        with pytest.raises(ValueError):
            geometry_gl3.dominant_below((0, 1, 0))

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(list(restricted_weights(3, 5))))
    def test_dominant_below_is_down_closed_chain(self, lam):
        geometry = AlcoveGeometry(RootCtx(3, 5))
        for below in geometry.dominant_below(lam):
            assert geometry.up_arrow(below, lam)
            assert dominance_leq(below, lam)
