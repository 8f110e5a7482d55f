"""Tests for formal characters and virtual sums of Weyl modules."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from serre_lab.characters import FormalCharacter, VirtualWeylSum, WeylCharacters, normalize_weyl, weyl_dimension
from serre_lab.errors import CharacterError
from serre_lab.lattice import RootCtx


def dominant_weights(n: int, spread: int = 3):
    """Dominant weights from non-negative differences and an arbitrary last entry."""

    def build(data):
        diffs, last = data
        lam = [last]
        for d in reversed(diffs):
            lam.append(lam[-1] + d)
        return tuple(reversed(lam))

    return st.tuples(
        st.lists(st.integers(0, spread), min_size=n - 1, max_size=n - 1),
        st.integers(-2, 2),
    ).map(build)


def test_weyl_character_of_standard_representation():
    characters = WeylCharacters(RootCtx(2, 5))
    assert characters.weyl_character((1, 0)) == FormalCharacter.from_mapping({(1, 0): 1, (0, 1): 1})


def test_weyl_character_needs_dominant_weight():
    with pytest.raises(CharacterError):
        WeylCharacters(RootCtx(2, 5)).weyl_character((0, 1))


def test_adjoint_dimension():
    assert weyl_dimension((2, 1, 0)) == 8
    assert weyl_dimension((1, 1, 1)) == 1


def test_normalize_weyl():
    assert normalize_weyl((0, 1)) == (0, None)
    assert normalize_weyl((-1, 1)) == (-1, (0, 0))
    assert normalize_weyl((3, 1, 0)) == (1, (3, 1, 0))


@pytest.mark.parametrize("n", [2, 3, 4])
@given(data=st.data())
def test_character_mass_is_weyl_dimension(n, data):
    lam = data.draw(dominant_weights(n, 2 if n == 4 else 3))
    character = WeylCharacters(RootCtx(n, 5)).weyl_character(lam)
    assert character.mass == weyl_dimension(lam)
    assert character.is_symmetric()


@pytest.mark.parametrize("n", [2, 3])
@given(data=st.data())
def test_brauer_identity(n, data):
    lam = data.draw(dominant_weights(n))
    mu = data.draw(dominant_weights(n, 2))
    characters = WeylCharacters(RootCtx(n, 5))
    chi = characters.weyl_character(mu)
    expanded = characters.brauer_expand(lam, chi)
    assert characters.char_of_virtual(expanded) == characters.weyl_character(lam) * chi


def test_brauer_expand_rejects_asymmetric_character():
    characters = WeylCharacters(RootCtx(2, 5))
    with pytest.raises(CharacterError):
        characters.brauer_expand((1, 0), FormalCharacter.monomial((1, 0)))


def test_is_symmetric_checks_every_permutation():
    assert not FormalCharacter.monomial((1, 0)).is_symmetric()
    assert not FormalCharacter.from_mapping({(2, 1, 0): 1, (0, 1, 2): 1}).is_symmetric()
    orbit = {(2, 0): 1, (0, 2): 1, (1, 1): 3}
    assert FormalCharacter.from_mapping(orbit).is_symmetric()
    characters = WeylCharacters(RootCtx(2, 5))
    with pytest.raises(CharacterError):
        characters.brauer_expand((0, 0), FormalCharacter.monomial((0, 1)))


def test_collect_cancels_wall_reflections():
    characters = WeylCharacters(RootCtx(2, 5))
    assert not characters.collect([((0, 0), 1), ((-1, 1), 1)])
    assert not characters.collect([((0, 1), 5)])


def test_reduce_mod_center_identifies_twists():
    virtual = VirtualWeylSum.from_mapping({(5, 4): 1, (1, 0): -1})
    assert not virtual.reduce_mod_center(5)


def test_virtual_sum_requires_dominant_keys():
    with pytest.raises(ValueError):
        VirtualWeylSum((((0, 1), 1),))


def test_positive_part_and_dimension():
    characters = WeylCharacters(RootCtx(2, 5))
    virtual = VirtualWeylSum.from_mapping({(2, 0): 1, (1, 0): -1})
    assert virtual.positive_part() == VirtualWeylSum.from_mapping({(2, 0): 1})
    assert characters.virtual_dimension(virtual) == 1


def test_formal_character_arithmetic():
    x = FormalCharacter.monomial((1, 0))
    y = FormalCharacter.monomial((0, 1))
    assert (x + y) * (x - y) == FormalCharacter.from_mapping({(2, 0): 1, (0, 2): -1})
    assert FormalCharacter.monomial((1, 1)).is_unit()
    assert not x.is_unit()
    assert not (x + y).is_unit()
    assert not x.is_symmetric()
    assert x.shift((1, 1)) == FormalCharacter.monomial((2, 1))
    with pytest.raises(CharacterError):
        FormalCharacter.symmetric({(1, 0): 1})


def test_torus_brauer_character_folds_weights():
    characters = WeylCharacters(RootCtx(2, 5))
    virtual = VirtualWeylSum.from_mapping({(4, 0): 1})
    folded = characters.torus_brauer_character(virtual, 5)
    assert folded.coefficient((0, 0)) == 2
    assert folded.mass == 5


def test_character_stats():
    characters = WeylCharacters(RootCtx(3, 5))
    stats = characters.get_character_stats(characters.weyl_character((1, 0, 0)))
    assert stats == {"terms": 3, "mass": 3, "symmetric": True}
