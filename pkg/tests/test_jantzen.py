import pytest

from serre_lab.characters import FormalCharacter, WeylCharacters
from serre_lab.jantzen import HulsurkarData, JantzenReducer, check_inverse, hulsurkar_matrix
from serre_lab.lattice import RootCtx, WeylPerm, add
from serre_lab.selftest import niveau_1_terms, niveau_2_terms, niveau_3_terms, oracle_parameters
from serre_lab.weightsets import NIVEAU_2_CYCLE, NIVEAU_3_CYCLE


class TestHulsurkar:
    def test_gl2_is_diagonal(self):
        data = hulsurkar_matrix(2)
        identity, s = WeylPerm.identity(2), WeylPerm.simple(2, 0)
        assert data.is_diagonal
        assert data.gamma_entry(identity, identity) == FormalCharacter.monomial((1, 1))
        assert data.gamma_entry(s, s) == FormalCharacter.monomial((0, 0))

    def test_gl3_diagonal_entries(self):
        data = hulsurkar_matrix(3)
        assert data.is_diagonal
        expected = {WeylPerm.identity(3): (2, 2, 2), WeylPerm.longest(3): (0, 0, 0)}
        for w in WeylPerm.all(3):
            assert data.gamma_entry(w, w) == FormalCharacter.monomial(expected.get(w, (1, 1, 1)))

    def test_order_is_triangular(self):
        data = hulsurkar_matrix(3)
        position = {w: index for index, w in enumerate(data.order)}
        assert set(position) == set(WeylPerm.all(3))
        for sigma, tau in data.entries:
            assert position[sigma] <= position[tau]

    @pytest.mark.parametrize("n", [2, 3])
    def test_inverse(self, n):
        assert check_inverse(hulsurkar_matrix(n)) == []

    @pytest.mark.slow
    def test_gl4_inverse_is_not_diagonal(self):
        data = hulsurkar_matrix(4)
        assert check_inverse(data) == []
        assert not data.is_diagonal

    def test_check_inverse_detects_corruption(self):
        data = hulsurkar_matrix(2)
        first = data.order[0]
        gamma = dict(data.gamma)
        gamma[(first, first)] = -gamma[(first, first)]
        assert check_inverse(HulsurkarData(2, data.order, data.entries, gamma))

    def test_to_dict(self):
        payload = hulsurkar_matrix(2).to_dict()
        assert payload["n"] == 2
        assert len(payload["order"]) == 2
        assert len(payload["gamma"]) == 2


class TestGl2Reduction:
    @pytest.fixture
    def reducer(self, gl2_p5) -> JantzenReducer:
        return JantzenReducer(gl2_p5)

    @pytest.mark.parametrize("m", range(4))
    def test_principal_series(self, reducer, m):
        pair = reducer.types.pair(WeylPerm.identity(2), (m, 0))
        expected = reducer.characters.collect([((m, 0), 1), ((4, m), 1)]).reduce_mod_center(5)
        virtual = reducer.jantzen_virtual(pair)
        assert virtual == expected
        assert reducer.characters.virtual_dimension(virtual) == 6

    @pytest.mark.parametrize("a, b", [(2, 0), (3, 0), (3, 1), (4, 0), (4, 1), (4, 2)])
    def test_cuspidal(self, reducer, a, b):
        pair = reducer.types.pair(WeylPerm.simple(2, 0), (a, b))
        expected = reducer.characters.collect([((a - 1, b + 1), 1), ((b + 4, a), 1)]).reduce_mod_center(5)
        virtual = reducer.jantzen_virtual(pair)
        assert virtual == expected
        assert reducer.characters.virtual_dimension(virtual) == 4

    def test_small_principal_series_terms(self, reducer):
        virtual = reducer.jantzen_virtual(reducer.types.pair(WeylPerm.identity(2), (2, 0)))
        assert virtual.as_dict() == {(2, 0): 1, (4, 2): 1}


SHAPES = [
    (1, WeylPerm.identity(3), niveau_1_terms),
    (2, NIVEAU_2_CYCLE, niveau_2_terms),
    (3, NIVEAU_3_CYCLE, niveau_3_terms),
]


class TestGl3Reduction:
    @pytest.mark.parametrize("niveau, w, terms", SHAPES)
    def test_closed_forms(self, gl3_p5, niveau, w, terms):
        reducer = JantzenReducer(gl3_p5)
        characters = WeylCharacters(gl3_p5)
        for i, j, k in oracle_parameters(niveau, 5, (0, 1)):
            expected = characters.collect((t, 1) for t in terms(i, j, k, 5)).reduce_mod_center(5)
            assert reducer.jantzen_virtual(reducer.types.pair(w, (i, j, k))) == expected, (i, j, k)

    @pytest.mark.slow
    @pytest.mark.parametrize("niveau, w, terms", SHAPES)
    def test_closed_forms_p7(self, niveau, w, terms):
        ctx = RootCtx(3, 7)
        reducer = JantzenReducer(ctx)
        characters = WeylCharacters(ctx)
        for i, j, k in oracle_parameters(niveau, 7, range(6)):
            expected = characters.collect((t, 1) for t in terms(i, j, k, 7)).reduce_mod_center(7)
            assert reducer.jantzen_virtual(reducer.types.pair(w, (i, j, k))) == expected, (i, j, k)

    def test_dimension_matches_deligne_lusztig(self, gl3_p5):
        reducer = JantzenReducer(gl3_p5)
        for w in WeylPerm.all(3):
            for mu in [(4, 3, 1), (3, 1, 0), (4, 2, 0)]:
                pair = reducer.types.pair(w, mu)
                if not reducer.types.is_good(pair):
                    continue
                virtual = reducer.jantzen_virtual(pair)
                assert reducer.characters.virtual_dimension(virtual) == reducer.types.dl_dimension(pair)


class TestGenericDecomposition:
    def test_translations(self, gl2_p5):
        assert sorted(JantzenReducer(gl2_p5).translations(1)) == [(-1, 1), (0, 0), (0, 1), (1, -1), (1, 0)]

    @pytest.mark.slow
    @pytest.mark.parametrize("w", WeylPerm.all(3))
    def test_generic_gl3_has_nine_constituents(self, w):
        ctx = RootCtx(3, 13)
        reducer = JantzenReducer(ctx)
        pair = reducer.types.pair(w, add((6, 3, 0), ctx.rho))
        decomposition = reducer.generic_jh(pair, 3)
        assert decomposition.deep
        assert len(decomposition.weights) == 9
        assert decomposition.to_dict()["delta"] == 3

    def test_shallow_input_is_flagged(self, gl2_p5):
        reducer = JantzenReducer(gl2_p5)
        decomposition = reducer.generic_jh(reducer.types.pair(WeylPerm.identity(2), (1, 1)), 2)
        assert not decomposition.deep
