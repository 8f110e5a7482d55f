"""Built-in acceptance checks run by ``serre-lab selftest``.

Each check returns ``(ok, detail)``; quick mode trims the parameter ranges.
"""

from math import factorial
from typing import Callable, Iterable, List, Tuple

from loguru import logger
from sympy import nextprime

from .bdj2 import BdjCalculator, Gl2Ctx, Gl2TameType, IntervalSystem
from .characters import WeylCharacters
from .errors import SerreLabError, TameTypeError
from .jantzen import HulsurkarData, JantzenReducer, check_inverse, hulsurkar_matrix
from .lattice import AlcoveGeometry, RootCtx, Weight, WeylPerm
from .models import PredictionConfig, SelfTestReport
from .tametypes import TameType
from .weightsets import NIVEAU_2_CYCLE, NIVEAU_3_CYCLE, SerreWeightPredictor

# The Gee closure map is empty below p = 13 for 3-deep weights.
GEE_PRIME = 13


def niveau_1_terms(i: int, j: int, k: int, p: int) -> List[Weight]:
    return [
        (k + p - 1, j, i - p + 1),
        (i, k, j - p + 1),
        (j + p - 1, i, k),
        (i, j, k),
        (j, k, i - p + 1),
        (k + p - 1, i, j),
    ]


def niveau_2_terms(i: int, j: int, k: int, p: int) -> List[Weight]:
    return [
        (k + p - 1, j, i - p + 1),
        (i, k, j - p + 1),
        (j + p - 2, i, k + 1),
        (i, j - 1, k + 1),
        (j - 1, k + 1, i - p + 1),
        (k + p - 2, i, j + 1),
    ]


def niveau_3_terms(i: int, j: int, k: int, p: int) -> List[Weight]:
    return [
        (k + p - 1, j, i - p + 1),
        (i - 1, k, j - p + 2),
        (j + p - 1, i - 1, k + 1),
        (i - 2, j + 1, k + 1),
        (j - 1, k + 1, i - p + 1),
        (k + p - 2, i, j + 1),
    ]


def oracle_parameters(niveau: int, p: int, ks: Iterable[int]) -> Iterable[Weight]:
    """(i, j, k) in the parameter range of the closed-form reduction for each shape."""
    for k in ks:
        for i in range(k, k + p + 1):
            for j in range(k, i + 1):
                if niveau == 1 and i - k <= p - 1:
                    yield (i, j, k)
                elif niveau == 2 and i - k <= p - 1 and j > k:
                    yield (i, j, k)
                elif niveau == 3 and i > j:
                    yield (i, j, k)


EXTRA_WEIGHT_TABLE = [
    (5, "2:8,1:0", (6, 3, 0)),
    (7, "2:12,1:3", (13, 8, 3)),
    (11, "2:40,1:0", (16, 9, 2)),
]


class SelfTestSuite:
    """The built-in acceptance checks; quick mode runs a reduced subset."""

    def __init__(self, quick: bool = False):
        self.quick = quick

    def run(self) -> SelfTestReport:
        report = SelfTestReport(self.quick)
        for name, check in self.checks():
            logger.info(f"selftest: {name}")
            try:
                ok, detail = check()
            except SerreLabError as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            report.results[name] = ok
            report.details[name] = detail
            if not ok:
                logger.warning(f"selftest {name} failed: {detail}")
        return report

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
        return [
            ("alcove_counts", self.check_alcove_counts),
            ("hulsurkar_inverse", self.check_hulsurkar_inverse),
            ("predicted_counts", self.check_predicted_counts),
            ("generic_counts", self.check_generic_counts),
            ("extra_weight_table", self.check_extra_weight_table),
            ("jantzen_oracle", self.check_jantzen_oracle),
            ("jantzen_fault_injection", self.check_fault_injection),
            ("route_agreement", self.check_route_agreement),
            ("structural_identities", self.check_structural),
            ("cross_theory_gl2", self.check_cross_theory),
            ("bdj_theorem", self.check_bdj_theorem),
            ("phi_bijection", self.check_phi_bijection),
        ]

    def check_alcove_counts(self) -> Tuple[bool, str]:
        ranks = range(2, 5 if self.quick else 6)
        counts = {n: len(AlcoveGeometry(RootCtx(n, int(nextprime(n)))).enumerate_restricted_alcoves()) for n in ranks}
        expected = {n: factorial(n - 1) for n in ranks}
        return counts == expected, f"restricted alcoves {counts}"

    def check_hulsurkar_inverse(self) -> Tuple[bool, str]:
        problems = {n: check_inverse(hulsurkar_matrix(n)) for n in (2, 3, 4)}
        diagonal = {n: hulsurkar_matrix(n).is_diagonal for n in (2, 3, 4)}
        ok = not any(problems.values()) and diagonal == {2: True, 3: True, 4: False}
        return ok, f"diagonal {diagonal}"

    def check_predicted_counts(self) -> Tuple[bool, str]:
        expected = {2: 2, 3: 9, 4: 88} if self.quick else {2: 2, 3: 9, 4: 88, 5: 1640}
        got = {n: SerreWeightPredictor(RootCtx(n, int(nextprime(n)))).predicted_count() for n in expected}
        return got == expected, f"counts {got}"

    def check_generic_counts(self) -> Tuple[bool, str]:
        cases = [(2, 11, 2, 2), (3, 13, 3, 9)] if self.quick else [(2, 11, 2, 2), (3, 13, 3, 9), (4, 23, 4, 88)]
        details = []
        ok = True
        for n, p, delta, expected in cases:
            predictor = SerreWeightPredictor(RootCtx(n, p), PredictionConfig(delta=delta))
            samples = predictor.types.sample_generic_types(delta, 1 if self.quick else 3)
            for tau in samples:
                weights = predictor.w_question_generic(tau, delta)
                ok &= len(weights) == expected
                if n == 3:
                    ok &= len(predictor.lower_alcove_members(weights)) == 3
                details.append(f"n={n} {tau}: {len(weights)}")
            ok &= bool(samples)
        return ok, "; ".join(details)

    def check_extra_weight_table(self) -> Tuple[bool, str]:
        ok = True
        details = []
        for p, text, extra in EXTRA_WEIGHT_TABLE:
            predictor = SerreWeightPredictor(RootCtx(3, p))
            comparison = predictor.compare_adps(TameType.parse(text, p))
            ok &= comparison.extra_weights == [list(extra)] and comparison.adps_subset
            details.append(f"p={p}: {comparison.extra_weights}")
        return ok, "; ".join(details)

    def check_jantzen_oracle(self) -> Tuple[bool, str]:
        shapes = [
            (1, WeylPerm.identity(3), niveau_1_terms),
            (2, NIVEAU_2_CYCLE, niveau_2_terms),
            (3, NIVEAU_3_CYCLE, niveau_3_terms),
        ]
        checked = 0
        for p in (5,) if self.quick else (5, 7):
            ctx = RootCtx(3, p)
            reducer = JantzenReducer(ctx)
            characters = WeylCharacters(ctx)
            ks = (0,) if self.quick else range(p - 1)
            for niveau, w, terms in shapes:
                for i, j, k in oracle_parameters(niveau, p, ks):
                    expected = characters.collect((t, 1) for t in terms(i, j, k, p)).reduce_mod_center(p)
                    got = reducer.jantzen_virtual(reducer.types.pair(w, (i, j, k)))
                    checked += 1
                    if got != expected:
                        return False, f"p={p} w={w} Lambda={(i, j, k)}: got {got.terms}"
        return True, f"{checked} parameters"

    def check_fault_injection(self) -> Tuple[bool, str]:
        """Negating one diagonal entry of gamma' must break the dimension check."""
        p = 5
        ctx = RootCtx(2, p)
        data = hulsurkar_matrix(2)
        first = data.order[0]
        gamma = dict(data.gamma)
        gamma[(first, first)] = -gamma[(first, first)]
        corrupted = HulsurkarData(data.n, data.order, data.entries, gamma)
        healthy = JantzenReducer(ctx)
        faulty = JantzenReducer(ctx, data=corrupted)
        identity = WeylPerm.identity(2)
        healthy_ok, detected = True, False
        for m in range(p):
            pair = healthy.types.pair(identity, (m, 0))
            expected = healthy.types.dl_dimension(pair)
            healthy_ok &= healthy.characters.virtual_dimension(healthy.jantzen_virtual(pair)) == expected
            detected |= faulty.characters.virtual_dimension(faulty.jantzen_virtual(pair)) != expected
        return healthy_ok and detected, f"healthy={healthy_ok} detected={detected}"

    def check_route_agreement(self) -> Tuple[bool, str]:
        checked = 0
        for p in (5,) if self.quick else (5, 7):
            predictor = SerreWeightPredictor(RootCtx(3, p))
            for tau in predictor.types.all_types():
                exact = predictor.w_question_exact(tau).as_set()
                lists = predictor.w_question_gl3(tau).as_set()
                checked += 1
                if exact != lists:
                    return False, f"p={p} {tau}: exact and gl3 routes differ"
        if not self.quick:
            for p in (11, 13):
                predictor = SerreWeightPredictor(RootCtx(3, p), PredictionConfig(delta=3))
                for tau in predictor.types.sample_generic_types(3, 5):
                    generic = predictor.w_question_generic(tau, 3).as_set()
                    checked += 1
                    if generic != predictor.w_question_gl3(tau).as_set():
                        return False, f"p={p} {tau}: generic and gl3 routes differ"
        return True, f"{checked} types"

    def check_structural(self) -> Tuple[bool, str]:
        predictor = SerreWeightPredictor(RootCtx(3, 5))
        types = predictor.types.all_types()
        if self.quick:
            types = types[:: max(1, len(types) // 8)]
        for tau in types:
            report = predictor.structural_checks(tau)
            if not report.passed:
                return False, f"p=5 {tau}: {report.failures[0]}"

        deep = SerreWeightPredictor(RootCtx(3, GEE_PRIME))
        closure = deep.gee_closure_map()
        if not closure:
            return False, f"p={GEE_PRIME}: Gee closure map is empty"
        samples = deep.types.sample_generic_types(3, 1 if self.quick else 3)
        hits = 0
        for tau in samples:
            report = deep.structural_checks(tau)
            if not report.passed:
                return False, f"p={GEE_PRIME} {tau}: {report.failures[0]}"
            hits += sum(1 for weight in deep.w_question_gl3(tau) if weight in closure)
        return bool(samples), f"{len(types)} types at p=5; {len(samples)} at p={GEE_PRIME}, {hits} closure hits"

    def check_cross_theory(self) -> Tuple[bool, str]:
        checked = 0
        for p in (3, 5, 7) if self.quick else (3, 5, 7, 11, 13):
            ctx = RootCtx(2, p)
            predictor = SerreWeightPredictor(ctx)
            calculator = BdjCalculator(Gl2Ctx(p, 1))
            for tau in predictor.types.all_types():
                pair = predictor.canonical_pair(tau).pair
                virtual = predictor.reducer.jantzen_virtual(pair)
                jh = {w.weight for w in predictor.modreps.jh_of_virtual(virtual)}
                rho = gl2_type_of(tau)
                diamond = {w.ab for w in calculator.diamond_constituents(rho)}
                mass = predictor.reducer.characters.virtual_dimension(virtual)
                expected_mass = p + 1 if rho.niveau == 1 else p - 1
                checked += 1
                if jh != diamond or mass != expected_mass:
                    return False, f"p={p} {tau}: jantzen {sorted(jh)} vs diamond {sorted(diamond)}, mass {mass}"
        return True, f"{checked} types"

    def check_bdj_theorem(self) -> Tuple[bool, str]:
        cases = [(3, 1), (3, 2), (5, 1)]
        if not self.quick:
            cases = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)]
        checked = 0
        for p, f in cases:
            report = BdjCalculator(Gl2Ctx(p, f)).verify_bdj_theorem()
            checked += report.checked
            if not report.passed:
                return False, f"p={p} f={f}: {report.counterexamples[0]}"
        return True, f"{checked} types"

    def check_phi_bijection(self) -> Tuple[bool, str]:
        cases = [(3, 1), (3, 2), (5, 1), (5, 2)]
        if not self.quick:
            cases += [(3, 3), (5, 3)]
        for p, f in cases:
            calculator = BdjCalculator(Gl2Ctx(p, f))
            source = calculator.enumerate_l0()
            images: List[IntervalSystem] = [calculator.phi(system) for system in source]
            if set(images) != set(calculator.enumerate_l1()) or len(set(images)) != len(source):
                return False, f"p={p} f={f}: phi is not a bijection"
            if any(calculator.phi_inverse(image) != system for image, system in zip(images, source)):
                return False, f"p={p} f={f}: phi_inverse does not invert phi"
        return True, f"{len(cases)} (p, f) pairs"


def gl2_type_of(tau: TameType) -> Gl2TameType:
    """The f = 1 GL2 type with the same characters as a 2-dimensional tame type."""
    if tau.n != 2 or tau.r != 1:
        raise TameTypeError(f"{tau} is not a 2-dimensional type over Q_p")
    if tau.niveaux == (1, 1):
        (_, c), (_, c2) = tau.orbits
        return Gl2TameType.niveau1(tau.p, 1, c, c2)
    ((_, gamma),) = tau.orbits
    return Gl2TameType.niveau2(tau.p, 1, gamma)

