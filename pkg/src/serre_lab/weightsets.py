"""Predicted Serre weight sets W?(tau): exact, generic and GL3 closed-form routes."""

from dataclasses import dataclass, field
from functools import cache
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from loguru import logger

from .errors import CancellationError, NoGoodPairError, SerreLabError, UnsupportedRankError
from .jantzen import JantzenReducer
from .lattice import (
    Alcove,
    AlcoveGeometry,
    OnWall,
    RootCtx,
    Weight,
    WeylPerm,
    add,
    center_shift,
    is_restricted,
    restricted_weights,
)
from .models import AdpsComparison, CountMode, CTauMode, PredictionConfig, Route, StructuralReport
from .modreps import Gl3Alcove, ModularReps, SerreWeight
from .tametypes import InertialTypes, TamePair, TameType

NIVEAU_2_CYCLE = WeylPerm((0, 2, 1))  # (2 3)
NIVEAU_3_CYCLE = WeylPerm((1, 2, 0))  # (1 2 3)


@dataclass(frozen=True)
class WeightSet:
    """A sorted set of Serre weights together with the route that produced it."""

    n: int
    p: int
    weights: Tuple[SerreWeight, ...]
    route: Route = field(compare=False)
    delta: Optional[int] = field(default=None, compare=False)

    @classmethod
    def build(
        cls, n: int, p: int, weights: Iterable[SerreWeight], route: Route, delta: Optional[int] = None
    ) -> "WeightSet":
        return cls(n, p, tuple(sorted(set(weights))), route, delta)

    def __iter__(self) -> Iterator[SerreWeight]:
        return iter(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __contains__(self, weight: object) -> bool:
        return weight in self.weights

    def as_set(self) -> FrozenSet[SerreWeight]:
        return frozenset(self.weights)

    def labels(self) -> List[Weight]:
        return [w.weight for w in self.weights]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "n": self.n,
            "p": self.p,
            "route": self.route.value,
            "weights": [w.to_dict() for w in self.weights],
        }
        if self.delta is not None:
            data["delta"] = self.delta
        return data


@dataclass(frozen=True)
class CanonicalPresentation:
    """A good pair presenting tau (or its dual) with Lambda in the standard parameter range."""

    pair: TamePair
    niveau: int  # 1, 2 or 3 for the three GL3 shapes; the largest orbit size otherwise
    dualized: bool = False


@cache
def _c_tau_table(p: int) -> Dict[TameType, FrozenSet[Weight]]:
    """C(tau) for every GL3 tame type by search over X_1 and S_3."""
    types = InertialTypes(RootCtx(3, p))
    table: Dict[TameType, Set[Weight]] = {}
    perms = WeylPerm.all(3)
    for lam in restricted_weights(3, p):
        for w in perms:
            pair = types.pair(w, lam)
            if types.is_good(pair):
                table.setdefault(types.tau_of_pair(pair), set()).add(lam)
    logger.debug(f"C(tau) table for p={p}: {len(table)} types")
    return {tau: frozenset(lams) for tau, lams in table.items()}


class SerreWeightPredictor:
    """Computes W?(tau) for tame inertial types of GL_n over Q_p."""

    def __init__(self, ctx: RootCtx, config: Optional[PredictionConfig] = None):
        self.ctx = ctx
        self.n = ctx.n
        self.p = ctx.p
        self.config = config or PredictionConfig()
        self.geometry = AlcoveGeometry(ctx)
        self.modreps = ModularReps(ctx)
        self.types = InertialTypes(ctx)
        self.reducer = JantzenReducer(ctx, config=self.config)

    def _check_type(self, tau: TameType) -> None:
        if tau.n != self.n or tau.p != self.p:
            raise SerreLabError(f"type {tau} does not live over (n={self.n}, p={self.p})")

    def _weight_set(self, weights: Iterable[SerreWeight], route: Route, delta: Optional[int] = None) -> WeightSet:
        return WeightSet.build(self.n, self.p, weights, route, delta)

    # Canonical presentations

    def canonical_pair(self, tau: TameType) -> CanonicalPresentation:
        """A good pair for tau in the standard range, falling back to tau^vee for n = 3."""
        self._check_type(tau)
        if self.n == 2:
            return CanonicalPresentation(self._gl2_pair(tau), max(tau.niveaux))
        if self.n == 3:
            return self.gl3_parameters(tau)
        raise UnsupportedRankError(f"canonical presentations are tabulated for n <= 3, got n={self.n}")

    def _gl2_pair(self, tau: TameType) -> TamePair:
        p = self.p
        if tau.niveaux == (1, 1):
            a, b = sorted((e for _, e in tau.orbits), reverse=True)
            return self.types.pair(WeylPerm.identity(2), (a, b))
        ((_, gamma),) = tau.orbits
        low, high = gamma % p, gamma // p
        return self.types.pair(WeylPerm.simple(2, 0), (max(low, high), min(low, high)))

    def gl3_parameters(self, tau: TameType) -> CanonicalPresentation:
        """(i, j, k) presenting tau in the range used by the closed-form C(tau) lists."""
        if self.n != 3:
            raise UnsupportedRankError("gl3_parameters needs n = 3")
        self._check_type(tau)
        found = self._gl3_search(tau)
        if found is not None:
            return found
        dual = self.types.tau_transform(tau, dualize=True)
        found = self._gl3_search(dual)
        if found is None:
            raise NoGoodPairError(f"no canonical presentation of {tau} or its dual")
        logger.debug(f"{tau}: presented through its dual {dual}")
        return CanonicalPresentation(found.pair, found.niveau, dualized=True)

    def _gl3_search(self, tau: TameType) -> Optional[CanonicalPresentation]:
        p = self.p
        if tau.niveaux == (1, 1, 1):
            i, j, k = sorted((e for _, e in tau.orbits), reverse=True)
            return CanonicalPresentation(self.types.pair(WeylPerm.identity(3), (i, j, k)), 1)

        if tau.niveaux == (1, 2):
            (_, i0), (_, m) = tau.orbits
            modulus = p**2 - 1
            for target in (m, (p * m) % modulus):
                for k in range(p - 1):
                    # i >= j > k, i - k <= p - 1
                    j = k + 1 + (target - p * k - k - 1) % modulus
                    if j > k + p - 1:
                        continue
                    i = j + (i0 - j) % (p - 1)
                    if i > k + p - 1:
                        continue
                    pair = self.types.pair(NIVEAU_2_CYCLE, (i, j, k))
                    if self.types.tau_of_pair(pair) == tau:
                        return CanonicalPresentation(pair, 2)
            return None

        ((_, m),) = tau.orbits
        modulus = p**3 - 1
        for t in range(3):
            target = (m * p**t) % modulus
            for k in range(p - 1):
                # i > j >= k, i - k <= p
                for j in range(k, k + p):
                    i = j + 1 + (target - p * j - p * p * k - j - 1) % modulus
                    if i > k + p:
                        continue
                    pair = self.types.pair(NIVEAU_3_CYCLE, (i, j, k))
                    if self.types.tau_of_pair(pair) == tau:
                        return CanonicalPresentation(pair, 3)
        return None

    # Exact route

    def w_question_exact(self, tau: TameType) -> WeightSet:
        """R applied to the Jordan-Holder constituents of the reduction of V(tau)."""
        if self.n not in (2, 3):
            raise UnsupportedRankError(f"the exact route needs n in (2, 3), got n={self.n}")
        presentation = self.canonical_pair(tau)
        virtual = self.reducer.jantzen_virtual(presentation.pair)
        counts = self.modreps.jh_of_virtual(virtual)
        negative = {w: c for w, c in counts.items() if c < 0}
        if negative:
            raise CancellationError(
                f"{tau}: negative Jordan-Holder counts after cancellation: "
                + ", ".join(f"{w}:{c}" for w, c in sorted(negative.items()))
            )
        weights = [self.modreps.r_operator(w) for w in counts]
        if presentation.dualized:
            weights = [self.modreps.dual_twist(w, 1 - self.n, dualize=True) for w in weights]
        return self._weight_set(weights, Route.EXACT)

    # Generic route

    def w_question_generic(self, tau: TameType, delta: Optional[int] = None) -> WeightSet:
        """F(lam), lam restricted, with lam' up-arrow lam and tau = tau(w', lam' + rho) for dominant lam'."""
        self._check_type(tau)
        delta = self.config.delta_for(self.n) if delta is None else delta
        witness = self.types.generic_witness(tau, delta) if self.config.verify_generic else None
        if witness is None:
            if self.config.verify_generic:
                logger.warning(f"{tau} is not {delta}-generic; falling back to the definitional search")
            return self.w_question_definitional(tau, delta)

        def label(y: Weight) -> Optional[Weight]:
            return center_shift(y, self.p) if is_restricted(y, self.p) else None

        labels, bound = self.reducer.orbit_search(witness, self.p - 1, label)
        logger.debug(f"{tau}: {len(labels)} generic weights (nu bound {bound})")
        return self._weight_set((self.modreps.canonical_serre(lam) for lam in labels), Route.GENERIC, delta)

    def w_question_definitional(self, tau: TameType, delta: Optional[int] = None) -> WeightSet:
        """Brute force over X_1: lam kept when some dominant lam' up-arrow lam presents tau."""
        self._check_type(tau)
        perms = WeylPerm.all(self.n)
        rho = self.ctx.rho
        found = []
        for lam in restricted_weights(self.n, self.p):
            for below in self.geometry.dominant_below(lam):
                shifted = add(below, rho)
                if any(self.types.tau_of_pair(self.types.pair(w, shifted)) == tau for w in perms):
                    found.append(self.modreps.canonical_serre(lam))
                    break
        return self._weight_set(found, Route.GENERIC, delta)

    def predicted_count(self, mode: CountMode = CountMode.FORMULA, delta: Optional[int] = None) -> int:
        """#W_1 times the number of pairs (C', C) with C' dominant, C restricted and C' up-arrow C."""
        if mode is CountMode.FORMULA:
            total = 0
            for alcove in self.geometry.enumerate_restricted_alcoves():
                point = self.geometry.alcove_point(alcove)
                total += len(self.geometry.dominant_below(point))
            count = self.n * total
            logger.debug(f"predicted count for n={self.n}: {count}")
            return count
        delta = self.config.delta_for(self.n) if delta is None else delta
        sample = self.types.sample_generic_types(delta, 1)
        if not sample:
            raise NoGoodPairError(f"no {delta}-generic type exists for n={self.n}, p={self.p}")
        return len(self.w_question_generic(sample[0], delta))

    def lower_alcove_members(self, weights: WeightSet) -> List[SerreWeight]:
        """Members whose label lies in the lowest alcove."""
        lowest = Alcove.lowest(self.n, self.p)
        members = []
        for weight in weights:
            alcove = self.geometry.alcove_of(weight.weight)
            if not isinstance(alcove, OnWall) and alcove == lowest:
                members.append(weight)
        return members

    # GL3 closed forms

    def c_tau_gl3(self, tau: TameType, mode: CTauMode = CTauMode.CLOSED_FORM) -> FrozenSet[Weight]:
        """C(tau): canonical lam in X_1 with (w, lam) good and tau(w, lam) = tau for some w."""
        if self.n != 3:
            raise UnsupportedRankError("C(tau) lists are for n = 3")
        self._check_type(tau)
        if mode is CTauMode.SEARCH:
            return _c_tau_table(self.p).get(tau, frozenset())
        presentation = self.gl3_parameters(tau)
        candidates = self._gl3_list(presentation)
        if presentation.dualized:
            candidates = [(-c, -b, -a) for a, b, c in candidates]
        return frozenset(center_shift(lam, self.p) for lam in candidates if is_restricted(lam, self.p))

    def _gl3_list(self, presentation: CanonicalPresentation) -> List[Weight]:
        p = self.p
        i, j, k = presentation.pair.mu
        if presentation.niveau == 1:
            return [
                (i, j, k),
                (j, k, i - p + 1),
                (k + p - 1, i, j),
                (k + p - 1, j, i - p + 1),
                (i, k, j - p + 1),
                (j + p - 1, i, k),
            ]
        if presentation.niveau == 2:
            return [
                (i, j, k),
                (j, k, i - p + 1),
                (k + p, i, j - 1),
                (k + p, j - 1, i - p + 1),
                (i, k + 1, j - p),
                (j + p, i, k - 1),
                (i + p - 1, j, k),
                (j, k, i - 2 * p + 2),
            ]
        return [
            (i, j, k),
            (j + 1, k, i - p),
            (k + p, i - 1, j),
            (k + p, j + 1, i - p - 1),
            (i, k + 1, j - p),
            (j + p, i, k - 1),
        ]

    def a_set(self, lam: Weight) -> FrozenSet[SerreWeight]:
        """{F(lam - rho)_reg}, together with its reflection when it lies in the lower alcove."""
        if self.n != 3:
            raise UnsupportedRankError("A-sets are defined for n = 3")
        self.geometry.require_restricted(lam)
        weight = self.modreps.reg_normalize(tuple(x - r for x, r in zip(lam, self.ctx.rho)))
        if self.modreps.gl3_alcove_class(weight) is Gl3Alcove.LOWER:
            return frozenset({weight, self.modreps.gl3_reflection(weight)})
        return frozenset({weight})

    def w_question_gl3(self, tau: TameType, mode: CTauMode = CTauMode.CLOSED_FORM) -> WeightSet:
        """Union of A(lam) over lam in C(tau)."""
        weights: Set[SerreWeight] = set()
        for lam in self.c_tau_gl3(tau, mode):
            weights |= self.a_set(lam)
        return self._weight_set(weights, Route.GL3_LISTS)

    def adps_weights_gl3(self, tau: TameType) -> WeightSet:
        """The C(tau) lists after the ADPS removal rules, then the union of A-sets."""
        if self.n != 3:
            raise UnsupportedRankError("ADPS weights are for n = 3")
        presentation = self.gl3_parameters(tau)
        if presentation.dualized:
            dual = self.types.tau_transform(tau, dualize=True)
            weights = self.adps_weights_gl3(dual)
            return self._weight_set((self.modreps.dual_twist(w, 1 - self.n, dualize=True) for w in weights), Route.ADPS)
        entries = self._gl3_list(presentation)
        p = self.p
        if presentation.niveau == 2:
            entries = entries[:5] + entries[6:]
        elif presentation.niveau == 3:
            entries = [(x, y, z) for x, y, z in entries[:3] if not (x - z == p and x - 1 > y > z)]
        result: Set[SerreWeight] = set()
        for lam in entries:
            if is_restricted(lam, p):
                result |= self.a_set(center_shift(lam, p))
        return self._weight_set(result, Route.ADPS)

    def compare_adps(self, tau: TameType) -> AdpsComparison:
        predicted = self.w_question_gl3(tau).as_set()
        adps = self.adps_weights_gl3(tau).as_set()
        return AdpsComparison(
            tau=str(tau),
            niveau=",".join(str(d) for d in tau.niveaux),
            extra_weights=[list(w.weight) for w in sorted(predicted - adps)],
            adps_subset=adps <= predicted,
        )

    # Structural identities

    def w_question(self, tau: TameType, route: Route, delta: Optional[int] = None) -> WeightSet:
        if route is Route.EXACT:
            return self.w_question_exact(tau)
        if route is Route.GENERIC:
            return self.w_question_generic(tau, delta)
        if route is Route.GL3_LISTS:
            return self.w_question_gl3(tau)
        return self.adps_weights_gl3(tau)

    def gee_closure_map(self) -> Dict[SerreWeight, FrozenSet[SerreWeight]]:
        """F' -> {F(lam) : lam 3-deep restricted, F' in JH(W(lam))}."""
        return _gee_closure_map(self.p)

    def structural_checks(self, tau: TameType, route: Optional[Route] = None) -> StructuralReport:
        """Twist and dual equivariance of W?, and Gee closure for n = 3."""
        if route is None:
            route = Route.GL3_LISTS if self.n == 3 else Route.EXACT
        failures: List[str] = []
        base = self.w_question(tau, route)

        twisted = self.w_question(self.types.tau_transform(tau, 1), route).as_set()
        expected = {self.modreps.dual_twist(w, 1) for w in base}
        twist_ok = twisted == expected
        if not twist_ok:
            failures.append(f"twist: got {sorted(map(str, twisted))}, expected {sorted(map(str, expected))}")

        dual = self.w_question(self.types.tau_transform(tau, dualize=True), route).as_set()
        expected = {self.modreps.dual_twist(w, 1 - self.n, dualize=True) for w in base}
        dual_ok = dual == expected
        if not dual_ok:
            failures.append(f"dual: got {sorted(map(str, dual))}, expected {sorted(map(str, expected))}")

        gee_ok = True
        if self.n == 3:
            closure = self.gee_closure_map()
            members = base.as_set()
            for weight in base:
                for top in closure.get(weight, frozenset()):
                    if top not in members:
                        gee_ok = False
                        failures.append(f"gee: {weight} in W? but {top} is not")
        return StructuralReport(str(tau), route.value, twist_ok, dual_ok, gee_ok, failures)


@cache
def _gee_closure_map(p: int) -> Dict[SerreWeight, FrozenSet[SerreWeight]]:
    ctx = RootCtx(3, p)
    geometry = AlcoveGeometry(ctx)
    modreps = ModularReps(ctx)
    closure: Dict[SerreWeight, Set[SerreWeight]] = {}
    for lam in restricted_weights(3, p):
        alcove = geometry.alcove_of(lam)
        if isinstance(alcove, OnWall) or not geometry.is_deep(lam, 3, alcove):
            continue
        top = modreps.canonical_serre(lam)
        for constituent in modreps.weyl_jh_gl3(lam):
            closure.setdefault(constituent, set()).add(top)
    return {weight: frozenset(tops) for weight, tops in closure.items()}
