"""Hulsurkar matrix, Jantzen's reduction of Deligne-Lusztig characters and the generic JH recipe."""

from dataclasses import dataclass, field
from functools import cache
from itertools import product
from typing import Any, Callable, Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

import networkx as nx
from loguru import logger

from .characters import FormalCharacter, VirtualWeylSum, WeylCharacters, normalize_weyl
from .errors import TriangularityError
from .lattice import (
    Alcove,
    AlcoveGeometry,
    RootCtx,
    Weight,
    WeylPerm,
    add,
    center_shift,
    dot_action,
    epsilon_sigma,
    is_dominant,
    is_restricted,
    prefix_upper_bound,
    rho_sigma,
    scale,
    sub,
)
from .models import PredictionConfig
from .tametypes import InertialTypes, TamePair

PermPair = Tuple[WeylPerm, WeylPerm]


@dataclass(frozen=True)
class HulsurkarData:
    """The W x W Hulsurkar matrix, its inverse and a triangular ordering of W."""

    n: int
    order: Tuple[WeylPerm, ...]
    entries: Dict[PermPair, FormalCharacter] = field(hash=False)
    gamma: Dict[PermPair, FormalCharacter] = field(hash=False)

    def entry(self, sigma: WeylPerm, tau: WeylPerm) -> FormalCharacter:
        return self.entries.get((sigma, tau), FormalCharacter())

    def gamma_entry(self, sigma: WeylPerm, tau: WeylPerm) -> FormalCharacter:
        return self.gamma.get((sigma, tau), FormalCharacter())

    @property
    def is_diagonal(self) -> bool:
        return all(sigma == tau for sigma, tau in self.gamma)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "order": [str(w) for w in self.order],
            "gamma": [
                [str(sigma), str(tau), self.gamma[(sigma, tau)].to_dict()["terms"]]
                for sigma in self.order
                for tau in self.order
                if (sigma, tau) in self.gamma
            ],
        }


def _unit_inverse(unit: FormalCharacter) -> FormalCharacter:
    [(weight, coefficient)] = unit.terms
    return FormalCharacter.monomial(tuple(-x for x in weight), coefficient)


def _signed_weyl_character(characters: WeylCharacters, lam: Weight) -> FormalCharacter:
    sign, dominant = normalize_weyl(lam)
    if sign == 0 or dominant is None:
        return FormalCharacter()
    return characters.weyl_character(dominant).scale(sign)


@cache
def hulsurkar_matrix(n: int) -> HulsurkarData:
    """Build, order and invert the Hulsurkar matrix for GL_n; the result depends on n only."""
    characters = WeylCharacters(RootCtx(n, 3))
    perms = WeylPerm.all(n)
    w0 = WeylPerm.longest(n)
    rho = tuple(range(n - 1, -1, -1))

    entries: Dict[PermPair, FormalCharacter] = {}
    for sigma, tau in product(perms, repeat=2):
        weight = sub(add(scale(-1, epsilon_sigma(w0 * sigma)), epsilon_sigma(tau)), rho)
        value = _signed_weyl_character(characters, weight).scale(tau.sign)
        if value:
            entries[(sigma, tau)] = value

    graph = nx.DiGraph()
    graph.add_nodes_from(perms)
    graph.add_edges_from(pair for pair in entries if pair[0] != pair[1])
    try:
        order = tuple(nx.lexicographical_topological_sort(graph, key=lambda w: w.images))
    except nx.NetworkXUnfeasible as exc:
        raise TriangularityError(f"Hulsurkar matrix for n={n} admits no triangular ordering") from exc

    for sigma in order:
        diagonal = entries.get((sigma, sigma), FormalCharacter())
        if not diagonal.is_unit():
            raise TriangularityError(f"diagonal entry at {sigma} is not a unit: {diagonal.terms}")

    # back-substitution, one column at a time
    gamma: Dict[PermPair, FormalCharacter] = {}
    for col, tau in enumerate(order):
        gamma[(tau, tau)] = _unit_inverse(entries[(tau, tau)])
        for row in range(col - 1, -1, -1):
            sigma = order[row]
            acc = FormalCharacter()
            for kappa in order[row + 1 : col + 1]:
                if (sigma, kappa) in entries and (kappa, tau) in gamma:
                    acc = acc + entries[(sigma, kappa)] * gamma[(kappa, tau)]
            if acc:
                gamma[(sigma, tau)] = -(_unit_inverse(entries[(sigma, sigma)]) * acc)

    data = HulsurkarData(n, order, entries, gamma)
    problems = check_inverse(data)
    if problems:
        raise TriangularityError("; ".join(problems))
    logger.debug(f"Hulsurkar matrix for n={n}: {len(entries)} entries, {len(gamma)} inverse entries")
    return data


def check_inverse(data: HulsurkarData) -> List[str]:
    """Entries where entries * gamma differs from the identity."""
    identity = FormalCharacter.monomial((0,) * data.n)
    issues = []
    for sigma, tau in product(data.order, repeat=2):
        acc = FormalCharacter()
        for kappa in data.order:
            acc = acc + data.entry(sigma, kappa) * data.gamma_entry(kappa, tau)
        expected = identity if sigma == tau else FormalCharacter()
        if acc != expected:
            issues.append(f"(M gamma)[{sigma}, {tau}] = {acc.terms}")
    return issues


def hulsurkar(ctx: RootCtx) -> HulsurkarData:
    return hulsurkar_matrix(ctx.n)


@dataclass(frozen=True)
class GenericDecomposition:
    """Restricted highest weights of the generic Jordan-Holder constituents of one pair."""

    weights: Tuple[Weight, ...]
    delta: int
    deep: bool  # whether Lambda - rho' was verified delta-deep in C_0
    nu_bound: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weights": [list(w) for w in self.weights],
            "delta": self.delta,
            "deep": self.deep,
            "nu_bound": self.nu_bound,
        }


class JantzenReducer:
    """Reductions mod p of Deligne-Lusztig representations of GL_n(F_q)."""

    def __init__(
        self,
        ctx: RootCtx,
        r: int = 1,
        config: Optional[PredictionConfig] = None,
        data: Optional[HulsurkarData] = None,
    ):
        self.ctx = ctx
        self.n = ctx.n
        self.p = ctx.p
        self.r = r
        self.q = ctx.p**r
        self.config = config or PredictionConfig()
        self.characters = WeylCharacters(ctx)
        self.geometry = AlcoveGeometry(ctx)
        self.types = InertialTypes(ctx, r)
        self._data = data

    @property
    def hulsurkar(self) -> HulsurkarData:
        if self._data is None:
            self._data = hulsurkar_matrix(self.n)
        return self._data

    # Jantzen's formula

    def jantzen_virtual(self, pair: TamePair) -> VirtualWeylSum:
        """R-bar_w(Lambda) as a virtual sum of Weyl modules, labels reduced mod (q-1)X^0."""
        data = self.hulsurkar
        w0 = WeylPerm.longest(self.n)
        mu = sub(pair.mu, self.ctx.rho)
        total = VirtualWeylSum()
        for (sigma, tau), coefficient in data.gamma.items():
            shifted = sub(mu, pair.w.act(epsilon_sigma(w0 * tau)))
            lam = add(dot_action(sigma, shifted), scale(self.q, rho_sigma(sigma)))
            total = total + self.characters.brauer_expand(lam, coefficient)
        result = total.reduce_mod_center(self.q)
        logger.debug(f"Jantzen sum for {pair}: {len(result)} Weyl terms")
        return result

    # Generic decomposition

    def translations(self, bound: int) -> Iterator[Weight]:
        """nu with |nu_i| <= bound and sum in [0, n-1]; other sums differ by (q-1)X^0."""
        for nu in product(range(-bound, bound + 1), repeat=self.n):
            if 0 <= sum(nu) < self.n:
                yield nu

    def dominant_orbit_points(self, pair: TamePair, bound: int, max_diff: int) -> Iterator[Tuple[Weight, Weight]]:
        """(nu, x) with x = sigma Lambda + (q - sigma w sigma^-1) nu - rho' dominant and below the restricted box."""
        within = prefix_upper_bound(self.n, max_diff)
        perms = WeylPerm.all(self.n)
        seen: Set[Weight] = set()
        for nu in self.translations(bound):
            for sigma in perms:
                x = sub(self.types.act_pair(nu, sigma, pair).mu, self.ctx.rho)
                if x in seen or not is_dominant(x) or not within(x, sum(x)):
                    continue
                seen.add(x)
                yield nu, x

    def orbit_search(
        self,
        pair: TamePair,
        max_diff: int,
        label: Callable[[Weight], Optional[Weight]],
    ) -> Tuple[FrozenSet[Weight], int]:
        """Labels of every weight reachable by up-arrow from a dominant orbit point of `pair`.

        The nu box starts at the configured bound and doubles while a
        contributing translation sits on its boundary.
        """
        within = prefix_upper_bound(self.n, max_diff)
        bound = self.config.nu_bound_for(self.n)
        while True:
            found: Set[Weight] = set()
            on_edge = False
            for nu, x in self.dominant_orbit_points(pair, bound, max_diff):
                total = sum(x)

                def region(v: Weight, total: int = total) -> bool:
                    return within(v, total)

                hits = {lam for lam in map(label, self.geometry.up_set(x, region)) if lam is not None}
                found |= hits
                if hits and max(abs(c) for c in nu) == bound:
                    on_edge = True
            if not on_edge:
                return frozenset(found), bound
            if 2 * bound > self.config.max_nu_bound:
                logger.warning(f"nu bound {bound} still contributes at the configured maximum; result may be partial")
                return frozenset(found), bound
            logger.warning(f"translation on the nu bound {bound} contributed; retrying with {2 * bound}")
            bound *= 2

    def generic_jh(self, pair: TamePair, delta: Optional[int] = None) -> GenericDecomposition:
        """Restricted lam with sigma.(mu + (w - p) nu) up-arrow w0.(lam - p rho') for some dominant left side."""
        delta = self.config.delta_for(self.n) if delta is None else delta
        mu = sub(pair.mu, self.ctx.rho)
        deep = self.geometry.is_deep(mu, delta, Alcove.lowest(self.n, self.p))
        if not deep:
            logger.warning(f"{pair}: Lambda - rho' is not {delta}-deep in C_0; ungeneric input, no correctness guarantee")
        w0 = WeylPerm.longest(self.n)
        shift = scale(self.p, self.ctx.rho)

        def label(y: Weight) -> Optional[Weight]:
            lam = add(dot_action(w0, y), shift)
            return center_shift(lam, self.p) if is_restricted(lam, self.p) else None

        weights, bound = self.orbit_search(pair, self.p, label)
        return GenericDecomposition(tuple(sorted(weights)), delta, deep, bound)
