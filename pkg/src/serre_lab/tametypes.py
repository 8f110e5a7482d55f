"""Tame inertial types, the pairs (w, mu) presenting them, goodness and genericity."""

import re
from dataclasses import dataclass
from functools import cache
from itertools import product
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import divisors

from .errors import NotGoodPairError, TameTypeError, UnsupportedRankError
from .lattice import RootCtx, Weight, WeylPerm, add, scale, sub

Orbit = Tuple[int, int]  # (niveau d, exponent e)


def reduce_orbit(base: int, d: int, e: int) -> List[Orbit]:
    """Canonical orbits of the character omega_d^e over F_base.

    A non-primitive exponent descends to its exact niveau d' and then counts
    d/d' times; the exponent is the least element of its Frobenius orbit.
    """
    modulus = base**d - 1
    e %= modulus
    for exact in divisors(d):
        ratio = modulus // (base**exact - 1)
        if e % ratio == 0:
            reduced = e // ratio
            small = base**exact - 1
            rep = min((reduced * base**k) % small for k in range(exact))
            return [(exact, rep)] * (d // exact)
    raise AssertionError("d always divides itself")


@cache
def primitive_exponents(base: int, d: int) -> Tuple[int, ...]:
    """Canonical exponents of exact niveau d, sorted."""
    found = set()
    for e in range(base**d - 1):
        orbits = reduce_orbit(base, d, e)
        if orbits[0][0] == d:
            found.add(orbits[0][1])
    return tuple(sorted(found))


@dataclass(frozen=True)
class TameType:
    """Frobenius-stable multiset of fundamental-character powers, in canonical form."""

    p: int
    orbits: Tuple[Orbit, ...]  # sorted (niveau, exponent) pairs
    r: int = 1

    def __post_init__(self):
        """Validate canonical form."""
        if not self.orbits:
            raise TameTypeError("a tame type needs at least one orbit")
        if list(self.orbits) != sorted(self.orbits):
            raise TameTypeError("orbits must be sorted")
        for d, e in self.orbits:
            if d < 1 or not 0 <= e < self.base**d - 1:
                raise TameTypeError(f"orbit {d}:{e} out of range")
            if reduce_orbit(self.base, d, e) != [(d, e)]:
                raise TameTypeError(f"orbit {d}:{e} is not canonical")

    @classmethod
    def from_characters(cls, p: int, raw: Iterable[Orbit], r: int = 1) -> "TameType":
        """Canonicalize arbitrary (niveau, exponent) data."""
        orbits: List[Orbit] = []
        for d, e in raw:
            if d < 1:
                raise TameTypeError(f"niveau must be positive, got {d}")
            orbits.extend(reduce_orbit(p**r, d, e))
        return cls(p, tuple(sorted(orbits)), r)

    @classmethod
    def parse(cls, text: str, p: int, r: int = 1) -> "TameType":
        """Parse "d:e[,d:e...]", e.g. "2:8,1:0"."""
        raw = []
        for token in text.split(","):
            match = re.fullmatch(r"\s*(\d+)\s*:\s*(-?\d+)\s*", token)
            if not match:
                raise TameTypeError(f"cannot parse tame type component {token!r}")
            raw.append((int(match.group(1)), int(match.group(2))))
        return cls.from_characters(p, raw, r)

    @property
    def base(self) -> int:
        return self.p**self.r

    @property
    def n(self) -> int:
        return sum(d for d, _ in self.orbits)

    @property
    def niveaux(self) -> Tuple[int, ...]:
        return tuple(sorted(d for d, _ in self.orbits))

    @property
    def det_exponent(self) -> int:
        """Exponent of omega_1 giving the determinant."""
        return sum(e for _, e in self.orbits) % (self.base - 1)

    def __str__(self) -> str:
        return ",".join(f"{d}:{e}" for d, e in self.orbits)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "n": self.n,
            "orbits": [{"niveau": d, "exp": e} for d, e in self.orbits],
        }


@dataclass(frozen=True)
class TamePair:
    """A pair (w, mu) in W x X(T); mu is the Deligne-Lusztig parameter."""

    w: WeylPerm
    mu: Weight
    p: int
    r: int = 1

    def __post_init__(self):
        if len(self.mu) != self.w.n:
            raise ValueError(f"mu {self.mu} does not match permutation size {self.w.n}")

    @property
    def q(self) -> int:
        return self.p**self.r

    def __str__(self) -> str:
        return f"({self.w}, {self.mu})"


@dataclass(frozen=True)
class WeightBox:
    """Inclusive box of weights lower <= lam <= upper coordinatewise."""

    lower: Weight
    upper: Weight

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("box corners have different lengths")

    def __iter__(self) -> Iterator[Weight]:
        ranges = [range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper)]
        return (tuple(point) for point in product(*ranges))


class InertialTypes:
    """Pairs, types and genericity for GL_n over F_q, q = p^r."""

    def __init__(self, ctx: RootCtx, r: int = 1):
        if r < 1:
            raise ValueError("r must be positive")
        self.ctx = ctx
        self.n = ctx.n
        self.p = ctx.p
        self.r = r
        self.q = ctx.p**r

    # Pairs

    def pair(self, w: WeylPerm, mu: Sequence[int]) -> TamePair:
        return TamePair(w, tuple(mu), self.p, self.r)

    def act_pair(self, nu: Sequence[int], sigma: WeylPerm, pair: TamePair) -> TamePair:
        """(sigma w sigma^-1, sigma mu + (q - sigma w sigma^-1) nu)."""
        conj = sigma * pair.w * sigma.inverse()
        mu = add(sigma.act(pair.mu), sub(scale(self.q, nu), conj.act(nu)))
        return TamePair(conj, mu, self.p, self.r)

    def orbit_exponents(self, pair: TamePair) -> List[Orbit]:
        """(orbit size, sum_k mu_{w^k(i)} q^k) for every w-orbit."""
        return [
            (len(cycle), sum(pair.mu[i] * self.q**k for k, i in enumerate(cycle)))
            for cycle in pair.w.cycles()
        ]

    def is_good(self, pair: TamePair) -> bool:
        for size, exponent in self.orbit_exponents(pair):
            modulus = self.q**size - 1
            for d in divisors(size)[:-1]:
                if exponent % (modulus // (self.q**d - 1)) == 0:
                    return False
        return True

    def tau_of_pair(self, pair: TamePair) -> TameType:
        return TameType.from_characters(self.p, self.orbit_exponents(pair), self.r)

    def tau_iso(self, first: TameType, second: TameType) -> bool:
        if first.p != second.p or first.n != second.n:
            raise TameTypeError("types over different (n, p) cannot be compared")
        return first == second

    def tau_transform(self, tau: TameType, twist_k: int = 0, dualize: bool = False) -> TameType:
        """tau^vee (if dualize) tensor omega^twist_k."""
        raw = []
        for d, e in tau.orbits:
            exponent = -e if dualize else e
            raw.append((d, exponent + twist_k * (tau.base**d - 1) // (tau.base - 1)))
        return TameType.from_characters(tau.p, raw, tau.r)

    def pairs_for_tau(self, tau: TameType, weights: Iterable[Sequence[int]]) -> List[TamePair]:
        """All (w, mu) with mu among `weights` and tau(w, mu) = tau."""
        perms = WeylPerm.all(self.n)
        found = []
        for mu in weights:
            for w in perms:
                pair = self.pair(w, mu)
                if self.tau_of_pair(pair) == tau:
                    found.append(pair)
        return found

    def cuspidal_support(self, pair: TamePair) -> List[Orbit]:
        """Cuspidal parameters (degree, exponent) whose parabolic induction is V(tau)."""
        if not self.is_good(pair):
            raise NotGoodPairError(f"{pair} is not good")
        return sorted(
            reduce_orbit(self.q, size, exponent)[0] for size, exponent in self.orbit_exponents(pair)
        )

    def dl_dimension(self, pair: TamePair) -> int:
        """prod_{i<=n} (q^i - 1) / prod over w-orbits (q^d - 1)."""
        numerator = 1
        for i in range(1, self.n + 1):
            numerator *= self.q**i - 1
        denominator = 1
        for cycle in pair.w.cycles():
            denominator *= self.q ** len(cycle) - 1
        return numerator // denominator

    # Enumeration

    def all_types(self) -> List[TameType]:
        """Every canonical tame type of dimension n, sorted by orbits."""
        candidates = [
            (d, e) for d in range(1, self.n + 1) for e in primitive_exponents(self.q, d)
        ]
        result: List[TameType] = []

        def extend(start: int, remaining: int, chosen: List[Orbit]) -> None:
            if remaining == 0:
                result.append(TameType(self.p, tuple(chosen), self.r))
                return
            for index in range(start, len(candidates)):
                d, _ = candidates[index]
                if d <= remaining:
                    extend(index, remaining - d, chosen + [candidates[index]])

        extend(0, self.n, [])
        logger.debug(f"enumerated {len(result)} tame types for n={self.n}, q={self.q}")
        return result

    def deep_lowest_weights(self, delta: int) -> Iterator[Weight]:
        """Weights delta-deep in C0 with last coordinate in [0, p-2], lexicographic in differences."""
        # simple pairings exceed delta and the highest pairing stays below p - delta
        budget = self.p - delta - 1 - (self.n - 1)

        def diffs(prefix: List[int], remaining: int) -> Iterator[List[int]]:
            if len(prefix) == self.n - 1:
                yield prefix
                return
            for d in range(delta, remaining + 1):
                yield from diffs(prefix + [d], remaining - d)

        for last in range(self.p - 1):
            for gaps in diffs([], budget):
                lam = [last]
                for d in reversed(gaps):
                    lam.append(lam[-1] + d)
                yield tuple(reversed(lam))

    def generic_witness(self, tau: TameType, delta: int) -> Optional[TamePair]:
        """A good pair presenting tau whose mu is delta-deep in C0, if one exists."""
        if delta < 0:
            raise ValueError("delta must be non-negative")
        if self.r != 1:
            raise UnsupportedRankError("genericity is only defined for q = p")
        if tau.n != self.n or tau.p != self.p:
            raise TameTypeError(f"type {tau} does not live over (n={self.n}, p={self.p})")
        perms = [w for w in WeylPerm.all(self.n) if w.cycle_type() == tau.niveaux]
        for mu in self.deep_lowest_weights(delta):
            if sum(mu) % (self.p - 1) != tau.det_exponent:
                continue
            for w in perms:
                pair = self.pair(w, mu)
                if self.is_good(pair) and self.tau_of_pair(pair) == tau:
                    return pair
        return None

    def is_generic(self, tau: TameType, delta: int) -> bool:
        return self.generic_witness(tau, delta) is not None

    def sample_generic_types(self, delta: int, count: int) -> List[TameType]:
        """Up to `count` distinct delta-generic types, deterministic order."""
        found: List[TameType] = []
        perms = WeylPerm.all(self.n)
        for mu in self.deep_lowest_weights(delta):
            for w in perms:
                pair = self.pair(w, mu)
                if not self.is_good(pair):
                    continue
                tau = self.tau_of_pair(pair)
                if tau not in found:
                    found.append(tau)
                    if len(found) == count:
                        return found
        return found
