"""Weight lattice, Weyl group, dot action, alcoves and the up-arrow order for GL_n."""

import re
from collections import deque
from dataclasses import dataclass
from functools import cache, cached_property
from itertools import permutations, product
from typing import Callable, Deque, Dict, Iterator, List, Sequence, Set, Tuple, Union

from loguru import logger
from sympy import isprime

from .errors import DegenerateCharacteristicError, NotRestrictedError, SerreLabError

Weight = Tuple[int, ...]
Root = Tuple[int, int]

_MAX_WALK_STEPS = 100_000


@cache
def positive_roots(n: int) -> Tuple[Root, ...]:
    """Positive roots e_i - e_j (i < j, 0-indexed) in lexicographic order."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def root_vector(n: int, root: Root) -> Weight:
    i, j = root
    vec = [0] * n
    vec[i] = 1
    vec[j] = -1
    return tuple(vec)


def add(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a: Sequence[int]) -> Weight:
    return tuple(k * x for x in a)


def prefix_sums(a: Sequence[int]) -> List[int]:
    sums = []
    total = 0
    for x in a:
        total += x
        sums.append(total)
    return sums


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam <= mu: mu - lam is a non-negative combination of simple roots."""
    diff = sub(mu, lam)
    sums = prefix_sums(diff)
    return sums[-1] == 0 and all(s >= 0 for s in sums[:-1])


def is_dominant(lam: Sequence[int]) -> bool:
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def is_restricted(lam: Sequence[int], q: int) -> bool:
    """0 <= lam_i - lam_{i+1} <= q - 1 for every simple root."""
    return all(0 <= lam[i] - lam[i + 1] <= q - 1 for i in range(len(lam) - 1))


def center_shift(lam: Sequence[int], q: int) -> Weight:
    """Shift by a multiple of (q-1)(1,...,1) so the last coordinate lies in [0, q-2]."""
    if q == 2:
        return tuple(x - lam[-1] for x in lam)
    k = lam[-1] // (q - 1)
    return tuple(x - k * (q - 1) for x in lam)


@dataclass(frozen=True)
class RootCtx:
    """Rank n and odd prime characteristic p."""

    n: int
    p: int

    def __post_init__(self):
        """Validate rank and characteristic."""
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")

    @cached_property
    def positive_roots(self) -> Tuple[Root, ...]:
        return positive_roots(self.n)

    @cached_property
    def simple_roots(self) -> Tuple[Root, ...]:
        return tuple((i, i + 1) for i in range(self.n - 1))

    @cached_property
    def rho(self) -> Weight:
        return tuple(range(self.n - 1, -1, -1))

    @property
    def rho_prime(self) -> Weight:
        return self.rho

    def pairing(self, lam: Sequence[int], root: Root) -> int:
        """<lam + rho', root^vee>."""
        i, j = root
        return lam[i] - lam[j] + (j - i)

    def require_alcove_regime(self) -> None:
        if self.p <= self.n:
            raise DegenerateCharacteristicError(
                f"alcoves need p > n to contain weights (n={self.n}, p={self.p})"
            )


@dataclass(frozen=True)
class WeylPerm:
    """Permutation of {0,...,n-1}; acts on weights by w(e_i) = e_{w(i)}."""

    images: Tuple[int, ...]

    def __post_init__(self):
        """Validate that images form a permutation."""
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "WeylPerm":
        return cls(tuple(range(n)))

    @classmethod
    def longest(cls, n: int) -> "WeylPerm":
        return cls(tuple(range(n - 1, -1, -1)))

    @classmethod
    def simple(cls, n: int, i: int) -> "WeylPerm":
        """Simple reflection s_i swapping i and i+1 (0-indexed)."""
        images = list(range(n))
        images[i], images[i + 1] = i + 1, i
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> "WeylPerm":
        """Build from 1-indexed cycles, e.g. [[1, 2, 3]]."""
        images = list(range(n))
        seen: Set[int] = set()
        for cycle in cycles:
            for k, point in enumerate(cycle):
                if not 1 <= point <= n or point in seen:
                    raise ValueError(f"invalid cycle {cycle} for n={n}")
                seen.add(point)
                images[point - 1] = cycle[(k + 1) % len(cycle)] - 1
        return cls(tuple(images))

    @classmethod
    def parse(cls, n: int, text: str) -> "WeylPerm":
        """Parse cycle notation such as "(1 2 3)", "(1 2)(3 4)" or "id"."""
        text = text.strip()
        if text in ("", "id", "()", "e"):
            return cls.identity(n)
        groups = re.findall(r"\(([^()]*)\)", text)
        if not groups or re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"cannot parse permutation {text!r}")
        cycles = [[int(tok) for tok in re.split(r"[\s,]+", g.strip()) if tok] for g in groups]
        return cls.from_cycles(n, [c for c in cycles if c])

    @classmethod
    def all(cls, n: int) -> List["WeylPerm"]:
        return [cls(images) for images in permutations(range(n))]

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "WeylPerm") -> "WeylPerm":
        """Composition (self o other)(i) = self(other(i))."""
        return WeylPerm(tuple(self.images[other.images[i]] for i in range(self.n)))

    def inverse(self) -> "WeylPerm":
        inv = [0] * self.n
        for i, image in enumerate(self.images):
            inv[image] = i
        return WeylPerm(tuple(inv))

    def power(self, k: int) -> "WeylPerm":
        result = WeylPerm.identity(self.n)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = base * result
        return result

    def cycles(self) -> List[Tuple[int, ...]]:
        """Orbits (i, w(i), w^2(i), ...) starting at their least element."""
        seen: Set[int] = set()
        result = []
        for start in range(self.n):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            result.append(tuple(cycle))
        return result

    def cycle_type(self) -> Tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    @property
    def sign(self) -> int:
        return -1 if (self.n - len(self.cycles())) % 2 else 1

    def act(self, lam: Sequence[int]) -> Weight:
        """Linear action: (w lam)_{w(i)} = lam_i."""
        result = [0] * self.n
        for i, image in enumerate(self.images):
            result[image] = lam[i]
        return tuple(result)

    def __str__(self) -> str:
        parts = [c for c in self.cycles() if len(c) > 1]
        if not parts:
            return "id"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in parts)


@dataclass(frozen=True)
class OnWall:
    """A weight lying on the hyperplane <lam + rho', root^vee> = level * p."""

    root: Root
    level: int


@dataclass(frozen=True)
class Alcove:
    """An alcove recorded by its level n_alpha on every positive root."""

    n: int
    p: int
    levels: Tuple[int, ...]  # one entry per positive root, lexicographic root order

    def __post_init__(self):
        """Validate level count and additivity along root sums."""
        roots = positive_roots(self.n)
        if len(self.levels) != len(roots):
            raise ValueError(f"expected {len(roots)} levels, got {len(self.levels)}")
        index = {root: k for k, root in enumerate(roots)}
        for i, j in roots:
            for k in range(i + 1, j):
                low = self.levels[index[(i, k)]] + self.levels[index[(k, j)]]
                if not low <= self.levels[index[(i, j)]] <= low + 1:
                    raise ValueError(f"inconsistent alcove levels {self.levels}")

    def level(self, root: Root) -> int:
        return self.levels[positive_roots(self.n).index(root)]

    @property
    def is_restricted(self) -> bool:
        return all(self.level((i, i + 1)) == 0 for i in range(self.n - 1))

    @property
    def is_dominant(self) -> bool:
        return all(self.level((i, i + 1)) >= 0 for i in range(self.n - 1))

    @property
    def is_lowest(self) -> bool:
        return all(level == 0 for level in self.levels)

    @classmethod
    def lowest(cls, n: int, p: int) -> "Alcove":
        return cls(n, p, (0,) * len(positive_roots(n)))

    def to_dict(self) -> Dict[str, List[List[int]]]:
        roots = positive_roots(self.n)
        return {"levels": [[i + 1, j + 1, lvl] for (i, j), lvl in zip(roots, self.levels)]}


@dataclass(frozen=True)
class AffineElem:
    """Element (p nu, w) of the affine Weyl group acting by lam -> w.lam + p nu."""

    w: WeylPerm
    nu: Weight
    p: int

    def __post_init__(self):
        if len(self.nu) != self.w.n:
            raise ValueError("translation and permutation sizes differ")

    @classmethod
    def reflection(cls, n: int, p: int, root: Root, level: int) -> "AffineElem":
        """s_{alpha, level p}: lam -> lam - (<lam + rho', alpha^vee> - level p) alpha."""
        i, j = root
        images = list(range(n))
        images[i], images[j] = j, i
        return cls(WeylPerm(tuple(images)), scale(level, root_vector(n, root)), p)

    def apply(self, lam: Sequence[int]) -> Weight:
        return add(dot_action(self.w, lam), scale(self.p, self.nu))

    def __mul__(self, other: "AffineElem") -> "AffineElem":
        return AffineElem(self.w * other.w, add(self.nu, self.w.act(other.nu)), self.p)


def dot_action(w: WeylPerm, lam: Sequence[int]) -> Weight:
    """w . lam = w(lam + rho') - rho'."""
    n = len(lam)
    shifted = [lam[i] + n - 1 - i for i in range(n)]
    moved = w.act(shifted)
    return tuple(moved[i] - (n - 1 - i) for i in range(n))


def rho_sigma(sigma: WeylPerm) -> Weight:
    """Sum of e_1 + ... + e_i over simple roots alpha_i with sigma^{-1}(alpha_i) < 0."""
    n = sigma.n
    inv = sigma.inverse()
    result = [0] * n
    for i in range(n - 1):
        if inv(i) > inv(i + 1):
            for k in range(i + 1):
                result[k] += 1
    return tuple(result)


def epsilon_sigma(sigma: WeylPerm) -> Weight:
    """epsilon'_sigma = sigma^{-1}(rho'_sigma)."""
    return sigma.inverse().act(rho_sigma(sigma))


def restricted_weights(n: int, p: int) -> Iterator[Weight]:
    """Canonical p-restricted weights: differences in [0, p-1], last entry in [0, p-2]."""
    for last in range(p - 1):
        for diffs in product(range(p), repeat=n - 1):
            lam = [last]
            for d in reversed(diffs):
                lam.append(lam[-1] + d)
            yield tuple(reversed(lam))


class AlcoveGeometry:
    """Alcove geometry and strong linkage for a fixed (n, p)."""

    def __init__(self, ctx: RootCtx):
        self.ctx = ctx
        self.n = ctx.n
        self.p = ctx.p

    # Dot action and orders

    def dot_action(self, w: WeylPerm, lam: Sequence[int]) -> Weight:
        return dot_action(w, lam)

    def dominance_leq(self, lam: Sequence[int], mu: Sequence[int]) -> bool:
        return dominance_leq(lam, mu)

    def reflect(self, lam: Sequence[int], root: Root, level: int) -> Weight:
        """Affine reflection of lam across H_{root, level p}."""
        c = self.ctx.pairing(lam, root) - level * self.p
        i, j = root
        result = list(lam)
        result[i] -= c
        result[j] += c
        return tuple(result)

    # Alcoves

    def alcove_of(self, lam: Sequence[int]) -> Union[Alcove, OnWall]:
        levels = []
        for root in self.ctx.positive_roots:
            value = self.ctx.pairing(lam, root)
            if value % self.p == 0:
                return OnWall(root, value // self.p)
            levels.append(value // self.p)
        return Alcove(self.n, self.p, tuple(levels))

    def alcove_predicates(self, alcove: Alcove) -> Dict[str, bool]:
        return {
            "restricted": alcove.is_restricted,
            "dominant": alcove.is_dominant,
            "is_C0": alcove.is_lowest,
        }

    def enumerate_restricted_alcoves(self) -> List[Alcove]:
        """All alcoves inside the restricted region, sorted by level vector."""
        self.ctx.require_alcove_regime()
        found: Set[Alcove] = set()
        for diffs in product(range(self.p - 1), repeat=self.n - 1):
            lam = [0]
            for d in reversed(diffs):
                lam.append(lam[-1] + d)
            alcove = self.alcove_of(tuple(reversed(lam)))
            if isinstance(alcove, Alcove):
                found.add(alcove)
        alcoves = sorted(found, key=lambda a: a.levels)
        logger.debug(f"found {len(alcoves)} restricted alcoves for n={self.n}, p={self.p}")
        return alcoves

    def walk_to_alcove(self, lam: Sequence[int], target: Alcove) -> Weight:
        """Reflect lam across separating hyperplanes until it lies in target."""
        current = tuple(lam)
        for _ in range(_MAX_WALK_STEPS):
            alcove = self.alcove_of(current)
            if isinstance(alcove, OnWall):
                raise SerreLabError(f"cannot walk a wall weight {current}")
            if alcove == target:
                return current
            for root, have, want in zip(self.ctx.positive_roots, alcove.levels, target.levels):
                if have != want:
                    wall = have + 1 if have < want else have
                    current = self.reflect(current, root, wall)
                    break
        raise SerreLabError(f"alcove walk from {tuple(lam)} did not terminate")

    def alcove_point(self, alcove: Alcove) -> Weight:
        """A weight in the given alcove, reached from 0 in the lowest alcove."""
        self.ctx.require_alcove_regime()
        return self.walk_to_alcove((0,) * self.n, alcove)

    def is_deep(self, lam: Sequence[int], delta: int, alcove: Alcove) -> bool:
        """n_alpha p + delta < <lam + rho', alpha^vee> < (n_alpha + 1) p - delta for all alpha > 0."""
        if delta < 0:
            raise ValueError("delta must be non-negative")
        for root, level in zip(self.ctx.positive_roots, alcove.levels):
            value = self.ctx.pairing(lam, root)
            if not level * self.p + delta < value < (level + 1) * self.p - delta:
                return False
        return True

    # Strong linkage

    def _raise_steps(self, nu: Weight, within: Callable[[Weight], bool]) -> Iterator[Weight]:
        """Reflections moving nu strictly up that stay inside a dominance-monotone region."""
        for root in self.ctx.positive_roots:
            i, j = root
            value = self.ctx.pairing(nu, root)
            m = value // self.p + 1
            while True:
                c = m * self.p - value
                raised = list(nu)
                raised[i] += c
                raised[j] -= c
                candidate = tuple(raised)
                if not within(candidate):
                    break
                yield candidate
                m += 1

    def _lower_steps(self, nu: Weight, within: Callable[[Weight], bool]) -> Iterator[Weight]:
        for root in self.ctx.positive_roots:
            i, j = root
            value = self.ctx.pairing(nu, root)
            m = (value - 1) // self.p
            while True:
                c = value - m * self.p
                lowered = list(nu)
                lowered[i] -= c
                lowered[j] += c
                candidate = tuple(lowered)
                if not within(candidate):
                    break
                yield candidate
                m -= 1

    def up_set(self, lam: Sequence[int], within: Callable[[Weight], bool]) -> Set[Weight]:
        """All nu with lam up-arrow nu whose chains stay inside `within`.

        `within` must be closed downwards under dominance along each reflection
        ray (prefix-sum upper bounds are).
        """
        start = tuple(lam)
        seen = {start}
        queue: Deque[Weight] = deque([start])
        while queue:
            nu = queue.popleft()
            for raised in self._raise_steps(nu, within):
                if raised not in seen:
                    seen.add(raised)
                    queue.append(raised)
        return seen

    def up_arrow(self, lam: Sequence[int], mu: Sequence[int]) -> bool:
        lam, mu = tuple(lam), tuple(mu)
        if lam == mu:
            return True
        if not dominance_leq(lam, mu):
            return False
        seen = {lam}
        queue: Deque[Weight] = deque([lam])

        def bounded(nu: Weight) -> bool:
            return dominance_leq(nu, mu)

        while queue:
            nu = queue.popleft()
            for raised in self._raise_steps(nu, bounded):
                if raised == mu:
                    return True
                if raised not in seen:
                    seen.add(raised)
                    queue.append(raised)
        return False

    def up_arrow_alcove(self, lower: Alcove, upper: Alcove) -> bool:
        lam = self.alcove_point(lower)
        return self.up_arrow(lam, self.walk_to_alcove(lam, upper))

    def dominant_below(self, lam: Sequence[int]) -> List[Weight]:
        """All dominant lam' with lam' up-arrow lam, sorted lexicographically."""
        top = tuple(lam)
        if not is_dominant(top):
            raise ValueError(f"dominant_below needs a dominant weight, got {top}")
        total = sum(top)
        n = self.n

        # a dominant weight of total S has k-th prefix sum at least kS/n
        def within(nu: Weight) -> bool:
            sums = prefix_sums(nu)
            return all(n * sums[k - 1] >= k * total for k in range(1, n))

        seen = {top}
        queue: Deque[Weight] = deque([top])
        while queue:
            nu = queue.popleft()
            for lowered in self._lower_steps(nu, within):
                if lowered not in seen:
                    seen.add(lowered)
                    queue.append(lowered)
        return sorted(nu for nu in seen if is_dominant(nu))

    # Weyl group data attached to alcoves

    def rho_sigma(self, sigma: WeylPerm) -> Weight:
        return rho_sigma(sigma)

    def epsilon_sigma(self, sigma: WeylPerm) -> Weight:
        return epsilon_sigma(sigma)

    def w1_subgroup(self) -> List[WeylPerm]:
        """Powers of the n-cycle, each checked to satisfy sigma.C0 + p rho'_sigma = C0."""
        self.ctx.require_alcove_regime()
        cycle = WeylPerm(tuple((i + 1) % self.n for i in range(self.n)))
        lowest = Alcove.lowest(self.n, self.p)
        zero = (0,) * self.n
        elements = []
        for k in range(self.n):
            sigma = cycle.power(k)
            moved = add(dot_action(sigma, zero), scale(self.p, self.rho_sigma(sigma)))
            if self.alcove_of(moved) != lowest:
                raise SerreLabError(f"{sigma} does not stabilize the lowest alcove")
            elements.append(sigma)
        return elements

    def require_restricted(self, lam: Sequence[int]) -> None:
        if not is_restricted(lam, self.p):
            raise NotRestrictedError(f"{tuple(lam)} is not {self.p}-restricted")


def prefix_upper_bound(n: int, max_diff: int) -> Callable[[Weight, int], bool]:
    """Prefix-sum bound met by every weight of total S whose simple differences are <= max_diff.

    n P_k(nu) - k S = sum_i d_i min(i,k)(n - max(i,k)), maximal at d_i = max_diff.
    """
    coefficients = [
        sum(min(i, k) * (n - max(i, k)) for i in range(1, n)) for k in range(1, n)
    ]

    def check(nu: Weight, total: int) -> bool:
        sums = prefix_sums(nu)
        return all(
            n * sums[k - 1] <= k * total + max_diff * coefficients[k - 1] for k in range(1, n)
        )

    return check
