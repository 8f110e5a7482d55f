"""Formal characters in Z[X(T)]^W, Weyl characters and virtual Weyl-module sums."""

from collections import defaultdict
from dataclasses import dataclass
from functools import cache
from itertools import permutations, product
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from loguru import logger

from .errors import CharacterError
from .lattice import RootCtx, Weight, add, center_shift, is_dominant

Terms = Tuple[Tuple[Weight, int], ...]


def _freeze(mapping: Mapping[Weight, int]) -> Terms:
    return tuple(sorted((tuple(w), c) for w, c in mapping.items() if c != 0))


@dataclass(frozen=True)
class FormalCharacter:
    """Finite Z-linear combination of monomials e(lambda), sorted and without zeros."""

    terms: Terms = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Weight, int]) -> "FormalCharacter":
        return cls(_freeze(mapping))

    @classmethod
    def monomial(cls, weight: Sequence[int], coefficient: int = 1) -> "FormalCharacter":
        return cls.from_mapping({tuple(weight): coefficient})

    @classmethod
    def symmetric(cls, mapping: Mapping[Weight, int]) -> "FormalCharacter":
        """Build a character that must be W-symmetric."""
        character = cls.from_mapping(mapping)
        if not character.is_symmetric():
            raise CharacterError("character is not W-symmetric")
        return character

    def as_dict(self) -> Dict[Weight, int]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[Tuple[Weight, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, weight: Sequence[int]) -> int:
        return self.as_dict().get(tuple(weight), 0)

    def __add__(self, other: "FormalCharacter") -> "FormalCharacter":
        acc: Dict[Weight, int] = defaultdict(int)
        for w, c in self.terms + other.terms:
            acc[w] += c
        return FormalCharacter.from_mapping(acc)

    def __neg__(self) -> "FormalCharacter":
        return self.scale(-1)

    def __sub__(self, other: "FormalCharacter") -> "FormalCharacter":
        return self + (-other)

    def scale(self, k: int) -> "FormalCharacter":
        return FormalCharacter.from_mapping({w: k * c for w, c in self.terms})

    def __mul__(self, other: "FormalCharacter") -> "FormalCharacter":
        acc: Dict[Weight, int] = defaultdict(int)
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                acc[add(w1, w2)] += c1 * c2
        return FormalCharacter.from_mapping(acc)

    def shift(self, weight: Sequence[int]) -> "FormalCharacter":
        return FormalCharacter.from_mapping({add(w, weight): c for w, c in self.terms})

    @property
    def mass(self) -> int:
        return sum(c for _, c in self.terms)

    def is_symmetric(self) -> bool:
        lookup = self.as_dict()
        return all(
            lookup.get(v, 0) == c for w, c in self.terms for v in set(permutations(w))
        )

    def is_unit(self) -> bool:
        """Single term +-e(x) with x in X^0 (all coordinates equal)."""
        if len(self.terms) != 1:
            return False
        weight, coefficient = self.terms[0]
        return abs(coefficient) == 1 and len(set(weight)) == 1

    def reduce_mod(self, modulus: int) -> "FormalCharacter":
        """Reduce every weight coordinate modulo `modulus`."""
        acc: Dict[Weight, int] = defaultdict(int)
        for w, c in self.terms:
            acc[tuple(x % modulus for x in w)] += c
        return FormalCharacter.from_mapping(acc)

    def to_dict(self) -> Dict[str, Any]:
        return {"terms": [[list(w), c] for w, c in self.terms]}


@dataclass(frozen=True)
class VirtualWeylSum:
    """Sum of c_lambda W(lambda) over dominant lambda, zero coefficients absent."""

    terms: Terms = ()

    def __post_init__(self):
        """Keys must be dominant."""
        for weight, _ in self.terms:
            if not is_dominant(weight):
                raise ValueError(f"virtual Weyl sum key {weight} is not dominant")

    @classmethod
    def from_mapping(cls, mapping: Mapping[Weight, int]) -> "VirtualWeylSum":
        return cls(_freeze(mapping))

    def as_dict(self) -> Dict[Weight, int]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[Tuple[Weight, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, weight: Sequence[int]) -> int:
        return self.as_dict().get(tuple(weight), 0)

    def __add__(self, other: "VirtualWeylSum") -> "VirtualWeylSum":
        acc: Dict[Weight, int] = defaultdict(int)
        for w, c in self.terms + other.terms:
            acc[w] += c
        return VirtualWeylSum.from_mapping(acc)

    def scale(self, k: int) -> "VirtualWeylSum":
        return VirtualWeylSum.from_mapping({w: k * c for w, c in self.terms})

    def __neg__(self) -> "VirtualWeylSum":
        return self.scale(-1)

    def __sub__(self, other: "VirtualWeylSum") -> "VirtualWeylSum":
        return self + (-other)

    def reduce_mod_center(self, q: int) -> "VirtualWeylSum":
        """Identify labels differing by (q-1)X^0: last coordinate moved into [0, q-2]."""
        acc: Dict[Weight, int] = defaultdict(int)
        for w, c in self.terms:
            acc[center_shift(w, q)] += c
        return VirtualWeylSum.from_mapping(acc)

    def positive_part(self) -> "VirtualWeylSum":
        return VirtualWeylSum(tuple((w, c) for w, c in self.terms if c > 0))

    def to_dict(self) -> Dict[str, Any]:
        return {"terms": [[list(w), c] for w, c in self.terms]}


@cache
def _gelfand_tsetlin(lam: Weight) -> Terms:
    """Weight multiplicities of W(lam) by branching through Gelfand-Tsetlin patterns."""
    if len(lam) == 1:
        return (((lam[0],), 1),)
    total = sum(lam)
    acc: Dict[Weight, int] = defaultdict(int)
    ranges = [range(lam[i + 1], lam[i] + 1) for i in range(len(lam) - 1)]
    for mu in product(*ranges):
        last = total - sum(mu)
        for weight, mult in _gelfand_tsetlin(mu):
            acc[weight + (last,)] += mult
    return _freeze(acc)


def normalize_weyl(lam: Sequence[int]) -> Tuple[int, Optional[Weight]]:
    """W(lam) = sign * W(lam_plus); sign 0 when lam + rho' lies on a wall."""
    n = len(lam)
    shifted = [lam[i] + n - 1 - i for i in range(n)]
    if len(set(shifted)) < n:
        return 0, None
    inversions = sum(
        1 for i in range(n) for j in range(i + 1, n) if shifted[i] < shifted[j]
    )
    ordered = sorted(shifted, reverse=True)
    dominant = tuple(ordered[i] - (n - 1 - i) for i in range(n))
    return (-1 if inversions % 2 else 1), dominant


def weyl_dimension(lam: Sequence[int]) -> int:
    """prod over alpha > 0 of <lam + rho', alpha^vee> / <rho', alpha^vee>."""
    n = len(lam)
    numerator, denominator = 1, 1
    for i in range(n):
        for j in range(i + 1, n):
            numerator *= lam[i] - lam[j] + j - i
            denominator *= j - i
    return numerator // denominator


class WeylCharacters:
    """Character computations for GL_n."""

    def __init__(self, ctx: RootCtx):
        self.ctx = ctx
        self.n = ctx.n

    def weyl_character(self, lam: Sequence[int]) -> FormalCharacter:
        lam = tuple(lam)
        if len(lam) != self.n:
            raise ValueError(f"expected a weight of length {self.n}")
        if not is_dominant(lam):
            raise CharacterError(f"weyl_character needs a dominant weight, got {lam}")
        return FormalCharacter(_gelfand_tsetlin(lam))

    def weyl_dimension(self, lam: Sequence[int]) -> int:
        return weyl_dimension(lam)

    def normalize_weyl(self, lam: Sequence[int]) -> Tuple[int, Optional[Weight]]:
        return normalize_weyl(lam)

    def collect(self, raw: Iterable[Tuple[Sequence[int], int]]) -> VirtualWeylSum:
        """Normalize signed, possibly non-dominant Weyl terms into a virtual sum."""
        acc: Dict[Weight, int] = defaultdict(int)
        for weight, coefficient in raw:
            sign, dominant = normalize_weyl(weight)
            if sign and dominant is not None:
                acc[dominant] += sign * coefficient
        return VirtualWeylSum.from_mapping(acc)

    def brauer_expand(self, lam: Sequence[int], chi: FormalCharacter) -> VirtualWeylSum:
        """W(lam) tensor chi = sum over mu of a_mu W(lam + mu)."""
        if not chi.is_symmetric():
            raise CharacterError("Brauer expansion needs a W-symmetric character")
        return self.collect((add(lam, mu), a) for mu, a in chi.terms)

    def char_of_virtual(self, virtual: VirtualWeylSum) -> FormalCharacter:
        acc: Dict[Weight, int] = defaultdict(int)
        for lam, c in virtual.terms:
            for weight, mult in _gelfand_tsetlin(lam):
                acc[weight] += c * mult
        return FormalCharacter.from_mapping(acc)

    def virtual_dimension(self, virtual: VirtualWeylSum) -> int:
        return sum(c * weyl_dimension(lam) for lam, c in virtual.terms)

    def torus_brauer_character(self, virtual: VirtualWeylSum, q: int) -> FormalCharacter:
        """Brauer character on the split torus of GL_n(F_q): weights reduced mod q-1."""
        character = self.char_of_virtual(virtual).reduce_mod(q - 1)
        logger.debug(f"torus Brauer character with {len(character)} classes (q={q})")
        return character

    def get_character_stats(self, character: FormalCharacter) -> Dict[str, Any]:
        return {
            "terms": len(character),
            "mass": character.mass,
            "symmetric": character.is_symmetric(),
        }
