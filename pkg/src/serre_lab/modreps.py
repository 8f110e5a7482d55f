"""Serre weights, Steinberg factorization, the operators R and ʀ, and small-rank JH sets."""

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Sequence, Tuple

from .characters import VirtualWeylSum, normalize_weyl, weyl_dimension
from .errors import NonRegularWeightError, NotRestrictedError, UnsupportedRankError
from .lattice import RootCtx, Weight, center_shift, is_restricted, restricted_weights


class Gl3Alcove(Enum):
    """Position of a regular GL3 label relative to the two restricted alcoves."""

    LOWER = "lower"  # a - c < p - 2
    UPPER = "upper"  # a - c > p - 2
    WALL = "wall"  # a - c = p - 2


@dataclass(frozen=True, order=True)
class SerreWeight:
    """Irreducible F(lambda) of GL_n(F_p) with canonical label."""

    n: int
    p: int
    weight: Weight  # restricted, last coordinate in [0, p-2]

    def __post_init__(self):
        """Validate the canonical label."""
        if len(self.weight) != self.n:
            raise ValueError(f"weight {self.weight} does not have length {self.n}")
        if not is_restricted(self.weight, self.p):
            raise NotRestrictedError(f"{self.weight} is not {self.p}-restricted")
        if not 0 <= self.weight[-1] <= self.p - 2:
            raise ValueError(f"{self.weight} is not canonical: last entry outside [0, p-2]")

    @property
    def is_regular(self) -> bool:
        w = self.weight
        return all(w[i] - w[i + 1] < self.p - 1 for i in range(self.n - 1))

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "p": self.p, "weight": list(self.weight)}

    def __str__(self) -> str:
        return "F(" + ",".join(str(a) for a in self.weight) + ")"


@dataclass(frozen=True)
class GLnFqIrred:
    """Irreducible of GL_n(F_q), q = p^r, as r Frobenius-twisted p-restricted factors."""

    n: int
    p: int
    r: int
    factors: Tuple[Weight, ...]

    def __post_init__(self):
        """Validate factor count and restrictedness."""
        if self.r < 1:
            raise ValueError("r must be positive")
        if len(self.factors) != self.r:
            raise ValueError(f"expected {self.r} factors, got {len(self.factors)}")
        for factor in self.factors:
            if len(factor) != self.n or not is_restricted(factor, self.p):
                raise NotRestrictedError(f"factor {factor} is not {self.p}-restricted")

    @property
    def q(self) -> int:
        return self.p**self.r

    def assemble(self) -> Weight:
        """sum_i lambda_i p^i."""
        total = [0] * self.n
        for i, factor in enumerate(self.factors):
            for k, x in enumerate(factor):
                total[k] += x * self.p**i
        return tuple(total)

    @property
    def dimension(self) -> int:
        """Product of factor dimensions; restricted Weyl modules are irreducible for GL2."""
        if self.n != 2:
            raise UnsupportedRankError("dimensions are only tabulated for n = 2")
        result = 1
        for factor in self.factors:
            result *= weyl_dimension(factor)
        return result


class ModularReps:
    """Labels and operators on Serre weights for a fixed (n, p)."""

    def __init__(self, ctx: RootCtx):
        self.ctx = ctx
        self.n = ctx.n
        self.p = ctx.p

    # Labels

    def canonical_serre(self, lam: Sequence[int]) -> SerreWeight:
        lam = tuple(lam)
        if not is_restricted(lam, self.p):
            raise NotRestrictedError(f"{lam} is not {self.p}-restricted")
        return SerreWeight(self.n, self.p, center_shift(lam, self.p))

    def is_regular(self, weight: SerreWeight) -> bool:
        return weight.is_regular

    def steinberg_factorize(self, lam: Sequence[int], r: int = 1) -> GLnFqIrred:
        """Unique decomposition lam = sum lambda_i p^i into p-restricted digits."""
        q = self.p**r
        lam = tuple(lam)
        if not is_restricted(lam, q):
            raise NotRestrictedError(f"{lam} is not {q}-restricted")
        lam = center_shift(lam, q)
        diffs = [lam[k] - lam[k + 1] for k in range(self.n - 1)]
        factors = []
        for i in range(r):
            digits = [(d // self.p**i) % self.p for d in diffs]
            factor = [lam[-1] if i == 0 else 0]
            for digit in reversed(digits):
                factor.append(factor[-1] + digit)
            factors.append(tuple(reversed(factor)))
        return GLnFqIrred(self.n, self.p, r, tuple(factors))

    def reg_normalize(self, b: Sequence[int]) -> SerreWeight:
        """The unique regular Serre weight congruent to b modulo p - 1."""
        m = self.p - 1
        a = [0] * self.n
        a[-1] = b[-1] % m
        for i in range(self.n - 2, -1, -1):
            a[i] = a[i + 1] + (b[i] - a[i + 1]) % m
        return SerreWeight(self.n, self.p, tuple(a))

    # Operators

    def r_operator(self, weight: SerreWeight) -> SerreWeight:
        """R F(a_1,...,a_n) = F(a_n - (n-1), ..., a_2 - 1, a_1)_reg."""
        a = weight.weight
        n = self.n
        return self.reg_normalize(tuple(a[n - 1 - i] - (n - 1 - i) for i in range(n)))

    def gl3_reflection(self, weight: SerreWeight) -> SerreWeight:
        """ʀ F(a,b,c) = F(c+p-2, b, a-p+2)."""
        if self.n != 3:
            raise UnsupportedRankError("ʀ is defined for GL3")
        if not weight.is_regular:
            raise NonRegularWeightError(f"{weight} is not regular")
        return self.canonical_serre(self._reflect_label(weight.weight))

    def _reflect_label(self, lam: Sequence[int]) -> Weight:
        a, b, c = lam
        return (c + self.p - 2, b, a - self.p + 2)

    def dual_twist(self, weight: SerreWeight, k: int = 0, dualize: bool = False) -> SerreWeight:
        """(F^vee if dualize) tensor det^k."""
        lam = weight.weight
        if dualize:
            lam = tuple(-x for x in reversed(lam))
        return self.canonical_serre(tuple(x + k for x in lam))

    def gl3_alcove_class(self, weight: SerreWeight) -> Gl3Alcove:
        if self.n != 3:
            raise UnsupportedRankError("alcove classes are tabulated for GL3")
        if not weight.is_regular:
            raise NonRegularWeightError(f"{weight} is not regular")
        spread = weight.weight[0] - weight.weight[2]
        if spread < self.p - 2:
            return Gl3Alcove.LOWER
        if spread > self.p - 2:
            return Gl3Alcove.UPPER
        return Gl3Alcove.WALL

    # Jordan-Holder sets of restricted Weyl modules

    def weyl_jh_gl3(self, lam: Sequence[int]) -> FrozenSet[SerreWeight]:
        """Constituents of W(lam), lam restricted: two when lam is inside the upper alcove."""
        if self.n != 3:
            raise UnsupportedRankError("weyl_jh_gl3 needs n = 3")
        a, b, c = lam
        top = self.canonical_serre(lam)
        interior_upper = a - b <= self.p - 2 and b - c <= self.p - 2 and a - c >= self.p - 1
        if interior_upper:
            return frozenset({top, self.canonical_serre(self._reflect_label(lam))})
        return frozenset({top})

    def weyl_jh(self, lam: Sequence[int]) -> FrozenSet[SerreWeight]:
        if self.n == 2:
            return frozenset({self.canonical_serre(lam)})
        if self.n == 3:
            return self.weyl_jh_gl3(lam)
        raise UnsupportedRankError(f"Weyl module decompositions are not available for n={self.n}")

    def rjh_of_weyl_term(self, nu: Sequence[int]) -> FrozenSet[SerreWeight]:
        """R(JH(W(nu))) after moving nu to the dominant chamber; empty on walls and outside X_1."""
        sign, dominant = normalize_weyl(nu)
        if sign == 0 or dominant is None or not is_restricted(dominant, self.p):
            return frozenset()
        return frozenset(self.r_operator(f) for f in self.weyl_jh(dominant))

    def jh_of_virtual(self, virtual: VirtualWeylSum) -> Dict[SerreWeight, int]:
        """Signed Serre-weight counts of a virtual sum of restricted Weyl modules."""
        counts: Dict[SerreWeight, int] = defaultdict(int)
        for lam, coefficient in virtual.terms:
            if not is_restricted(lam, self.p):
                raise NotRestrictedError(f"Weyl term {lam} is not {self.p}-restricted")
            for weight in self.weyl_jh(lam):
                counts[weight] += coefficient
        return {w: c for w, c in sorted(counts.items()) if c != 0}

    def regular_weights(self) -> List[SerreWeight]:
        """All regular Serre weights, sorted."""
        return sorted(
            w
            for w in (SerreWeight(self.n, self.p, lam) for lam in restricted_weights(self.n, self.p))
            if w.is_regular
        )
