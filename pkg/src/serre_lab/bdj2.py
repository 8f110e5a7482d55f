"""GL2 over an unramified extension: BDJ weights, Diamond constituents, R_p, R_ext and interval systems."""

import re
from dataclasses import dataclass
from enum import Enum
from functools import cache
from itertools import combinations, product
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from loguru import logger
from sympy import isprime

from .errors import IntervalSystemError, NonRegularWeightError, TameTypeError
from .models import BdjReport, RExtMode, Side


def digits(value: int, p: int, f: int) -> Tuple[int, ...]:
    """Base-p digits of value (least significant first), f of them."""
    return tuple((value // p**i) % p for i in range(f))


def from_digits(values: Sequence[int], p: int) -> int:
    return sum(v * p**i for i, v in enumerate(values))


@dataclass(frozen=True)
class Gl2Ctx:
    """Odd prime p and residue degree f; q = p^f."""

    p: int
    f: int

    def __post_init__(self):
        """Validate p and f."""
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise ValueError(f"f must be positive, got {self.f}")

    @property
    def q(self) -> int:
        return self.p**self.f


@dataclass(frozen=True, order=True)
class Gl2Weight:
    """F_{m,B} = (tensor_i Sym^{m_i} twisted by Frob^i) tensor det^B, B taken mod q - 1."""

    p: int
    f: int
    m: Tuple[int, ...]
    b: int

    def __post_init__(self):
        """Validate digit ranges and the canonical twist."""
        if len(self.m) != self.f:
            raise ValueError(f"m={self.m} does not have length f={self.f}")
        if any(not 0 <= x <= self.p - 1 for x in self.m):
            raise ValueError(f"m={self.m} has entries outside [0, p-1]")
        if not 0 <= self.b < self.p**self.f - 1:
            raise ValueError(f"twist {self.b} is not reduced mod q - 1")

    @classmethod
    def make(cls, p: int, f: int, m: Sequence[int], b: int) -> "Gl2Weight":
        return cls(p, f, tuple(m), b % (p**f - 1))

    @classmethod
    def from_ab(cls, p: int, f: int, a: int, b: int) -> "Gl2Weight":
        """F(a, b) with 0 <= a - b <= q - 1."""
        q = p**f
        if not 0 <= a - b <= q - 1:
            raise ValueError(f"F({a},{b}) is not {q}-restricted")
        return cls.make(p, f, digits(a - b, p, f), b)

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def spread(self) -> int:
        """sum_i m_i p^i."""
        return from_digits(self.m, self.p)

    @property
    def ab(self) -> Tuple[int, int]:
        return self.b + self.spread, self.b

    @property
    def dimension(self) -> int:
        result = 1
        for x in self.m:
            result *= x + 1
        return result

    @property
    def is_regular(self) -> bool:
        return all(x < self.p - 1 for x in self.m)

    def twist(self, k: int) -> "Gl2Weight":
        return Gl2Weight.make(self.p, self.f, self.m, self.b + k)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "f": self.f, "m": list(self.m), "b": self.b}

    def __str__(self) -> str:
        a, b = self.ab
        return f"F({a},{b})"


@dataclass(frozen=True, order=True)
class Gl2TameType:
    """Tame type of niveau 1 (exponents c <= c' mod q-1) or niveau 2 (gamma mod q^2-1)."""

    p: int
    f: int
    niveau: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        """Validate canonical form."""
        q = self.p**self.f
        if self.niveau == 1:
            if len(self.exponents) != 2 or list(self.exponents) != sorted(self.exponents):
                raise TameTypeError("niveau 1 needs two sorted exponents")
            if any(not 0 <= e < q - 1 for e in self.exponents):
                raise TameTypeError(f"exponents {self.exponents} not reduced mod {q - 1}")
        elif self.niveau == 2:
            if len(self.exponents) != 1:
                raise TameTypeError("niveau 2 needs a single exponent")
            (gamma,) = self.exponents
            if not 0 <= gamma < q * q - 1:
                raise TameTypeError(f"exponent {gamma} not reduced mod {q * q - 1}")
            if gamma % (q + 1) == 0:
                raise TameTypeError(f"exponent {gamma} factors through the norm; not niveau 2")
            if gamma != min(gamma, (q * gamma) % (q * q - 1)):
                raise TameTypeError(f"exponent {gamma} is not the least of its Frobenius orbit")
        else:
            raise TameTypeError(f"niveau must be 1 or 2, got {self.niveau}")

    @classmethod
    def niveau1(cls, p: int, f: int, c: int, c2: int) -> "Gl2TameType":
        q = p**f
        return cls(p, f, 1, tuple(sorted((c % (q - 1), c2 % (q - 1)))))

    @classmethod
    def niveau2(cls, p: int, f: int, gamma: int) -> "Gl2TameType":
        q = p**f
        gamma %= q * q - 1
        return cls(p, f, 2, (min(gamma, (q * gamma) % (q * q - 1)),))

    @classmethod
    def parse(cls, text: str, p: int, f: int) -> "Gl2TameType":
        """Parse "niv1:c,c'" or "niv2:gamma"."""
        match = re.fullmatch(r"\s*niv1\s*:\s*(-?\d+)\s*,\s*(-?\d+)\s*", text)
        if match:
            return cls.niveau1(p, f, int(match.group(1)), int(match.group(2)))
        match = re.fullmatch(r"\s*niv2\s*:\s*(-?\d+)\s*", text)
        if match:
            return cls.niveau2(p, f, int(match.group(1)))
        raise TameTypeError(f"cannot parse GL2 type {text!r}; expected niv1:c,c' or niv2:gamma")

    @property
    def q(self) -> int:
        return self.p**self.f

    def twist(self, k: int) -> "Gl2TameType":
        """Tensor with the k-th power of the niveau-f fundamental character."""
        if self.niveau == 1:
            c, c2 = self.exponents
            return Gl2TameType.niveau1(self.p, self.f, c + k, c2 + k)
        return Gl2TameType.niveau2(self.p, self.f, self.exponents[0] + (self.q + 1) * k)

    def __str__(self) -> str:
        if self.niveau == 1:
            return f"niv1:{self.exponents[0]},{self.exponents[1]}"
        return f"niv2:{self.exponents[0]}"

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "f": self.f, "niveau": self.niveau, "exponents": list(self.exponents)}


class RepresentationKind(Enum):
    """Characteristic-zero representation attached to a tame type."""

    PRINCIPAL_SERIES = "principal_series"
    CUSPIDAL = "cuspidal"


@dataclass(frozen=True)
class CharZeroLabel:
    """Symbolic V_p(rho): Teichmuller exponents and the dimension of the representation."""

    kind: RepresentationKind
    exponents: Tuple[int, ...]
    dimension: int

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "exponents": list(self.exponents), "dimension": self.dimension}


@dataclass(frozen=True)
class Interval:
    """A signed stretch [start, start + length - 1] of Z/f."""

    start: int
    length: int
    sign: int  # +1 or -1


@dataclass(frozen=True)
class IntervalSystem:
    """A base function on Z/f decorated with disjoint signed intervals."""

    base: Tuple[int, ...]
    intervals: Tuple[Interval, ...]

    def __post_init__(self):
        """Intervals must be disjoint, of length 1..f, with signs +-1."""
        f = len(self.base)
        covered: Set[int] = set()
        for interval in self.intervals:
            if interval.sign not in (1, -1):
                raise IntervalSystemError(f"interval sign must be +1 or -1, got {interval.sign}")
            if not 1 <= interval.length <= f or not 0 <= interval.start < f:
                raise IntervalSystemError(f"interval {interval} does not fit Z/{f}")
            points = {(interval.start + k) % f for k in range(interval.length)}
            if points & covered:
                raise IntervalSystemError("intervals overlap")
            covered |= points

    @property
    def f(self) -> int:
        return len(self.base)

    def covered(self) -> Set[int]:
        return {(iv.start + k) % self.f for iv in self.intervals for k in range(iv.length)}

    def starts(self) -> Set[int]:
        return {iv.start for iv in self.intervals}

    def successor(self, interval: Interval) -> int:
        return (interval.start + interval.length) % self.f

    def with_base(self, base: Sequence[int]) -> "IntervalSystem":
        return IntervalSystem(tuple(base), self.intervals)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": list(self.base),
            "intervals": [
                [iv.start, (iv.start + iv.length - 1) % self.f, iv.sign] for iv in self.intervals
            ],
        }


def interval_layouts(f: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """Every family of disjoint (start, length) stretches of Z/f, the empty family included."""
    # labels: 0 outside, 1 start, 2 continuation
    for labels in product(range(3), repeat=f):
        if any(labels[i] == 2 and labels[i - 1] == 0 for i in range(f)):
            continue
        if 2 in labels and 1 not in labels:
            continue
        layout = []
        for i in range(f):
            if labels[i] == 1:
                length = 1
                while length < f and labels[(i + length) % f] == 2:
                    length += 1
                layout.append((i, length))
        yield tuple(layout)


@cache
def _weights(p: int, f: int) -> Tuple[Gl2Weight, ...]:
    q = p**f
    return tuple(
        Gl2Weight(p, f, m, b) for m in product(range(p), repeat=f) for b in range(q - 1)
    )


def _lifts(f: int) -> List[Tuple[int, ...]]:
    """Subsets of Z/2f projecting bijectively onto Z/f."""
    return [
        tuple(i + f * choice for i, choice in enumerate(choices))
        for choices in product((0, 1), repeat=f)
    ]


@cache
def _bdj_table(p: int, f: int) -> Dict[Gl2TameType, FrozenSet[Gl2Weight]]:
    q = p**f
    table: Dict[Gl2TameType, Set[Gl2Weight]] = {}
    subsets = [set(c) for k in range(f + 1) for c in combinations(range(f), k)]
    lifts = _lifts(f)
    for weight in _weights(p, f):
        steps = [(x + 1) * p**i for i, x in enumerate(weight.m)]
        for subset in subsets:
            x = sum(steps[i] for i in subset)
            y = sum(steps[i] for i in range(f) if i not in subset)
            table.setdefault(Gl2TameType.niveau1(p, f, x + weight.b, y + weight.b), set()).add(weight)
        for lift in lifts:
            exponent = (sum((weight.m[i % f] + 1) * p**i for i in lift) + (q + 1) * weight.b) % (q * q - 1)
            if exponent % (q + 1):
                table.setdefault(Gl2TameType.niveau2(p, f, exponent), set()).add(weight)
    logger.debug(f"BDJ table for p={p}, f={f}: {len(table)} types")
    return {tau: frozenset(ws) for tau, ws in table.items()}


@cache
def _diamond_table(p: int, f: int) -> Dict[Gl2TameType, FrozenSet[Gl2Weight]]:
    q = p**f
    table: Dict[Gl2TameType, Set[Gl2Weight]] = {}
    subsets = [set(c) for k in range(f + 1) for c in combinations(range(f), k)]
    lifts = _lifts(f)
    for weight in _weights(p, f):
        gaps = [(p - 1 - x) * p**i for i, x in enumerate(weight.m)]
        shift = weight.spread + weight.b
        for subset in subsets:
            x = sum(gaps[i] for i in range(f) if i not in subset)
            y = sum(gaps[i] for i in subset)
            table.setdefault(Gl2TameType.niveau1(p, f, x + shift, y + shift), set()).add(weight)
        for lift in lifts:
            complement = [i for i in range(2 * f) if i not in lift]
            x = sum((p - 1 - weight.m[i % f]) * p**i for i in complement)
            exponent = (x + (q + 1) * shift) % (q * q - 1)
            if exponent % (q + 1):
                table.setdefault(Gl2TameType.niveau2(p, f, exponent), set()).add(weight)
    logger.debug(f"Diamond table for p={p}, f={f}: {len(table)} types")
    return {tau: frozenset(ws) for tau, ws in table.items()}


class BdjCalculator:
    """BDJ weights and the R_p / R_ext comparison for GL2 over F_q, q = p^f."""

    def __init__(self, ctx: Gl2Ctx):
        self.ctx = ctx
        self.p = ctx.p
        self.f = ctx.f
        self.q = ctx.q

    def _check(self, rho: Gl2TameType) -> None:
        if rho.p != self.p or rho.f != self.f:
            raise TameTypeError(f"type {rho} does not live over (p={self.p}, f={self.f})")

    def weight(self, m: Sequence[int], b: int) -> Gl2Weight:
        return Gl2Weight.make(self.p, self.f, m, b)

    # Types

    def all_types(self) -> List[Gl2TameType]:
        """Every niveau-1 and niveau-2 type, sorted."""
        q = self.q
        result = [Gl2TameType(self.p, self.f, 1, (c, c2)) for c in range(q - 1) for c2 in range(c, q - 1)]
        for gamma in range(q * q - 1):
            if gamma % (q + 1) and gamma == min(gamma, (q * gamma) % (q * q - 1)):
                result.append(Gl2TameType(self.p, self.f, 2, (gamma,)))
        return result

    def v_p(self, rho: Gl2TameType) -> CharZeroLabel:
        self._check(rho)
        if rho.niveau == 1:
            return CharZeroLabel(RepresentationKind.PRINCIPAL_SERIES, rho.exponents, self.q + 1)
        (gamma,) = rho.exponents
        if gamma % (self.q + 1) == 0:
            raise TameTypeError(f"{rho}: character is not primitive")
        return CharZeroLabel(RepresentationKind.CUSPIDAL, rho.exponents, self.q - 1)

    # Weight sets

    def w_bdj(self, rho: Gl2TameType) -> FrozenSet[Gl2Weight]:
        """F_{m,B} admitting J with the BDJ congruences for rho."""
        self._check(rho)
        return _bdj_table(self.p, self.f).get(rho, frozenset())

    def diamond_constituents(self, rho: Gl2TameType) -> FrozenSet[Gl2Weight]:
        """Jordan-Holder constituents of the reduction of V_p(rho)."""
        self._check(rho)
        return _diamond_table(self.p, self.f).get(rho, frozenset())

    def diamond_formula(self, rho: Gl2TameType) -> List[Gl2Weight]:
        """Niveau-1 constituents F_{c_J, d_J} tensor det^{c'}, one per J, zero terms dropped."""
        self._check(rho)
        if rho.niveau != 1:
            raise TameTypeError("the explicit constituent formula covers niveau 1")
        p, f = self.p, self.f
        c, c2 = rho.exponents
        n = digits((c - c2) % (self.q - 1), p, f)
        result = []
        for k in range(f + 1):
            for subset in combinations(range(f), k):
                members = set(subset)
                cs, ds = [], []
                for i in range(f):
                    delta = 1 if (i - 1) % f in members else 0
                    if i in members:
                        cs.append(n[i] + delta - 1)
                        ds.append(0)
                    else:
                        cs.append(p - 1 - n[i] - delta)
                        ds.append(n[i] + delta)
                if -1 in cs:
                    continue
                result.append(self.weight(cs, from_digits(ds, p) + c2))
        return sorted(result)

    # Operators

    def r_p(self, weight: Gl2Weight) -> Gl2Weight:
        """R_p F(a, b) = F(b + (p-2) sum p^i, a)."""
        if not weight.is_regular:
            raise NonRegularWeightError(f"{weight} is not regular")
        return self.weight([self.p - 2 - x for x in weight.m], weight.b + weight.spread)

    def ss_sets(self, weight: Gl2Weight, weak: bool = False) -> List[FrozenSet[int]]:
        """SS(F): subsets S of Z/f each of whose members ends a (p-1, p-2, ..., p-2) stretch avoiding S."""
        f, m = self.f, weight.m
        result = []
        for k in range(f + 1):
            for subset in combinations(range(f), k):
                members = set(subset)
                if all(self._qualifies(s, members, m, weak) for s in members):
                    result.append(frozenset(members))
        return result

    def _qualifies(self, s: int, members: Set[int], m: Tuple[int, ...], weak: bool) -> bool:
        p, f = self.p, self.f
        if not weak and m[s] == 0:
            return False
        for back in range(1, f):
            i = (s - back) % f
            stretch = [(i + t) % f for t in range(back)]
            if m[i] != p - 1 or any(m[j] != p - 2 for j in stretch[1:]):
                continue
            if not members.intersection(stretch):
                return True
        return False

    def r_ext(self, weight: Gl2Weight, mode: RExtMode = RExtMode.STRICT) -> FrozenSet[Gl2Weight]:
        """Multi-valued extension of R_p over the subsets in SS(F)."""
        p, f, q = self.p, self.f, self.q
        a, b = weight.ab
        result: Set[Gl2Weight] = set()
        for subset in self.ss_sets(weight, weak=mode is RExtMode.WEAK):
            inside = sum(p**i for i in subset)
            outside = sum(p**i for i in range(f) if i not in subset)
            spread = (b - a - outside + inside) % (q - 1)
            twist = a - inside
            result.add(self.weight(digits(spread, p, f), twist))
            if spread == 0:
                result.add(self.weight([p - 1] * f, twist))
        return frozenset(result)

    # Interval systems

    def check_interval_axioms(self, system: IntervalSystem, side: Side, weak: bool = False) -> bool:
        if system.f != self.f:
            return False
        if side is Side.L0:
            return self._check_l0(system, weak)
        return self._check_l1(system)

    def _check_l0(self, system: IntervalSystem, weak: bool) -> bool:
        p, f, alpha = self.p, self.f, system.base
        if any(not 0 <= a <= p - 1 for a in alpha):
            return False
        covered, starts = system.covered(), system.starts()
        for i in covered:
            if alpha[i] not in (0, 1):
                return False
            if (alpha[i] == 1) != (i in starts and (i - 1) % f in covered):
                return False
        for i in range(f):
            if i not in covered and alpha[i] == 0 and (i - 1) % f not in covered:
                return False
        for interval in system.intervals:
            nxt = system.successor(interval)
            if interval.sign > 0:
                if nxt in covered:
                    return False
                if not weak and not 0 <= alpha[nxt] <= p - 2:
                    return False
            elif nxt not in covered and not 2 <= alpha[nxt] <= p - 1:
                return False
        return True

    def _check_l1(self, system: IntervalSystem) -> bool:
        p, beta = self.p, system.base
        if any(not 1 <= x <= p for x in beta):
            return False
        covered = system.covered()
        if any(beta[i] not in (p - 1, p) for i in covered):
            return False
        if system.starts() != {i for i, x in enumerate(beta) if x == p}:
            return False
        for interval in system.intervals:
            nxt = system.successor(interval)
            if interval.sign > 0:
                if nxt in covered or not 1 <= beta[nxt] <= p - 1:
                    return False
            elif nxt not in covered and not 1 <= beta[nxt] <= p - 2:
                return False
        return True

    def phi(self, system: IntervalSystem) -> IntervalSystem:
        """Starts go to p, other interval points to p-1, outside successors move by the sign."""
        if not self.check_interval_axioms(system, Side.L0):
            raise IntervalSystemError(f"{system.to_dict()} is not in L_[0,p-1]")
        beta = list(system.base)
        covered = system.covered()
        for interval in system.intervals:
            for k in range(interval.length):
                beta[(interval.start + k) % self.f] = self.p if k == 0 else self.p - 1
            nxt = system.successor(interval)
            if nxt not in covered:
                beta[nxt] += interval.sign
        return system.with_base(beta)

    def phi_inverse(self, system: IntervalSystem) -> IntervalSystem:
        if not self.check_interval_axioms(system, Side.L1):
            raise IntervalSystemError(f"{system.to_dict()} is not in L_[1,p]")
        alpha = list(system.base)
        covered = system.covered()
        for interval in system.intervals:
            for k in range(interval.length):
                point = (interval.start + k) % self.f
                alpha[point] = 1 if k == 0 and (point - 1) % self.f in covered else 0
            nxt = system.successor(interval)
            if nxt not in covered:
                alpha[nxt] -= interval.sign
        return system.with_base(alpha)

    def phi_successors(self, system: IntervalSystem) -> FrozenSet[int]:
        """Successors of the positive intervals."""
        return frozenset(system.successor(iv) for iv in system.intervals if iv.sign > 0)

    def enumerate_interval_systems(
        self, base: Sequence[int], side: Side, weak: bool = False
    ) -> List[IntervalSystem]:
        """All decorations of `base` satisfying the axioms of `side`."""
        base = tuple(base)
        found = []
        for layout in interval_layouts(self.f):
            for signs in product((1, -1), repeat=len(layout)):
                intervals = tuple(Interval(s, n, sign) for (s, n), sign in zip(layout, signs))
                system = IntervalSystem(base, intervals)
                if self.check_interval_axioms(system, side, weak):
                    found.append(system)
        return found

    def enumerate_l0(self, weak: bool = False) -> List[IntervalSystem]:
        return [
            system
            for alpha in product(range(self.p), repeat=self.f)
            for system in self.enumerate_interval_systems(alpha, Side.L0, weak)
        ]

    def enumerate_l1(self) -> List[IntervalSystem]:
        return [
            system
            for beta in product(range(1, self.p + 1), repeat=self.f)
            for system in self.enumerate_interval_systems(beta, Side.L1)
        ]

    def successors_equivalence(self, alpha: Sequence[int], weak: bool = False) -> bool:
        """SS(F_{p-1-alpha}) equals the positive-successor sets over decorations of alpha."""
        weight = self.weight([self.p - 1 - a for a in alpha], 0)
        subsets = set(self.ss_sets(weight, weak))
        successors = {
            self.phi_successors(system)
            for system in self.enumerate_interval_systems(alpha, Side.L0, weak)
        }
        return subsets == successors

    # Verification

    def verify_bdj_theorem(
        self, mode: RExtMode = RExtMode.STRICT, types: Optional[List[Gl2TameType]] = None
    ) -> BdjReport:
        """Compare W(rho) with R_p on regular constituents and with R_ext on all constituents."""
        report = BdjReport(self.p, self.f, mode.value)
        for rho in types if types is not None else self.all_types():
            report.checked += 1
            predicted = self.w_bdj(rho)
            constituents = self.diamond_constituents(rho)
            regular = {w for w in predicted if w.is_regular}
            from_r_p = {self.r_p(w) for w in constituents if w.is_regular}
            if regular != from_r_p:
                report.counterexamples.append(self._counterexample(rho, "i", regular, from_r_p))
            extended: Set[Gl2Weight] = set()
            for weight in constituents:
                extended |= self.r_ext(weight, mode)
            if set(predicted) != extended:
                report.counterexamples.append(self._counterexample(rho, "ii", set(predicted), extended))
        logger.info(
            f"BDJ check p={self.p} f={self.f} ({mode.value}): {report.checked} types, "
            f"{len(report.counterexamples)} counterexamples"
        )
        return report

    def _counterexample(
        self, rho: Gl2TameType, part: str, expected: Set[Gl2Weight], got: Set[Gl2Weight]
    ) -> Dict[str, Any]:
        return {
            "type": str(rho),
            "part": part,
            "expected": [w.to_dict() for w in sorted(expected)],
            "got": [w.to_dict() for w in sorted(got)],
        }
