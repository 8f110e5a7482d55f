"""Configuration, routing enums and report records."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from dataclasses_json import dataclass_json


class Route(Enum):
    """Computation routes producing a weight set."""

    EXACT = "exact-jantzen"  # Jantzen sum, cancellation, then R
    GENERIC = "generic"  # Generic prediction through the up-arrow order
    GL3_LISTS = "gl3-lists"  # Closed-form C(tau) lists and A-sets
    ADPS = "adps"  # Lists filtered by the ADPS removal rules


class CountMode(Enum):
    """How predicted_count is evaluated."""

    ENUMERATION = "enumeration"
    FORMULA = "formula"


class CTauMode(Enum):
    """How C(tau) is computed for GL3."""

    SEARCH = "search"
    CLOSED_FORM = "closed_form"


class RExtMode(Enum):
    """Strict R_ext or the weakened axiom variant."""

    STRICT = "strict"
    WEAK = "weak"


class Side(Enum):
    """Which interval-system axioms apply."""

    L0 = "L0"  # base alpha in [0, p-1], axioms A1-A5
    L1 = "L1"  # base beta in [1, p], axioms B1-B4


@dataclass(frozen=True)
class PredictionConfig:
    """Tunables for generic weight-set prediction."""

    delta: Optional[int] = None  # Depth constant; None means n
    nu_bound: Optional[int] = None  # Initial sup-norm bound for nu; None means 2n-1
    max_nu_bound: int = 64  # Give up growing the nu box past this
    verify_generic: bool = True  # Search for a deep witness before predicting

    def __post_init__(self):
        """Validate configuration."""
        if self.delta is not None and self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.nu_bound is not None and self.nu_bound <= 0:
            raise ValueError("nu_bound must be positive")
        if self.max_nu_bound <= 0:
            raise ValueError("max_nu_bound must be positive")
        if self.nu_bound is not None and self.nu_bound > self.max_nu_bound:
            raise ValueError("nu_bound must not exceed max_nu_bound")

    def delta_for(self, n: int) -> int:
        return n if self.delta is None else self.delta

    def nu_bound_for(self, n: int) -> int:
        return 2 * n - 1 if self.nu_bound is None else self.nu_bound


@dataclass_json
@dataclass
class StructuralReport:
    """Outcome of the twist, dual and Gee-closure identities for one type."""

    tau: str
    route: str
    twist_ok: bool
    dual_ok: bool
    gee_ok: bool
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.twist_ok and self.dual_ok and self.gee_ok


@dataclass_json
@dataclass
class BdjReport:
    """Exhaustive check of the GL2 comparison theorem at one (p, f)."""

    p: int
    f: int
    mode: str
    checked: int = 0
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


@dataclass_json
@dataclass
class AdpsComparison:
    """Weights of W? missing from the ADPS set, for one type."""

    tau: str
    niveau: str
    extra_weights: List[List[int]] = field(default_factory=list)
    adps_subset: bool = True


@dataclass_json
@dataclass
class SelfTestReport:
    """Pass/fail matrix of the built-in acceptance checks."""

    quick: bool
    results: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.results.values())
