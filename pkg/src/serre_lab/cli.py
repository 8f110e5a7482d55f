"""Command-line interface for serre_lab.

Subcommands: wq, counts, compare-adps, jantzen reduce, bdj {weights,rext,verify}
and selftest. Output is JSON (sorted keys, schema_version 1) or TSV on stdout;
diagnostics go to stderr through loguru.

Exit codes: 0 on success, 1 on invalid input or a domain error, 2 when a
verification finds a counterexample.
"""

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from typing import Any, Callable, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, TypeVar

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from sympy import isprime, nextprime

from .bdj2 import BdjCalculator, Gl2Ctx, Gl2TameType, Gl2Weight
from .errors import SerreLabError, TameTypeError, UsageError
from .jantzen import JantzenReducer
from .lattice import RootCtx, WeylPerm
from .models import (
    BdjReport,
    CountMode,
    PredictionConfig,
    RExtMode,
    Route,
)
from .modreps import ModularReps
from .selftest import SelfTestSuite
from .tametypes import InertialTypes, TameType
from .weightsets import SerreWeightPredictor

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2

ROUTES = {
    "exact": Route.EXACT,
    "generic": Route.GENERIC,
    "gl3": Route.GL3_LISTS,
    "adps": Route.ADPS,
}

T = TypeVar("T")
R = TypeVar("R")


# Settings


class CommonSettings(BaseModel):
    """Flags shared by every subcommand."""

    model_config = ConfigDict(frozen=True)

    verbose: int = Field(default=0, ge=0)
    output_format: Literal["json", "tsv"] = "json"
    threads: int = Field(default=1, ge=1)


class PrimeSettings(CommonSettings):
    p: int

    @field_validator("p")
    @classmethod
    def odd_prime(cls, value: int) -> int:
        if value < 3 or not isprime(value):
            raise ValueError(f"p must be an odd prime, got {value}")
        return value


class WqSettings(PrimeSettings):
    n: int = Field(ge=2)
    tau: str
    route: Route
    delta: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def alcove_regime(self) -> "WqSettings":
        if self.p <= self.n:
            raise ValueError(f"p must exceed n (n={self.n}, p={self.p})")
        return self


class CountsSettings(CommonSettings):
    n: int = Field(ge=2)
    p: Optional[int] = None
    mode: CountMode = CountMode.FORMULA
    delta: Optional[int] = Field(default=None, ge=0)

    @field_validator("p")
    @classmethod
    def odd_prime(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and (value < 3 or not isprime(value)):
            raise ValueError(f"p must be an odd prime, got {value}")
        return value

    @model_validator(mode="after")
    def alcove_regime(self) -> "CountsSettings":
        if self.p is not None and self.p <= self.n:
            raise ValueError(f"p must exceed n (n={self.n}, p={self.p})")
        return self

    def resolved_p(self) -> int:
        """Explicit p, else the least prime leaving room for a delta-deep weight."""
        if self.p is not None:
            return self.p
        if self.mode is CountMode.FORMULA:
            return max(3, int(nextprime(self.n)))
        delta = self.n if self.delta is None else self.delta
        return int(nextprime(self.n * delta + self.n - 1))


class CompareAdpsSettings(PrimeSettings):
    tau: Optional[str] = None

    @model_validator(mode="after")
    def alcove_regime(self) -> "CompareAdpsSettings":
        if self.p <= 3:
            raise ValueError(f"p must exceed 3, got {self.p}")
        return self


class JantzenSettings(PrimeSettings):
    n: int = Field(ge=2)
    w: str
    lam: Tuple[int, ...]
    r: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def lambda_length(self) -> "JantzenSettings":
        if len(self.lam) != self.n:
            raise ValueError(f"lambda has {len(self.lam)} entries, expected n={self.n}")
        return self


class BdjSettings(PrimeSettings):
    f: int = Field(ge=1)
    action: Literal["weights", "rext", "verify"]
    tau: Optional[str] = None
    weight: Optional[str] = None
    mode: RExtMode = RExtMode.STRICT

    @model_validator(mode="after")
    def required_inputs(self) -> "BdjSettings":
        if self.action == "weights" and self.tau is None:
            raise ValueError("bdj weights needs --tau")
        if self.action == "rext" and self.weight is None:
            raise ValueError("bdj rext needs --weight")
        return self


class SelfTestSettings(CommonSettings):
    quick: bool = False


# Parsing helpers


def parse_int_list(text: str) -> Tuple[int, ...]:
    """"4,2,0" -> (4, 2, 0)."""
    try:
        return tuple(int(token) for token in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def parse_tau(text: str, p: int) -> TameType:
    try:
        return TameType.parse(text, p)
    except TameTypeError as exc:
        raise TameTypeError(f"--tau: {exc}") from exc


def parse_gl2_weight(text: str, p: int, f: int) -> Gl2Weight:
    """"m_0,...,m_{f-1}:B" -> F_{m,B}."""
    match = re.fullmatch(r"\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*:\s*(-?\d+)\s*", text)
    if not match:
        raise TameTypeError(f"--weight: cannot parse GL2 weight {text!r}; expected m0,...,m(f-1):B")
    m = [int(token) for token in match.group(1).split(",")]
    return Gl2Weight.make(p, f, m, int(match.group(2)))


FLAG_NAMES = {"lam": "--lambda", "output_format": "--format", "threads": "SERRE_LAB_THREADS"}


def describe_error(exc: Exception) -> str:
    """One-line diagnostic naming the offending flag."""
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        loc = [str(part) for part in first.get("loc", ())]
        message = first.get("msg", str(exc)).removeprefix("Value error, ")
        if loc:
            flag = FLAG_NAMES.get(loc[0], "--" + loc[0].replace("_", "-"))
            return f"{flag}: {message}"
        return message
    return str(exc).splitlines()[0] if str(exc) else type(exc).__name__


def configure_logging(verbose: int) -> None:
    logger.remove()
    level = {0: "WARNING", 1: "INFO"}.get(verbose, "DEBUG")
    logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> | {name}:{function} - {message}")


def threads_from_env() -> str:
    return os.environ.get("SERRE_LAB_THREADS", "1")


def map_ordered(func: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    """Apply func to every item, fanning out over threads; results keep input order."""
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def chunked(items: Sequence[T], size: int) -> List[List[T]]:
    iterator = iter(items)
    chunks = []
    while chunk := list(islice(iterator, size)):
        chunks.append(chunk)
    return chunks


# Output


def emit(payload: Dict[str, Any], rows: Iterable[Sequence[Any]], output_format: str) -> None:
    if output_format == "tsv":
        for row in rows:
            print("\t".join(str(cell) for cell in row))
        return
    print(json.dumps({"schema_version": SCHEMA_VERSION, **payload}, sort_keys=True))


# Commands


def cmd_wq(settings: WqSettings) -> int:
    ctx = RootCtx(settings.n, settings.p)
    predictor = SerreWeightPredictor(ctx, PredictionConfig(delta=settings.delta))
    tau = parse_tau(settings.tau, settings.p)
    if tau.n != settings.n:
        raise TameTypeError(f"--tau: type {tau} has dimension {tau.n}, expected n={settings.n}")
    weights = predictor.w_question(tau, settings.route, settings.delta)
    lowest = predictor.lower_alcove_members(weights)
    payload = {
        "command": "wq",
        "tau": str(tau),
        **weights.to_dict(),
        "count": len(weights),
        "lowest_alcove": [list(w.weight) for w in lowest],
    }
    rows = [(str(tau), settings.route.value, str(w)) for w in weights]
    emit(payload, rows, settings.output_format)
    return EXIT_OK


def cmd_counts(settings: CountsSettings) -> int:
    p = settings.resolved_p()
    ctx = RootCtx(settings.n, p)
    predictor = SerreWeightPredictor(ctx, PredictionConfig(delta=settings.delta))
    count = predictor.predicted_count(settings.mode, settings.delta)
    payload: Dict[str, Any] = {
        "command": "counts",
        "n": settings.n,
        "p": p,
        "mode": settings.mode.value,
        "count": count,
    }
    if settings.mode is CountMode.ENUMERATION:
        payload["delta"] = predictor.config.delta_for(settings.n) if settings.delta is None else settings.delta
    emit(payload, [(settings.n, p, settings.mode.value, count)], settings.output_format)
    return EXIT_OK


def cmd_compare_adps(settings: CompareAdpsSettings) -> int:
    ctx = RootCtx(3, settings.p)
    predictor = SerreWeightPredictor(ctx)
    if settings.tau is not None:
        types = [parse_tau(settings.tau, settings.p)]
    else:
        types = InertialTypes(ctx).all_types()
    comparisons = map_ordered(predictor.compare_adps, types, settings.threads)
    passed = all(c.adps_subset for c in comparisons)
    payload = {
        "command": "compare-adps",
        "p": settings.p,
        "threads": settings.threads,
        "comparisons": [c.to_dict() for c in comparisons],
        "passed": passed,
    }
    rows = [
        (c.tau, c.niveau, ";".join(",".join(map(str, w)) for w in c.extra_weights), c.adps_subset)
        for c in comparisons
    ]
    emit(payload, rows, settings.output_format)
    return EXIT_OK if passed else EXIT_COUNTEREXAMPLE


def cmd_jantzen(settings: JantzenSettings) -> int:
    ctx = RootCtx(settings.n, settings.p)
    reducer = JantzenReducer(ctx, settings.r)
    pair = reducer.types.pair(WeylPerm.parse(settings.n, settings.w), settings.lam)
    virtual = reducer.jantzen_virtual(pair)
    payload: Dict[str, Any] = {
        "command": "jantzen reduce",
        "n": settings.n,
        "p": settings.p,
        "r": settings.r,
        "w": str(pair.w),
        "lambda": list(pair.mu),
        "good": reducer.types.is_good(pair),
        "dimension": reducer.characters.virtual_dimension(virtual),
        "dl_dimension": reducer.types.dl_dimension(pair),
        **virtual.to_dict(),
    }
    if settings.r == 1 and settings.n in (2, 3):
        counts = ModularReps(ctx).jh_of_virtual(virtual)
        payload["jordan_holder"] = [[list(w.weight), c] for w, c in counts.items()]
    rows = [(",".join(map(str, lam)), c) for lam, c in virtual]
    emit(payload, rows, settings.output_format)
    return EXIT_OK


def _verify_bdj(calculator: BdjCalculator, mode: RExtMode, types: List[Gl2TameType], threads: int) -> BdjReport:
    if threads <= 1:
        return calculator.verify_bdj_theorem(mode, types)
    # warm the shared tables before fanning out
    calculator.w_bdj(types[0])
    calculator.diamond_constituents(types[0])
    size = max(1, -(-len(types) // threads))
    parts = map_ordered(lambda chunk: calculator.verify_bdj_theorem(mode, chunk), chunked(types, size), threads)
    report = BdjReport(calculator.p, calculator.f, mode.value)
    for part in parts:
        report.checked += part.checked
        report.counterexamples.extend(part.counterexamples)
    return report


def cmd_bdj(settings: BdjSettings) -> int:
    calculator = BdjCalculator(Gl2Ctx(settings.p, settings.f))
    if settings.action == "weights":
        try:
            rho = Gl2TameType.parse(settings.tau or "", settings.p, settings.f)
        except TameTypeError as exc:
            raise TameTypeError(f"--tau: {exc}") from exc
        predicted = sorted(calculator.w_bdj(rho))
        constituents = sorted(calculator.diamond_constituents(rho))
        extended = set()
        for weight in constituents:
            extended |= calculator.r_ext(weight, settings.mode)
        payload = {
            "command": "bdj weights",
            "type": rho.to_dict(),
            "v_p": calculator.v_p(rho).to_dict(),
            "w_bdj": [w.to_dict() for w in predicted],
            "diamond": [w.to_dict() for w in constituents],
            "r_ext": [w.to_dict() for w in sorted(extended)],
        }
        rows = [("w_bdj", str(w)) for w in predicted] + [("diamond", str(w)) for w in constituents]
        emit(payload, rows, settings.output_format)
        return EXIT_OK

    if settings.action == "rext":
        weight = parse_gl2_weight(settings.weight or "", settings.p, settings.f)
        images = sorted(calculator.r_ext(weight, settings.mode))
        payload = {
            "command": "bdj rext",
            "weight": weight.to_dict(),
            "mode": settings.mode.value,
            "ss_sets": [sorted(s) for s in calculator.ss_sets(weight, settings.mode is RExtMode.WEAK)],
            "r_ext": [w.to_dict() for w in images],
            "r_p": calculator.r_p(weight).to_dict() if weight.is_regular else None,
        }
        emit(payload, [(str(weight), str(w)) for w in images], settings.output_format)
        return EXIT_OK

    report = _verify_bdj(calculator, settings.mode, calculator.all_types(), settings.threads)
    payload = {"command": "bdj verify", "threads": settings.threads, **report.to_dict(), "passed": report.passed}
    emit(payload, [(report.p, report.f, report.mode, report.checked, len(report.counterexamples))], settings.output_format)
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


# Self test


def cmd_selftest(settings: SelfTestSettings) -> int:
    report = SelfTestSuite(settings.quick).run()
    payload = {"command": "selftest", **report.to_dict(), "passed": report.passed}
    rows = [(name, "pass" if ok else "FAIL", report.details[name]) for name, ok in report.results.items()]
    emit(payload, rows, settings.output_format)
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


# Argument parsing


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting on bad arguments."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(
        prog="serre-lab",
        description="Conjectural Serre weight sets for tame inertial types",
    )
    parser.add_argument("--format", dest="output_format", choices=("json", "tsv"), default="json")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    commands = parser.add_subparsers(dest="command", required=True)

    wq = commands.add_parser("wq", help="predicted Serre weights W?(tau)")
    wq.add_argument("--n", type=int, required=True)
    wq.add_argument("--p", type=int, required=True)
    wq.add_argument("--tau", required=True, help='tame type "d:e[,d:e...]", e.g. "2:8,1:0"')
    wq.add_argument("--route", choices=sorted(ROUTES), default="exact")
    wq.add_argument("--delta", type=int)

    counts = commands.add_parser("counts", help="number of weights in a generic W?(tau)")
    counts.add_argument("--n", type=int, required=True)
    counts.add_argument("--p", type=int)
    counts.add_argument("--mode", choices=[m.value for m in CountMode], default=CountMode.FORMULA.value)
    counts.add_argument("--delta", type=int)

    adps = commands.add_parser("compare-adps", help="weights of W?(tau) outside the ADPS set (n = 3)")
    adps.add_argument("--p", type=int, required=True)
    adps.add_argument("--tau")

    jantzen = commands.add_parser("jantzen", help="Jantzen's reduction of Deligne-Lusztig characters")
    jantzen_actions = jantzen.add_subparsers(dest="action", required=True)
    reduce = jantzen_actions.add_parser("reduce", help="R-bar_w(Lambda) as a sum of Weyl modules")
    reduce.add_argument("--n", type=int, required=True)
    reduce.add_argument("--p", type=int, required=True)
    reduce.add_argument("--w", default="id", help='permutation in cycle notation, e.g. "(1 2 3)"')
    reduce.add_argument("--lambda", dest="lam", type=parse_int_list, required=True)
    reduce.add_argument("--r", type=int, default=1)

    bdj = commands.add_parser("bdj", help="GL2 weights over an unramified extension")
    bdj_actions = bdj.add_subparsers(dest="action", required=True)
    for name, help_text in (
        ("weights", "BDJ weights and Diamond constituents of one type"),
        ("rext", "R_ext of one weight"),
        ("verify", "exhaustive check of the R_ext comparison theorem"),
    ):
        action = bdj_actions.add_parser(name, help=help_text)
        action.add_argument("--p", type=int, required=True)
        action.add_argument("--f", type=int, default=1)
        action.add_argument("--mode", choices=[m.value for m in RExtMode], default=RExtMode.STRICT.value)
        if name == "weights":
            action.add_argument("--tau", required=True, help="niv1:c,c' or niv2:gamma")
        if name == "rext":
            action.add_argument("--weight", required=True, help="m0,...,m(f-1):B")

    selftest = commands.add_parser("selftest", help="run the built-in acceptance checks")
    selftest.add_argument("--quick", action="store_true")
    return parser


def settings_from_args(args: argparse.Namespace) -> CommonSettings:
    common: Dict[str, Any] = {
        "verbose": args.verbose,
        "output_format": args.output_format,
        "threads": threads_from_env(),
    }
    if args.command == "wq":
        return WqSettings(**common, n=args.n, p=args.p, tau=args.tau, route=ROUTES[args.route], delta=args.delta)
    if args.command == "counts":
        return CountsSettings(**common, n=args.n, p=args.p, mode=CountMode(args.mode), delta=args.delta)
    if args.command == "compare-adps":
        return CompareAdpsSettings(**common, p=args.p, tau=args.tau)
    if args.command == "jantzen":
        return JantzenSettings(**common, n=args.n, p=args.p, w=args.w, lam=args.lam, r=args.r)
    if args.command == "bdj":
        return BdjSettings(
            **common,
            p=args.p,
            f=args.f,
            action=args.action,
            tau=getattr(args, "tau", None),
            weight=getattr(args, "weight", None),
            mode=RExtMode(args.mode),
        )
    return SelfTestSettings(**common, quick=args.quick)


COMMANDS: Dict[type, Callable[[Any], int]] = {
    WqSettings: cmd_wq,
    CountsSettings: cmd_counts,
    CompareAdpsSettings: cmd_compare_adps,
    JantzenSettings: cmd_jantzen,
    BdjSettings: cmd_bdj,
    SelfTestSettings: cmd_selftest,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return its exit code; domain errors propagate."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    settings = settings_from_args(args)
    return COMMANDS[type(settings)](settings)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except (SerreLabError, ValueError) as exc:
        print(f"error: {describe_error(exc)}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
