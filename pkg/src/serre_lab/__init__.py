"""Serre Lab - exact computations of conjectural Serre weight sets for tame inertial types."""

from .bdj2 import BdjCalculator, Gl2Ctx, Gl2TameType, Gl2Weight, IntervalSystem
from .characters import FormalCharacter, VirtualWeylSum, WeylCharacters
from .jantzen import JantzenReducer, hulsurkar_matrix
from .lattice import AlcoveGeometry, RootCtx, WeylPerm
from .models import CountMode, CTauMode, PredictionConfig, RExtMode, Route, Side
from .modreps import ModularReps, SerreWeight
from .tametypes import InertialTypes, TamePair, TameType
from .weightsets import SerreWeightPredictor, WeightSet

__all__ = [
    "AlcoveGeometry",
    "BdjCalculator",
    "CountMode",
    "CTauMode",
    "FormalCharacter",
    "Gl2Ctx",
    "Gl2TameType",
    "Gl2Weight",
    "InertialTypes",
    "IntervalSystem",
    "JantzenReducer",
    "ModularReps",
    "PredictionConfig",
    "RExtMode",
    "RootCtx",
    "Route",
    "SerreWeight",
    "SerreWeightPredictor",
    "Side",
    "TamePair",
    "TameType",
    "VirtualWeylSum",
    "WeightSet",
    "WeylCharacters",
    "WeylPerm",
    "hulsurkar_matrix",
]

__version__ = "0.1.0"
