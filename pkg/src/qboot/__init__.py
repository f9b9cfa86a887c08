"""2-neighbour (and general r-neighbour) bootstrap percolation on q-ary hypercubes."""

from .engine import InfectionRecord, closure, percolation_time, run
from .extremal import ExtremalSeed, build_extremal_seed, lift_seed, max_time_formula
from .hamming_core import STAR, CubeShape, Pattern

__all__ = [
    "STAR",
    "CubeShape",
    "ExtremalSeed",
    "InfectionRecord",
    "Pattern",
    "build_extremal_seed",
    "closure",
    "lift_seed",
    "max_time_formula",
    "percolation_time",
    "run",
]

__version__ = "0.1.0"
