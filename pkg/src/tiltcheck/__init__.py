"""Exact computations for HRS-tilts of module categories over bound quiver algebras."""

__version__ = "0.1.0"

from .exactlinalg import QQ, GF, Matrix
from .quiverparse import BoundQuiverAlgebra, ParseError, load_algebra, parse_algebra
from .repcat import Representation, ModMorphism, enumerate_indecomposables
from .torsionpairs import TorsionPair
from .hrscheck import Verdict

__all__ = [
    "QQ",
    "GF",
    "Matrix",
    "BoundQuiverAlgebra",
    "ParseError",
    "load_algebra",
    "parse_algebra",
    "Representation",
    "ModMorphism",
    "enumerate_indecomposables",
    "TorsionPair",
    "Verdict",
]
