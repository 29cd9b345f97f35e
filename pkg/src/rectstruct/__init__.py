"""Orderly enumeration of rectangular structures and the central groupoids they carry."""

from .algebra import (
    SemicentralBigroupoid,
    check_central_groupoid,
    lift,
    natural_central_groupoid,
    rs_to_operations,
    scb_to_rs,
    square_map,
)
from .canon import Digraph, are_isomorphic, automorphism_generators, canonicalize
from .core import (
    PRS,
    BaseSet,
    PartialRectangularStructure,
    Rectangle,
    StructureError,
    TheoryViolation,
    is_rectangular_structure,
)
from .filter import CentralGroupoidWitness, central_groupoid_census, enumerate_central_groupoids
from .orderly import enumerate_structures, theta_accept

__version__ = "0.1.0"

__all__ = [
    "BaseSet",
    "CentralGroupoidWitness",
    "Digraph",
    "PRS",
    "PartialRectangularStructure",
    "Rectangle",
    "SemicentralBigroupoid",
    "StructureError",
    "TheoryViolation",
    "are_isomorphic",
    "automorphism_generators",
    "canonicalize",
    "central_groupoid_census",
    "check_central_groupoid",
    "enumerate_central_groupoids",
    "enumerate_structures",
    "is_rectangular_structure",
    "lift",
    "natural_central_groupoid",
    "rs_to_operations",
    "scb_to_rs",
    "square_map",
    "theta_accept",
]
