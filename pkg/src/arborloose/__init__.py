"""Combinatorial looseness and sheaf-vanishing for punctured linear arboreal links."""

from arborloose.errors import (
    ArborError,
    CapacityError,
    CompositionError,
    DomainError,
    ModelViolation,
)
from arborloose.quiver import LinearQuiver, Morphism, MorphismSet, make_quiver
from arborloose.closure import closure_2of6, is_two_of_six_closed
from arborloose.localization import build_localized_category
from arborloose.arboreal import cell_complex, loose_report

__all__ = [
    "ArborError",
    "CapacityError",
    "CompositionError",
    "DomainError",
    "ModelViolation",
    "LinearQuiver",
    "Morphism",
    "MorphismSet",
    "make_quiver",
    "closure_2of6",
    "is_two_of_six_closed",
    "build_localized_category",
    "cell_complex",
    "loose_report",
]

__version__ = "0.1.0"
