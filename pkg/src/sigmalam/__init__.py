"""Invariant laminations of the circle under angle multiplication.

Exact rational angles, pullback generation, gap classification, finest
invariant quotients and a well-slicing based non-degeneracy criterion.
"""

from .chords import AngleClass, Leaf
from .circle import angle, orbit, preimages, sigma
from .criterion import (SlicingFamily, evaluate_criterion, is_well_slicing,
                        vertical_collection)
from .finest import finest_quotient, super_gaps
from .gaps import FaceSet, classify, face_image, faces
from .lamination import Lamination, generate, validate

__all__ = [
    "AngleClass", "Leaf", "angle", "orbit", "preimages", "sigma",
    "SlicingFamily", "evaluate_criterion", "is_well_slicing", "vertical_collection",
    "finest_quotient", "super_gaps", "FaceSet", "classify", "face_image", "faces",
    "Lamination", "generate", "validate",
]
