"""Polycyclic presentations of iterated circle-bundle groups."""

from .errors import (
    DidNotClose,
    FormError,
    InconsistentPresentation,
    InternalAssertionError,
    ParseError,
    PreconditionViolation,
    StructuralError,
    TowerError,
)
from .presentation import TowerPresentation, format_normal_form
from .witness import GeneratorSubstitution, IsomorphismWitness, change_of_generators, verify_isomorphism

__all__ = [
    "DidNotClose",
    "FormError",
    "GeneratorSubstitution",
    "InconsistentPresentation",
    "IsomorphismWitness",
    "InternalAssertionError",
    "ParseError",
    "PreconditionViolation",
    "StructuralError",
    "TowerError",
    "TowerPresentation",
    "change_of_generators",
    "format_normal_form",
    "verify_isomorphism",
]
