"""Exact computations in the nonstandard q-deformed algebra U'_q(so_n)."""

from .scalar import DeformationParameter, HalfInt, Scalar, q_number, q_plus_number, classify_eigenvalue
from .pbw import AlgebraElement, normal_form, q_commutator, generator_element, casimir_so4_element
from .reps import (
    AutomorphismG,
    Representation,
    classical_so3,
    classical_so4,
    image_of,
    nonclassical_so3,
    nonclassical_so4,
    restrict,
    twist,
)

__all__ = [
    "AlgebraElement",
    "AutomorphismG",
    "DeformationParameter",
    "HalfInt",
    "Representation",
    "Scalar",
    "casimir_so4_element",
    "classical_so3",
    "classical_so4",
    "classify_eigenvalue",
    "generator_element",
    "image_of",
    "nonclassical_so3",
    "nonclassical_so4",
    "normal_form",
    "q_commutator",
    "q_number",
    "q_plus_number",
    "restrict",
    "twist",
]
