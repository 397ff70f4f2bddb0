"""Exact quantum-group representations of generalized double affine Hecke
algebras, and their numeric comparison with KZ-type monodromy."""

from .core import (
    RepSpec,
    build_quantum_rep,
    check_gdaha_relations,
    gdaha_parameters,
    long_word_check,
    r_squared_spectrum_check,
)
from .classical import check_rgdaha_relations, montarani_rep
from .monodromy import compare_reps
from .scalars import ScalarField, make_field

__all__ = [
    "RepSpec",
    "ScalarField",
    "make_field",
    "build_quantum_rep",
    "check_gdaha_relations",
    "gdaha_parameters",
    "long_word_check",
    "r_squared_spectrum_check",
    "montarani_rep",
    "check_rgdaha_relations",
    "compare_reps",
]

__version__ = "0.1.0"
