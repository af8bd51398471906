"""Binary sequences built from real primitive characters mod squarefree odd N,
with exact correlation, merit-factor and audit tooling."""

from .numtheory import FactoredModulus, factorize, jacobi_symbol, legendre_symbol
from .seqgen import (
    BinarySequence,
    RotationFraction,
    Sequence,
    SymmetryClass,
    TernarySequence,
    character_sequence,
    classify_symmetry,
    completion_part,
    double_and_modulate,
    jacobi_sequence,
    legendre_sequence,
    modified_sequence,
    primitive_character,
    rotate,
)
from .correlation import (
    CorrelationKind,
    autocorrelation,
    fast_correlation,
    merit_factor,
    merit_factor_via_dft,
)
from .seqio import read_sequence, write_sequence

__version__ = "0.1.0"

__all__ = [
    "BinarySequence",
    "CorrelationKind",
    "FactoredModulus",
    "RotationFraction",
    "Sequence",
    "SymmetryClass",
    "TernarySequence",
    "autocorrelation",
    "character_sequence",
    "classify_symmetry",
    "completion_part",
    "double_and_modulate",
    "factorize",
    "fast_correlation",
    "jacobi_sequence",
    "jacobi_symbol",
    "legendre_sequence",
    "legendre_symbol",
    "merit_factor",
    "merit_factor_via_dft",
    "modified_sequence",
    "primitive_character",
    "read_sequence",
    "rotate",
    "write_sequence",
]
