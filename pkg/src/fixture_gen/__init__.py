"""Offline generator for molecular qubit-Hamiltonian fixture files.

Turns a geometry + basis + active-space recipe into the fixture JSON the
solver package consumes, with mean-field and exact-diagonalization
reference energies recorded in metadata. Runs standalone; the solver
package never imports it.
"""

from .engine import ELEMENTS, sector_eigenvalues
from .generate import (
    GenerationError,
    GenerationRecipe,
    N_REFERENCE_LEVELS,
    build_document,
    generate,
    load_recipes,
)

__all__ = [
    "ELEMENTS",
    "GenerationError",
    "GenerationRecipe",
    "N_REFERENCE_LEVELS",
    "build_document",
    "generate",
    "load_recipes",
    "sector_eigenvalues",
]
