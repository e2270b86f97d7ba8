"""Differential geometry of finite-dimensional quantum states.

Density matrices are plain ``numpy`` arrays.  Subpackages follow the
workflow: :mod:`qgeom.basis` for su(n) coordinates, :mod:`qgeom.tensors`
for the Poisson and symmetric tensors and their fields, :mod:`qgeom.kahler`
for isospectral orbits, :mod:`qgeom.flows` for time evolution,
:mod:`qgeom.qubit` for the Bloch ball and :mod:`qgeom.composite` for
bipartite systems.
"""

from .basis import SuBasisData, from_coordinates, gellmann_basis, to_coordinates
from .errors import QGeomError
from .states import (
    maximally_mixed,
    pure_state,
    purity,
    rank_of,
    spectrum_class,
    validate_state,
    von_neumann_entropy,
)

__all__ = [
    "QGeomError",
    "SuBasisData",
    "from_coordinates",
    "gellmann_basis",
    "maximally_mixed",
    "pure_state",
    "purity",
    "rank_of",
    "spectrum_class",
    "to_coordinates",
    "validate_state",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
