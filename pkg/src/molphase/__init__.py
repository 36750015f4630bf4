"""Rotation-spin species, phase space and holonomy of symmetric rigid molecules."""

__version__ = "0.1.0"

from .rotation import Rotation, wigner_matrix, little_d, generators  # noqa: E402,F401
from .groups import build_group, get_group, FiniteGroup, ContinuousGroup  # noqa: E402,F401
from .isotypic import multiplicity, adapted_basis  # noqa: E402,F401
from .species import species_for_molecule, entangled_fraction  # noqa: E402,F401
