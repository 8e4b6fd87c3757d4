"""Built-in symmetric-pair families; importing the package registers them all."""

from app.families.base import (
    FamilyRegistry,
    FamilySpec,
    PairFamily,
    classical_roots,
    instantiate,
)
from app.families import galois, gl2n_gln_e, group_case, linear, orthogonal, symplectic  # noqa: F401

__all__ = ["FamilyRegistry", "FamilySpec", "PairFamily", "classical_roots", "instantiate"]
