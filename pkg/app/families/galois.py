"""Galois pairs (Res_{E/F} H, H) for a split classical H."""

from typing import Tuple

from app.families.base import ClassicalParams, FamilyRegistry, PairFamily, assemble_pair, classical_roots
from app.sympair import InvolutionData, RootDatumG


@FamilyRegistry.register_family
class GaloisDoubling(PairFamily):
    name = "galois_doubling"
    title = "Galois pair Res_{E/F} H / H"
    model = "A_0 = A_0^+; every root space of Res H is doubled and the Galois involution has trace 0 on it"
    Params = ClassicalParams

    def build(self, params: ClassicalParams) -> Tuple[RootDatumG, InvolutionData]:
        dim, roots, simple = classical_roots(params.cartan_type, params.n)
        identity = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        return assemble_pair(dim, roots, simple, identity, mult=lambda r: 2, trace=lambda r: 0)
