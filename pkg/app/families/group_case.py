"""The group case (H x H, swap), whose criterion reduces to Casselman's."""

from typing import Tuple

from app.families.base import (
    ClassicalParams,
    FamilyRegistry,
    PairFamily,
    assemble_pair,
    classical_roots,
    signed_permutation,
)
from app.sympair import InvolutionData, RootDatumG


@FamilyRegistry.register_family
class GroupCase(PairFamily):
    name = "group_case"
    title = "H x H / diagonal H"
    model = "roots (a, 0) and (0, a) in Z^{2d}; theta swaps the two factors, so no root is theta-fixed"
    Params = ClassicalParams

    def build(self, params: ClassicalParams) -> Tuple[RootDatumG, InvolutionData]:
        d, base_roots, base_simple = classical_roots(params.cartan_type, params.n)
        zero = (0,) * d
        roots = [r + zero for r in base_roots] + [zero + r for r in base_roots]
        simple = [s + zero for s in base_simple] + [zero + s for s in base_simple]
        swap = {i: (i + d, 1) for i in range(d)}
        swap.update({i + d: (i, 1) for i in range(d)})
        theta = signed_permutation(2 * d, swap)
        return assemble_pair(2 * d, roots, simple, theta, mult=lambda r: 1, trace=lambda r: 0)
