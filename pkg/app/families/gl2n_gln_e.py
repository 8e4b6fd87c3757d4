"""GL_{2n} / GL_n(E) for a quadratic extension E/F."""

from typing import Tuple

from pydantic import Field

from app.families.base import FamilyParams, FamilyRegistry, PairFamily, assemble_pair, classical_roots, signed_permutation
from app.sympair import InvolutionData, RootDatumG


class ExtensionParams(FamilyParams):
    n: int = Field(default=1, ge=1, le=5)


@FamilyRegistry.register_family
class GL2nGLnE(PairFamily):
    name = "gl2n_gln_E"
    title = "GL_{2n} / GL_n(E)"
    model = "theta swaps eps_{2k-1} and eps_{2k}; fibers of four roots, none of them theta-fixed"
    Params = ExtensionParams

    def build(self, params: ExtensionParams) -> Tuple[RootDatumG, InvolutionData]:
        dim, roots, simple = classical_roots("A", 2 * params.n - 1)
        images = {}
        for k in range(params.n):
            images[2 * k] = (2 * k + 1, 1)
            images[2 * k + 1] = (2 * k, 1)
        theta = signed_permutation(dim, images)
        return assemble_pair(dim, roots, simple, theta, mult=lambda a: 1, trace=lambda a: 0)
