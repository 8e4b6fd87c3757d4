"""GL_{n1+n2} / GL_{n1} x GL_{n2}."""

from typing import Tuple

from pydantic import Field, model_validator

from app.families.base import FamilyParams, FamilyRegistry, PairFamily, assemble_pair, classical_roots, signed_permutation
from app.sympair import InvolutionData, RootDatumG


class SplitParams(FamilyParams):
    n1: int = Field(default=1, ge=1, le=5)
    n2: int = Field(default=1, ge=1, le=6)

    @model_validator(mode="after")
    def check_order(self):
        if self.n1 > self.n2:
            raise ValueError(f"expected n1 <= n2, got n1={self.n1}, n2={self.n2}")
        if self.n1 + self.n2 > 10:
            raise ValueError(f"n1 + n2 = {self.n1 + self.n2} exceeds 10")
        return self


@FamilyRegistry.register_family
class GLLinear(PairFamily):
    name = "gl_linear"
    title = "GL_{n1+n2} / GL_{n1} x GL_{n2}"
    model = "A_{n1+n2-1} with A_0 = A_0^+; trace +1 on eps_i - eps_j inside a block, -1 across the blocks"
    Params = SplitParams

    def build(self, params: SplitParams) -> Tuple[RootDatumG, InvolutionData]:
        n1 = params.n1
        dim, roots, simple = classical_roots("A", n1 + params.n2 - 1)

        def trace(a):
            i, j = a.index(1), a.index(-1)
            return 1 if (i < n1) == (j < n1) else -1

        return assemble_pair(dim, roots, simple, signed_permutation(dim, {}), mult=lambda a: 1, trace=trace)
