"""
Sp_{2n} / U_J (quasi-split or not) and Sp_{2n} / GL_n.
"""

from typing import Tuple

from pydantic import Field, model_validator

from app.families.base import FamilyParams, FamilyRegistry, PairFamily, assemble_pair, classical_roots, signed_permutation
from app.sympair import InvolutionData, RootDatumG


class UnitaryFormParams(FamilyParams):
    n: int = Field(default=1, ge=1, le=6)
    quasi_split: bool = True

    @model_validator(mode="after")
    def check_form(self):
        if not self.quasi_split and self.n % 2:
            raise ValueError(f"a non-quasi-split form needs even n, got n={self.n}")
        return self

    @property
    def witt_index(self) -> int:
        return self.n // 2 if self.quasi_split else self.n // 2 - 1


@FamilyRegistry.register_family
class SpUnitary(PairFamily):
    name = "sp_unitary"
    title = "Sp_{2n} / U_J"
    model = (
        "C_n on Z^n; theta swaps e_{2k-1} and e_{2k} for k <= r and negates the rest, "
        "r = floor(n/2) (quasi-split) or n/2 - 1; trace -1 on e_{2k-1} + e_{2k}"
    )
    Params = UnitaryFormParams

    def build(self, params: UnitaryFormParams) -> Tuple[RootDatumG, InvolutionData]:
        dim, roots, simple = classical_roots("C", params.n)
        images = {i: (i, -1) for i in range(dim)}
        for k in range(params.witt_index):
            images[2 * k] = (2 * k + 1, 1)
            images[2 * k + 1] = (2 * k, 1)
        theta = signed_permutation(dim, images)
        return assemble_pair(dim, roots, simple, theta, mult=lambda a: 1, trace=lambda a: -1)


class RankParams(FamilyParams):
    n: int = Field(default=1, ge=1, le=6)


@FamilyRegistry.register_family
class SpGLn(PairFamily):
    name = "sp_gln"
    title = "Sp_{2n} / GL_n"
    model = "C_n with A_0 = A_0^+; trace +1 on e_i - e_j (so H has roots of type A_{n-1}), -1 on the others"
    Params = RankParams

    def build(self, params: RankParams) -> Tuple[RootDatumG, InvolutionData]:
        dim, roots, simple = classical_roots("C", params.n)
        identity = signed_permutation(dim, {})
        return assemble_pair(
            dim, roots, simple, identity,
            mult=lambda a: 1,
            trace=lambda a: 1 if sum(a) == 0 else -1,
        )
