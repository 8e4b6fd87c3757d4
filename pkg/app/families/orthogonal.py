"""
GL_n / O_J and U_n / O_n families.

For GL_n / O_J with Witt index r, theta(eps_i) = -eps_{n+1-i} on the 2r
hyperbolic coordinates and -eps_i on the anisotropic middle block. The
theta-fixed roots eps_i - eps_{n+1-i} (i <= r) carry trace -1.

U_n / O_n is encoded directly on A_0 = A_0^+ = Z^r with the restricted
BC_r / C_r picture: eta_i +- eta_j with multiplicity 2, eta_i with
multiplicity 2(n - 2r) when n > 2r, and 2 eta_i with multiplicity 1.
"""

from typing import Tuple

from pydantic import Field, model_validator

from app.families.base import FamilyParams, FamilyRegistry, PairFamily, assemble_pair, classical_roots, signed_permutation
from app.sympair import InvolutionData, RootDatumG


class WittParams(FamilyParams):
    n: int = Field(default=2, ge=2, le=9)
    r: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def check_witt_index(self):
        if 2 * self.r > self.n:
            raise ValueError(f"Witt index r={self.r} must satisfy 2r <= n={self.n}")
        return self


@FamilyRegistry.register_family
class GLOrthogonal(PairFamily):
    name = "gl_orthogonal"
    title = "GL_n / O_J"
    model = "theta(eps_i) = -eps_{n+1-i} for the 2r hyperbolic coordinates, -eps_i on the anisotropic block"
    Params = WittParams

    def build(self, params: WittParams) -> Tuple[RootDatumG, InvolutionData]:
        n, r = params.n, params.r
        dim, roots, simple = classical_roots("A", n - 1)
        images = {i: (i, -1) for i in range(n)}
        for i in range(r):
            images[i] = (n - 1 - i, -1)
            images[n - 1 - i] = (i, -1)
        theta = signed_permutation(dim, images)
        return assemble_pair(dim, roots, simple, theta, mult=lambda a: 1, trace=lambda a: -1)


@FamilyRegistry.register_family
class UnitaryOrthogonal(PairFamily):
    name = "unitary_orthogonal"
    title = "U_n / O_n"
    model = "restricted BC_r / C_r on Z^r: eta_i +- eta_j (m=2, t=0), eta_i (m=2(n-2r), t=0), 2eta_i (m=1, t=-1)"
    Params = WittParams

    def build(self, params: WittParams) -> Tuple[RootDatumG, InvolutionData]:
        n, r = params.n, params.r
        _, roots, simple = classical_roots("C", r)
        if n > 2 * r:
            _, b_roots, b_simple = classical_roots("B", r)
            roots = roots + [a for a in b_roots if sum(abs(x) for x in a) == 1]
            simple = simple[:-1] + [b_simple[-1]]
        identity = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

        def mult(a):
            size = sum(abs(x) for x in a)
            if size == 1:
                return 2 * (n - 2 * r)
            return 1 if max(abs(x) for x in a) == 2 else 2

        def trace(a):
            return -1 if max(abs(x) for x in a) == 2 else 0

        return assemble_pair(r, roots, simple, identity, mult=mult, trace=trace)
