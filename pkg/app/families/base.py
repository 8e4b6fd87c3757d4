"""
Family constructors: abstract base, classical root systems and the registry.

A family turns a handful of validated parameters into a (RootDatumG,
InvolutionData) pair. Parameters are pydantic models so that range checks
live next to the fields they constrain.
"""

import logging
from abc import ABC, abstractmethod
from itertools import combinations
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.errors import BAD_PARAMETERS, InputError
from app.sympair import InvolutionData, RootDatumG

logger = logging.getLogger(__name__)

IntTuple = Tuple[int, ...]
ClassicalData = Tuple[int, List[IntTuple], List[IntTuple]]


def _unit(i: int, dim: int, scale: int = 1) -> List[int]:
    v = [0] * dim
    v[i] = scale
    return v


def _combine(*terms: Tuple[int, List[int]]) -> IntTuple:
    dim = len(terms[0][1])
    return tuple(sum(c * v[k] for c, v in terms) for k in range(dim))


def classical_roots(cartan_type: str, n: int) -> ClassicalData:
    """(dim, roots, simple roots) of a split classical group of rank n.

    Type A uses the GL coordinates of Z^{n+1}; B, C and D use Z^n.
    """
    cartan_type = cartan_type.upper()
    if cartan_type == "A":
        dim = n + 1
        e = [_unit(i, dim) for i in range(dim)]
        roots = [_combine((1, e[i]), (-1, e[j])) for i in range(dim) for j in range(dim) if i != j]
        simple = [_combine((1, e[i]), (-1, e[i + 1])) for i in range(n)]
        return dim, roots, simple
    if cartan_type not in ("B", "C", "D"):
        raise InputError(BAD_PARAMETERS, f"unsupported Cartan type {cartan_type!r}")
    if cartan_type == "D" and n < 2:
        raise InputError(BAD_PARAMETERS, f"type D needs rank at least 2, got {n}")

    dim = n
    e = [_unit(i, dim) for i in range(dim)]
    roots = []
    for i, j in combinations(range(dim), 2):
        for si in (1, -1):
            for sj in (1, -1):
                roots.append(_combine((si, e[i]), (sj, e[j])))
    for i in range(dim):
        if cartan_type == "B":
            roots += [tuple(e[i]), tuple(-x for x in e[i])]
        elif cartan_type == "C":
            roots += [tuple(2 * x for x in e[i]), tuple(-2 * x for x in e[i])]

    simple = [_combine((1, e[i]), (-1, e[i + 1])) for i in range(n - 1)]
    if cartan_type == "B":
        simple.append(tuple(e[n - 1]))
    elif cartan_type == "C":
        simple.append(tuple(2 * x for x in e[n - 1]))
    else:
        simple.append(_combine((1, e[n - 2]), (1, e[n - 1])))
    return dim, roots, simple


def signed_permutation(dim: int, images: Mapping[int, Tuple[int, int]]) -> List[List[int]]:
    """Matrix of e_i -> sign * e_j for every (i -> (j, sign)) in images; unlisted coordinates are fixed."""
    theta = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        j, sign = images.get(i, (i, 1))
        theta[j][i] = sign
    return theta


def assemble_pair(
    dim: int,
    roots: List[IntTuple],
    simple: List[IntTuple],
    theta: List[List[int]],
    mult: Callable[[IntTuple], int],
    trace: Callable[[IntTuple], int],
) -> Tuple[RootDatumG, InvolutionData]:
    """Attach multiplicities to every root and traces to the theta-fixed ones."""
    multiplicities = {r: mult(r) for r in roots}
    fixed = {}
    for r in roots:
        image = tuple(sum(theta[k][i] * r[i] for i in range(dim)) for k in range(dim))
        if image == r:
            fixed[r] = trace(r)
    datum = RootDatumG.create(dim, roots, simple, multiplicities)
    return datum, InvolutionData.create(theta, fixed)


class FamilyParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ClassicalParams(FamilyParams):
    cartan_type: str = Field(default="A", pattern="^[ABCDabcd]$")
    n: int = Field(default=1, ge=1, le=8)


class PairFamily(ABC):
    """A named family of symmetric pairs."""

    name: str = ""
    title: str = ""
    model: str = ""
    Params: Type[FamilyParams] = FamilyParams

    def parse(self, params: Optional[Mapping[str, Any]] = None) -> FamilyParams:
        try:
            return self.Params(**dict(params or {}))
        except ValidationError as e:
            problems = [
                {"field": ".".join(str(p) for p in err["loc"]) or "params", "message": err["msg"]}
                for err in e.errors()
            ]
            raise InputError(
                BAD_PARAMETERS,
                f"invalid parameters for family {self.name}: "
                + "; ".join(f"{p['field']}: {p['message']}" for p in problems),
                {"family": self.name, "problems": problems},
            )

    @abstractmethod
    def build(self, params: FamilyParams) -> Tuple[RootDatumG, InvolutionData]:
        """Root datum and involution for validated parameters"""
        pass

    def instantiate(self, params: Optional[Mapping[str, Any]] = None) -> Tuple[RootDatumG, InvolutionData]:
        parsed = self.parse(params)
        logger.info(f"🏗️ Building {self.label(parsed)}")
        return self.build(parsed)

    def label(self, params: FamilyParams) -> str:
        args = ", ".join(f"{k}={v}" for k, v in params.model_dump().items())
        return f"{self.name}({args})"

    def describe(self) -> Dict[str, Any]:
        schema = self.Params.model_json_schema()
        fields = {}
        for key, prop in sorted(schema.get("properties", {}).items()):
            fields[key] = {
                k: prop[k] for k in ("type", "default", "minimum", "maximum", "pattern") if k in prop
            }
        return {"name": self.name, "title": self.title, "model": self.model, "params": fields}


class FamilyRegistry:
    """Registry of built-in families, keyed by tag"""

    FAMILIES: Dict[str, Type[PairFamily]] = {}

    @classmethod
    def get_family(cls, name: str) -> PairFamily:
        family_class = cls.FAMILIES.get(name)
        if family_class is None:
            raise InputError(
                BAD_PARAMETERS,
                f"unknown family {name!r}",
                {"known": cls.names()},
            )
        return family_class()

    @classmethod
    def register_family(cls, family_class: Type[PairFamily]) -> Type[PairFamily]:
        cls.FAMILIES[family_class.name] = family_class
        return family_class

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls.FAMILIES)

    @classmethod
    def describe(cls) -> List[Dict[str, Any]]:
        return [cls.FAMILIES[name]().describe() for name in cls.names()]


class FamilySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    params: Dict[str, Any] = Field(default_factory=dict)


def instantiate(spec: FamilySpec) -> Tuple[RootDatumG, InvolutionData]:
    return FamilyRegistry.get_family(spec.family).instantiate(spec.params)
