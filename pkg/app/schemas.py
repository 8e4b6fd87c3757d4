"""
Input documents: pair descriptors and exponent profiles.

Documents are checked against the JSON schemas shipped in ``schemas/`` and
then parsed into pydantic models, which turn them into engine objects.
"""

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from jsonschema import Draft202012Validator
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.errors import DIMENSION_MISMATCH, SCHEMA_INVALID, InputError
from app.families import FamilySpec, instantiate
from app.linalg import RatVec, parse_rational
from app.sympair import InvolutionData, RootDatumG

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).parent.parent / "schemas"
PAIR_SCHEMA = "pair_descriptor.schema.json"
PROFILE_SCHEMA = "exponent_profile.schema.json"


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    with open(SCHEMA_DIR / name, encoding="utf-8") as f:
        return json.load(f)


def validate_document(document: Any, schema_name: str) -> None:
    """Raise SchemaInvalid listing every violation, ordered by location."""
    validator = Draft202012Validator(load_schema(schema_name))
    errors = sorted(validator.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        problems = [
            {"path": "/".join(str(p) for p in e.absolute_path), "message": e.message}
            for e in errors
        ]
        raise InputError(
            SCHEMA_INVALID,
            f"document does not match {schema_name}: {problems[0]['message']}",
            {"schema": schema_name, "problems": problems},
        )


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(SCHEMA_INVALID, f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(SCHEMA_INVALID, f"{path} is not valid JSON: {e.msg} (line {e.lineno})")


def _pydantic_error(e: ValidationError, what: str) -> InputError:
    problems = [
        {"path": "/".join(str(p) for p in err["loc"]), "message": err["msg"]}
        for err in e.errors()
    ]
    return InputError(SCHEMA_INVALID, f"invalid {what}: {problems[0]['message']}", {"problems": problems})


# ==================== PAIR DESCRIPTORS ====================

class RawPair(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rank: int = Field(ge=1)
    roots: List[List[int]]
    simple: List[int]
    mult: Optional[List[int]] = None
    theta: List[List[int]]
    fixed_traces: Dict[str, int] = Field(default_factory=dict)

    def to_pair(self) -> Tuple[RootDatumG, InvolutionData]:
        count = len(self.roots)
        if self.mult is not None and len(self.mult) != count:
            raise InputError(
                DIMENSION_MISMATCH,
                f"{len(self.mult)} multiplicities given for {count} roots",
            )
        for i in list(self.simple) + [int(k) for k in self.fixed_traces]:
            if i >= count:
                raise InputError(DIMENSION_MISMATCH, f"root index {i} out of range (have {count} roots)")
        roots = [tuple(r) for r in self.roots]
        mult = {r: m for r, m in zip(roots, self.mult)} if self.mult is not None else None
        datum = RootDatumG.create(self.rank, roots, [roots[i] for i in self.simple], mult)
        traces = {roots[int(k)]: t for k, t in self.fixed_traces.items()}
        return datum, InvolutionData.create(self.theta, traces)


class PairDescriptor(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    raw: Optional[RawPair] = None

    @model_validator(mode="after")
    def check_exclusive(self):
        if (self.family is None) == (self.raw is None):
            raise ValueError("exactly one of 'family' and 'raw' must be given")
        if self.raw is not None and self.params:
            raise ValueError("'params' only applies to a family descriptor")
        return self

    @classmethod
    def from_document(cls, document: Any) -> "PairDescriptor":
        validate_document(document, PAIR_SCHEMA)
        try:
            return cls.model_validate(document)
        except ValidationError as e:
            raise _pydantic_error(e, "pair descriptor")

    @property
    def label(self) -> str:
        if self.family is not None:
            args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
            return f"{self.family}({args})"
        return f"raw(rank={self.raw.rank}, roots={len(self.raw.roots)})"

    def build(self) -> Tuple[RootDatumG, InvolutionData]:
        if self.family is not None:
            return instantiate(FamilySpec(family=self.family, params=self.params))
        return self.raw.to_pair()


# ==================== EXPONENT PROFILES ====================

class ProfileEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    J: List[int]
    exponents: List[List[Union[int, str]]]


class ExponentProfileDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coordinates: Literal["full", "restricted"] = "full"
    parabolics: List[ProfileEntry] = Field(default_factory=list)

    @classmethod
    def from_document(cls, document: Any) -> "ExponentProfileDocument":
        validate_document(document, PROFILE_SCHEMA)
        if isinstance(document, list):
            document = {"parabolics": document}
        try:
            return cls.model_validate(document)
        except ValidationError as e:
            raise _pydantic_error(e, "exponent profile")

    def vectors(self) -> Dict[Tuple[int, ...], List[RatVec]]:
        """Exponents per J; repeated J entries are merged in document order."""
        merged: Dict[Tuple[int, ...], List[RatVec]] = {}
        for entry in self.parabolics:
            key = tuple(sorted(entry.J))
            merged.setdefault(key, []).extend(
                RatVec(tuple(parse_rational(x) for x in vector)) for vector in entry.exponents
            )
        return merged
