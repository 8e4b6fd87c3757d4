"""
Exact rational and integer linear algebra.

Rationals are sympy ``Rational`` (arbitrary precision); small dense solves go
through sympy matrices. Integer lattices are reduced with unimodular row
operations on numpy object arrays, so entries stay Python ints.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import ImmutableMatrix, Matrix, Rational

from app.errors import (
    DEPENDENT_GENERATORS,
    DIMENSION_MISMATCH,
    INFINITE_INDEX,
    INVOLUTION_INVALID,
    SCHEMA_INVALID,
    InputError,
)

logger = logging.getLogger(__name__)

IntMat = ImmutableMatrix
IntVec = Tuple[int, ...]


# ==================== RATIONALS ====================

def parse_rational(value) -> Rational:
    """Accept ints, ``"p"`` and ``"p/q"`` strings; reject floats and bools."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(SCHEMA_INVALID, f"expected an exact rational, got {value!r}")
    if isinstance(value, (int, Rational)):
        return Rational(value)
    if isinstance(value, str):
        try:
            return Rational(value.strip())
        except (TypeError, ValueError):
            pass
    raise InputError(SCHEMA_INVALID, f"cannot parse {value!r} as a rational number")


def format_rational(value) -> str:
    return str(Rational(value))


# ==================== VECTORS ====================

@dataclass(frozen=True)
class RatVec:
    """Fixed-dimension vector of exact rationals."""

    coords: Tuple[Rational, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(parse_rational(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> "RatVec":
        return cls(tuple(values))

    @classmethod
    def zero(cls, dim: int) -> "RatVec":
        return cls((0,) * dim)

    @classmethod
    def unit(cls, i: int, dim: int) -> "RatVec":
        return cls(tuple(1 if j == i else 0 for j in range(dim)))

    @classmethod
    def from_matrix(cls, column: Matrix) -> "RatVec":
        return cls(tuple(column))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: "RatVec") -> None:
        if self.dim != other.dim:
            raise InputError(
                DIMENSION_MISMATCH,
                f"dimension {self.dim} does not match {other.dim}",
                {"left": self.dim, "right": other.dim},
            )

    def __add__(self, other: "RatVec") -> "RatVec":
        self._check(other)
        return RatVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RatVec") -> "RatVec":
        self._check(other)
        return RatVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RatVec":
        return RatVec(tuple(-a for a in self.coords))

    def __mul__(self, scalar) -> "RatVec":
        s = Rational(scalar)
        return RatVec(tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "RatVec":
        return self * (Rational(1) / Rational(scalar))

    def dot(self, other: "RatVec") -> Rational:
        self._check(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Rational(0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.q == 1 for c in self.coords)

    def as_ints(self) -> IntVec:
        if not self.is_integral():
            raise InputError(DIMENSION_MISMATCH, f"{self} is not an integer vector")
        return tuple(int(c) for c in self.coords)

    def as_column(self) -> Matrix:
        return Matrix(self.dim, 1, list(self.coords))

    def to_strings(self) -> List[str]:
        return [format_rational(c) for c in self.coords]

    def sort_key(self) -> Tuple[Rational, ...]:
        # descending lexicographic order, so e1-e2 sorts before e2-e3
        return tuple(-c for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_strings()) + ")"


def vector_sum(vectors: Iterable[RatVec], dim: int) -> RatVec:
    total = RatVec.zero(dim)
    for v in vectors:
        total = total + v
    return total


# ==================== INVOLUTIONS ====================

def int_matrix(rows: Sequence[Sequence[int]]) -> IntMat:
    rows = [list(r) for r in rows]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise InputError(DIMENSION_MISMATCH, "matrix rows must be non-empty and of equal length")
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, sympy.Integer)):
                raise InputError(DIMENSION_MISMATCH, f"matrix entry {x!r} is not an integer")
    return ImmutableMatrix(rows)


def require_involution(theta: IntMat) -> IntMat:
    n, m = theta.shape
    if n != m:
        raise InputError(DIMENSION_MISMATCH, f"theta must be square, got {n}x{m}")
    if theta * theta != sympy.eye(n):
        raise InputError(INVOLUTION_INVALID, "theta does not square to the identity")
    return theta


def apply_matrix(matrix: Matrix, v: RatVec) -> RatVec:
    if matrix.shape[1] != v.dim:
        raise InputError(
            DIMENSION_MISMATCH,
            f"matrix with {matrix.shape[1]} columns applied to a vector of dimension {v.dim}",
        )
    return RatVec.from_matrix(matrix * v.as_column())


def eigenprojection(v: RatVec, theta: IntMat, sign: int) -> RatVec:
    """(v + sign * theta v) / 2, the projection onto the sign-eigenspace."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if theta.shape != (v.dim, v.dim):
        raise InputError(
            DIMENSION_MISMATCH,
            f"theta of shape {theta.shape} does not act on dimension {v.dim}",
        )
    image = apply_matrix(theta, v)
    return (v + image * sign) / 2


# ==================== SOLVES ====================

@dataclass(frozen=True)
class SpanProjector:
    """Orthogonal projection onto the span of independent generators."""

    generators: Tuple[RatVec, ...]
    dim: int
    pinv: Optional[Matrix] = field(default=None, repr=False, compare=False)

    def coefficients(self, v: RatVec) -> Tuple[Tuple[Rational, ...], RatVec]:
        """Coefficients of the in-span part, and the orthogonal rest."""
        if v.dim != self.dim:
            raise InputError(
                DIMENSION_MISMATCH,
                f"vector of dimension {v.dim} against generators of dimension {self.dim}",
            )
        if not self.generators:
            return (), v
        coeffs = tuple(self.pinv * v.as_column())
        inside = vector_sum((g * c for g, c in zip(self.generators, coeffs)), self.dim)
        return coeffs, v - inside


@lru_cache(maxsize=512)
def span_projector(generators: Tuple[RatVec, ...], dim: int) -> SpanProjector:
    for g in generators:
        if g.dim != dim:
            raise InputError(DIMENSION_MISMATCH, f"generator {g} is not of dimension {dim}")
    if not generators:
        return SpanProjector((), dim)
    G = Matrix.hstack(*[g.as_column() for g in generators])
    gram = G.T * G
    if gram.det() == 0:
        raise InputError(
            DEPENDENT_GENERATORS,
            "generators are linearly dependent",
            {"generators": [g.to_strings() for g in generators]},
        )
    return SpanProjector(tuple(generators), dim, gram.inv() * G.T)


def solve_in_span(target: RatVec, generators: Sequence[RatVec]) -> Optional[Tuple[Rational, ...]]:
    """Unique coefficients c with target = sum c_i g_i, or None outside the span."""
    coeffs, rest = span_projector(tuple(generators), target.dim).coefficients(target)
    if not rest.is_zero():
        return None
    return coeffs


def projection_coefficients(v: RatVec, generators: Sequence[RatVec]) -> Tuple[Tuple[Rational, ...], RatVec]:
    return span_projector(tuple(generators), v.dim).coefficients(v)


def orthogonal_split(v: RatVec, generators: Sequence[RatVec]) -> Tuple[RatVec, RatVec]:
    """(component in the span, orthogonal rest)."""
    _, rest = projection_coefficients(v, generators)
    return v - rest, rest


# ==================== INTEGER LATTICES ====================

def integer_echelon(rows: Sequence[Sequence[int]], width: int) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Unimodular row reduction on the first ``width`` columns.

    Returns the echelon rows (positive pivots, entries above each pivot
    reduced into [0, pivot)) and the remaining rows, whose first ``width``
    entries are all zero. Columns past ``width`` are carried along, so an
    augmented identity records the row operations.
    """
    work = [np.array([int(x) for x in r], dtype=object) for r in rows]
    echelon: List[np.ndarray] = []
    for col in range(width):
        active = [r for r in work if r[col] != 0]
        if not active:
            continue
        rest = [r for r in work if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            survivors = [pivot]
            for r in active[1:]:
                r = r - (r[col] // pivot[col]) * pivot
                (survivors if r[col] != 0 else rest).append(r)
            active = survivors
        pivot = active[0]
        if pivot[col] < 0:
            pivot = -pivot
        echelon = [e - (e[col] // pivot[col]) * pivot for e in echelon]
        echelon.append(pivot)
        work = rest
    return echelon, work


def _pivot(row: Sequence[int]) -> int:
    for i, x in enumerate(row):
        if x != 0:
            return i
    raise ValueError("zero row has no pivot")


def hermite_basis(generators: Sequence[Sequence[int]], dim: int) -> List[IntVec]:
    """Echelon Z-basis (positive pivots) of the lattice spanned by the generators."""
    for g in generators:
        if len(g) != dim:
            raise InputError(DIMENSION_MISMATCH, f"generator {tuple(g)} is not of dimension {dim}")
    if not generators:
        return []
    echelon, _ = integer_echelon(generators, dim)
    return [tuple(int(x) for x in row) for row in echelon]


def lattice_coordinates(basis: Sequence[IntVec], v: Sequence) -> Optional[List[int]]:
    """Integer coordinates of v in an echelon basis, or None when v is off the lattice."""
    values = [Rational(x) for x in v]
    if any(x.q != 1 for x in values):
        return None
    r = np.array([int(x) for x in values], dtype=object)
    coeffs = []
    for row in basis:
        row = np.array(row, dtype=object)
        p = _pivot(row)
        q, rem = divmod(r[p], row[p])
        if rem != 0:
            return None
        coeffs.append(int(q))
        r = r - q * row
    if any(x != 0 for x in r):
        return None
    return coeffs


def lattice_contains(basis: Sequence[IntVec], v: Sequence) -> bool:
    return lattice_coordinates(basis, v) is not None


def integer_kernel_basis(matrix: Sequence[Sequence[int]], ncols: Optional[int] = None) -> List[IntVec]:
    """Z-basis of the saturated kernel {x in Z^n : A x = 0}."""
    rows = [list(r) for r in matrix]
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    m = len(rows)
    augmented = [
        [rows[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(n)]
        for j in range(n)
    ]
    _, vanished = integer_echelon(augmented, m)
    kernel = [tuple(int(x) for x in r[m:]) for r in vanished]
    return hermite_basis(kernel, n)


@dataclass(frozen=True)
class LatticeQuotient:
    """Z^p modulo a full-rank sublattice, with a box transversal."""

    ambient_rank: int
    generators: Tuple[IntVec, ...]
    basis: Tuple[IntVec, ...]
    index: int
    transversal: Tuple[IntVec, ...]

    def __post_init__(self):
        if self.index != len(self.transversal):
            raise ValueError("index must equal the transversal size")

    def reduce(self, v: Sequence[int]) -> IntVec:
        """The transversal element congruent to v."""
        r = np.array([int(x) for x in v], dtype=object)
        for i, row in enumerate(self.basis):
            row = np.array(row, dtype=object)
            r = r - (r[i] // row[i]) * row
        return tuple(int(x) for x in r)

    def contains(self, v: Sequence[int]) -> bool:
        return lattice_contains(self.basis, v)


def lattice_quotient(ambient_rank: int, sublattice_gens: Sequence[Sequence[int]]) -> LatticeQuotient:
    basis = hermite_basis(sublattice_gens, ambient_rank)
    if len(basis) < ambient_rank:
        raise InputError(
            INFINITE_INDEX,
            f"sublattice of rank {len(basis)} has infinite index in Z^{ambient_rank}",
            {"rank": len(basis), "ambient_rank": ambient_rank},
        )
    diagonal = [basis[i][i] for i in range(ambient_rank)]
    transversal = tuple(itertools.product(*(range(d) for d in diagonal)))
    index = prod(diagonal)
    logger.debug(f"lattice quotient of Z^{ambient_rank}: diagonal {diagonal}, index {index}")
    return LatticeQuotient(
        ambient_rank=ambient_rank,
        generators=tuple(tuple(int(x) for x in g) for g in sublattice_gens),
        basis=tuple(basis),
        index=index,
        transversal=transversal,
    )
